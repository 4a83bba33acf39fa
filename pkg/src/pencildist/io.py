"""JSON layout for matrices, pencils, DH triples, polynomials and reports.

Matrices are ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` in
row-major order. Infinite values are written as the string ``"inf"``.
Documents are dumped with sorted keys so equal inputs give equal bytes.
"""

import json
import math

import numpy as np

from .exceptions import MalformedInput, PencilDistError
from .model import DHTriple, DistanceReport, MatrixPolynomial, StructuredPencil, StructureTag


def encode_float(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def decode_float(x):
    if isinstance(x, str):
        if x in ("inf", "-inf", "nan"):
            return float(x)
        raise MalformedInput(f"expected a number, got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise MalformedInput(f"expected a number, got {x!r}")
    return float(x)


def encode_complex(z):
    z = complex(z)
    return [encode_float(z.real), encode_float(z.imag)]


def decode_complex(p):
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        return complex(p)
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise MalformedInput(f"complex entries are [re, im] pairs, got {p!r}")
    return complex(decode_float(p[0]), decode_float(p[1]))


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError("expected a 2-D array")
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [encode_complex(z) for z in M.ravel()]}


def matrix_from_json(d, name="matrix"):
    if not isinstance(d, dict) or not {"rows", "cols", "data"} <= set(d):
        raise MalformedInput(f"{name}: expected an object with rows, cols and data")
    rows, cols, data = d["rows"], d["cols"], d["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise MalformedInput(f"{name}: rows and cols must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MalformedInput(f"{name}: data must hold rows*cols = {rows * cols} entries")
    try:
        vals = [decode_complex(p) for p in data]
    except MalformedInput as exc:
        raise MalformedInput(f"{name}: {exc}") from None
    return np.array(vals, dtype=complex).reshape(rows, cols)


def vector_to_json(v):
    return [encode_complex(z) for z in np.ravel(v)]


def vector_from_json(d):
    if not isinstance(d, list):
        raise MalformedInput("vector must be a list of [re, im] pairs")
    return np.array([decode_complex(p) for p in d], dtype=complex)


def to_json(obj):
    """Document for a pencil, DH triple or matrix polynomial."""
    if isinstance(obj, StructuredPencil):
        return {"tag": obj.tag.value, "A": matrix_to_json(obj.A), "E": matrix_to_json(obj.E)}
    if isinstance(obj, DHTriple):
        return {"J": matrix_to_json(obj.J), "R": matrix_to_json(obj.R), "E": matrix_to_json(obj.E)}
    if isinstance(obj, MatrixPolynomial):
        return {"tag": obj.tag.value, "coeffs": [matrix_to_json(A) for A in obj.coeffs]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(doc):
    """Inverse of :func:`to_json`; the layout is recognized from its keys."""
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be an object")
    try:
        if "J" in doc:
            return DHTriple(*(matrix_from_json(doc.get(k), k) for k in ("J", "R", "E")))
        if "coeffs" in doc:
            if not isinstance(doc["coeffs"], list) or not doc["coeffs"]:
                raise MalformedInput("coeffs must be a nonempty list")
            coeffs = [matrix_from_json(c, f"coeffs[{j}]") for j, c in enumerate(doc["coeffs"])]
            return MatrixPolynomial(coeffs, StructureTag.parse(doc.get("tag", "unstructured")))
        if "A" in doc:
            A = matrix_from_json(doc["A"], "A")
            E = matrix_from_json(doc["E"], "E") if "E" in doc else None
            tag = StructureTag.parse(doc.get("tag", "unstructured"))
            if E is None:
                if tag.star is None:
                    raise MalformedInput("E is required unless the tag is palindromic")
                E = A.conj().T if tag.star == "*" else A.T
            return StructuredPencil(A, E, tag)
    except PencilDistError:
        raise
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc
    raise MalformedInput("expected keys A/E, J/R/E or coeffs")


def _plain(x):
    """JSON-ready copy of diagnostic values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return vector_to_json(x) if x.ndim == 1 else matrix_to_json(x)
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (complex, np.complexfloating)):
        return encode_complex(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return encode_float(x)
    if x is None or isinstance(x, str):
        return x
    return str(x)


def report_to_json(report, emit_perturbations=False):
    """Document for a :class:`DistanceReport`.

    Perturbations and inputs are included with ``emit_perturbations``; they
    are what :func:`pencildist.cli` ``verify`` needs to re-check a report.
    """
    doc = {
        "value": encode_float(report.value),
        "structure": report.structure,
        "kind": report.kind,
        "sign": int(report.sign),
        "witness": None if report.witness is None else vector_to_json(report.witness),
        "trace": None if report.trace is None else _plain(report.trace.as_dict()),
        "info": _plain(report.info),
    }
    if emit_perturbations:
        doc["perturbations"] = {k: matrix_to_json(v) for k, v in report.perturbations.items()}
        doc["inputs"] = {k: matrix_to_json(v) for k, v in report.inputs.items()}
    return doc


def report_from_json(doc):
    if not isinstance(doc, dict) or "value" not in doc:
        raise MalformedInput("a report needs at least a value")
    witness = doc.get("witness")
    return DistanceReport(
        value=decode_float(doc["value"]),
        perturbations={k: matrix_from_json(v, k) for k, v in (doc.get("perturbations") or {}).items()},
        witness=None if witness is None else vector_from_json(witness),
        inputs={k: matrix_from_json(v, k) for k, v in (doc.get("inputs") or {}).items()},
        sign=int(doc.get("sign", -1)),
        structure=doc.get("structure", "unstructured"),
        kind=doc.get("kind", "null-space"),
        info=doc.get("info") or {},
    )


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def load(path):
    """Parse a JSON file; :class:`MalformedInput` on syntax errors."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
        fh.write("\n")


__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
    "to_json",
    "from_json",
    "report_to_json",
    "report_from_json",
    "encode_float",
    "decode_float",
    "dumps",
    "load",
    "save",
]
