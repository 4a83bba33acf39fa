"""Command line front end.

Exit codes: 0 success, 1 input/output problem, 2 validation failure,
3 numerical failure.
"""

import argparse
import csv
import io as _io
import sys

import numpy as np

from . import io
from .backward import choose_lambda_family, delta_lower_bound, family_from_points
from .benchmarks import COLUMNS as BENCHMARK_COLUMNS
from .benchmarks import example_rows
from .dh import dh_delta0
from .exceptions import (
    DimensionMismatch,
    InvalidStructure,
    LambdaNotAdmissible,
    MalformedInput,
    NotHermitian,
    PencilDistError,
    UnsupportedTag,
)
from .model import (
    DHTriple,
    MatrixPolynomial,
    StructuredPencil,
    StructureTag,
    random_dh_triple,
    random_polynomial,
    random_structured,
    validate,
)
from .nullspace import delta0_structured
from .oracle import verify_common_null
from .poly import poly_delta0, poly_delta0_palindromic

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3

CSV_COLUMNS = ("structure", "kind", "value", "frobenius_value", "lb_unstructured", "lb_structured")

#: verify: |combined norm - value| and residual thresholds
NORM_RTOL = 1e-8
RESIDUAL_RTOL = 1e-7


class _Failure(Exception):
    def __init__(self, code, message, details=()):
        super().__init__(message)
        self.code = code
        self.details = list(details)


def _load_object(path):
    try:
        doc = io.load(path)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"malformed JSON: {exc}") from exc
    try:
        return io.from_json(doc)
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"malformed input: {exc}") from exc


def _with_tag(obj, tag):
    if tag is None:
        return obj
    tag = StructureTag.parse(tag)
    if isinstance(obj, StructuredPencil):
        return StructuredPencil(obj.A, obj.E, tag)
    if isinstance(obj, MatrixPolynomial):
        return MatrixPolynomial(obj.coeffs, tag)
    return obj


def _require(obj, cls, what):
    if not isinstance(obj, cls):
        raise _Failure(EXIT_IO, f"input is not a {what}")
    return obj


def _fmt(x):
    x = float(x)
    if np.isinf(x):
        return "inf"
    return repr(x)


def _csv(rows, columns):
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else
                        (_fmt(r[k]) if isinstance(r[k], (float, np.floating)) else r[k]))
                    for k in columns})
    return buf.getvalue()


def _read_points(path):
    try:
        doc = io.load(path)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"malformed JSON: {exc}") from exc
    if isinstance(doc, dict):
        doc = doc.get("points")
    if not isinstance(doc, list) or not doc:
        raise _Failure(EXIT_IO, "lambda file must hold a nonempty list of [re, im] pairs")
    try:
        return [io.decode_complex(p) for p in doc]
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"lambda file: {exc}") from exc


# -- distance ---------------------------------------------------------------------

def _report_row(rep, lb_unstructured=None, lb_structured=None):
    return {
        "structure": rep.structure,
        "kind": rep.kind,
        "value": rep.value,
        "frobenius_value": rep.frobenius_norm() if rep.perturbations else None,
        "lb_unstructured": lb_unstructured,
        "lb_structured": lb_structured,
    }


def _pretty_report(rep):
    lines = [f"structure : {rep.structure}", f"kind      : {rep.kind}",
             f"value     : {_fmt(rep.value)}"]
    if rep.perturbations:
        lines.append(f"frobenius : {_fmt(rep.frobenius_norm())}")
        for k, D in rep.perturbations.items():
            lines.append(f"  ||Delta_{k}|| = {_fmt(np.linalg.norm(D, 2))}")
    if rep.trace is not None and rep.trace.flags:
        lines.append("flags     : " + ", ".join(sorted(rep.trace.flags)))
    return "\n".join(lines) + "\n"


def _emit_report(rep, args, extra=None):
    if args.format == "csv":
        return _csv([_report_row(rep)], CSV_COLUMNS)
    if args.format == "pretty":
        return _pretty_report(rep)
    doc = io.report_to_json(rep, emit_perturbations=args.emit_perturbations)
    if extra:
        doc.update(extra)
    return io.dumps(doc) + "\n"


def cmd_null_space(args):
    obj = _require(_with_tag(_load_object(args.input), args.tag), StructuredPencil, "pencil")
    rep = delta0_structured(obj, rtol=args.tol)
    return _emit_report(rep, args)


def cmd_dh(args):
    obj = _require(_load_object(args.input), DHTriple, "DH triple (J, R, E)")
    violations = validate(obj, args.tol)
    if violations:
        raise InvalidStructure("; ".join(violations), violations)
    rep = dh_delta0(obj, args.kind.upper() if args.kind.lower() != "unstructured" else "unstructured",
                    starts=args.starts, seed=args.seed, rtol=args.tol)
    return _emit_report(rep, args)


def cmd_poly(args):
    obj = _require(_with_tag(_load_object(args.input), args.tag), MatrixPolynomial, "matrix polynomial")
    if obj.tag.star is None:
        return _emit_report(poly_delta0(obj, rtol=args.tol), args)
    res = poly_delta0_palindromic(obj, seed=args.seed, rtol=args.tol,
                                  middle_weighting=args.middle_weighting)
    extra = {
        "bound_value": io.encode_float(res.bound_value),
        "sqrt_bound": io.encode_float(res.sqrt_bound),
        "equality_certified": bool(res.equality_certified),
        "gammas": [float(g) for g in res.gammas],
        "simplicity_gap": io.encode_float(res.simplicity_gap),
    }
    if res.report is not None:
        return _emit_report(res.report, args, extra)
    if args.format == "csv":
        return _csv([{"structure": obj.tag.value, "kind": "null-space-lower",
                      "value": None, "lb_structured": res.sqrt_bound}], CSV_COLUMNS)
    if args.format == "pretty":
        return (f"structure : {obj.tag.value}\nlower     : {_fmt(res.sqrt_bound)}\n"
                f"certified : no (gap {res.simplicity_gap:.3e})\n")
    extra.update({"structure": obj.tag.value, "kind": "null-space-lower", "value": None})
    return io.dumps(extra) + "\n"


def _bound_doc(res):
    return {
        "value": io.encode_float(res.value),
        "structure": res.structure,
        "per_point": [
            {"lambda": io.encode_complex(r.lam), "eta": io.encode_float(r.eta),
             "inner_minimizer": [float(t) for t in r.inner_minimizer],
             "flags": sorted(r.flags)}
            for r in res.per_point
        ],
        "skipped": [{"lambda": io.encode_complex(lam), "reason": why} for lam, why in res.skipped],
    }


def cmd_lower_bound(args):
    obj = _require(_with_tag(_load_object(args.input), args.tag), StructuredPencil, "pencil")
    if args.lambda_file:
        fam = family_from_points(obj, _read_points(args.lambda_file))
    else:
        fam = choose_lambda_family(obj, args.lambda_count, seed=args.seed)
    res = delta_lower_bound(obj, fam, seed=args.seed)
    unstructured = delta_lower_bound(StructuredPencil(obj.A, obj.E), fam, seed=args.seed)
    if args.format == "csv":
        return _csv([{"structure": res.structure, "kind": "lower-bound", "value": res.value,
                      "lb_unstructured": unstructured.value, "lb_structured": res.value}],
                    CSV_COLUMNS)
    if args.format == "pretty":
        lines = [f"structure      : {res.structure}",
                 f"lower bound    : {_fmt(res.value)}",
                 f"unstructured   : {_fmt(unstructured.value)}"]
        for r in res.per_point:
            lines.append(f"  lambda={r.lam:.6g}  eta={_fmt(r.eta)}")
        for lam, why in res.skipped:
            lines.append(f"  lambda={lam:.6g}  skipped: {why}")
        return "\n".join(lines) + "\n"
    doc = _bound_doc(res)
    doc["kind"] = "lower-bound"
    doc["lb_unstructured"] = io.encode_float(unstructured.value)
    doc["lb_structured"] = io.encode_float(res.value)
    return io.dumps(doc) + "\n"


# -- other commands ---------------------------------------------------------------

def cmd_dh_benchmark(args):
    rows = example_rows(starts=args.starts, seed=args.seed)
    if args.format == "csv":
        return _csv(rows, BENCHMARK_COLUMNS)
    if args.format == "pretty":
        head = f"{'E':<10}{'unstr':>10}{'sqrt2*unstr':>13}{'frob u.b.':>11}{'struct':>10}"
        body = [f"{r['E']:<10}{r['unstructured']:>10.4f}{r['sqrt2_unstructured']:>13.4f}"
                f"{r['frobenius_upper']:>11.4f}{r['structured']:>10.4f}" for r in rows]
        return "\n".join([head] + body) + "\n"
    return io.dumps({"rows": [{k: (v if isinstance(v, str) else float(v)) for k, v in r.items()}
                              for r in rows]}) + "\n"


def cmd_generate(args):
    tag = StructureTag.parse(args.tag)
    if tag is StructureTag.DISSIPATIVE_HAMILTONIAN:
        obj = random_dh_triple(args.n, seed=args.seed)
    elif args.degree is not None and args.degree != 1:
        obj = random_polynomial(tag, args.n, args.degree, seed=args.seed)
    else:
        obj = random_structured(tag, args.n, seed=args.seed)
    text = io.dumps(io.to_json(obj)) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise _Failure(EXIT_IO, f"cannot write {args.out}: {exc.strerror or exc}") from exc
        return ""
    return text


def cmd_validate(args):
    obj = _with_tag(_load_object(args.input), args.tag)
    violations = validate(obj, args.tol)
    if violations:
        raise InvalidStructure("; ".join(violations), violations)
    return "valid\n"


def verify_report(rep):
    """``(ok, problems)`` for a stored report: common null vector and norm consistency."""
    problems = []
    if not np.isfinite(rep.value):
        if rep.perturbations:
            problems.append("infinite value with perturbations attached")
        return not problems, problems
    if not rep.perturbations or not rep.inputs or rep.witness is None:
        return False, ["missing-perturbations (rerun with --emit-perturbations)"]
    if set(rep.perturbations) != set(rep.inputs):
        return False, ["perturbation and input keys differ"]
    perturbed = rep.perturbed()
    scale = 1.0 + max(np.linalg.norm(M, 2) for M in perturbed.values())
    res = verify_common_null(perturbed, rep.witness)
    if not res <= RESIDUAL_RTOL * scale:
        problems.append(f"null-residual {res:.3e} exceeds {RESIDUAL_RTOL * scale:.3e}")
    norm = rep.combined_norm()
    if not abs(norm - rep.value) <= NORM_RTOL * (1.0 + abs(rep.value)):
        problems.append(f"norm-mismatch: perturbations {norm!r}, value {rep.value!r}")
    return not problems, problems


def cmd_verify(args):
    try:
        doc = io.load(args.report)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {args.report}: {exc.strerror or exc}") from exc
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"malformed JSON: {exc}") from exc
    try:
        rep = io.report_from_json(doc)
    except MalformedInput as exc:
        raise _Failure(EXIT_IO, f"malformed report: {exc}") from exc
    ok, problems = verify_report(rep)
    if not ok:
        raise _Failure(EXIT_VALIDATION, "FAIL", problems)
    return "PASS\n"


# -- parser -----------------------------------------------------------------------

def _common(p, tag=True):
    if tag:
        p.add_argument("--tag", default=None, help="structure tag (defaults to the file's tag)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10, help="relative structure tolerance")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--emit-perturbations", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pencildist",
        description="Distances of structured pencils to a common null space and "
                    "lower bounds on the distance to singularity.")
    sub = parser.add_subparsers(dest="command", required=True)

    dist = sub.add_parser("distance", help="compute a distance or bound")
    dsub = dist.add_subparsers(dest="what", required=True)

    p = dsub.add_parser("null-space", help="pencil distance to a common null space")
    p.add_argument("input")
    _common(p)
    p.set_defaults(func=cmd_null_space)

    p = dsub.add_parser("dh", help="DH triple distance")
    p.add_argument("input")
    p.add_argument("--kind", default="JRE",
                   help="perturbed matrices: J, R, E, JR, JE, RE, JRE or unstructured")
    p.add_argument("--starts", type=int, default=32)
    _common(p, tag=False)
    p.set_defaults(func=cmd_dh)

    p = dsub.add_parser("poly", help="matrix polynomial distance")
    p.add_argument("input")
    p.add_argument("--middle-weighting", choices=("half", "printed"), default="half")
    _common(p)
    p.set_defaults(func=cmd_poly)

    p = dsub.add_parser("lower-bound", help="backward-error lower bound on the distance to singularity")
    p.add_argument("input")
    p.add_argument("--lambda-file", default=None, help="JSON list of [re, im] points")
    p.add_argument("--lambda-count", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("dh-benchmark", help="summary rows for the fixed 2x2 DH example")
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    p.set_defaults(func=cmd_dh_benchmark)

    p = sub.add_parser("generate", help="write a random structured instance")
    p.add_argument("--tag", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, default=None, help="polynomial degree (pencil when omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="re-check a stored report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate", help="check the structure of an input file")
    p.add_argument("input")
    p.add_argument("--tag", default=None)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except _Failure as exc:
        print(str(exc), file=stdout if exc.code == EXIT_VALIDATION else stderr)
        for d in exc.details:
            print(f"  {d}", file=stdout if exc.code == EXIT_VALIDATION else stderr)
        return exc.code
    except InvalidStructure as exc:
        print("invalid structure:", file=stderr)
        for v in exc.violations or [str(exc)]:
            print(f"  {v}", file=stderr)
        return EXIT_VALIDATION
    except (UnsupportedTag, LambdaNotAdmissible, DimensionMismatch, NotHermitian) as exc:
        print(f"validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except (PencilDistError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
