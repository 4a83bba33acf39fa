"""Fixed 2x2 DH example with three choices of E, and its summary rows."""

import numpy as np

from .dh import dh_delta0, dh_frobenius_norm_of_optimum
from .model import DHTriple

J_EXAMPLE = np.array([[0.0, -0.5], [0.5, 0.0]], dtype=complex)
R_EXAMPLE = np.array([[0.18, 0.42], [0.42, 1.03]], dtype=complex)
E_CHOICES = {
    "diag(0,1)": np.diag([0.0, 1.0]).astype(complex),
    "diag(1,0)": np.diag([1.0, 0.0]).astype(complex),
    "diag(1,1)": np.eye(2, dtype=complex),
}

COLUMNS = ("E", "unstructured", "sqrt2_unstructured", "frobenius_upper", "structured")


def example_triples():
    return {name: DHTriple(J_EXAMPLE, R_EXAMPLE, E) for name, E in E_CHOICES.items()}


def example_rows(starts=32, seed=0):
    """One row per ``E``: unstructured distance, ``sqrt(2)`` times it,
    Frobenius norm of the structured optimum, structured distance."""
    rows = []
    for name, T in example_triples().items():
        u = dh_delta0(T, "unstructured").value
        rep = dh_delta0(T, "JRE", starts=starts, seed=seed)
        rows.append({
            "E": name,
            "unstructured": u,
            "sqrt2_unstructured": np.sqrt(2.0) * u,
            "frobenius_upper": dh_frobenius_norm_of_optimum(rep),
            "structured": rep.value,
        })
    return rows
