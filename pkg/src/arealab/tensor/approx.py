"""Best-MPS approximation error of dense target states versus bond dimension."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ParameterError
from .mps import mps_from_dense

__all__ = ["approximability_experiment", "required_bond_dimension"]


def approximability_experiment(target: np.ndarray, bond_grid, d: int = 2) -> list[dict]:
    """Trace-distance proxy sqrt(1 - |<target|mps_D>|^2) per bond dimension.

    The candidate at each D comes from sequential SVD truncation of the
    dense target. The error column is checked monotone non-increasing in D.
    """
    target = np.asarray(target, dtype=complex).reshape(-1)
    n = int(round(math.log(target.size, d)))
    if d**n != target.size:
        raise ParameterError("target dimension is not a power of the local dimension")
    target = target / np.linalg.norm(target)
    rows = []
    previous = math.inf
    for bond in sorted(int(b) for b in bond_grid):
        mps, _ = mps_from_dense(target, d, n, max_bond=bond)
        fidelity = abs(np.vdot(target, mps.to_dense()))
        err = math.sqrt(max(0.0, 1.0 - fidelity**2))
        assert err <= previous + 1e-12, "approximation error increased with D"
        previous = err
        rows.append({"bond_dim": bond, "trace_distance": err, "fidelity": float(fidelity)})
    return rows


def required_bond_dimension(target: np.ndarray, error: float, d: int = 2,
                            max_bond: int = 256) -> int:
    """Smallest D whose sequential-truncation error is below ``error``."""
    target = np.asarray(target, dtype=complex).reshape(-1)
    n = int(round(math.log(target.size, d)))
    for bond in range(1, max_bond + 1):
        rows = approximability_experiment(target, [bond], d)
        if rows[0]["trace_distance"] < error:
            return bond
    raise ParameterError(f"no bond dimension up to {max_bond} reaches error {error}")
