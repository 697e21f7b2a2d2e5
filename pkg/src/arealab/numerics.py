"""Shared dense linear-algebra and fitting kernels.

All entropies downstream are measured in bits, so the scaling fit regresses
against log2(n) and reports c_eff = 3 * slope (the slope of a critical
entropy curve is one third of the effective central charge in these units).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitError, NotPositiveDefiniteError, NumericalFailure, ParameterError

__all__ = [
    "as_symmetric",
    "eig_sym",
    "mat_power",
    "singular_values",
    "log_det",
    "gf2_rank",
    "FitResult",
    "fit_log_scaling",
    "DEFAULT_FIT_WINDOW",
]

#: default block-size window for scaling fits; hosts should have >= 8 * n_max
#: sites so wrap-around corrections stay below the fit tolerances.
DEFAULT_FIT_WINDOW = (16, 128)


def as_symmetric(matrix, rtol: float = 1e-12) -> np.ndarray:
    """Validate symmetry to within ``rtol`` (relative, max-norm) and symmetrize."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError("expected a square matrix")
    if not np.all(np.isfinite(m)):
        raise ParameterError("matrix entries must be finite")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > rtol * scale:
        raise ParameterError("matrix is not symmetric within tolerance")
    return 0.5 * (m + m.T)


def eig_sym(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    m = as_symmetric(matrix)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailure(f"symmetric eigensolver did not converge: {exc}")
    return vals, vecs


def mat_power(matrix, power: float, floor: float | None = None) -> np.ndarray:
    """Spectral matrix power Q diag(lambda^p) Q^T with an eigenvalue floor.

    Eigenvalues in [-floor, floor] are clamped to ``floor`` before powering,
    which guards inverse square roots of nearly singular couplings. The
    default floor is 1e-12 * ||M||.
    """
    vals, vecs = eig_sym(matrix)
    scale = max(abs(vals[0]), abs(vals[-1]), 1e-300)
    if floor is None:
        floor = 1e-12 * scale
    if vals[0] < -floor and power != int(power):
        raise NotPositiveDefiniteError(
            f"eigenvalue {vals[0]:.6g} below -floor ({-floor:.3g}) for power {power}"
        )
    if power == int(power) and power >= 0:
        pvals = vals ** int(power)
    else:
        pvals = np.maximum(vals, floor) ** power
    return (vecs * pvals) @ vecs.T


def singular_values(matrix) -> np.ndarray:
    """Singular values in descending order."""
    m = np.asarray(matrix, dtype=float)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalFailure(f"SVD did not converge: {exc}")


def log_det(matrix) -> tuple[float, float]:
    """(sign, log|det|) via pivoted LU; sign 0 and -inf for exact singularity."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError("expected a square matrix")
    sign, logabs = np.linalg.slogdet(m)
    if np.iscomplexobj(m):
        return sign, float(logabs)
    return float(sign), float(logabs)


def gf2_rank(matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on a boolean matrix."""
    m = np.array(matrix, dtype=bool, copy=True)
    if m.ndim != 2:
        m = np.atleast_2d(m)
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivots = np.nonzero(m[rank:, c])[0]
        if pivots.size == 0:
            continue
        p = rank + pivots[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        hits = np.nonzero(m[:, c])[0]
        hits = hits[hits != rank]
        m[hits] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class FitResult:
    """Least-squares line S = slope * log2(n) + intercept over a window."""

    slope: float
    intercept: float
    residual: float
    window: tuple[float, float]

    @property
    def c_eff(self) -> float:
        """Effective central charge: 3 * slope in log2 units."""
        return 3.0 * self.slope


def fit_log_scaling(samples, window: tuple[float, float] = DEFAULT_FIT_WINDOW) -> FitResult:
    """Fit entropy samples (n, S) against log2(n) inside ``window``.

    Requires at least three distinct n values inside the window.
    """
    pts = [(float(n), float(s)) for n, s in samples]
    lo, hi = window
    pts = [(n, s) for n, s in pts if lo <= n <= hi]
    ns = sorted({n for n, _ in pts})
    if len(ns) < 3:
        raise FitError(f"need >= 3 distinct n in window [{lo}, {hi}], got {len(ns)}")
    x = np.log2([n for n, _ in pts])
    y = np.array([s for _, s in pts])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    rms = float(np.sqrt(np.mean((y - fitted) ** 2)))
    return FitResult(float(slope), float(intercept), rms, (lo, hi))
