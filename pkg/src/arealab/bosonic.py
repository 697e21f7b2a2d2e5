"""Gaussian states of harmonic lattice models.

Canonical coordinates are ordered (x_1..x_n, p_1..p_n) throughout, so every
covariance matrix decomposes as Gamma = Gamma_x (+) Gamma_p and the symplectic
form never appears explicitly. Entropies and negativities are in bits.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConditioningError,
    ConditioningWarning,
    CriticalityError,
    ParameterError,
)
from .lattice import LatticeGraph, adjacency_dense, as_region, build_chain, build_cubic
from .numerics import eig_sym, log_det, mat_power
from . import lattice as _lattice

__all__ = [
    "HarmonicModel",
    "GaussianBosonicState",
    "harmonic_chain",
    "harmonic_cubic",
    "klein_gordon_chain",
    "klein_gordon_cubic",
    "ground_state",
    "thermal_state",
    "symplectic_spectrum",
    "entropy",
    "entropy_from_symplectic",
    "log_negativity",
    "half_chain_negativity_closed_form",
    "negativity_area_scan_2d",
    "classical_mutual_information",
]

_NEAR_CRITICAL_RATIO = 1e-8
_CLAMP_WINDOW = 1e-10


@dataclass(frozen=True)
class HarmonicModel:
    """Position/momentum couplings X, P of a quadratic oscillator lattice."""

    graph: LatticeGraph
    X: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        n = self.graph.vertex_count
        X = np.asarray(self.X, dtype=float)
        P = np.asarray(self.P, dtype=float)
        if X.shape != (n, n) or P.shape != (n, n):
            raise ParameterError("coupling matrices must match the lattice size")
        object.__setattr__(self, "X", 0.5 * (X + X.T))
        object.__setattr__(self, "P", 0.5 * (P + P.T))

    def coupling_gap(self) -> float:
        """Smallest eigenvalue of X; positivity requires it to be > 0."""
        return float(np.linalg.eigvalsh(self.X)[0])


@dataclass(frozen=True)
class GaussianBosonicState:
    """Second moments Gamma_x, Gamma_p of a Gaussian state; beta=inf is ground."""

    gamma_x: np.ndarray
    gamma_p: np.ndarray
    beta: float = math.inf
    gap: float = field(default=float("nan"), compare=False)

    @property
    def n_modes(self) -> int:
        return self.gamma_x.shape[0]


def _check_positive_coupling(model: HarmonicModel):
    vals = np.linalg.eigvalsh(model.X)
    norm = abs(vals[-1])
    if vals[0] <= 1e-12 * max(norm, 1.0):
        raise CriticalityError(
            f"X is not strictly positive definite: min eigenvalue {vals[0]:.6g}"
        )
    if vals[0] / max(norm, 1e-300) < _NEAR_CRITICAL_RATIO:
        warnings.warn(
            f"coupling matrix nearly critical: lambda_min/||X|| = {vals[0] / norm:.3g}",
            ConditioningWarning,
            stacklevel=3,
        )
    pvals = np.linalg.eigvalsh(model.P)
    if pvals[0] <= 0:
        raise CriticalityError(
            f"P is not strictly positive definite: min eigenvalue {pvals[0]:.6g}"
        )


def ground_state(model: HarmonicModel) -> GaussianBosonicState:
    """Ground-state covariance: Gamma_p = X^1/2 (X^1/2 P X^1/2)^-1/2 X^1/2.

    Gamma_x is its inverse, so the state is pure (all symplectic
    eigenvalues equal 1).
    """
    _check_positive_coupling(model)
    x_half = mat_power(model.X, 0.5)
    core = x_half @ model.P @ x_half
    core_vals, core_vecs = eig_sym(core)
    gap = math.sqrt(max(core_vals[0], 0.0))
    floor = 1e-14 * max(core_vals[-1], 1e-300)
    inv_sqrt = (core_vecs * np.maximum(core_vals, floor) ** -0.5) @ core_vecs.T
    sqrt = (core_vecs * np.maximum(core_vals, floor) ** 0.5) @ core_vecs.T
    x_inv_half = mat_power(model.X, -0.5)
    gamma_p = x_half @ inv_sqrt @ x_half
    gamma_x = x_inv_half @ sqrt @ x_inv_half
    return GaussianBosonicState(gamma_x, gamma_p, beta=math.inf, gap=gap)


def thermal_state(model: HarmonicModel, beta: float) -> GaussianBosonicState:
    """Gibbs-state covariance at inverse temperature beta > 0.

    Relative to the ground state both blocks pick up the thermal factor
    1 + G = coth(beta * eps / 2) applied in the eigenbasis of
    (X^1/2 P X^1/2)^1/2.
    """
    if not beta > 0:
        raise ParameterError("inverse temperature must be positive")
    _check_positive_coupling(model)
    x_half = mat_power(model.X, 0.5)
    x_inv_half = mat_power(model.X, -0.5)
    core_vals, core_vecs = eig_sym(x_half @ model.P @ x_half)
    eps = np.sqrt(np.maximum(core_vals, 1e-300))
    # coth(beta*eps/2) = 1 + 2/(e^(beta*eps) - 1); expm1 overflows to inf for
    # large beta*eps, which correctly yields the ground-state factor 1.
    with np.errstate(over="ignore"):
        thermal = 1.0 + 2.0 / np.expm1(beta * eps)
    f_p = (core_vecs * (thermal / eps)) @ core_vecs.T
    f_x = (core_vecs * (thermal * eps)) @ core_vecs.T
    gamma_p = x_half @ f_p @ x_half
    gamma_x = x_inv_half @ f_x @ x_inv_half
    return GaussianBosonicState(gamma_x, gamma_p, beta=beta, gap=float(eps[0]))


def symplectic_spectrum(state: GaussianBosonicState, region=None) -> np.ndarray:
    """Symplectic eigenvalues of the reduction to ``region``, descending.

    Computed as the square roots of the spectrum of
    Gx^1/2 Gp Gx^1/2 on the region's principal submatrices; values
    within 1e-10 below 1 are clamped to exactly 1 (the entropy kernel has
    infinite slope there and must not see d < 1 roundoff).
    """
    if region is None:
        idx = np.arange(state.n_modes)
    else:
        idx = as_region(region).indices()
        if idx.size and idx[-1] >= state.n_modes:
            raise ParameterError("region exceeds the number of modes")
    gx = state.gamma_x[np.ix_(idx, idx)]
    gp = state.gamma_p[np.ix_(idx, idx)]
    try:
        gx_half = mat_power(gx, 0.5)
    except Exception as exc:
        raise ConditioningError(f"reduced Gamma_x not positive definite: {exc}")
    vals = np.linalg.eigvalsh(gx_half @ gp @ gx_half)
    d = np.sqrt(np.maximum(vals, 0.0))
    if d.size and d[0] < 1.0 - 1e-8:
        raise ConditioningError(f"symplectic eigenvalue {d[0]:.12g} below 1")
    d[(d > 1.0 - _CLAMP_WINDOW) & (d < 1.0)] = 1.0
    return np.sort(d)[::-1]


def entropy_from_symplectic(d: np.ndarray, alpha: float = 1.0) -> float:
    """Entropy in bits of a Gaussian state with symplectic eigenvalues d >= 1.

    alpha = 1 is the von-Neumann entropy; other orders use the closed-form
    Renyi entropy of a thermal oscillator,
    S_alpha = (alpha - 1)^-1 log2( ((d+1)/2)^alpha - ((d-1)/2)^alpha )
    summed over modes; alpha = inf gives sum log2((d+1)/2).
    """
    d = np.asarray(d, dtype=float)
    up = (d + 1.0) / 2.0
    dn = np.maximum((d - 1.0) / 2.0, 0.0)  # 0*log(0) := 0, and guards roundoff
    if alpha == 1.0:
        term = up * np.log2(up) - np.where(dn > 0, dn * np.log2(np.where(dn > 0, dn, 1.0)), 0.0)
        return float(np.sum(term))
    if math.isinf(alpha):
        return float(np.sum(np.log2(up)))
    if alpha <= 0:
        raise ParameterError("Renyi order must be positive")
    # log2(up^a - dn^a) = a*log2(up) + log2(1 - (dn/up)^a), stable for large d
    term = alpha * np.log2(up) + np.log2(1.0 - (dn / up) ** alpha)
    return float(np.sum(term) / (alpha - 1.0))


def entropy(state: GaussianBosonicState, region=None, alpha: float = 1.0) -> float:
    """Entropy (bits) of the reduced state on ``region``."""
    return entropy_from_symplectic(symplectic_spectrum(state, region), alpha)


def log_negativity(state: GaussianBosonicState, region) -> float:
    """Logarithmic negativity across the cut region / rest, in bits.

    Partial transposition is partial time reversal: p_i -> -p_i on the
    region. E_N = 1/2 sum_k log2 max{1, lambda_k(Gp^-1 F Gx^-1 F)} with
    F the corresponding sign matrix.
    """
    region = as_region(region)
    idx = region.indices()
    if idx.size and idx[-1] >= state.n_modes:
        raise ParameterError("region exceeds the number of modes")
    f_sign = np.ones(state.n_modes)
    f_sign[idx] = -1.0
    try:
        gp_inv_half = mat_power(state.gamma_p, -0.5)
        gx_inv = mat_power(state.gamma_x, -1.0)
    except Exception as exc:
        raise ConditioningError(f"covariance blocks not invertible: {exc}")
    # lambda(Gp^-1 F Gx^-1 F) equals the spectrum of the symmetrized product
    # Gp^-1/2 F Gx^-1 F Gp^-1/2; diag(F) is applied as column scalings.
    m = ((gp_inv_half * f_sign) @ gx_inv * f_sign) @ gp_inv_half
    vals = np.linalg.eigvalsh(0.5 * (m + m.T))
    vals = vals[vals > 1.0]
    return float(0.5 * np.sum(np.log2(vals))) if vals.size else 0.0


def half_chain_negativity_closed_form(a: float, b: float) -> dict:
    """Exact half-chain negativity of the periodic nearest-neighbor chain.

    For X = circ(a, b, 0, .., 0, b), P = 1 and the symmetric bisection,
    E_N = 1/4 log2((a + 2|b|) / (a - 2|b|)), independent of the chain
    length. Also reports the gap (a - 2|b|)^1/2 and the equivalent form
    1/2 log2(||X||^1/2 / gap).
    """
    if not a > 2 * abs(b):
        raise CriticalityError(f"positivity requires a > 2|b|, got a={a}, b={b}")
    gap = math.sqrt(a - 2 * abs(b))
    norm_x = a + 2 * abs(b)
    value = 0.25 * math.log2((a + 2 * abs(b)) / (a - 2 * abs(b)))
    return {
        "log_negativity": value,
        "gap": gap,
        "norm_form": 0.5 * math.log2(math.sqrt(norm_x) / gap),
    }


def harmonic_chain(n: int, a: float, b: float, periodic: bool = True) -> HarmonicModel:
    """Nearest-neighbor chain X = circ(a, b, 0, .., 0, b), P = 1."""
    graph = build_chain(n, periodic=periodic)
    x = a * np.eye(n) + b * adjacency_dense(graph)
    return HarmonicModel(graph, x, np.eye(n))


def harmonic_cubic(side: int, dimension: int, a: float, b: float,
                   periodic: bool = True) -> HarmonicModel:
    """Cubic-lattice model with on-site a and coupling b per axis, P = 1."""
    graph = build_cubic(side, dimension, periodic=periodic)
    n = graph.vertex_count
    x = a * np.eye(n) + b * adjacency_dense(graph)
    return HarmonicModel(graph, x, np.eye(n))


def klein_gordon_chain(n: int, mass: float) -> HarmonicModel:
    """Discretized Klein-Gordon field on n sites: a = m^2 + 2n^2, b = -n^2."""
    if mass <= 0:
        raise ParameterError("mass must be positive")
    return harmonic_chain(n, mass**2 + 2.0 * n**2, -float(n) ** 2, periodic=True)


def klein_gordon_cubic(side: int, dimension: int, mass: float,
                       coupling: float = 1.0) -> HarmonicModel:
    """Higher-dimensional discrete Klein-Gordon: X = m^2 + coupling * Laplacian."""
    if mass <= 0:
        raise ParameterError("mass must be positive")
    graph = build_cubic(side, dimension, periodic=True)
    n = graph.vertex_count
    lap = 2.0 * dimension * np.eye(n) - adjacency_dense(graph)
    return HarmonicModel(graph, mass**2 * np.eye(n) + coupling * lap, np.eye(n))


def square_block_region(graph: LatticeGraph, block_side: int, corner=(0, 0)):
    """Region for a block_side x block_side block on a 2D cubic lattice."""
    if graph.dimension != 2:
        raise ParameterError("square blocks need a 2D lattice")
    side = graph.sides[0]
    if block_side > side:
        raise ParameterError("block exceeds the lattice")
    cx, cy = corner
    members = [
        ((cx + i) % side) * side + ((cy + j) % side)
        for i in range(block_side)
        for j in range(block_side)
    ]
    return as_region(members)


def negativity_area_scan_2d(model: HarmonicModel, block_sides, beta: float = math.inf):
    """Log-negativity of square blocks on a 2D model, per boundary site.

    Returns a list of rows {side, surface, log_negativity, per_boundary}.
    """
    if model.graph.dimension != 2:
        raise ParameterError("scan requires a 2D cubic lattice")
    state = ground_state(model) if math.isinf(beta) else thermal_state(model, beta)
    rows = []
    for side in block_sides:
        region = square_block_region(model.graph, side)
        s_area = _lattice.surface_area(model.graph, region)
        en = log_negativity(state, region)
        rows.append({
            "side": int(side),
            "surface": int(s_area),
            "log_negativity": en,
            "per_boundary": en / s_area if s_area else math.nan,
        })
    return rows


def classical_mutual_information(model: HarmonicModel, beta: float, region) -> float:
    """Mutual information (bits) of the classical Gibbs state of H = p^2/2 + x X x / 2.

    Positions are jointly Gaussian with covariance (beta X)^-1 and momenta are
    iid, so I(I:O) = 1/2 log2(det S_I det S_O / det S) for the position
    covariance S. This closed form is the cell-size-independent limit of the
    coarse-grained construction (the cell constant cancels in I).
    """
    if not beta > 0:
        raise ParameterError("inverse temperature must be positive")
    region = as_region(region)
    _check_positive_coupling(model)
    n = model.graph.vertex_count
    idx_i = region.indices()
    mask = np.ones(n, dtype=bool)
    mask[idx_i] = False
    idx_o = np.nonzero(mask)[0]
    sigma = mat_power(model.X, -1.0) / beta
    sign, logdet_full = log_det(sigma)
    if sign <= 0:
        raise ConditioningError("position covariance is numerically singular")
    terms = []
    for idx in (idx_i, idx_o):
        if idx.size == 0:
            terms.append(0.0)
            continue
        s, ld = log_det(sigma[np.ix_(idx, idx)])
        if s <= 0:
            raise ConditioningError("marginal covariance is numerically singular")
        terms.append(ld)
    return float((terms[0] + terms[1] - logdet_full) / (2.0 * math.log(2.0)))
