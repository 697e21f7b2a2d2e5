"""Quasi-free fermionic lattice models and their entanglement measures.

The ground state of a quadratic fermion Hamiltonian with couplings (A, B)
is encoded in the real matrix V, the orthogonal polar factor of A + B
(Moore-Penrose pseudo-inverted over null directions when the ground state
is degenerate). Block entropies come from the singular values of principal
submatrices of V. Everything is in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz as toeplitz_from_coeffs

from .errors import (
    AccuracyError,
    InvalidStateError,
    ParameterError,
    UnsupportedModelError,
)
from .lattice import LatticeGraph, adjacency_dense, as_region, build_chain, build_cubic
from .numerics import DEFAULT_FIT_WINDOW, fit_log_scaling

__all__ = [
    "QuadraticFermionModel",
    "FermionicGaussianState",
    "XYParams",
    "ground_state",
    "ground_energy",
    "block_entropy",
    "entropy_bounds",
    "single_copy_entanglement",
    "operator_norm_log_bound",
    "spectrum_xy",
    "build_xy",
    "xy_circulant_state",
    "InfiniteChainCorrelations",
    "infinite_chain_correlations",
    "hopping_model_2d",
    "xy_model_2d",
    "entropy_scan_2d",
    "halfspace_entropy",
    "DisorderEnsemble",
    "disorder_average",
    "critical_slope_fit",
]

_DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class QuadraticFermionModel:
    """Hopping matrix A (symmetric) and pairing matrix B (antisymmetric)."""

    graph: LatticeGraph
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        n = self.graph.vertex_count
        a = np.asarray(self.A, dtype=float)
        b = np.asarray(self.B, dtype=float)
        if a.shape != (n, n) or b.shape != (n, n):
            raise ParameterError("coupling matrices must match the lattice size")
        scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
        if np.abs(a - a.T).max() > 1e-10 * scale:
            raise ParameterError("A must be symmetric")
        if np.abs(b + b.T).max() > 1e-10 * scale:
            raise ParameterError("B must be antisymmetric")
        object.__setattr__(self, "A", 0.5 * (a + a.T))
        object.__setattr__(self, "B", 0.5 * (b - b.T))

    def gap(self) -> float:
        """Smallest non-zero singular value of A + B (the energy gap)."""
        s = np.linalg.svd(self.A + self.B, compute_uv=False)
        nz = s[s > _DEGENERACY_RTOL * max(s[0], 1e-300)]
        return float(nz[-1]) if nz.size else 0.0


@dataclass(frozen=True)
class FermionicGaussianState:
    """Correlation matrix V of a quasi-free ground state (sector average)."""

    V: np.ndarray
    degenerate: bool = False

    @property
    def n_sites(self) -> int:
        return self.V.shape[0]


def ground_state(model: QuadraticFermionModel) -> FermionicGaussianState:
    """V = |A+B|^+ (A+B), the polar factor of A + B, via SVD.

    Singular values below 1e-10 * ||A+B|| are treated as exact zeros; the
    state is then flagged degenerate and V describes the ground-sector
    average.
    """
    m = model.A + model.B
    u, s, vt = np.linalg.svd(m)
    tol = _DEGENERACY_RTOL * max(s[0] if s.size else 0.0, 1e-300)
    keep = s > tol
    v = u[:, keep] @ vt[keep, :]
    return FermionicGaussianState(v, degenerate=bool(np.any(~keep)))


def ground_energy(model: QuadraticFermionModel) -> float:
    """Ground-state energy -1/2 sum_k sigma_k(A + B)."""
    s = np.linalg.svd(model.A + model.B, compute_uv=False)
    return float(-0.5 * np.sum(s))


def _block_singular_values(state: FermionicGaussianState, region) -> np.ndarray:
    idx = as_region(region).indices()
    if idx.size and idx[-1] >= state.n_sites:
        raise ParameterError("region exceeds the lattice")
    sigma = np.linalg.svd(state.V[np.ix_(idx, idx)], compute_uv=False)
    if sigma.size and sigma[0] > 1.0 + 1e-8:
        raise InvalidStateError(f"correlation singular value {sigma[0]:.12g} exceeds 1")
    return np.minimum(sigma, 1.0)


def binary_entropy_kernel(x) -> np.ndarray:
    """f(x) = H2((1+x)/2) in bits; f(0) = 1, f(1) = 0."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = np.zeros_like(x)
    for p in ((1.0 + x) / 2.0, (1.0 - x) / 2.0):
        out -= np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return out


def block_entropy(state: FermionicGaussianState, region, alpha: float = 1.0) -> float:
    """Renyi-alpha entropy (bits) of a block; alpha = 1 is von Neumann.

    Modes decouple in the canonical form, so each singular value sigma
    contributes the entropy of the occupation pair ((1+sigma)/2, (1-sigma)/2).
    """
    sigma = _block_singular_values(state, region)
    if alpha == 1.0:
        return float(np.sum(binary_entropy_kernel(sigma)))
    if math.isinf(alpha):
        return float(-np.sum(np.log2((1.0 + sigma) / 2.0)))
    if alpha <= 0:
        raise ParameterError("Renyi order must be positive")
    p = (1.0 + sigma) / 2.0
    q = (1.0 - sigma) / 2.0
    return float(np.sum(np.log2(p**alpha + q**alpha)) / (1.0 - alpha))


def entropy_bounds(state: FermionicGaussianState, region) -> tuple[float, float]:
    """Quadratic sandwich tr[1 - V_I V_I^T] <= S <= tr[(1 - V_I V_I^T)^1/2]."""
    sigma = _block_singular_values(state, region)
    gap = np.maximum(1.0 - sigma**2, 0.0)
    return float(np.sum(gap)), float(np.sum(np.sqrt(gap)))


def single_copy_entanglement(state: FermionicGaussianState, region) -> tuple[float, float]:
    """(floor, smooth) single-copy entanglement of a block, in bits.

    smooth = -log2 ||rho_I|| with ||rho_I|| = prod_k (1+sigma_k)/2; the
    floor variant log2 floor(1/||rho_I||) is what deterministic LOCC on one
    specimen achieves and is stepwise in the block size, so scaling fits
    use the smooth variant.
    """
    sigma = _block_singular_values(state, region)
    smooth = float(-np.sum(np.log2((1.0 + sigma) / 2.0)))
    if smooth < 52.0:  # 1/||rho|| fits in exact float integer range
        floor_val = math.floor(2.0**smooth)
        e1_floor = math.log2(floor_val) if floor_val >= 1 else 0.0
    else:
        e1_floor = smooth
    return e1_floor, smooth


def operator_norm_log_bound(state: FermionicGaussianState, region) -> tuple[float, float]:
    """(-log2 ||rho_I||, -1/2 log2 |det V_I|) for a block.

    ||rho_I|| >= |det V_I|^(1/2) holds for every block (AM-GM on the
    occupation pairs), so the first component never exceeds the second;
    both vanish exactly for uncorrelated product blocks. The determinant
    side diverges logarithmically with block size at criticality and
    saturates for gapped chains.
    """
    idx = as_region(region).indices()
    sigma = _block_singular_values(state, region)
    lhs = float(-np.sum(np.log2((1.0 + sigma) / 2.0)))
    sign, logabs = np.linalg.slogdet(state.V[np.ix_(idx, idx)])
    rhs = math.inf if sign == 0 else float(-0.5 * logabs / math.log(2.0))
    return lhs, rhs


@dataclass(frozen=True)
class XYParams:
    """Anisotropy gamma, transverse field lam, chain length, boundary flag."""

    gamma: float
    lam: float
    n_sites: int
    periodic: bool = True

    def __post_init__(self):
        if self.n_sites < 2:
            raise ParameterError("XY chain needs at least 2 sites")


def spectrum_xy(params: XYParams) -> np.ndarray:
    """Single-particle dispersion E_k of the periodic XY chain, k = 0..N-1."""
    theta = 2.0 * np.pi * np.arange(params.n_sites) / params.n_sites
    return np.sqrt((params.lam - np.cos(theta)) ** 2
                   + params.gamma**2 * np.sin(theta) ** 2)


def build_xy(params: XYParams) -> QuadraticFermionModel:
    """XY couplings: A_ii = lam, A_(i,i+1) = -1/2, B_(i,i+1) = gamma/2."""
    n = params.n_sites
    graph = build_chain(n, periodic=params.periodic)
    a = params.lam * np.eye(n) - 0.5 * adjacency_dense(graph)
    b = np.zeros((n, n))
    for i in range(n - 1):
        b[i, i + 1] = params.gamma / 2.0
        b[i + 1, i] = -params.gamma / 2.0
    if params.periodic and n > 2:
        b[n - 1, 0] = params.gamma / 2.0
        b[0, n - 1] = -params.gamma / 2.0
    return QuadraticFermionModel(graph, a, b)


def xy_circulant_state(params: XYParams) -> FermionicGaussianState:
    """Translation-invariant fast path: V entries from the circulant phases.

    V_l = (1/N) sum_k g_k exp(2 pi i l k / N) with g_k the unimodular phase
    of the circulant eigenvalue of A + B; zero modes (relative 1e-10) get
    g_k = 0 (sector average) and set the degenerate flag.
    """
    if not params.periodic:
        raise UnsupportedModelError("circulant fast path needs a periodic chain")
    n = params.n_sites
    theta = 2.0 * np.pi * np.arange(n) / n
    lam_k = (params.lam - np.cos(theta)) + 1j * params.gamma * np.sin(theta)
    mag = np.abs(lam_k)
    tol = _DEGENERACY_RTOL * max(mag.max(), 1e-300)
    g = np.where(mag > tol, lam_k / np.where(mag > 0, mag, 1.0), 0.0)
    coeff = np.fft.ifft(g)
    if np.abs(coeff.imag).max() > 1e-10:
        raise InvalidStateError("circulant correlations unexpectedly complex")
    c = coeff.real
    col = c  # V[i, j] = V_{i-j}: first column V_l, first row V_{-l} = V_{n-l}
    row = np.concatenate([[c[0]], c[1:][::-1]])
    return FermionicGaussianState(toeplitz_from_coeffs(col, row),
                                  degenerate=bool(np.any(mag <= tol)))


# ---------------------------------------------------------------------------
# infinite-chain correlations from a symbol (Filon quadrature)
# ---------------------------------------------------------------------------


def _filon_weights(theta: float) -> tuple[float, float, float]:
    """Weights (w_mid, w_sym, w_asym) of the quadratic Filon rule.

    On [c-h, c+h] with theta = l*h the rule
    I = h e^{i l c} [w_mid g(c) + w_sym (g(c+h)+g(c-h)) + i w_asym (g(c+h)-g(c-h))]
    integrates p(u) e^{i l u} exactly for quadratic p. Series branch below
    |theta| = 1e-3 avoids cancellation.
    """
    th = theta
    if abs(th) > 1e-3:
        s, c = math.sin(th), math.cos(th)
        w_mid = 4.0 * (s / th**3 - c / th**2)
        w_sym = s / th + 2.0 * c / th**2 - 2.0 * s / th**3
        w_asym = (s - th * c) / th**2
    else:
        t2 = th * th
        w_mid = 4.0 / 3.0 - 2.0 * t2 / 15.0 + t2 * t2 / 210.0
        w_sym = 1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0
        w_asym = th / 3.0 - th * t2 / 30.0 + th * t2 * t2 / 840.0
    return w_mid, w_sym, w_asym


def _filon_piece(g_vals: np.ndarray, x: np.ndarray, ls: np.ndarray) -> np.ndarray:
    """integral g(phi) e^{i l phi} dphi over one smooth piece, for every l.

    ``x`` is a uniform grid with an even number of intervals; g is
    interpolated by a quadratic on each interval pair.
    """
    h = x[1] - x[0]
    left = g_vals[0:-1:2]
    mid = g_vals[1::2]
    right = g_vals[2::2]
    centers = x[1::2]
    sym = right + left
    asym = right - left
    out = np.empty(ls.shape, dtype=complex)
    for j, l in enumerate(ls):
        w_mid, w_sym, w_asym = _filon_weights(l * h)
        phase = np.exp(1j * l * centers)
        out[j] = h * np.sum(phase * (w_mid * mid + w_sym * sym + 1j * w_asym * asym))
    return out


def _refine_jump(symbol, lo: float, hi: float, v_lo: complex, v_hi: complex) -> float:
    """Bisect a sampled discontinuity of the symbol down to ~1e-13."""
    for _ in range(50):
        midpoint = 0.5 * (lo + hi)
        v_mid = complex(symbol(np.array([midpoint]))[0])
        if abs(v_mid - v_lo) <= abs(v_mid - v_hi):
            lo = midpoint
        else:
            hi = midpoint
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def detect_symbol_jumps(symbol, n_probe: int = 8192) -> list[float]:
    """Locate discontinuities of a 2pi-periodic symbol from samples."""
    phi = 2.0 * np.pi * np.arange(n_probe) / n_probe
    vals = np.asarray(symbol(phi), dtype=complex)
    diffs = np.abs(np.diff(np.concatenate([vals, vals[:1]])))
    scale = float(np.median(diffs)) + float(np.abs(vals).max()) * 1e-12
    jumps = []
    for h in np.nonzero(diffs > max(20.0 * scale, 1e-8))[0]:
        lo = phi[h]
        hi = phi[h + 1] if h + 1 < n_probe else 2.0 * np.pi
        jumps.append(_refine_jump(symbol, lo, hi, vals[h], vals[(h + 1) % n_probe])
                     % (2.0 * np.pi))
    return sorted(jumps)


@dataclass
class InfiniteChainCorrelations:
    """Toeplitz generator V_l for an infinite chain defined by a symbol."""

    coefficients: np.ndarray  # V_l for l = -l_max .. l_max
    l_max: int
    jumps: list[float] = field(default_factory=list)

    def coefficient(self, l: int) -> complex:
        if abs(l) > self.l_max:
            raise ParameterError(f"|l| exceeds l_max = {self.l_max}")
        return complex(self.coefficients[self.l_max + l])

    def block_matrix(self, n: int) -> np.ndarray:
        """Principal n x n submatrix V_n with entries V_{i-j}."""
        if n > self.l_max:
            raise ParameterError("block size exceeds the generated range")
        col = self.coefficients[self.l_max:self.l_max + n]
        row = self.coefficients[self.l_max::-1][:n]
        m = toeplitz_from_coeffs(col, row)
        if np.abs(m.imag).max() < 1e-12:
            return np.ascontiguousarray(m.real)
        return m


def infinite_chain_correlations(symbol, l_max: int, jumps=None,
                                min_nodes: int = 4096) -> InfiniteChainCorrelations:
    """Fourier coefficients V_l = (1/2pi) int g(phi) e^{+i l phi} dphi.

    The symbol is integrated piecewise between its discontinuities (the
    Fermi surface) with the Filon rule, which handles the oscillatory factor
    exactly; a grid-doubling refinement must agree to 1e-9. Jump locations
    are detected and bisected from samples when not supplied.
    """
    if l_max < 1:
        raise ParameterError("l_max must be positive")
    if jumps is None:
        jumps = detect_symbol_jumps(symbol)
    jumps = sorted(j % (2.0 * np.pi) for j in jumps)
    breaks = [0.0] + [j for j in jumps if 1e-12 < j < 2.0 * np.pi - 1e-12] + [2.0 * np.pi]
    ls = np.arange(-l_max, l_max + 1)

    def run(nodes_total: int) -> np.ndarray:
        acc = np.zeros(ls.shape, dtype=complex)
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            frac = (hi - lo) / (2.0 * np.pi)
            m = max(8, int(math.ceil(nodes_total * frac / 2.0)) * 2)
            x = np.linspace(lo, hi, m + 1)
            x_eval = x.copy()
            x_eval[0] = lo + (hi - lo) * 1e-11  # one-sided limits at the jumps
            x_eval[-1] = hi - (hi - lo) * 1e-11
            acc += _filon_piece(np.asarray(symbol(x_eval), dtype=complex), x, ls)
        return acc / (2.0 * np.pi)

    coarse = run(min_nodes)
    fine = run(2 * min_nodes)
    err = float(np.abs(fine - coarse).max())
    if err > 1e-9:
        raise AccuracyError(f"quadrature refinement disagreement {err:.3g} > 1e-9")
    return InfiniteChainCorrelations(fine, l_max, jumps=list(jumps))


# ---------------------------------------------------------------------------
# two-dimensional scans and half spaces
# ---------------------------------------------------------------------------


def hopping_model_2d(side: int, chemical_potential: float = 0.0,
                     stagger: float = 0.0, periodic: bool = True) -> QuadraticFermionModel:
    """Nearest-neighbor hopping on a square lattice (B = 0).

    A = adjacency + mu * 1 + stagger * (-1)^(x+y); a non-zero stagger opens
    a gap at half filling, mu = 0 leaves a full Fermi line.
    """
    graph = build_cubic(side, 2, periodic=periodic)
    n = graph.vertex_count
    a = adjacency_dense(graph) + chemical_potential * np.eye(n)
    if stagger:
        signs = np.array([(-1) ** sum(graph.coordinates(i)) for i in range(n)], dtype=float)
        a += stagger * np.diag(signs)
    return QuadraticFermionModel(graph, a, np.zeros((n, n)))


def xy_model_2d(side: int, lam: float, gamma: float,
                periodic: bool = True) -> QuadraticFermionModel:
    """Anisotropic 2D model: A = lam - adjacency/2, B oriented along +x, +y."""
    graph = build_cubic(side, 2, periodic=periodic)
    n = graph.vertex_count
    a = lam * np.eye(n) - 0.5 * adjacency_dense(graph)
    b = np.zeros((n, n))
    for x in range(side):
        for y in range(side):
            i = x * side + y
            for j in (x * side + (y + 1) % side, ((x + 1) % side) * side + y):
                if not periodic and (y + 1 >= side or x + 1 >= side):
                    continue
                b[i, j] += gamma / 2.0
                b[j, i] -= gamma / 2.0
    return QuadraticFermionModel(graph, a, b)


def square_block_region(graph: LatticeGraph, block_side: int):
    if graph.dimension != 2:
        raise ParameterError("square blocks need a 2D lattice")
    side = graph.sides[0]
    if block_side > side:
        raise ParameterError("block exceeds the lattice")
    return as_region([i * side + j for i in range(block_side) for j in range(block_side)])


def entropy_scan_2d(model: QuadraticFermionModel, block_sides, alpha: float = 1.0):
    """Block entropies of n x n blocks with the S/(n log2 n) diagnostic."""
    if model.graph.dimension != 2:
        raise ParameterError("scan requires a 2D cubic lattice")
    state = ground_state(model)
    rows = []
    for n in block_sides:
        if n * n > 256:
            raise ParameterError(f"block of {n * n} sites exceeds the 256-site guard")
        s = block_entropy(state, square_block_region(model.graph, n), alpha)
        rows.append({
            "side": int(n),
            "entropy": s,
            "per_side": s / n,
            "per_side_log": s / (n * math.log2(n)) if n > 1 else math.nan,
        })
    return rows


def halfspace_entropy(side: int, cut: int, lam: float = 0.0, gamma: float = 0.0,
                      dimension: int = 2) -> dict:
    """Half-space entropy per boundary site via transverse Fourier decoupling.

    A translation-invariant XY-type model on a periodic side**dimension
    lattice with region {1..cut} x (full transverse extent) decouples into
    side**(dimension-1) chains indexed by transverse momenta; each chain is
    an XY chain with effective field lam - sum_t cos(phi_t). Returns the
    average block entropy over chains (= S(rho_I)/s(I) in the decoupled
    normalization), the per-chain table and symbol jump counts.
    """
    if dimension < 1:
        raise UnsupportedModelError("dimension must be >= 1")
    if not 0 < cut < side:
        raise ParameterError("cut must satisfy 0 < cut < side")
    n_transverse = side ** (dimension - 1)
    chains = []
    total = 0.0
    for t in range(n_transverse):
        rem, phis = t, []
        for _ in range(dimension - 1):
            phis.append(2.0 * np.pi * (rem % side) / side)
            rem //= side
        lam_eff = lam - sum(math.cos(p) for p in phis)
        state = xy_circulant_state(XYParams(gamma=gamma, lam=lam_eff, n_sites=side))
        s = block_entropy(state, range(cut))
        n_jumps = 2 if (gamma == 0.0 and abs(lam_eff) < 1.0) else 0
        chains.append({"transverse_index": t, "effective_field": lam_eff,
                       "entropy": s, "symbol_jumps": n_jumps})
        total += s
    return {"per_boundary_site": total / n_transverse, "chains": chains,
            "cut": cut, "side": side}


# ---------------------------------------------------------------------------
# disorder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DisorderEnsemble:
    """Random-hopping XX chains: J_e drawn uniformly from [j_low, j_high]."""

    n_sites: int
    j_low: float
    j_high: float
    lam: float = 0.0
    periodic: bool = True

    def sample(self, rng: np.random.Generator) -> QuadraticFermionModel:
        graph = build_chain(self.n_sites, periodic=self.periodic)
        hops = rng.uniform(self.j_low, self.j_high, size=graph.edge_count)
        a = self.lam * np.eye(self.n_sites)
        for (i, j), hop in zip(graph.edges, hops):
            a[i, j] = a[j, i] = -0.5 * hop
        return QuadraticFermionModel(graph, a, np.zeros_like(a))


def disorder_average(ensemble: DisorderEnsemble, block_sizes, n_samples: int,
                     seed: int, block_starts=(0,)) -> dict:
    """Disorder-averaged block entropies, deterministic in the seed.

    Per-sample generators are seeded with (seed, sample index) so results do
    not depend on evaluation order. Samples critical to within 1e-12 (gap
    below 1e-12 * ||A+B||) are skipped and counted.
    """
    if n_samples < 2:
        raise ParameterError("need at least 2 disorder samples")
    block_sizes = [int(b) for b in block_sizes]
    per_block: dict[int, list[float]] = {n: [] for n in block_sizes}
    skipped = 0
    for k in range(n_samples):
        rng = np.random.default_rng([seed, k])
        model = ensemble.sample(rng)
        s_vals = np.linalg.svd(model.A + model.B, compute_uv=False)
        if s_vals[-1] < 1e-12 * max(s_vals[0], 1e-300):
            skipped += 1
            continue
        state = ground_state(model)
        for n in block_sizes:
            vals = [block_entropy(state, [(st + i) % ensemble.n_sites for i in range(n)])
                    for st in block_starts]
            per_block[n].append(float(np.mean(vals)))
    if skipped == n_samples:
        raise AccuracyError("every disorder sample was skipped as critical")
    rows = []
    for n in block_sizes:
        vals = np.asarray(per_block[n])
        rows.append({
            "block": n,
            "mean_entropy": float(vals.mean()),
            "std_error": float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0,
            "samples": int(len(vals)),
        })
    return {"rows": rows, "skipped": skipped}


def critical_slope_fit(state: FermionicGaussianState, block_sizes=None,
                       window=DEFAULT_FIT_WINDOW, alpha: float = 1.0):
    """Fit block entropies of contiguous blocks from site 0 against log2(n)."""
    if block_sizes is None:
        block_sizes = sorted({int(round(x)) for x in np.geomspace(window[0], window[1], 10)})
    samples = [(n, block_entropy(state, range(n), alpha)) for n in block_sizes]
    return fit_log_scaling(samples, window), samples
