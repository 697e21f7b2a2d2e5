"""Dense exact-diagonalization reference engine for small spin systems.

Everything here trades scale for exactness: Hamiltonians are kept as term
lists (site tuple + local matrix), built dense up to 12 qubits and applied
lazily up to the hard cap of 14. This module is the agreement oracle for
the Gaussian, stabilizer and tensor-network formalisms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .errors import ParameterError, SizeError
from .lattice import LatticeGraph, as_region, build_chain, surface_area

__all__ = [
    "DenseSpinSystem",
    "PAULI",
    "xy_spin_chain",
    "transverse_ising_chain",
    "heisenberg_pair",
    "single_site_z",
    "ground_state_dense",
    "propagate_dense",
    "reduced_entropy",
    "reduced_density_matrix",
    "thermal_mutual_information",
    "ClassicalIsingRing",
    "classical_spin_mutual_information",
    "lieb_robinson_profile",
    "graph_state_vector",
    "stabilizer_state_vector",
]

DENSE_CAP = 12
LAZY_CAP = 14

_I2 = np.eye(2)
PAULI = {
    "i": _I2,
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def _embed(op: np.ndarray, sites: tuple[int, ...], n: int) -> np.ndarray:
    """Dense embedding of a local operator on ``sites`` into n qubits.

    Qubit 0 is the most significant bit of the basis index.
    """
    k = len(sites)
    rest = [q for q in range(n) if q not in sites]
    full = np.kron(op, np.eye(2 ** (n - k), dtype=op.dtype))
    t = full.reshape((2,) * (2 * n))
    order = list(sites) + rest
    inv = np.argsort(order)
    t = np.transpose(t, axes=list(inv) + [n + i for i in inv])
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


def _apply_term(op: np.ndarray, sites: tuple[int, ...], psi: np.ndarray, n: int) -> np.ndarray:
    """Apply a local operator to a state vector without building it dense."""
    k = len(sites)
    rest = [q for q in range(n) if q not in sites]
    t = psi.reshape((2,) * n).transpose(list(sites) + rest).reshape(2**k, -1)
    out = (op @ t).reshape((2,) * n)
    inv = np.argsort(list(sites) + rest)
    return out.transpose(inv).reshape(-1)


@dataclass(frozen=True)
class DenseSpinSystem:
    """Qubit system defined by a list of (sites, local matrix) terms."""

    n_qubits: int
    terms: tuple
    graph: LatticeGraph | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n_qubits > LAZY_CAP:
            raise SizeError(f"{self.n_qubits} qubits exceeds the {LAZY_CAP}-qubit cap")
        terms = []
        for sites, op in self.terms:
            sites = tuple(int(s) for s in sites)
            op = np.asarray(op, dtype=complex)
            if op.shape != (2 ** len(sites),) * 2:
                raise ParameterError("term matrix does not match its site count")
            if np.abs(op - op.conj().T).max() > 1e-12 * max(np.abs(op).max(), 1.0):
                raise ParameterError("term matrices must be Hermitian")
            if any(not 0 <= s < self.n_qubits for s in sites):
                raise ParameterError("term site out of range")
            terms.append((sites, op))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def dense_hamiltonian(self) -> np.ndarray:
        if self.n_qubits > DENSE_CAP:
            raise SizeError(f"dense Hamiltonian capped at {DENSE_CAP} qubits")
        if "H" not in self._cache:
            h = np.zeros((self.dim, self.dim), dtype=complex)
            for sites, op in self.terms:
                h += _embed(op, sites, self.n_qubits)
            if np.abs(h.imag).max() < 1e-14:
                h = h.real
            self._cache["H"] = h
        return self._cache["H"]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi, dtype=complex)
        for sites, op in self.terms:
            out += _apply_term(op, sites, psi, self.n_qubits)
        return out

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        if "eig" not in self._cache:
            h = self.dense_hamiltonian()
            self._cache["eig"] = np.linalg.eigh(h)
        return self._cache["eig"]

    def partition_terms(self, region) -> dict[str, list]:
        """Split terms into interior / boundary-crossing / exterior."""
        inside = set(as_region(region).members)
        split = {"interior": [], "boundary": [], "exterior": []}
        for sites, op in self.terms:
            hits = sum(1 for s in sites if s in inside)
            if hits == len(sites):
                split["interior"].append((sites, op))
            elif hits == 0:
                split["exterior"].append((sites, op))
            else:
                split["boundary"].append((sites, op))
        return split


def xy_spin_chain(n: int, gamma: float, lam: float, periodic: bool = False) -> DenseSpinSystem:
    """Anisotropic XY spin chain in a transverse field.

    Per (unordered) bond H carries -[(1+gamma)/4 X_i X_j + (1-gamma)/4
    Y_i Y_j], plus -lam/2 Z_i per site. Open boundaries keep the exact
    correspondence (including the additive constant) with the quadratic
    fermion chain of the same parameters; the periodic spin ring differs
    from the periodic fermion model by a parity-dependent boundary term.
    """
    graph = build_chain(n, periodic=periodic)
    xx = np.kron(PAULI["x"], PAULI["x"])
    yy = np.kron(PAULI["y"], PAULI["y"]).real
    bond = -((1 + gamma) / 4.0 * xx + (1 - gamma) / 4.0 * yy)
    terms = [((int(i), int(j)), bond) for i, j in graph.edges]
    terms += [((i,), -lam / 2.0 * PAULI["z"]) for i in range(n)]
    return DenseSpinSystem(n, tuple(terms), graph=graph)


def transverse_ising_chain(n: int, lam: float, periodic: bool = False) -> DenseSpinSystem:
    """Ising limit (gamma = 1) of the XY chain."""
    return xy_spin_chain(n, gamma=1.0, lam=lam, periodic=periodic)


def heisenberg_pair(coupling: float = 1.0) -> DenseSpinSystem:
    """Two-site exchange H = J (XX + YY + ZZ); singlet energy -3J."""
    op = coupling * sum(np.kron(PAULI[a], PAULI[a]) for a in "xyz").real
    return DenseSpinSystem(2, (((0, 1), op),), graph=build_chain(2, periodic=False))


def single_site_z() -> DenseSpinSystem:
    """One qubit with H = Z (ground state |1>, energy -1)."""
    return DenseSpinSystem(1, (((0,), PAULI["z"]),))


def ground_state_dense(system: DenseSpinSystem) -> tuple[np.ndarray, float]:
    """Ground state vector and energy; Lanczos above the dense cap."""
    if system.n_qubits <= DENSE_CAP:
        vals, vecs = system.eigensystem()
        return vecs[:, 0], float(vals[0])
    op = LinearOperator((system.dim, system.dim),
                        matvec=lambda v: system.apply(v.astype(complex)),
                        dtype=complex)
    vals, vecs = eigsh(op, k=1, which="SA", tol=1e-12)
    return vecs[:, 0], float(vals[0])


def propagate_dense(system: DenseSpinSystem, psi: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) |psi> through the cached eigendecomposition."""
    if system.n_qubits > DENSE_CAP:
        raise SizeError(f"dense propagation capped at {DENSE_CAP} qubits")
    vals, vecs = system.eigensystem()
    return vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ psi))


def _schmidt_probabilities(psi: np.ndarray, region, n: int) -> np.ndarray:
    idx = list(as_region(region).members)
    rest = [q for q in range(n) if q not in idx]
    m = psi.reshape((2,) * n).transpose(idx + rest).reshape(2 ** len(idx), -1)
    s = np.linalg.svd(m, compute_uv=False)
    p = s**2
    return p[p > 1e-16]


def _entropy_of_probs(p: np.ndarray, alpha: float) -> float:
    p = p / p.sum()
    if alpha == 1.0:
        return float(-(p * np.log2(p)).sum())
    if math.isinf(alpha):
        return float(-np.log2(p.max()))
    if alpha <= 0:
        raise ParameterError("Renyi order must be positive")
    return float(np.log2((p**alpha).sum()) / (1.0 - alpha))


def reduced_entropy(psi: np.ndarray, region, n_qubits: int, alpha: float = 1.0) -> float:
    """Renyi-alpha entropy (bits) of the reduction of a pure state."""
    if 2**n_qubits != psi.shape[0]:
        raise ParameterError("state dimension does not match the qubit count")
    p = _schmidt_probabilities(psi, region, n_qubits)
    return _entropy_of_probs(p, alpha)


def reduced_density_matrix(rho: np.ndarray, region, n: int) -> np.ndarray:
    """Partial trace of a density matrix onto ``region`` (any site subset)."""
    idx = list(as_region(region).members)
    rest = [q for q in range(n) if q not in idx]
    k = len(idx)
    t = rho.reshape((2,) * (2 * n))
    t = np.transpose(t, axes=idx + rest + [n + q for q in idx] + [n + q for q in rest])
    t = t.reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return np.einsum("ajbj->ab", t)


def _vn_entropy(rho: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > 1e-16]
    return float(-(vals * np.log2(vals)).sum())


def thermal_mutual_information(system: DenseSpinSystem, beta: float, region) -> dict:
    """Mutual information of the Gibbs state across region/rest, with bounds.

    Returns I = S_I + S_O - S, the free-energy bound
    beta * tr[H_boundary (rho_I x rho_O - rho_beta)] (which upper-bounds I
    exactly), and the coarser boundary-norm bound beta * ||h|| * s(I) with
    ||h|| the largest operator norm among the boundary-crossing terms.
    """
    if not beta > 0:
        raise ParameterError("inverse temperature must be positive")
    if system.n_qubits > DENSE_CAP:
        raise SizeError("thermal computations capped at the dense size")
    n = system.n_qubits
    region = as_region(region)
    vals, vecs = system.eigensystem()
    w = np.exp(-beta * (vals - vals.min()))
    rho = (vecs * (w / w.sum())) @ vecs.conj().T
    rho_i = reduced_density_matrix(rho, region, n)
    comp = [q for q in range(n) if q not in set(region.members)]
    rho_o = reduced_density_matrix(rho, comp, n)
    mutual = _vn_entropy(rho_i) + _vn_entropy(rho_o) - _vn_entropy(rho)

    # product state rho_I x rho_O reordered to the original site order
    idx = list(region.members)
    prod = np.kron(rho_i, rho_o)
    order = idx + comp
    inv = np.argsort(order)
    t = prod.reshape((2,) * (2 * n))
    t = np.transpose(t, axes=list(inv) + [n + i for i in inv])
    prod = t.reshape(2**n, 2**n)

    parts = system.partition_terms(region)
    h_boundary = np.zeros((2**n, 2**n), dtype=complex)
    for sites, op in parts["boundary"]:
        h_boundary += _embed(op, sites, n)
    bound_exact = float(beta * np.real(np.trace(h_boundary @ (prod - rho))))
    h_norm = max((np.linalg.norm(op, 2) for _, op in parts["boundary"]), default=0.0)
    if system.graph is not None:
        s_area = surface_area(system.graph, region)
    else:
        s_area = len({s for sites, _ in parts["boundary"] for s in sites if s in set(region.members)})
    return {
        "mutual_information": float(mutual),
        "bound_exact": bound_exact,
        "bound_boundary_norm": float(beta * h_norm * s_area),
        "surface": int(s_area),
    }


@dataclass(frozen=True)
class ClassicalIsingRing:
    """Classical Ising spins on a ring: E = -J sum s_i s_i+1 - h sum s_i."""

    n_sites: int
    coupling: float = 1.0
    ext_field: float = 0.0

    def __post_init__(self):
        if self.n_sites > 20:
            raise SizeError("classical enumeration capped at 20 spins")


def _shannon_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def classical_spin_mutual_information(spec: ClassicalIsingRing, beta: float, region) -> dict:
    """Shannon mutual information of the Gibbs distribution, by enumeration.

    Uses log-sum-exp accumulation so large beta stays finite. The returned
    bound is s(I) * log2(d) with d = 2.
    """
    if beta < 0:
        raise ParameterError("beta must be non-negative")
    n = spec.n_sites
    region = as_region(region)
    idx = np.asarray(region.members)
    states = np.arange(1 << n, dtype=np.int64)
    bits = ((states[:, None] >> np.arange(n)[::-1]) & 1).astype(np.int8)
    spins = 1 - 2 * bits  # bit 0 -> +1
    pair = np.roll(spins, -1, axis=1) * spins
    energy = -spec.coupling * pair.sum(axis=1) - spec.ext_field * spins.sum(axis=1)
    logw = -beta * energy
    logw -= logw.max()
    w = np.exp(logw)
    p = w / w.sum()

    mask_i = np.zeros(n, dtype=bool)
    mask_i[idx] = True
    pow_i = np.zeros(n, dtype=np.int64)
    pow_i[mask_i] = 1 << np.arange(mask_i.sum())[::-1]
    pow_o = np.zeros(n, dtype=np.int64)
    pow_o[~mask_i] = 1 << np.arange((~mask_i).sum())[::-1]
    proj_i = bits @ pow_i
    proj_o = bits @ pow_o
    p_i = np.bincount(proj_i, weights=p, minlength=1 << int(mask_i.sum()))
    p_o = np.bincount(proj_o, weights=p, minlength=1 << int((~mask_i).sum()))
    mutual = _shannon_bits(p_i) + _shannon_bits(p_o) - _shannon_bits(p)
    graph = build_chain(n, periodic=True)
    s_area = surface_area(graph, region)
    return {"mutual_information": float(mutual), "bound": float(s_area * 1.0),
            "surface": int(s_area)}


def lieb_robinson_profile(system: DenseSpinSystem, site_a: int, sites_b,
                          t_grid, op_name: str = "x") -> list[dict]:
    """Exact commutator norms ||[A(t), B]|| for A, B single-site Paulis.

    A sits on ``site_a`` and is Heisenberg-evolved; one row per
    (site_b, t) pair with the graph distance and the spectral norm.
    """
    if system.n_qubits > DENSE_CAP:
        raise SizeError("dense commutator profile capped at the dense size")
    n = system.n_qubits
    vals, vecs = system.eigensystem()
    a_op = _embed(PAULI[op_name], (site_a,), n)
    rows = []
    for site_b in sites_b:
        b_op = _embed(PAULI[op_name], (int(site_b),), n)
        if system.graph is not None:
            from .lattice import graph_distance
            dist = graph_distance(system.graph, site_a, int(site_b))
        else:
            dist = abs(int(site_b) - site_a)
        for t in t_grid:
            phase = np.exp(1j * vals * t)
            a_t = (vecs * phase) @ (vecs.conj().T @ a_op @ vecs) @ (vecs * phase).conj().T
            comm = a_t @ b_op - b_op @ a_t
            rows.append({"site_b": int(site_b), "distance": float(dist), "t": float(t),
                         "commutator_norm": float(np.linalg.norm(comm, 2))})
    return rows


# ---------------------------------------------------------------------------
# reference state vectors for the stabilizer module
# ---------------------------------------------------------------------------


def graph_state_vector(adjacency: np.ndarray) -> np.ndarray:
    """|G> = prod_{(i,j) in E} CZ_ij |+>^n as a dense vector."""
    adj = np.asarray(adjacency, dtype=bool)
    n = adj.shape[0]
    if n > 20:
        raise SizeError("graph-state vectors capped at 20 qubits")
    dim = 1 << n
    psi = np.full(dim, 1.0 / math.sqrt(dim))
    states = np.arange(dim)
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                both = ((states >> (n - 1 - i)) & 1) & ((states >> (n - 1 - j)) & 1)
                psi = np.where(both, -psi, psi)
    return psi


def stabilizer_state_vector(x_strings: list[list[int]], n_qubits: int) -> np.ndarray:
    """Project |0..0> with prod (1 + X-string)/2 for commuting Z-diagonal codes.

    Valid when |0..0> is a +1 eigenstate of all Z-type generators and the
    X-type generators are pure X strings (toric-code-like states).
    """
    if n_qubits > 20:
        raise SizeError("stabilizer vectors capped at 20 qubits")
    dim = 1 << n_qubits
    psi = np.zeros(dim)
    psi[0] = 1.0
    states = np.arange(dim)
    for string in x_strings:
        mask = 0
        for q in string:
            mask |= 1 << (n_qubits - 1 - q)
        psi = psi + psi[states ^ mask]
    return psi / np.linalg.norm(psi)
