"""Graph states, stabilizer tableaus, and topological entanglement entropy.

All entropies in this module are exact non-negative integers (in bits),
computed by GF(2) rank arithmetic with no floating point involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import InvalidPartitionError, InvalidTableauError, ParameterError
from .lattice import LatticeGraph, as_region
from .numerics import gf2_rank

__all__ = [
    "GraphState",
    "StabilizerTableau",
    "graph_state_entropy",
    "graph_state_tableau",
    "tableau_entropy",
    "toric_code",
    "toric_edge_index",
    "topological_entropy",
    "kitaev_preskill_fixture",
    "KP_FIXTURES",
]


@dataclass(frozen=True)
class GraphState:
    """Stabilizer state prepared from |+>^n by a phase gate per graph edge."""

    graph: LatticeGraph

    @property
    def n_qubits(self) -> int:
        return self.graph.vertex_count

    def adjacency(self) -> np.ndarray:
        n = self.n_qubits
        adj = np.zeros((n, n), dtype=bool)
        for i, j in self.graph.edges:
            adj[i, j] = adj[j, i] = True
        return adj


@dataclass(frozen=True)
class StabilizerTableau:
    """n independent commuting Pauli generators as an n x 2n binary matrix.

    Columns 0..n-1 are the X components, n..2n-1 the Z components. The
    binary symplectic product of every generator pair must vanish.
    """

    generators: np.ndarray

    def __post_init__(self):
        g = np.array(self.generators, dtype=bool)
        if g.ndim != 2 or g.shape[1] != 2 * g.shape[0]:
            raise InvalidTableauError("tableau must be n x 2n")
        object.__setattr__(self, "generators", g)
        if gf2_rank(g) != self.n_qubits:
            raise InvalidTableauError("generators are dependent over GF(2)")
        x, z = self.x_part, self.z_part
        comm = (x.astype(np.uint8) @ z.T.astype(np.uint8)
                + z.astype(np.uint8) @ x.T.astype(np.uint8)) % 2
        if comm.any():
            raise InvalidTableauError("generators do not commute pairwise")

    @property
    def n_qubits(self) -> int:
        return self.generators.shape[0]

    @property
    def x_part(self) -> np.ndarray:
        return self.generators[:, : self.n_qubits]

    @property
    def z_part(self) -> np.ndarray:
        return self.generators[:, self.n_qubits:]


def graph_state_entropy(gs: GraphState, region) -> int:
    """Entanglement entropy of a graph-state region: GF(2) rank of the
    cut adjacency block, exactly (bounded above by the cut edge count)."""
    region = as_region(region)
    idx = region.indices()
    if idx.size and idx[-1] >= gs.n_qubits:
        raise ParameterError("region exceeds the qubit count")
    mask = np.zeros(gs.n_qubits, dtype=bool)
    mask[idx] = True
    adj = gs.adjacency()
    return int(gf2_rank(adj[np.ix_(mask, ~mask)]))


def graph_state_tableau(gs: GraphState) -> StabilizerTableau:
    """Canonical generators K_v = X_v prod_{u ~ v} Z_u."""
    n = gs.n_qubits
    return StabilizerTableau(np.concatenate([np.eye(n, dtype=bool), gs.adjacency()], axis=1))


def tableau_entropy(tab: StabilizerTableau, region) -> int:
    """S(rho_I) = |I| - dim of the stabilizer subgroup supported inside I.

    The subgroup dimension is the GF(2) kernel dimension of the generator
    matrix restricted to the complement's X and Z columns.
    """
    region = as_region(region)
    idx = region.indices()
    n = tab.n_qubits
    if idx.size and idx[-1] >= n:
        raise ParameterError("region exceeds the qubit count")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    cols = np.concatenate([~mask, ~mask])
    inside_dim = n - gf2_rank(tab.generators[:, cols])
    return int(len(region) - inside_dim)


# ---------------------------------------------------------------------------
# toric code
# ---------------------------------------------------------------------------


def toric_edge_index(n: int, kind: str, row: int, col: int) -> int:
    """Flat index of a torus edge: kind 'r' joins (row,col)-(row,col+1),
    kind 'd' joins (row,col)-(row+1,col); 2*n*n qubits total."""
    row %= n
    col %= n
    if kind == "r":
        return row * n + col
    if kind == "d":
        return n * n + row * n + col
    raise ParameterError("edge kind must be 'r' or 'd'")


def toric_code(n: int) -> StabilizerTableau:
    """Ground-state tableau of the toric code on an n x n torus (2n^2 qubits).

    Star operators act with Z on the four edges at a vertex, plaquette
    operators with X on the four edges of a face; one of each is dependent,
    leaving 2n^2 - 2 generators. The four-fold degenerate ground space is
    resolved by fixing the two non-contractible Z loops (all down-edges of
    row 0 and all right-edges of column 0) to +1.
    """
    if n < 2:
        raise ParameterError("torus side must be >= 2")
    nq = 2 * n * n
    rows = []
    for r in range(n):
        for c in range(n):
            if (r, c) != (n - 1, n - 1):  # drop one dependent star
                z = np.zeros(nq, dtype=bool)
                for e in (toric_edge_index(n, "r", r, c), toric_edge_index(n, "r", r, c - 1),
                          toric_edge_index(n, "d", r, c), toric_edge_index(n, "d", r - 1, c)):
                    z[e] ^= True
                rows.append(np.concatenate([np.zeros(nq, dtype=bool), z]))
    for r in range(n):
        for c in range(n):
            if (r, c) != (n - 1, n - 1):  # drop one dependent plaquette
                x = np.zeros(nq, dtype=bool)
                for e in (toric_edge_index(n, "r", r, c), toric_edge_index(n, "r", r + 1, c),
                          toric_edge_index(n, "d", r, c), toric_edge_index(n, "d", r, c + 1)):
                    x[e] ^= True
                rows.append(np.concatenate([x, np.zeros(nq, dtype=bool)]))
    for loop in (closed_z_loop(n, "horizontal"), closed_z_loop(n, "vertical")):
        z = np.zeros(nq, dtype=bool)
        z[loop] = True
        rows.append(np.concatenate([np.zeros(nq, dtype=bool), z]))
    return StabilizerTableau(np.array(rows))


def closed_z_loop(n: int, orientation: str, offset: int = 0) -> list[int]:
    """Edge set of a non-contractible Z loop on the n x n torus.

    'horizontal' crosses every column once (all down-edges of a row),
    'vertical' crosses every row once (all right-edges of a column).
    """
    if orientation == "horizontal":
        return [toric_edge_index(n, "d", offset, c) for c in range(n)]
    if orientation == "vertical":
        return [toric_edge_index(n, "r", r, offset) for r in range(n)]
    raise ParameterError("orientation must be 'horizontal' or 'vertical'")


def commutes_with_all(tab: StabilizerTableau, x_support=(), z_support=()) -> bool:
    """Does the Pauli with the given X/Z supports commute with every generator?"""
    n = tab.n_qubits
    x = np.zeros(n, dtype=bool)
    z = np.zeros(n, dtype=bool)
    x[list(x_support)] = True
    z[list(z_support)] = True
    sym = (tab.x_part.astype(np.uint8) @ z.astype(np.uint8)
           + tab.z_part.astype(np.uint8) @ x.astype(np.uint8)) % 2
    return not sym.any()


# ---------------------------------------------------------------------------
# topological entanglement entropy
# ---------------------------------------------------------------------------


def topological_entropy(tab: StabilizerTableau, region_a, region_b, region_c) -> int:
    """S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC, exactly (integer bits).

    The three regions must be pairwise disjoint; for a disk partition of a
    topologically ordered state this equals -gamma.
    """
    a = set(as_region(region_a).members)
    b = set(as_region(region_b).members)
    c = set(as_region(region_c).members)
    if a & b or b & c or a & c:
        raise InvalidPartitionError("regions A, B, C must be pairwise disjoint")
    s = lambda members: tableau_entropy(tab, sorted(members))
    return int(s(a) + s(b) + s(c) - s(a | b) - s(b | c) - s(a | c) + s(a | b | c))


#: shipped Kitaev-Preskill partitions of the 3x3 toric code (see fixtures/).
KP_FIXTURES = ("kp_toric3_main", "kp_toric3_deformed1", "kp_toric3_deformed2")


def kitaev_preskill_fixture(name: str = "kp_toric3_main") -> dict[str, list[int]]:
    """Load a shipped disk partition {A, B, C} as lists of edge qubits."""
    if name not in KP_FIXTURES:
        raise ParameterError(f"unknown fixture {name!r}; available: {KP_FIXTURES}")
    text = resources.files("arealab").joinpath(f"fixtures/{name}.txt").read_text()
    regions: dict[str, list[int]] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        label, *sites = line.split()
        regions[label] = [int(s) for s in sites]
    if set(regions) != {"A", "B", "C"}:
        raise ParameterError(f"fixture {name!r} must define regions A, B and C")
    return regions
