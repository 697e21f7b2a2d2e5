"""Lattice graphs, distinguished regions, boundaries and distances.

Vertices are 0-based flat integers; cubic lattices use row-major encoding,
i.e. the site with coordinates (c_0, .., c_{D-1}) on sides (L_0, .., L_{D-1})
has index ((c_0 * L_1) + c_1) * L_2 + ... . All graphs are simple and
immutable after construction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import ParameterError, RegionError

__all__ = [
    "LatticeGraph",
    "Region",
    "as_region",
    "boundary",
    "surface_area",
    "graph_distance",
    "build_chain",
    "build_cubic",
    "adjacency_dense",
]


@dataclass(frozen=True)
class LatticeGraph:
    """A simple graph with optional cubic-lattice metadata.

    ``edges`` is an (m, 2) integer array with each undirected edge stored
    once; ``dimension``/``sides``/``periodic`` are set by the cubic builders
    and left at their defaults for hand-made adjacency input.
    """

    vertex_count: int
    edges: np.ndarray
    dimension: int = 0
    sides: tuple[int, ...] = ()
    periodic: bool = False
    _csr: sparse.csr_matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= self.vertex_count):
            raise ParameterError("edge endpoint outside vertex range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ParameterError("self-loops are not allowed on a simple graph")
        # canonical order, duplicates removed
        edges = np.unique(np.sort(edges, axis=1), axis=0) if edges.size else edges
        object.__setattr__(self, "edges", edges)
        n = self.vertex_count
        if edges.size:
            rows = np.concatenate([edges[:, 0], edges[:, 1]])
            cols = np.concatenate([edges[:, 1], edges[:, 0]])
            data = np.ones(rows.shape[0], dtype=np.int8)
            csr = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        else:
            csr = sparse.csr_matrix((n, n), dtype=np.int8)
        object.__setattr__(self, "_csr", csr)

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    def neighbors(self, i: int) -> np.ndarray:
        csr = self._csr
        return csr.indices[csr.indptr[i]:csr.indptr[i + 1]]

    def degree(self, i: int) -> int:
        return self.neighbors(i).shape[0]

    def coordinates(self, i: int) -> tuple[int, ...]:
        """Row-major coordinates of a vertex on a cubic lattice."""
        if not self.sides:
            raise ParameterError("graph carries no cubic metadata")
        coords = []
        for side in reversed(self.sides):
            coords.append(i % side)
            i //= side
        return tuple(reversed(coords))

    def index(self, coords) -> int:
        if not self.sides:
            raise ParameterError("graph carries no cubic metadata")
        idx = 0
        for c, side in zip(coords, self.sides):
            idx = idx * side + (c % side if self.periodic else c)
        return idx


@dataclass(frozen=True)
class Region:
    """A distinguished vertex set, stored as a strictly sorted tuple."""

    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(int(m) for m in self.members)
        if any(b <= a for a, b in zip(members, members[1:])):
            members = tuple(sorted(set(members)))
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def indices(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def complement(self, graph: LatticeGraph) -> "Region":
        mask = np.ones(graph.vertex_count, dtype=bool)
        mask[self.indices()] = False
        return Region(tuple(np.nonzero(mask)[0]))


def as_region(region) -> Region:
    if isinstance(region, Region):
        return region
    return Region(tuple(region))


def _check_region(graph: LatticeGraph, region: Region) -> Region:
    region = as_region(region)
    if region.members and (region.members[0] < 0 or region.members[-1] >= graph.vertex_count):
        raise RegionError(
            f"region index out of range for lattice of {graph.vertex_count} vertices"
        )
    return region


def boundary(graph: LatticeGraph, region) -> Region:
    """Interior boundary: members of the region with a neighbor outside it.

    The surface area s(I) is the cardinality of the returned region.
    """
    region = _check_region(graph, region)
    inside = np.zeros(graph.vertex_count, dtype=bool)
    inside[region.indices()] = True
    bnd = [i for i in region.members if np.any(~inside[graph.neighbors(i)])]
    return Region(tuple(bnd))


def surface_area(graph: LatticeGraph, region) -> int:
    return len(boundary(graph, region))


def graph_distance(graph: LatticeGraph, i: int, j: int) -> float:
    """Shortest-path distance by breadth-first search.

    Returns ``math.inf`` for a disconnected pair.
    """
    n = graph.vertex_count
    if not (0 <= i < n and 0 <= j < n):
        raise RegionError("vertex out of range")
    if i == j:
        return 0
    seen = np.full(n, -1, dtype=np.int64)
    seen[i] = 0
    queue = deque([i])
    while queue:
        v = queue.popleft()
        d = seen[v] + 1
        for w in graph.neighbors(v):
            if seen[w] < 0:
                if w == j:
                    return int(d)
                seen[w] = d
                queue.append(w)
    return math.inf


def build_chain(n: int, periodic: bool = True) -> LatticeGraph:
    """Chain of ``n`` sites, periodic (ring) or open."""
    if n < 2:
        raise ParameterError("chain needs at least 2 sites")
    i = np.arange(n - 1, dtype=np.int64)
    edges = np.stack([i, i + 1], axis=1)
    if periodic:
        edges = np.vstack([edges, [[n - 1, 0]]])
    return LatticeGraph(n, edges, dimension=1, sides=(n,), periodic=periodic)


def build_cubic(side: int, dimension: int, periodic: bool = True) -> LatticeGraph:
    """Cubic lattice of ``side**dimension`` sites, row-major indexing."""
    if side < 2:
        raise ParameterError("cubic lattice needs side >= 2")
    if dimension not in (1, 2, 3):
        raise ParameterError("dimension must be 1, 2 or 3")
    sides = (side,) * dimension
    n = side**dimension
    strides = [int(np.prod(sides[d + 1:])) for d in range(dimension)]
    edges = []
    for v in range(n):
        rem, coords = v, []
        for d in range(dimension):
            coords.append(rem // strides[d])
            rem %= strides[d]
        for d in range(dimension):
            c = coords[d]
            if c + 1 < side:
                edges.append((v, v + strides[d]))
            elif periodic and side > 2:
                edges.append((v, v - (side - 1) * strides[d]))
            elif periodic and side == 2:
                pass  # wrap edge coincides with the open edge on side 2
    return LatticeGraph(n, np.asarray(edges, dtype=np.int64),
                        dimension=dimension, sides=sides, periodic=periodic)


def adjacency_dense(graph: LatticeGraph) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix (float64), for coupling builders."""
    return np.asarray(graph._csr.todense(), dtype=float)
