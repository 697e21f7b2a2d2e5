"""arealab: a numerical laboratory for entanglement scaling in lattice models.

Subpackages cover quasi-free bosonic and fermionic lattices, Toeplitz
determinant asymptotics, stabilizer/graph states, matrix-product states
(DMRG/TEBD) and a dense exact-diagonalization reference engine, plus an
experiment runner (`arealab` CLI) that emits CSV/JSON scaling reports.
All entropies are reported in bits (log base 2).
"""

from . import bosonic, errors, fermionic, lattice, numerics, oracle, stabilizer, tensor, toeplitz

__all__ = [
    "bosonic",
    "errors",
    "fermionic",
    "lattice",
    "numerics",
    "oracle",
    "stabilizer",
    "tensor",
    "toeplitz",
]

__version__ = "0.1.0"
