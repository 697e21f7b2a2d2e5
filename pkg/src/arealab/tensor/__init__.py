"""Matrix-product-state toolkit: canonical forms, DMRG, TEBD, approximability."""

from .approx import approximability_experiment, required_bond_dimension
from .dmrg import DmrgConfig, DmrgResult, dmrg_ground_state, mpo_expectation
from .ham import (
    LocalHamiltonian1D,
    MatrixProductOperator,
    transverse_ising_hamiltonian,
    xy_hamiltonian,
)
from .mps import (
    MatrixProductState,
    TransferOperator,
    correlation_length,
    cut_entropy,
    expectation,
    load_mps,
    mps_from_dense,
    overlap,
    product_mps,
    random_mps,
    save_mps,
    transfer_operator,
)
from .tebd import TebdResult, tebd_evolve

__all__ = [
    "approximability_experiment",
    "required_bond_dimension",
    "DmrgConfig",
    "DmrgResult",
    "dmrg_ground_state",
    "mpo_expectation",
    "LocalHamiltonian1D",
    "MatrixProductOperator",
    "transverse_ising_hamiltonian",
    "xy_hamiltonian",
    "MatrixProductState",
    "TransferOperator",
    "correlation_length",
    "cut_entropy",
    "expectation",
    "load_mps",
    "mps_from_dense",
    "overlap",
    "product_mps",
    "random_mps",
    "save_mps",
    "transfer_operator",
    "TebdResult",
    "tebd_evolve",
]
