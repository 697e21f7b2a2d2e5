import numpy as np
import pytest

from arealab import fermionic, oracle


@pytest.fixture(scope="session")
def xx_chain_state():
    """Critical XX chain correlations on the standard scaling host."""
    return fermionic.xy_circulant_state(
        fermionic.XYParams(gamma=0.0, lam=0.0, n_sites=2048))


@pytest.fixture(scope="session")
def xx12_pair():
    """Open XX chain with 12 sites: (gaussian state, ED state vector)."""
    params = fermionic.XYParams(gamma=0.0, lam=0.0, n_sites=12, periodic=False)
    gaussian = fermionic.ground_state(fermionic.build_xy(params))
    system = oracle.xy_spin_chain(12, gamma=0.0, lam=0.0, periodic=False)
    psi, energy = oracle.ground_state_dense(system)
    return gaussian, psi, energy


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
