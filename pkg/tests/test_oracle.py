import math

import numpy as np
import pytest

from arealab import fermionic, oracle
from arealab.errors import ParameterError, SizeError


def test_single_z_qubit():
    psi, energy = oracle.ground_state_dense(oracle.single_site_z())
    assert energy == pytest.approx(-1.0)
    assert abs(psi[1]) == pytest.approx(1.0)


def test_heisenberg_singlet():
    psi, energy = oracle.ground_state_dense(oracle.heisenberg_pair())
    assert energy == pytest.approx(-3.0, abs=1e-12)
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert abs(np.vdot(singlet, psi)) == pytest.approx(1.0, abs=1e-10)


def test_ground_state_residual():
    system = oracle.xy_spin_chain(8, gamma=0.6, lam=0.9)
    psi, energy = oracle.ground_state_dense(system)
    h = system.dense_hamiltonian()
    residual = np.linalg.norm(h @ psi - energy * psi)
    assert residual <= 1e-10 * np.linalg.norm(h, 2)


def test_xx_energy_matches_free_fermions(xx12_pair):
    _, _, energy = xx12_pair
    params = fermionic.XYParams(gamma=0.0, lam=0.0, n_sites=12, periodic=False)
    assert energy == pytest.approx(fermionic.ground_energy(fermionic.build_xy(params)),
                                   abs=1e-10)


def test_lazy_matvec_matches_dense():
    system = oracle.xy_spin_chain(8, gamma=1.0, lam=1.5)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    assert np.abs(system.apply(v) - system.dense_hamiltonian() @ v).max() < 1e-12


def test_size_caps():
    with pytest.raises(SizeError):
        oracle.DenseSpinSystem(15, ())
    system = oracle.xy_spin_chain(13, gamma=1.0, lam=2.0)
    with pytest.raises(SizeError):
        system.dense_hamiltonian()


def test_lanczos_path_above_dense_cap():
    system = oracle.xy_spin_chain(13, gamma=1.0, lam=2.0)
    psi, energy = oracle.ground_state_dense(system)
    params = fermionic.XYParams(gamma=1.0, lam=2.0, n_sites=13, periodic=False)
    assert energy == pytest.approx(fermionic.ground_energy(fermionic.build_xy(params)),
                                   abs=1e-8)


def test_reduced_entropy_product_and_singlet():
    psi = np.zeros(4)
    psi[0] = 1.0
    assert oracle.reduced_entropy(psi, [0], 2) == pytest.approx(0.0, abs=1e-12)
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert oracle.reduced_entropy(singlet, [0], 2) == pytest.approx(1.0, abs=1e-12)


def test_reduced_entropy_xx_matches_gaussian(xx12_pair):
    gaussian, psi, _ = xx12_pair
    for start in range(0, 7, 2):
        for size in (2, 4, 6):
            block = list(range(start, start + size))
            s_ed = oracle.reduced_entropy(psi, block, 12)
            s_g = fermionic.block_entropy(gaussian, block)
            assert abs(s_ed - s_g) < 1e-10


def test_reduced_entropy_renyi_orders(xx12_pair):
    gaussian, psi, _ = xx12_pair
    block = list(range(6))
    for alpha in (2.0, 4.0, math.inf):
        s_ed = oracle.reduced_entropy(psi, block, 12, alpha)
        s_g = fermionic.block_entropy(gaussian, block, alpha)
        assert abs(s_ed - s_g) < 1e-9
    # alpha < 1 is limited by the SVD floor on tiny Schmidt weights
    assert abs(oracle.reduced_entropy(psi, block, 12, 0.5)
               - fermionic.block_entropy(gaussian, block, 0.5)) < 1e-6


def test_propagate_dense_unitary_and_phases():
    system = oracle.xy_spin_chain(6, gamma=1.0, lam=1.0)
    rng = np.random.default_rng(1)
    psi = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    psi /= np.linalg.norm(psi)
    assert np.abs(oracle.propagate_dense(system, psi, 0.0) - psi).max() < 1e-12
    out = oracle.propagate_dense(system, psi, 1.7)
    assert abs(np.linalg.norm(out) - 1.0) <= 1e-10
    # diagonal Hamiltonian: probabilities invariant
    zz = np.kron(oracle.PAULI["z"], oracle.PAULI["z"]).real
    diag_sys = oracle.DenseSpinSystem(2, (((0, 1), zz),))
    psi4 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi4 /= np.linalg.norm(psi4)
    out4 = oracle.propagate_dense(diag_sys, psi4, 0.8)
    assert np.abs(np.abs(out4) ** 2 - np.abs(psi4) ** 2).max() < 1e-12


def test_entropy_complement_symmetry():
    system = oracle.xy_spin_chain(10, gamma=1.0, lam=1.0)
    psi, _ = oracle.ground_state_dense(system)
    for region in ([0, 1, 2], [2, 5, 7, 8]):
        comp = [q for q in range(10) if q not in region]
        assert oracle.reduced_entropy(psi, region, 10) == pytest.approx(
            oracle.reduced_entropy(psi, comp, 10), abs=1e-10)


def test_thermal_mi_small_beta_vanishes():
    system = oracle.xy_spin_chain(6, gamma=1.0, lam=1.0)
    r = oracle.thermal_mutual_information(system, 1e-6, range(3))
    assert r["mutual_information"] < 1e-9


def test_thermal_mi_bound_holds():
    system = oracle.xy_spin_chain(10, gamma=1.0, lam=1.0)
    region = range(5)
    for beta in (0.25, 1.0, 4.0):
        r = oracle.thermal_mutual_information(system, beta, region)
        assert r["mutual_information"] >= -1e-12
        assert r["mutual_information"] <= r["bound_exact"] + 1e-10
        assert r["bound_boundary_norm"] >= 0.0


def test_thermal_mi_shrinking_region_monotone():
    system = oracle.xy_spin_chain(8, gamma=1.0, lam=1.0)
    values = [oracle.thermal_mutual_information(system, 1.0, range(k))["mutual_information"]
              for k in (4, 3, 2)]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_thermal_mi_rejects_bad_beta():
    system = oracle.xy_spin_chain(4, gamma=1.0, lam=1.0)
    with pytest.raises(ParameterError):
        oracle.thermal_mutual_information(system, -1.0, [0, 1])


def test_classical_ring_zero_temperature_limits():
    spec = oracle.ClassicalIsingRing(16)
    r0 = oracle.classical_spin_mutual_information(spec, 0.0, range(6))
    assert r0["mutual_information"] == pytest.approx(0.0, abs=1e-12)
    r = oracle.classical_spin_mutual_information(spec, 1.0, range(6))
    assert 0.0 <= r["mutual_information"] <= r["bound"] + 1e-12
    assert r["bound"] == 2.0
    strong = oracle.classical_spin_mutual_information(spec, 5.0, range(6))
    assert strong["mutual_information"] == pytest.approx(1.0, abs=1e-2)
    assert strong["mutual_information"] <= strong["bound"]


def test_classical_ring_size_cap():
    with pytest.raises(SizeError):
        oracle.ClassicalIsingRing(21)


def test_lieb_robinson_equal_time_zero():
    system = oracle.xy_spin_chain(6, gamma=1.0, lam=1.0)
    rows = oracle.lieb_robinson_profile(system, 0, [3], [0.0])
    assert rows[0]["commutator_norm"] == pytest.approx(0.0, abs=1e-12)


def test_lieb_robinson_cone_suppression():
    system = oracle.xy_spin_chain(10, gamma=1.0, lam=1.0)
    rows = oracle.lieb_robinson_profile(system, 0, [2, 3, 4], [0.2])
    norms = {r["distance"]: r["commutator_norm"] for r in rows}
    assert norms[4.0] < 1e-4
    # at least exponential decay: log-norm slope negative
    xs = sorted(norms)
    slope = np.polyfit(xs, [math.log(norms[x]) for x in xs], 1)[0]
    assert slope < 0


def test_graph_state_vector_unit_norm():
    adj = np.zeros((4, 4), dtype=bool)
    adj[0, 1] = adj[1, 0] = adj[2, 3] = adj[3, 2] = True
    psi = oracle.graph_state_vector(adj)
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
