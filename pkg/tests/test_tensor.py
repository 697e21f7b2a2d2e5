import math

import numpy as np
import pytest

from arealab import fermionic, oracle, tensor
from arealab.errors import NumericalFailure, ParameterError

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def ghz_mps():
    first = np.zeros((1, 2, 2), dtype=complex)
    first[0, 0, 0] = first[0, 1, 1] = 1.0
    bulk = np.zeros((2, 2, 2), dtype=complex)
    bulk[0, 0, 0] = bulk[1, 1, 1] = 1.0
    last = np.zeros((2, 2, 1), dtype=complex)
    last[0, 0, 0] = last[1, 1, 0] = 1.0
    return tensor.MatrixProductState([first, bulk, bulk, last])


def test_product_mps_expectations():
    mps = tensor.product_mps([[1, 0]] * 5)
    assert tensor.expectation(mps, {2: SZ}) == pytest.approx(1.0)
    assert tensor.cut_entropy(mps.canonicalize(0), 2) == pytest.approx(0.0, abs=1e-12)


def test_ghz_correlations_and_entropy():
    ghz = ghz_mps()
    assert tensor.expectation(ghz, {0: SZ, 3: SZ}) == pytest.approx(1.0)
    assert tensor.expectation(ghz, {1: SZ, 2: SZ}) == pytest.approx(1.0)
    work = ghz.copy()
    work.canonicalize(0)
    work.normalize()
    assert tensor.cut_entropy(work, 2) == pytest.approx(1.0, abs=1e-12)


def test_expectation_matches_dense_contraction(rng):
    mps = tensor.random_mps(10, 2, 4, seed=12)
    psi = mps.to_dense()
    op = oracle._embed(np.kron(SZ, SX), (3, 7), 10)
    dense = np.vdot(psi, op @ psi) / np.vdot(psi, psi)
    assert tensor.expectation(mps, {3: SZ, 7: SX}) == pytest.approx(dense, abs=1e-10)


def test_gauge_invariance(rng):
    mps = tensor.random_mps(8, 2, 4, seed=2)
    reference = tensor.expectation(mps, {2: SZ, 5: SX})
    g = rng.standard_normal((4, 4)) + np.eye(4)
    mps.tensors[3] = np.tensordot(mps.tensors[3], g, axes=(2, 0))
    mps.tensors[4] = np.tensordot(np.linalg.inv(g), mps.tensors[4], axes=(1, 0))
    assert tensor.expectation(mps, {2: SZ, 5: SX}) == pytest.approx(reference, abs=1e-10)


def test_canonicalization_preserves_state():
    mps = tensor.random_mps(9, 2, 5, seed=4)
    other = mps.copy()
    other.canonicalize(4)
    fidelity = abs(tensor.overlap(mps, other)) / (mps.norm() * other.norm())
    assert fidelity == pytest.approx(1.0, abs=1e-10)


def test_norm_after_normalize():
    mps = tensor.random_mps(7, 2, 3, seed=6)
    mps.tensors[0] *= 3.7
    mps.normalize()
    assert mps.norm() == pytest.approx(1.0, abs=1e-10)


def test_correlation_length_product_and_ghz():
    prod = tensor.product_mps([[1, 0]] * 4)
    uniform = prod.tensors[1] if prod.tensors[1].shape[0] == 1 else prod.tensors[0]
    res = tensor.correlation_length(prod, uniform_tensor=prod.tensors[1])
    assert res["xi"] == 0.0 and not res["long_range_order"]
    bulk = ghz_mps().tensors[1]
    res = tensor.correlation_length(ghz_mps(), uniform_tensor=bulk)
    assert res["long_range_order"] and math.isinf(res["xi"])


def test_correlation_length_aklt():
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    a = np.zeros((2, 3, 2), dtype=complex)
    a[:, 0, :] = math.sqrt(2 / 3) * sp
    a[:, 1, :] = -math.sqrt(1 / 3) * np.diag([1.0, -1.0])
    a[:, 2, :] = -math.sqrt(2 / 3) * sp.T
    res = tensor.correlation_length(ghz_mps(), uniform_tensor=a)
    assert res["xi"] == pytest.approx(1 / math.log(3), abs=1e-12)
    assert res["lambda2"].real == pytest.approx(-1 / 3, abs=1e-12)
    # connected correlators decay at the transfer rate: check on a finite chain
    n = 12
    first = a[:1] * 0
    tensors = [a.copy() for _ in range(n)]
    tensors[0] = a[:1, :, :] + 0.0
    # close the boundaries with the dominant left/right transfer eigenvectors
    tensors[0] = a.sum(axis=0, keepdims=True) / 2.0
    tensors[-1] = a.sum(axis=2, keepdims=True) / 2.0
    mps = tensor.MatrixProductState(tensors)
    sz3 = np.diag([1.0, 0.0, -1.0])
    mid = n // 2
    corr = []
    for dist in range(2, 6):
        val = tensor.expectation(mps, {mid - 1: sz3, mid - 1 + dist: sz3}) \
            - tensor.expectation(mps, {mid - 1: sz3}) \
            * tensor.expectation(mps, {mid - 1 + dist: sz3})
        corr.append(abs(complex(val)))
    rates = [corr[i + 1] / corr[i] for i in range(len(corr) - 1)]
    for rate in rates:
        assert rate == pytest.approx(math.exp(-1 / res["xi"]), rel=0.1)


def test_cut_entropy_bounded_by_bond_dimension():
    mps = tensor.random_mps(10, 2, 8, seed=9)
    for bond in range(1, 10):
        assert tensor.cut_entropy(mps.copy(), bond) <= 3.0 + 1e-9


def test_mps_from_dense_roundtrip(rng):
    psi = rng.standard_normal(2**8) + 1j * rng.standard_normal(2**8)
    psi /= np.linalg.norm(psi)
    mps, discarded = tensor.mps_from_dense(psi, 2, 8)
    assert discarded < 1e-12
    assert abs(abs(np.vdot(psi, mps.to_dense())) - 1.0) < 1e-10


def test_checkpoint_roundtrip(tmp_path):
    mps = tensor.random_mps(6, 2, 4, seed=5)
    path = tmp_path / "state.npz"
    tensor.save_mps(mps, path)
    back = tensor.load_mps(path)
    assert back.n_sites == 6
    assert abs(abs(tensor.overlap(mps, back)) - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# DMRG
# ---------------------------------------------------------------------------


def test_mpo_matches_dense_hamiltonian():
    ham = tensor.xy_hamiltonian(6, gamma=0.4, lam=1.1)
    dense = ham.to_mpo().to_dense()
    system = oracle.xy_spin_chain(6, gamma=0.4, lam=1.1)
    assert np.abs(dense - system.dense_hamiltonian()).max() < 1e-12


def test_interaction_strength():
    ham = tensor.transverse_ising_hamiltonian(5, 2.0)
    assert ham.interaction_strength == pytest.approx(0.5)


def test_dmrg_two_sites_exact():
    ham = tensor.transverse_ising_hamiltonian(2, 0.7)
    res = tensor.dmrg_ground_state(ham, max_bond=4)
    exact = np.linalg.eigvalsh(ham.to_mpo().to_dense())[0]
    assert res.energy == pytest.approx(exact, abs=1e-12)


def test_dmrg_matches_ed():
    ham = tensor.transverse_ising_hamiltonian(12, 2.0)
    res = tensor.dmrg_ground_state(ham, max_bond=16)
    assert res.converged
    system = oracle.xy_spin_chain(12, gamma=1.0, lam=2.0)
    psi, e_exact = oracle.ground_state_dense(system)
    assert abs(res.energy - e_exact) / abs(e_exact) <= 1e-8
    for k in (1, 3, 6, 9, 11):
        assert tensor.cut_entropy(res.mps, k) == pytest.approx(
            oracle.reduced_entropy(psi, range(k), 12), abs=1e-6)


def test_dmrg_energy_monotone_and_expectation_consistent():
    ham = tensor.xy_hamiltonian(10, gamma=0.5, lam=0.8)
    res = tensor.dmrg_ground_state(ham, max_bond=12)
    assert all(b <= a + 1e-10 for a, b in zip(res.sweep_energies, res.sweep_energies[1:]))
    assert tensor.mpo_expectation(ham.to_mpo(), res.mps) == pytest.approx(
        res.energy, abs=1e-9)


def test_dmrg_critical_profile_grows_with_bond_dimension():
    ham = tensor.transverse_ising_hamiltonian(64, 1.0)
    low = tensor.dmrg_ground_state(
        ham, config=tensor.DmrgConfig(max_bond=4, energy_tol=1e-7, max_sweeps=8))
    high = tensor.dmrg_ground_state(
        ham, config=tensor.DmrgConfig(max_bond=8, energy_tol=1e-7, max_sweeps=8),
        initial=low.mps)
    s_low = tensor.cut_entropy(low.mps, 32)
    s_high = tensor.cut_entropy(high.mps, 32)
    assert s_high > s_low - 1e-9
    assert high.energy <= low.energy + 1e-10


@pytest.mark.slow
def test_dmrg_critical_profile_slope():
    # open-boundary critical Ising: cut entropy ~ (c/6) log2(chord), c = 1/2
    n = 64
    ham = tensor.transverse_ising_hamiltonian(n, 1.0)
    warm = tensor.dmrg_ground_state(
        ham, config=tensor.DmrgConfig(max_bond=16, energy_tol=1e-8, max_sweeps=10))
    res = tensor.dmrg_ground_state(
        ham, config=tensor.DmrgConfig(max_bond=64, energy_tol=1e-9, max_sweeps=6),
        initial=warm.mps)
    exact = fermionic.ground_energy(fermionic.build_xy(
        fermionic.XYParams(1.0, 1.0, n, periodic=False)))
    assert res.energy == pytest.approx(exact, abs=1e-7)
    samples = []
    for k in range(8, n - 7):
        chord = (2 * n / math.pi) * math.sin(math.pi * k / n)
        samples.append((chord, tensor.cut_entropy(res.mps, k)))
    from arealab.numerics import fit_log_scaling
    window = (min(c for c, _ in samples), max(c for c, _ in samples))
    fit = fit_log_scaling(samples, window)
    assert abs(fit.slope - 1 / 12) <= 0.03
    # cross-formalism: DMRG cut entropies match the exact quadratic values
    gaussian = fermionic.ground_state(fermionic.build_xy(
        fermionic.XYParams(1.0, 1.0, n, periodic=False)))
    for k in (16, 32, 48):
        assert tensor.cut_entropy(res.mps, k) == pytest.approx(
            fermionic.block_entropy(gaussian, range(k)), abs=1e-3)


# ---------------------------------------------------------------------------
# TEBD
# ---------------------------------------------------------------------------


def test_tebd_diagonal_hamiltonian_invariant():
    zz = np.kron(SZ, SZ)
    ham = tensor.LocalHamiltonian1D([zz] * 5)
    start = tensor.product_mps([[1, 0]] * 6)
    res = tensor.tebd_evolve(start, ham, 1.0, 0.05, max_bond=8)
    assert max(max(row) for row in res.entropy_series) < 1e-10
    assert not res.fidelity_warning


def test_tebd_matches_dense_propagation():
    n = 8
    ham = tensor.transverse_ising_hamiltonian(n, 1.0)
    start = tensor.product_mps([[1, 0]] * n)
    res = tensor.tebd_evolve(start, ham, 1.0, 0.0025, max_bond=64,
                             record_entropies=False)
    system = oracle.xy_spin_chain(n, gamma=1.0, lam=1.0)
    psi_t = oracle.propagate_dense(system, start.to_dense(), 1.0)
    overlap = abs(np.vdot(psi_t, res.mps.to_dense()))
    assert overlap >= 1.0 - 1e-9


def test_tebd_trotter_second_order():
    # halving dt reduces the observable error by ~4
    n = 6
    ham = tensor.transverse_ising_hamiltonian(n, 1.2)
    system = oracle.xy_spin_chain(n, gamma=1.0, lam=1.2)
    start = tensor.product_mps([[1, 0]] * n)
    psi_exact = oracle.propagate_dense(system, start.to_dense(), 1.0)
    exact = float(np.vdot(psi_exact, oracle._embed(SZ, (n // 2,), n) @ psi_exact).real)
    errors = []
    for dt in (0.04, 0.02):
        res = tensor.tebd_evolve(start, ham, 1.0, dt, max_bond=64,
                                 record_entropies=False)
        val = float(tensor.expectation(res.mps, {n // 2: SZ}).real)
        errors.append(abs(val - exact))
    ratio = errors[0] / errors[1]
    assert 2.8 <= ratio <= 5.2


def test_tebd_entropy_growth_and_saturation():
    n = 32
    ham = tensor.transverse_ising_hamiltonian(n, 1.0)
    start = tensor.product_mps([[1, 0]] * n)
    res = tensor.tebd_evolve(start, ham, 2.0, 0.02, max_bond=32)
    half = res.half_chain_entropies()
    pts = [(t, s) for t, s in zip(res.times, half) if 0.5 <= t <= 2.0]
    slope = np.polyfit([t for t, _ in pts], [s for _, s in pts], 1)[0]
    assert slope >= 0.1
    profile = res.entropy_series[int(round(1.0 / 0.02)) - 1]
    assert abs(profile[11] - profile[7]) < 0.05  # blocks 12 vs 8 at t = 1


def test_tebd_validates_step():
    ham = tensor.transverse_ising_hamiltonian(4, 1.0)
    start = tensor.product_mps([[1, 0]] * 4)
    with pytest.raises(ParameterError):
        tensor.tebd_evolve(start, ham, 1.0, 0.2, max_bond=8)


# ---------------------------------------------------------------------------
# approximability
# ---------------------------------------------------------------------------


def test_approximability_product_state():
    psi = np.zeros(2**6)
    psi[0] = 1.0
    rows = tensor.approximability_experiment(psi, [1, 2])
    assert rows[0]["trace_distance"] == pytest.approx(0.0, abs=1e-12)


def test_approximability_gapped_ground_state():
    system = oracle.xy_spin_chain(12, gamma=1.0, lam=2.0)
    psi, _ = oracle.ground_state_dense(system)
    rows = tensor.approximability_experiment(psi, [1, 2, 4, 8])
    errors = {r["bond_dim"]: r["trace_distance"] for r in rows}
    assert errors[8] < 1e-6
    assert all(b["trace_distance"] <= a["trace_distance"] + 1e-12
               for a, b in zip(rows, rows[1:]))


def test_quenched_state_needs_larger_bond_dimension():
    system = oracle.xy_spin_chain(12, gamma=1.0, lam=1.0)
    gapped = oracle.xy_spin_chain(12, gamma=1.0, lam=2.0)
    psi_ground, _ = oracle.ground_state_dense(gapped)
    start = np.zeros(2**12)
    start[0] = 1.0
    psi_quench = oracle.propagate_dense(system, start.astype(complex), 3.0)
    d_ground = tensor.required_bond_dimension(psi_ground, 1e-3)
    d_quench = tensor.required_bond_dimension(psi_quench, 1e-3)
    assert d_quench > d_ground
