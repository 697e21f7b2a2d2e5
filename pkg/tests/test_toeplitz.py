import math

import numpy as np
import pytest

from arealab import toeplitz
from arealab.errors import LemmaScopeError, ParameterError


def test_constant_symbol_matrix():
    s = toeplitz.Symbol(smooth_part=lambda p: 2.0 * np.ones_like(p))
    assert np.abs(toeplitz.toeplitz_matrix(s, 5) - 2.0 * np.eye(5)).max() < 1e-13


def test_single_fourier_mode_shift_matrix():
    # g = e^{i phi}: t_l = delta_{l,1}, i.e. ones on the first subdiagonal
    m = toeplitz.toeplitz_matrix(lambda p: np.exp(1j * p), 4)
    assert np.abs(m - np.eye(4, k=-1)).max() < 1e-12


def test_root_factor_exact_coefficients():
    # u_1 = 2 - 2 cos(phi) gives the exact tridiagonal (2, -1)
    s = toeplitz.Symbol(fh_factors=[(0.0, 1.0, 0.0)])
    expected = 2 * np.eye(5) - np.eye(5, k=1) - np.eye(5, k=-1)
    assert np.abs(toeplitz.toeplitz_matrix(s, 5) - expected).max() < 1e-12
    # u_{1/2} = 2|sin(phi/2)|: t_l = -(4/pi)/(4 l^2 - 1)
    s_half = toeplitz.Symbol(fh_factors=[(0.0, 0.5, 0.0)])
    m = toeplitz.toeplitz_matrix(s_half, 6)
    for l in range(6):
        assert m[l, 0] == pytest.approx(-(4 / math.pi) / (4 * l * l - 1), abs=1e-12)


def test_symbol_evaluation_and_jump_branch():
    beta = 0.5
    s = toeplitz.Symbol(fh_factors=[(0.0, 0.0, beta)])
    # principal branch: t_beta(phi) = exp(-i beta (pi - phi)) on [0, 2pi)
    phi = np.array([0.1, 3.0, 6.0])
    expected = np.exp(-1j * beta * (np.pi - phi))
    assert np.abs(s(phi) - expected).max() < 1e-14


def test_xx_sign_symbol_matches_fermionic_quadrature():
    # the same matrix from two independent quadratures
    from arealab import fermionic
    corr = fermionic.infinite_chain_correlations(
        lambda p: np.sign(-np.cos(p)) + 0j, l_max=64,
        jumps=[math.pi / 2, 3 * math.pi / 2])
    v_n = corr.block_matrix(64)
    t_n = toeplitz.toeplitz_matrix(lambda p: np.sign(-np.cos(p)) + 0j * p, 64, tol=1e-8)
    assert np.abs(np.asarray(t_n, dtype=complex).real - v_n).max() <= 1e-8


def test_principal_submatrix_consistency():
    s = toeplitz.Symbol(smooth_part=lambda p: 3.0 + np.cos(p))
    m64 = toeplitz.toeplitz_matrix(s, 64)
    m16 = toeplitz.toeplitz_matrix(s, 16)
    assert np.abs(m64[:16, :16] - m16).max() < 1e-14


def test_geometric_mean_closed_form():
    s = toeplitz.Symbol(smooth_part=lambda p: 3.0 + np.cos(p))
    _, pred = toeplitz.fh_predict(s, 4)
    assert math.exp(pred.log_g.real) == pytest.approx((3 + math.sqrt(8)) / 2, abs=1e-10)


def test_constant_prediction_exact():
    s = toeplitz.Symbol(smooth_part=lambda p: 2.0 * np.ones_like(p))
    log_mag, pred = toeplitz.fh_predict(s, 10)
    assert log_mag == pytest.approx(10 * math.log(2.0), abs=1e-12)
    assert pred.exponent == 0


def test_single_jump_prediction_exponent():
    s = toeplitz.Symbol(fh_factors=[(math.pi, 0.0, 0.5)])
    log_mag, pred = toeplitz.fh_predict(s, 16)
    assert pred.exponent == pytest.approx(-0.25)
    assert log_mag == pytest.approx(-0.25 * math.log(16), abs=1e-12)
    assert "5/2" in pred.validity_note


def test_lemma_scope_rejected():
    s = toeplitz.Symbol(fh_factors=[(1.0, 0.0, 0.7), (2.0, 0.0, -0.7)])
    with pytest.raises(LemmaScopeError):
        toeplitz.fh_predict(s, 8)
    winding = toeplitz.Symbol(smooth_part=lambda p: np.exp(1j * p))
    assert not winding.in_normal_form
    with pytest.raises(LemmaScopeError):
        toeplitz.fh_predict(winding, 8)


def test_alpha_range_enforced():
    with pytest.raises(ParameterError):
        toeplitz.Symbol(fh_factors=[(0.0, -0.6, 0.0)])


def test_convergence_constant_symbol_exact():
    s = toeplitz.Symbol(smooth_part=lambda p: 2.0 * np.ones_like(p))
    res = toeplitz.convergence_check(s, [4, 8, 16])
    assert res["verdict"] == "PASS"
    assert all(abs(r["ratio"] - 1.0) < 1e-12 for r in res["rows"])


def test_convergence_single_jump():
    s = toeplitz.Symbol(fh_factors=[(math.pi, 0.0, 0.5)])
    res = toeplitz.convergence_check(s, [32, 64, 128, 256, 512])
    assert res["verdict"] == "PASS"
    assert res["deltas"][-1] < 0.05
    assert all(d2 <= d1 + 1e-12 for d1, d2 in zip(res["deltas"], res["deltas"][1:]))


def test_convergence_two_jump():
    s = toeplitz.Symbol(fh_factors=[(math.pi / 2, 0.0, 0.45),
                                    (3 * math.pi / 2, 0.0, -0.45)])
    _, pred = toeplitz.fh_predict(s, 4)
    assert pred.exponent == pytest.approx(-(0.45**2) * 2)
    res = toeplitz.convergence_check(s, [32, 64, 128, 256, 512])
    assert res["verdict"] == "PASS"


def test_scaling_covariance():
    # multiplying the smooth part by c multiplies det(T_n) by c^n
    base = toeplitz.Symbol(smooth_part=lambda p: 3.0 + np.cos(p))
    scaled = toeplitz.Symbol(smooth_part=lambda p: 1.5 * (3.0 + np.cos(p)))
    n = 16
    d1 = np.linalg.slogdet(toeplitz.toeplitz_matrix(base, n))[1]
    d2 = np.linalg.slogdet(toeplitz.toeplitz_matrix(scaled, n))[1]
    assert d2 - d1 == pytest.approx(n * math.log(1.5), abs=1e-9)


def test_szego_growth_smooth_symbol():
    s = toeplitz.Symbol(smooth_part=lambda p: 3.0 + np.cos(p))
    _, pred = toeplitz.fh_predict(s, 4)
    offsets = []
    for n in (8, 16, 32, 64):
        ld = np.linalg.slogdet(toeplitz.toeplitz_matrix(s, n))[1]
        offsets.append(ld - n * pred.log_g.real)
    assert max(offsets) - min(offsets) < 1e-6


def test_grid_validation():
    s = toeplitz.Symbol(smooth_part=lambda p: 2.0 * np.ones_like(p))
    with pytest.raises(ParameterError):
        toeplitz.convergence_check(s, [8, 8])
    with pytest.raises(ParameterError):
        toeplitz.convergence_check(s, [8, 1024])
