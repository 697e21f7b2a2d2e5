import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arealab import numerics
from arealab.errors import FitError, NotPositiveDefiniteError, ParameterError


def test_eig_sym_identity():
    vals, vecs = numerics.eig_sym(np.eye(5))
    assert np.allclose(vals, 1.0)


def test_eig_sym_diagonal():
    vals, vecs = numerics.eig_sym(np.diag([9.0, 4.0]))
    assert np.allclose(vals, [4.0, 9.0])
    assert np.allclose(np.abs(vecs), [[0, 1], [1, 0]])


def test_eig_sym_reconstruction(rng):
    m = rng.standard_normal((50, 50))
    m = m + m.T
    vals, vecs = numerics.eig_sym(m)
    assert np.abs(m @ vecs - vecs * vals).max() <= 1e-10 * np.abs(m).max()
    assert np.abs(vecs.T @ vecs - np.eye(50)).max() <= 1e-10
    assert np.all(np.diff(vals) >= 0)


def test_eig_sym_rejects_asymmetric():
    with pytest.raises(ParameterError):
        numerics.eig_sym(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_mat_power_sqrt():
    assert np.allclose(numerics.mat_power(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]))


def test_mat_power_inverse_sqrt_identity():
    assert np.allclose(numerics.mat_power(np.eye(4), -0.5), np.eye(4))


def test_mat_power_squaring_oracle():
    # chain coupling a=5, b=1: the square of the square root returns X
    n = 12
    x = 5.0 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
    x[0, -1] = x[-1, 0] = 1.0
    root = numerics.mat_power(x, 0.5)
    assert np.abs(root @ root - x).max() <= 1e-10


def test_mat_power_rejects_negative():
    with pytest.raises(NotPositiveDefiniteError):
        numerics.mat_power(np.diag([1.0, -1.0]), 0.5)


def test_mat_power_integer_power_allows_negative_spectrum():
    m = np.diag([1.0, -2.0])
    assert np.allclose(numerics.mat_power(m, 2), np.diag([1.0, 4.0]))


def test_mat_power_additivity(rng):
    m = rng.standard_normal((20, 20))
    m = m @ m.T + np.eye(20)  # well-conditioned SPD
    left = numerics.mat_power(m, 0.3) @ numerics.mat_power(m, 0.7)
    assert np.abs(left - m).max() <= 1e-9 * np.abs(m).max()


def test_singular_values_antisymmetric():
    assert np.allclose(numerics.singular_values(np.array([[0.0, 1.0], [-1.0, 0.0]])), [1, 1])


def test_singular_values_zero():
    assert np.allclose(numerics.singular_values(np.zeros((2, 2))), 0.0)


def test_singular_values_vs_gram_eigenvalues(rng):
    m = rng.standard_normal((20, 20))
    s = numerics.singular_values(m)
    gram = np.sort(np.sqrt(np.maximum(np.linalg.eigvalsh(m.T @ m), 0)))[::-1]
    assert np.abs(s - gram).max() <= 1e-10 * s[0]


def test_log_det_diagonal():
    sign, logabs = numerics.log_det(np.diag([2.0, 2.0, 2.0]))
    assert sign == 1.0
    assert abs(logabs - 3 * math.log(2)) < 1e-14


def test_log_det_singular_sentinel():
    m = np.outer([1.0, 2.0], [3.0, 4.0])  # rank 1
    sign, logabs = numerics.log_det(m)
    assert sign == 0.0
    assert logabs == -math.inf


def test_log_det_hilbert_vs_rational():
    n = 8
    h = np.array([[1.0 / (i + j + 1) for j in range(n)] for i in range(n)])
    # exact determinant with rational Gaussian elimination
    a = [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    sign, logabs = numerics.log_det(h)
    exact = math.log(abs(float(det.numerator) / float(det.denominator)))
    assert sign == (1.0 if det > 0 else -1.0)
    assert abs(logabs - exact) <= 1e-8 * abs(exact)


def test_gf2_rank_identity_and_ones():
    assert numerics.gf2_rank(np.eye(7, dtype=bool)) == 7
    assert numerics.gf2_rank(np.ones((2, 2), dtype=bool)) == 1


def test_gf2_rank_vs_independent_elimination(rng):
    m = rng.integers(0, 2, size=(30, 30)).astype(bool)
    # independent oracle: eliminate over reversed column order
    work = m[:, ::-1].copy()
    rank = 0
    for c in range(30):
        rows = np.nonzero(work[rank:, c])[0]
        if rows.size == 0:
            continue
        p = rank + rows[0]
        work[[rank, p]] = work[[p, rank]]
        for r in range(30):
            if r != rank and work[r, c]:
                work[r] ^= work[rank]
        rank += 1
    assert numerics.gf2_rank(m) == rank


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_gf2_rank_permutation_invariant(seed):
    r = np.random.default_rng(seed)
    m = r.integers(0, 2, size=(12, 9)).astype(bool)
    rank = numerics.gf2_rank(m)
    assert numerics.gf2_rank(m[r.permutation(12)]) == rank
    assert numerics.gf2_rank(m[:, r.permutation(9)]) == rank


def test_fit_exact_line():
    samples = [(n, math.log2(n) / 3 + 0.7) for n in (16, 24, 32, 48, 64, 96, 128)]
    fit = numerics.fit_log_scaling(samples)
    assert abs(fit.slope - 1 / 3) < 1e-12
    assert abs(fit.intercept - 0.7) < 1e-12
    assert fit.residual < 1e-12
    assert abs(fit.c_eff - 1.0) < 1e-11


def test_fit_constant_samples():
    fit = numerics.fit_log_scaling([(n, 2.0) for n in (16, 32, 64)])
    assert abs(fit.slope) < 1e-14


def test_fit_window_filters_and_errors():
    samples = [(8, 1.0), (16, 2.0), (32, 3.0)]
    with pytest.raises(FitError):
        numerics.fit_log_scaling(samples, window=(16, 40))


def test_fit_xx_slope(xx_chain_state):
    from arealab import fermionic
    fit, _ = fermionic.critical_slope_fit(xx_chain_state)
    assert abs(fit.slope - 1 / 3) <= 0.02
