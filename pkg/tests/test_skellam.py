import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles.skellam_mp import pmf_mp
from skellam_shrink import skellam as sk
from skellam_shrink.errors import DegenerateParameterError, ParameterDomainError


def test_params_validation():
    p = sk.SkellamParams(2.0, 6.0)
    assert (p.x_plus, p.x_minus) == (4.0, 2.0)
    assert sk.SkellamParams.from_rates(4.0, 2.0) == p
    with pytest.raises(ParameterDomainError):
        sk.SkellamParams(7.0, 6.0)
    with pytest.raises(ParameterDomainError):
        sk.SkellamParams(0.0, -1.0)


def test_count_pair():
    c = sk.CountPair(np.array([3, 0]), np.array([1, 2]))
    np.testing.assert_array_equal(c.y, [2, -2])
    np.testing.assert_array_equal(c.t, [4, 2])


@pytest.mark.parametrize("y,xp,xm", [(0, 1.0, 1.0), (3, 4.5, 0.5), (-7, 2.0, 9.0),
                                     (40, 30.0, 20.0), (-100, 0.25, 49.75), (12, 24.75, 0.25)])
def test_pmf_matches_mpmath(y, xp, xm):
    ref = pmf_mp(y, xp, xm)
    np.testing.assert_allclose(sk.pmf(y, xp - xm, xp + xm), ref, rtol=1e-12)
    np.testing.assert_allclose(sk.pmf_series(y, xp, xm), ref, rtol=1e-12)


def test_pmf_known_values():
    # x = 0, s = 2: exp(-2) I_0(2)
    np.testing.assert_allclose(sk.pmf(0, 0.0, 2.0), math.exp(-2) * 2.2795853023360673, rtol=1e-14)
    # s = 0: point mass at zero
    assert sk.pmf(0, 0.0, 0.0) == 1.0
    assert sk.pmf(3, 0.0, 0.0) == 0.0


def test_boundary_is_poisson():
    from scipy.stats import poisson
    y = np.arange(0, 30)
    np.testing.assert_allclose(sk.pmf(y, 5.0, 5.0), poisson.pmf(y, 5.0), rtol=1e-13)
    np.testing.assert_allclose(sk.pmf(-y, -5.0, 5.0), poisson.pmf(y, 5.0), rtol=1e-13)
    assert sk.pmf(-1, 5.0, 5.0) == 0.0


def test_normalization():
    y = np.arange(-400, 401)
    for s in (0.5, 3.0, 30.0, 120.0):
        for x in (0.0, 0.3 * s, -0.99 * s):
            np.testing.assert_allclose(sk.pmf(y, x, s).sum(), 1.0, atol=1e-12)


def test_moments():
    y = np.arange(-300, 301)
    p = sk.pmf(y, 7.0, 20.0)
    np.testing.assert_allclose(np.sum(y * p), 7.0, rtol=1e-12)
    np.testing.assert_allclose(np.sum((y - 7.0) ** 2 * p), 20.0, rtol=1e-12)
    np.testing.assert_allclose(np.sum((y - 7.0) ** 3 * p) / 20.0**1.5, sk.skewness(7.0, 20.0),
                               rtol=1e-10)


def test_skewness_degenerate():
    with pytest.raises(DegenerateParameterError):
        sk.skewness(0.0, 0.0)


def test_log_pmf_large_s_no_underflow():
    lp = sk.log_pmf(np.array([0, 500, -3000]), 100.0, 1e4)
    assert np.all(np.isfinite(lp))
    # far tail is tiny but representable in log space
    assert lp[2] < -300


def test_log_likelihood_matches_log_pmf(rng):
    s = rng.uniform(0.5, 5000, 400)
    x = s * rng.uniform(-0.999, 0.999, 400)
    y = rng.integers(-200, 200, 400)
    np.testing.assert_allclose(sk.log_likelihood(y, x, s), sk.log_pmf(y, x, s), rtol=1e-11, atol=1e-11)


def test_symmetry():
    y = np.arange(-20, 21)
    np.testing.assert_allclose(sk.pmf(y, 3.0, 10.0), sk.pmf(-y, -3.0, 10.0), rtol=1e-14)


def test_derivatives_finite_difference():
    h = 1e-5
    for y in (-6, 0, 3, 15):
        for x, s in ((2.0, 10.0), (-30.0, 40.0), (0.0, 1.5)):
            fdx = (sk.pmf(y, x + h, s) - sk.pmf(y, x - h, s)) / (2 * h)
            fds = (sk.pmf(y, x, s + h) - sk.pmf(y, x, s - h)) / (2 * h)
            np.testing.assert_allclose(sk.dpmf_dx(y, x, s), fdx, atol=1e-9)
            np.testing.assert_allclose(sk.dpmf_ds(y, x, s), fds, atol=1e-9)


def test_pde_residual_small():
    for y in range(-30, 31, 3):
        r = sk.pde_residual(y, 4.0, 25.0)
        assert abs(r) <= 1e-12 * max(sk.pmf(y, 4.0, 25.0), 1e-300) + 1e-300


def test_recurrence_table_against_series():
    x, s, ymax = 3.0, 12.0, 40
    table = sk.pmf_table_recurrence(x, s, ymax)
    ref = np.array([sk.pmf_series(y, (s + x) / 2, (s - x) / 2) for y in range(-ymax, ymax + 1)])
    np.testing.assert_allclose(table, ref, rtol=1e-10)


def test_recurrence_requires_interior():
    with pytest.raises(DegenerateParameterError):
        sk.pmf_table_recurrence(5.0, 5.0, 10)


def test_sample_moments(rng):
    pair = sk.sample(rng, np.full(200_000, 7.0), np.full(200_000, 2.0))
    assert abs(pair.y.mean() - 5.0) < 4 * math.sqrt(9 / 2e5)
    assert abs(pair.t.mean() - 9.0) < 4 * math.sqrt(9 / 2e5)
    assert np.all((pair.t - pair.y) % 2 == 0)


@settings(max_examples=60, deadline=None)
@given(y=st.integers(-60, 60), s=st.floats(0.1, 200.0), frac=st.floats(-0.999, 0.999))
def test_pmf_properties(y, s, frac):
    x = frac * s
    p = sk.pmf(y, x, s)
    assert 0.0 <= p <= 1.0
    np.testing.assert_allclose(p, sk.pmf(-y, -x, s), rtol=1e-12, atol=1e-300)
    # three-term recursion in y
    lhs = y * p
    rhs = 0.5 * (s + x) * sk.pmf(y - 1, x, s) - 0.5 * (s - x) * sk.pmf(y + 1, x, s)
    scale = max(abs(y) * p, 0.5 * (s + x) * sk.pmf(y - 1, x, s), 1e-300)
    assert abs(lhs - rhs) <= 1e-10 * scale
