"""Log-domain binomial machinery and normal CDF/quantile, checked against
scipy and exact rational arithmetic."""

import math
from fractions import Fraction

import pytest
from scipy.special import ndtr, ndtri
from scipy.stats import binom

from noisycfb.numerics import (
    binary_entropy,
    binom_cdf,
    binom_sf,
    log_binom_pmf,
    normal_cdf,
    normal_upper_quantile,
)


def exact_binom_cdf(k: int, n: int, p: Fraction) -> Fraction:
    return sum(
        math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(k + 1)
    )


@pytest.mark.parametrize("k,n,p", [
    (3, 64, Fraction(1, 1000)),
    (5, 64, Fraction(1, 200)),
    (7, 64, Fraction(1, 80)),
    (20, 64, Fraction(1, 2)),
    (0, 64, Fraction(1, 100)),
    (63, 64, Fraction(1, 2)),
])
def test_binom_cdf_matches_exact_rational(k, n, p):
    want = float(exact_binom_cdf(k, n, p))
    got = binom_cdf(k, n, float(p))
    assert got == pytest.approx(want, rel=1e-12)
    assert binom_sf(k, n, float(p)) == pytest.approx(1.0 - want, rel=1e-9)


def test_binom_tails_match_scipy_in_deep_tail():
    # p_fault-style tail far below double rounding of 1 - cdf
    got = binom_sf(30, 64, 0.001)
    want = float(binom.sf(30, 64, 0.001))
    assert got == pytest.approx(want, rel=1e-9)
    assert 0.0 < got < 1e-60


def test_binom_edge_cases():
    assert binom_cdf(64, 64, 0.3) == 1.0
    assert binom_sf(64, 64, 0.3) == 0.0
    assert binom_cdf(-1, 64, 0.3) == 0.0
    assert binom_cdf(0, 64, 0.0) == 1.0
    assert binom_sf(0, 64, 1.0) == 1.0
    assert log_binom_pmf(0, 64, 0.0) == 0.0
    assert log_binom_pmf(1, 64, 0.0) == -math.inf


def test_normal_cdf_matches_scipy():
    for x in [-8.0, -3.2, -1.0, 0.0, 0.5, 2.0, 6.0, 9.0]:
        assert normal_cdf(x) == pytest.approx(float(ndtr(x)), abs=1e-15, rel=1e-12)


def test_normal_upper_quantile_matches_scipy():
    # tails down to the 2^-57 used at bit advantage 56
    for tail in [0.5, 0.1, 1e-3, 1e-6, 2.0**-24, 2.0**-40, 2.0**-57]:
        want = float(-ndtri(tail))
        assert normal_upper_quantile(tail) == pytest.approx(want, abs=1e-10)


def test_normal_quantile_roundtrip():
    for tail in [0.3, 1e-4, 2.0**-30, 2.0**-57]:
        z = normal_upper_quantile(tail)
        assert 1.0 - normal_cdf(z) == pytest.approx(tail, rel=1e-10)


def test_normal_quantile_rejects_bad_tail():
    with pytest.raises(ValueError):
        normal_upper_quantile(0.0)
    with pytest.raises(ValueError):
        normal_upper_quantile(1.0)


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(
        -0.11 * math.log2(0.11) - 0.89 * math.log2(0.89))
    assert binary_entropy(0.3) == binary_entropy(0.7)
