"""Numerically stable probability primitives shared across the package.

Binomial tail masses are accumulated in the log domain, summed from the
smallest term upward, so thresholds like 1e-5 stay meaningful even when
individual terms underflow a direct product evaluation.
"""

from __future__ import annotations

import math

LOG2E = math.log2(math.e)
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def log_binom_coeff(k: int, n: int) -> float:
    """log C(n, k) via lgamma."""
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_binom_pmf(k: int, n: int, p: float) -> float:
    """log of C(n,k) p^k (1-p)^(n-k), with exact handling of p in {0, 1}."""
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if p == 1.0:
        return 0.0 if k == n else -math.inf
    return log_binom_coeff(k, n) + k * math.log(p) + (n - k) * math.log1p(-p)


def _sum_log_terms(logs: list[float]) -> float:
    """exp-sum of log terms, accumulated smallest-first against the max."""
    logs = [l for l in logs if l != -math.inf]
    if not logs:
        return 0.0
    logs.sort()
    m = logs[-1]
    return math.exp(m) * math.fsum(math.exp(l - m) for l in logs)


def binom_cdf(k: int, n: int, p: float) -> float:
    """P[X <= k] for X ~ Binomial(n, p)."""
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    return min(1.0, _sum_log_terms([log_binom_pmf(i, n, p) for i in range(k + 1)]))


def binom_sf(k: int, n: int, p: float) -> float:
    """P[X > k] for X ~ Binomial(n, p), summed over the upper tail directly."""
    if k < 0:
        return 1.0
    if k >= n:
        return 0.0
    return min(1.0, _sum_log_terms([log_binom_pmf(i, n, p) for i in range(k + 1, n + 1)]))


def binary_entropy(p: float) -> float:
    """h(p) in bits; h(0) = h(1) = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_pdf(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def normal_upper_quantile(tail: float) -> float:
    """z such that P[Z > z] = tail, for tail in (0, 1).

    Uses bisection to bracket the root of the monotone survival function,
    then Newton refinement; the survival function is evaluated through
    erfc so tails far below 1e-16 keep full relative precision.
    """
    if not 0.0 < tail < 1.0:
        raise ValueError(f"tail probability must be in (0, 1), got {tail}")
    if tail > 0.5:
        return -normal_upper_quantile(1.0 - tail)

    def sf(z: float) -> float:
        return 0.5 * math.erfc(z / _SQRT2)

    lo, hi = 0.0, 45.0  # sf(45) ~ 1e-443, below any double tail
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if sf(mid) > tail:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(60):
        step = (sf(z) - tail) / normal_pdf(z)
        z += step
        if abs(step) < 1e-13 * max(1.0, abs(z)):
            break
    return z
