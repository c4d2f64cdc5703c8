"""Analytic model of the eavesdropper's key-recovery attack.

The attacker runs a linear attack against DES-CFB traffic whose
ciphertexts carry deliberate Bernoulli(eta) bit flips. Because noisy
chain inputs make a correct key look wrong, she verifies each candidate
over n_c chained CFB stages and accepts on any stage whose residual
Hamming weight is at most tau. This module computes the probability
ledger of that strategy (fault, miss, false-accept, ranking success,
and the correct / erasure / wrong-key outcome split), optimizes the
knobs (n_c, tau, a) under a computation budget, and can run the actual
verification procedure against a concrete trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cfb import CfbTrace
from .des import BLOCK_BITS, DesKey, des_encrypt_block, hamming_weight
from .numerics import binom_cdf, binom_sf, normal_cdf, normal_upper_quantile

#: Probability bias of the 26-bit linear approximation of 16-round DES
#: used by the improved known-plaintext attack.
DEFAULT_BIAS = 1.19 * 2.0**-21


@dataclass(frozen=True)
class LinearApproxSpec:
    """Linear approximation: bias epsilon over u plaintext + v ciphertext
    bits, recovering m key bits."""

    epsilon: float = DEFAULT_BIAS
    u: int = 13
    v: int = 13
    m: int = 26

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError("epsilon must be in (0, 0.5)")
        if self.u < 0 or self.v < 0 or self.u + self.v <= 0:
            raise ValueError("u + v must be positive")


@dataclass(frozen=True)
class AttackConstraints:
    """Attacker resource limits and the optimizer's thresholds."""

    theta: float = 2.0**48       # max DES encryptions per frame
    n_max: float = 2.0**46       # max plaintext/ciphertext pairs
    t_m: float = 1e-5            # threshold on the key-missing probability
    t_f: float = 1e-5            # threshold on the per-stage fault probability
    nc_max: int = 100            # cap on trials per candidate

    def __post_init__(self):
        if self.theta <= 0 or self.n_max <= 0 or self.nc_max < 1:
            raise ValueError("theta, n_max, nc_max must be positive")
        if not (0.0 < self.t_m < 1.0 and 0.0 < self.t_f < 1.0):
            raise ValueError("t_m and t_f must be in (0, 1)")


@dataclass(frozen=True)
class AttackParams:
    """Chosen attack knobs: trials per candidate, acceptance threshold,
    and bit advantage (top 2^(56-a) keys are examined)."""

    n_c: int
    tau: int
    a: int

    def __post_init__(self):
        if self.n_c < 1:
            raise ValueError("n_c must be >= 1")
        if not 0 <= self.tau <= BLOCK_BITS:
            raise ValueError("tau must be in [0, 64]")
        if not 0 <= self.a <= 56:
            raise ValueError("a must be in [0, 56]")

    def keys_examined(self) -> float:
        return 2.0 ** (56 - self.a)

    def encryption_budget(self) -> float:
        return self.n_c * self.keys_examined()


@dataclass(frozen=True)
class OutcomeProbabilities:
    """Full probability ledger for one (eta, params) operating point.

    p_fault  per-stage chance a clean-input residual still exceeds tau
    p_1      per-stage success chance for the right key
    p_m      chance the right key fails all n_c stages
    p_2      per-stage acceptance chance for a wrong key
    p_f      chance a single wrong candidate is accepted
    p_s      chance the right key ranks inside the examined slice
    p_c      overall success (right key recovered)
    p_e      frame erasure (no key accepted)
    p_w      a wrong key accepted; p_c + p_e + p_w = 1
    """

    p_fault: float
    p_1: float
    p_m: float
    p_2: float
    p_f: float
    p_s: float
    p_c: float
    p_e: float
    p_w: float

    def __post_init__(self):
        for name in ("p_fault", "p_1", "p_m", "p_2", "p_f", "p_s", "p_c", "p_e", "p_w"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        s = self.p_c + self.p_e + self.p_w
        if abs(s - 1.0) > 1e-12:
            raise ValueError(f"outcome probabilities sum to {s}, not 1")


def xor_error_rate(alpha: float, eta: float) -> float:
    """Bit error rate of the xor of two independent error processes:
    alpha(1-eta) + eta(1-alpha). Equals 0.5 whenever either rate is 0.5."""
    if not (0.0 <= alpha <= 1.0 and 0.0 <= eta <= 1.0):
        raise ValueError("rates must be in [0, 1]")
    return alpha * (1.0 - eta) + eta * (1.0 - alpha)


def fault_probability(eta: float, tau: int) -> float:
    """P[more than tau of 64 bits are noise-flipped]: the chance a clean
    verification stage still shows a residual above threshold."""
    if not 0 <= tau <= BLOCK_BITS:
        raise ValueError("tau must be in [0, 64]")
    return binom_sf(tau, BLOCK_BITS, eta)


def miss_probabilities(eta: float, n_c: int) -> tuple[float, float]:
    """(p_1, p_m): per-stage success for the right key, i.e. the chance
    its 64-bit chain input is noise-free, and the chance all n_c stages
    fail."""
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    p_1 = (1.0 - eta) ** BLOCK_BITS
    p_m = (1.0 - p_1) ** n_c
    return p_1, p_m


def false_accept_probabilities(
    alpha: float, eta: float, tau: int, n_c: int
) -> tuple[float, float]:
    """(p_2, p_f): per-stage acceptance of a wrong key, whose residual
    bits flip at the combined rate, and acceptance over n_c stages."""
    if not 0 <= tau <= BLOCK_BITS:
        raise ValueError("tau must be in [0, 64]")
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    g = xor_error_rate(alpha, eta)
    p_2 = binom_cdf(tau, BLOCK_BITS, g)
    p_f = -math.expm1(n_c * math.log1p(-p_2)) if p_2 < 1.0 else 1.0
    return p_2, p_f


def success_probability(
    n_pairs: float, approx: LinearApproxSpec, eta: float, a: int
) -> float:
    """Chance the right key lands in the top 2^(56-a) ranked candidates.

    Noise attenuates the usable bias of the linear approximation to
    2^(u+v) (0.5-eta)^(u+v) epsilon; the ranking success is then the
    usual normal-order-statistic estimate
    Phi(2 sqrt(N) eps_hat - Phi^-1(1 - 2^-(a+1))).
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if not 0 <= a <= 56:
        raise ValueError("a must be in [0, 56]")
    uv = approx.u + approx.v
    eps_hat = (2.0**uv) * (0.5 - eta) ** uv * approx.epsilon
    z = normal_upper_quantile(2.0 ** (-a - 1))
    return normal_cdf(2.0 * math.sqrt(n_pairs) * eps_hat - z)


def attack_outcomes(
    p_s: float, p_m: float, p_f: float, a: int
) -> tuple[float, float, float]:
    """(p_c, p_e, p_w): correct-key, erasure, wrong-key probabilities
    when the top 2^(56-a) ranked keys are scanned."""
    return outcomes_for_keyspace(p_s, p_m, p_f, 2.0 ** (56 - a))


def outcomes_for_keyspace(
    p_s: float, p_m: float, p_f: float, m_keys: float
) -> tuple[float, float, float]:
    """Outcome split for a scan over m_keys candidates, top rank first.

      p_c = p_s (1-p_m) [1-(1-p_f)^M] / (p_f M)
      p_e = (1-p_s)(1-p_f)^M + p_s p_m (1-p_f)^(M-1)
      p_w = 1 - p_c - p_e.

    The aggregation factor is evaluated as -expm1(M log1p(-p_f))/(p_f M)
    and defined as 1 at p_f = 0.
    """
    for name, v in (("p_s", p_s), ("p_m", p_m), ("p_f", p_f)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    if m_keys < 1:
        raise ValueError("m_keys must be >= 1")
    if p_f == 0.0:
        factor = 1.0
        survive_all = 1.0
        survive_rest = 1.0
    else:
        log_survive = math.log1p(-p_f)
        factor = -math.expm1(m_keys * log_survive) / (p_f * m_keys)
        survive_all = math.exp(m_keys * log_survive)
        survive_rest = math.exp((m_keys - 1.0) * log_survive)
    p_c = p_s * (1.0 - p_m) * factor
    p_e = (1.0 - p_s) * survive_all + p_s * p_m * survive_rest
    p_w = 1.0 - p_c - p_e
    if p_w < 0.0:
        if p_w < -1e-12:
            raise ArithmeticError(f"outcome partition violated: p_w={p_w}")
        p_w = 0.0
    return p_c, p_e, p_w


def minimal_fault_threshold(eta: float, t_f: float, start: int = 0) -> int:
    """Smallest tau with fault probability <= t_f, capped at 64.

    start only seeds the walk; the result does not depend on it.
    """
    tau = min(max(start, 0), BLOCK_BITS)
    while tau > 0 and fault_probability(eta, tau - 1) <= t_f:
        tau -= 1
    while tau < BLOCK_BITS and fault_probability(eta, tau) > t_f:
        tau += 1
    return tau


def minimal_trial_count(eta: float, t_m: float, nc_max: int, start: int = 1) -> int:
    """Smallest n_c with miss probability <= t_m, capped at nc_max."""
    n_c = min(max(start, 1), nc_max)
    while n_c > 1 and miss_probabilities(eta, n_c - 1)[1] <= t_m:
        n_c -= 1
    while n_c < nc_max and miss_probabilities(eta, n_c)[1] > t_m:
        n_c += 1
    return n_c


def optimize_parameters(
    eta: float,
    constraints: AttackConstraints | None = None,
    approx: LinearApproxSpec | None = None,
    alpha: float = 0.5,
    warm_start: AttackParams | None = None,
) -> tuple[AttackParams, OutcomeProbabilities]:
    """Pick (n_c, tau, a) maximizing the overall success probability.

    tau is the smallest threshold keeping the fault probability under
    t_f, n_c the smallest trial count keeping the miss probability under
    t_m (capped at nc_max), and a ranges over the encryption budget
    n_c 2^(56-a) <= theta; ties in the argmax go to the smallest a.
    A warm start only seeds the monotone tau / n_c searches; the result
    is identical to a cold start.
    """
    if not 0.0 <= eta < 0.5:
        raise ValueError("eta must be in [0, 0.5)")
    constraints = constraints or AttackConstraints()
    approx = approx or LinearApproxSpec()

    tau = minimal_fault_threshold(
        eta, constraints.t_f, warm_start.tau if warm_start else 0
    )
    n_c = minimal_trial_count(
        eta, constraints.t_m, constraints.nc_max, warm_start.n_c if warm_start else 1
    )
    p_1, p_m = miss_probabilities(eta, n_c)
    p_2, p_f = false_accept_probabilities(alpha, eta, tau, n_c)

    a_min = max(0, math.ceil(56 - math.log2(constraints.theta / n_c)))
    best: tuple[float, int, float] | None = None
    for a in range(a_min, 57):
        p_s = success_probability(constraints.n_max, approx, eta, a)
        p_c, _, _ = attack_outcomes(p_s, p_m, p_f, a)
        if best is None or p_c > best[0]:
            best = (p_c, a, p_s)
    assert best is not None
    _, a, p_s = best
    p_c, p_e, p_w = attack_outcomes(p_s, p_m, p_f, a)
    params = AttackParams(n_c=n_c, tau=tau, a=a)
    outcomes = OutcomeProbabilities(
        p_fault=fault_probability(eta, tau),
        p_1=p_1, p_m=p_m, p_2=p_2, p_f=p_f, p_s=p_s,
        p_c=p_c, p_e=p_e, p_w=p_w,
    )
    return params, outcomes


def verify_candidate(
    trace: CfbTrace,
    candidate: DesKey,
    params: AttackParams,
    start_index: int = 1,
) -> bool:
    """Run the chained verification procedure on a real trace.

    For n_c consecutive stages i, predict the noisy ciphertext as
    P[i] xor E_cand(noisy C[i-1]) and accept the candidate iff some
    stage's residual Hamming weight is at most tau. Known-plaintext
    setting: the trace's plaintexts are available to the attacker.
    """
    if start_index < 1:
        raise ValueError("start_index must be >= 1 (stage needs a prior ciphertext)")
    if start_index + params.n_c > len(trace):
        raise ValueError(
            f"trace has {len(trace)} blocks; need {params.n_c} stages "
            f"after index {start_index}"
        )
    plain = trace.plaintexts
    noisy = trace.noisy_ciphertexts
    for i in range(start_index, start_index + params.n_c):
        predicted = plain[i] ^ des_encrypt_block(candidate, noisy[i - 1])
        if hamming_weight(noisy[i] ^ predicted) <= params.tau:
            return True
    return False
