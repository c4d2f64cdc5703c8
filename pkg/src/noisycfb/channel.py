"""Four-state Markov model of the legitimate channel and the secrecy rate.

Decrypting a noisy CFB stream corrupts block i through two doors: flips
in the current received ciphertext pass straight through, and flips in
the previous one avalanche through the cipher. The per-block error
behavior therefore depends only on whether the current and previous
received blocks carry noise, giving four channel states:

  S0  neither block noisy        error-free
  S1  current block noisy only   conditional Bernoulli(eta) pattern
  S2  previous block noisy only  i.i.d. Bernoulli(alpha) avalanche
  S3  both noisy                 mixture of combined-rate and avalanche

The eavesdropper's frame-level channel has three memoryless states
(correct key / erasure / wrong key) whose weights come from the attack
model; the secrecy rate is the capacity gap between the two channels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .attack import OutcomeProbabilities, xor_error_rate
from .des import BLOCK_BITS
from .numerics import LOG2E, binary_entropy, log_binom_coeff

_NEG_CLAMP = -1e-15  # round-off guard for the analytically nonneg S3 bracket


class MarkovState(enum.Enum):
    S0 = 0
    S1 = 1
    S2 = 2
    S3 = 3


def classify_state(prev_noisy: bool, cur_noisy: bool) -> MarkovState:
    """State of a block time from noise presence in (previous, current)
    received ciphertexts."""
    return MarkovState(2 * int(prev_noisy) + int(cur_noisy))


def block_error_probability(eta: float) -> float:
    """q = P[a 64-bit block carries at least one flipped bit] = 1-(1-eta)^64."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1]")
    if eta == 1.0:
        return 1.0
    return -math.expm1(BLOCK_BITS * math.log1p(-eta))


@dataclass(frozen=True)
class ErrorWeightDistribution:
    """Distribution of the Hamming weight of the 64-bit decryption error.

    probs[w] is the probability of weight w; the probability of any
    single error vector of weight w is probs[w] / C(64, w).
    """

    state: MarkovState
    probs: np.ndarray

    def __post_init__(self):
        if self.probs.shape != (BLOCK_BITS + 1,):
            raise ValueError("probs must have 65 entries")
        if np.any(self.probs < 0.0):
            raise ValueError("negative weight probability")
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"weight probabilities sum to {total}")

    def per_vector_log2_prob(self, w: int) -> float:
        """log2 of the probability of one specific weight-w error vector."""
        p = float(self.probs[w])
        if p == 0.0:
            return -math.inf
        return math.log2(p) - log_binom_coeff(w, BLOCK_BITS) * LOG2E


def _check_s1s3_rates(alpha: float, eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError("states S1/S3 require eta in (0, 1)")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")


def _log_weight_terms_s1(eta: float, q: float) -> list[float]:
    # log of per-vector probability eta^w (1-eta)^(64-w) / q, w = 0..64
    lq = math.log(q)
    le, l1e = math.log(eta), math.log1p(-eta)
    return [w * le + (BLOCK_BITS - w) * l1e - lq for w in range(BLOCK_BITS + 1)]


def _log_weight_terms_s3(alpha: float, eta: float, q: float) -> list[float]:
    # log of per-vector probability
    #   [gamma^w (1-gamma)^(64-w) - alpha^w (1-alpha)^(64-w) (1-q)] / q
    # computed as exp(lg) * (-expm1(la + log(1-q) - lg)); the bracket is
    # a conditional probability, so any negative value is round-off.
    g = xor_error_rate(alpha, eta)
    lq = math.log(q)
    l1mq = math.log1p(-q)
    out = []
    for w in range(BLOCK_BITS + 1):
        lg = w * math.log(g) + (BLOCK_BITS - w) * math.log1p(-g)
        if 0.0 < alpha < 1.0:
            la = w * math.log(alpha) + (BLOCK_BITS - w) * math.log1p(-alpha) + l1mq
        elif (alpha == 0.0 and w == 0) or (alpha == 1.0 and w == BLOCK_BITS):
            la = l1mq
        else:
            la = -math.inf
        diff = la - lg
        if diff >= 0.0:
            # bracket <= 0: must be round-off at the clamp scale
            if math.exp(lg) * -math.expm1(diff) < _NEG_CLAMP:
                raise ArithmeticError(
                    f"S3 weight bracket {math.exp(lg) * -math.expm1(diff)} "
                    f"below round-off guard at w={w}"
                )
            out.append(-math.inf)
        else:
            out.append(lg + math.log(-math.expm1(diff)) - lq)
    return out


def error_weight_distribution(
    state: MarkovState, alpha: float, eta: float
) -> ErrorWeightDistribution:
    """Weight distribution of the decryption error vector in a state."""
    probs = np.zeros(BLOCK_BITS + 1)
    if state is MarkovState.S0:
        probs[0] = 1.0
    elif state is MarkovState.S2:
        for w in range(BLOCK_BITS + 1):
            lc = log_binom_coeff(w, BLOCK_BITS)
            if 0.0 < alpha < 1.0:
                probs[w] = math.exp(lc + w * math.log(alpha)
                                    + (BLOCK_BITS - w) * math.log1p(-alpha))
            else:
                probs[w] = 1.0 if w == (0 if alpha == 0.0 else BLOCK_BITS) else 0.0
    else:
        _check_s1s3_rates(alpha, eta)
        q = block_error_probability(eta)
        if state is MarkovState.S1:
            terms = _log_weight_terms_s1(eta, q)
            terms[0] = -math.inf  # conditioned on at least one flip
        else:
            terms = _log_weight_terms_s3(alpha, eta, q)
        for w in range(BLOCK_BITS + 1):
            if terms[w] != -math.inf:
                probs[w] = math.exp(log_binom_coeff(w, BLOCK_BITS) + terms[w])
    return ErrorWeightDistribution(state=state, probs=probs)


def transition_and_steady_state(q: float) -> tuple[np.ndarray, np.ndarray]:
    """Transition matrix over S0..S3 and its stationary distribution.

    The next state's (previous, current) flags are (current flag, fresh
    Bernoulli(q) flag), so every row is determined by the current flag
    alone. The closed-form stationary vector
    [(1-q)^2, q(1-q), q(1-q), q^2] is re-verified against a direct
    linear solve before returning.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    t = np.array([
        [1 - q, q, 0, 0],
        [0, 0, 1 - q, q],
        [1 - q, q, 0, 0],
        [0, 0, 1 - q, q],
    ])
    steady = np.array([(1 - q) ** 2, q * (1 - q), q * (1 - q), q**2])

    # stationarity system: p (T - I) = 0 with sum(p) = 1
    a = np.vstack([(t.T - np.eye(4)), np.ones(4)])
    b = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    solved, *_ = np.linalg.lstsq(a, b, rcond=None)
    if not np.allclose(solved, steady, atol=1e-12, rtol=0.0):
        raise ArithmeticError(
            f"stationary solver disagrees with closed form: {solved} vs {steady}"
        )
    return t, steady


def conditional_entropy(state: MarkovState, alpha: float, eta: float) -> float:
    """H(error vector | state) in bits for the non-i.i.d. states S1 and S3.

    Summed over weights in the log domain:
    H = -sum_w C(64,w) p_vec(w) log2 p_vec(w).
    """
    if state not in (MarkovState.S1, MarkovState.S3):
        raise ValueError("conditional_entropy applies to S1 and S3 only")
    _check_s1s3_rates(alpha, eta)
    q = block_error_probability(eta)
    if state is MarkovState.S1:
        terms = _log_weight_terms_s1(eta, q)
        terms[0] = -math.inf
    else:
        terms = _log_weight_terms_s3(alpha, eta, q)
    acc = 0.0
    for w in range(BLOCK_BITS + 1):
        lt = terms[w]
        if lt == -math.inf:
            continue
        acc += math.exp(log_binom_coeff(w, BLOCK_BITS) + lt) * (-lt * LOG2E)
    return acc


def state_capacity(state: MarkovState, alpha: float, eta: float) -> float:
    """Capacity in bits per channel use for one state, uniform inputs.

    S0 is a clean bit pipe, S2 a binary symmetric channel at rate alpha;
    S1/S3 give (64 - H(error|state)) / 64 since the 64-bit output is
    uniform under uniform inputs.
    """
    if state is MarkovState.S0:
        return 1.0
    if state is MarkovState.S2:
        return 1.0 - binary_entropy(alpha)
    c = (BLOCK_BITS - conditional_entropy(state, alpha, eta)) / BLOCK_BITS
    if c < 0.0:
        # entropy can exceed 64 bits only by summation round-off
        if c < -1e-9:
            raise ArithmeticError(f"state capacity {c} below round-off guard")
        c = 0.0
    return c


def main_capacity(alpha: float, eta: float) -> float:
    """Average capacity of the legitimate channel over the stationary
    state distribution."""
    if eta == 0.0:
        return 1.0
    q = block_error_probability(eta)
    c1 = state_capacity(MarkovState.S1, alpha, eta)
    c3 = state_capacity(MarkovState.S3, alpha, eta)
    return ((1 - q) ** 2
            + q * (1 - q) * (c1 + 1.0 - binary_entropy(alpha))
            + q * q * c3)


def eavesdropper_capacity(
    outcomes: OutcomeProbabilities, alpha: float, eta: float
) -> float:
    """Frame-averaged capacity of the attacker's channel.

    With the right key she matches the legitimate channel; with a wrong
    key her channel is binary symmetric at the combined error rate; an
    erased frame contributes nothing.
    """
    return _eve_capacity_given_cb(outcomes, alpha, eta, main_capacity(alpha, eta))


def _eve_capacity_given_cb(
    outcomes: OutcomeProbabilities, alpha: float, eta: float, c_b: float
) -> float:
    g = xor_error_rate(alpha, eta)
    return outcomes.p_w * (1.0 - binary_entropy(g)) + outcomes.p_c * c_b


@dataclass(frozen=True)
class CapacityReport:
    """Main, eavesdropper, and secrecy capacities in bits per channel use."""

    c_b: float
    c_e: float
    c_s: float

    def __post_init__(self):
        if self.c_e > self.c_b + 1e-12:
            raise ArithmeticError(
                f"degradedness violated: c_e={self.c_e} exceeds c_b={self.c_b}"
            )
        if not (0.0 <= self.c_b <= 1.0 + 1e-12 and self.c_e >= 0.0):
            raise ValueError("capacities outside [0, 1]")


def secrecy_capacity(
    alpha: float, eta: float, outcomes: OutcomeProbabilities
) -> CapacityReport:
    """Secrecy rate of the induced wiretap setup: c_b - c_e, which equals
    c_b (1 - p_c) - (1 - p_e - p_c)(1 - h(combined rate))."""
    c_b = main_capacity(alpha, eta)
    c_e = _eve_capacity_given_cb(outcomes, alpha, eta, c_b)
    c_s = c_b - c_e
    direct = (c_b * (1.0 - outcomes.p_c)
              - (1.0 - outcomes.p_e - outcomes.p_c)
              * (1.0 - binary_entropy(xor_error_rate(alpha, eta))))
    if abs(direct - c_s) > 1e-12:
        raise ArithmeticError(
            f"secrecy capacity forms disagree: {direct} vs {c_s}"
        )
    if c_s < 0.0:
        if c_s < -1e-12:
            raise ArithmeticError(f"negative secrecy capacity {c_s}")
        c_s = 0.0
    return CapacityReport(c_b=c_b, c_e=c_e, c_s=c_s)


@dataclass(frozen=True)
class MarkovChannelModel:
    """Bundled description of the legitimate channel at one (alpha, eta)."""

    q: float
    transition_matrix: np.ndarray
    steady_state: np.ndarray
    state_capacities: np.ndarray


def markov_channel_model(alpha: float, eta: float) -> MarkovChannelModel:
    _check_s1s3_rates(alpha, eta)
    q = block_error_probability(eta)
    t, steady = transition_and_steady_state(q)
    caps = np.array([state_capacity(s, alpha, eta) for s in MarkovState])
    return MarkovChannelModel(
        q=q, transition_matrix=t, steady_state=steady, state_capacities=caps
    )
