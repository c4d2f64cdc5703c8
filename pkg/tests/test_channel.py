"""Markov channel model: weight distributions, stationary behavior,
entropies, and the capacity stack."""

import math

import numpy as np
import pytest
from scipy.stats import binom

from noisycfb.attack import OutcomeProbabilities, optimize_parameters
from noisycfb.channel import (
    CapacityReport,
    MarkovState,
    block_error_probability,
    classify_state,
    conditional_entropy,
    eavesdropper_capacity,
    error_weight_distribution,
    main_capacity,
    markov_channel_model,
    secrecy_capacity,
    state_capacity,
    transition_and_steady_state,
)
from noisycfb.des import BLOCK_BITS
from noisycfb.numerics import binary_entropy, log_binom_coeff


def _outcomes(p_c: float, p_e: float) -> OutcomeProbabilities:
    return OutcomeProbabilities(p_fault=0, p_1=1, p_m=0, p_2=0, p_f=0,
                                p_s=p_c, p_c=p_c, p_e=p_e,
                                p_w=1.0 - p_c - p_e)


def test_block_error_probability():
    assert block_error_probability(0.0) == 0.0
    assert block_error_probability(1.0) == 1.0
    assert block_error_probability(0.0125) == pytest.approx(
        0.55293087811732111, rel=1e-14)  # exact rational 1-(1-1/80)^64
    with pytest.raises(ValueError):
        block_error_probability(1.5)


def test_classify_state_mapping():
    assert classify_state(False, False) is MarkovState.S0
    assert classify_state(False, True) is MarkovState.S1
    assert classify_state(True, False) is MarkovState.S2
    assert classify_state(True, True) is MarkovState.S3


def test_weight_distribution_s0_is_point_mass():
    dist = error_weight_distribution(MarkovState.S0, 0.5, 0.0125)
    assert dist.probs[0] == 1.0
    assert dist.probs[1:].sum() == 0.0


@pytest.mark.parametrize("eta", [1e-6, 0.001, 0.0125, 0.1, 0.4])
def test_weight_distribution_s1_conditioning(eta):
    dist = error_weight_distribution(MarkovState.S1, 0.5, eta)
    assert dist.probs[0] == 0.0
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_weight_distribution_s1_low_noise_limit():
    # conditioned on >= 1 flip, a vanishing rate leaves exactly one flip
    dist = error_weight_distribution(MarkovState.S1, 0.5, 1e-9)
    assert dist.probs[1] == pytest.approx(1.0, abs=1e-7)


def test_weight_distribution_s2_is_binomial():
    alpha = 0.47
    dist = error_weight_distribution(MarkovState.S2, alpha, 0.0125)
    want = binom.pmf(np.arange(65), 64, alpha)
    np.testing.assert_allclose(dist.probs, want, rtol=1e-10)


def test_weight_distribution_s3_uniform_at_half_avalanche():
    # gamma = alpha = 0.5 collapses the bracket to q * 2^-64 per vector
    dist = error_weight_distribution(MarkovState.S3, 0.5, 0.0125)
    for w in (0, 1, 13, 32, 64):
        per_vector = dist.probs[w] / math.comb(64, w)
        assert per_vector == pytest.approx(2.0**-64, rel=1e-12)
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.35])
@pytest.mark.parametrize("eta", [0.001, 0.0125, 0.05, 0.3])
def test_weight_distribution_s3_is_proper(alpha, eta):
    dist = error_weight_distribution(MarkovState.S3, alpha, eta)
    assert np.all(dist.probs >= 0.0)
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_weight_distribution_requires_noise_for_s1_s3():
    with pytest.raises(ValueError):
        error_weight_distribution(MarkovState.S1, 0.5, 0.0)
    with pytest.raises(ValueError):
        error_weight_distribution(MarkovState.S3, 0.5, 0.0)


def test_transition_and_steady_state_structure():
    t, steady = transition_and_steady_state(0.55)
    np.testing.assert_allclose(t.sum(axis=1), np.ones(4), atol=1e-15)
    assert steady.sum() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(steady @ t, steady, atol=1e-15)
    _, s0 = transition_and_steady_state(0.0)
    np.testing.assert_allclose(s0, [1, 0, 0, 0], atol=0)
    _, s1 = transition_and_steady_state(1.0)
    np.testing.assert_allclose(s1, [0, 0, 0, 1], atol=0)


def test_steady_state_matches_solver_for_random_q():
    rng = np.random.default_rng(99)
    for q in rng.random(25):
        t, steady = transition_and_steady_state(float(q))
        a = np.vstack([t.T - np.eye(4), np.ones(4)])
        b = np.array([0, 0, 0, 0, 1.0])
        solved, *_ = np.linalg.lstsq(a, b, rcond=None)
        np.testing.assert_allclose(solved, steady, atol=1e-12)


def test_conditional_entropy_uniform_case():
    # alpha = 0.5 makes the S3 error vector uniform over all 2^64 values
    h = conditional_entropy(MarkovState.S3, 0.5, 0.0125)
    assert h == pytest.approx(64.0, abs=1e-9)


def test_conditional_entropy_s1_low_noise_limit():
    # uniform over the 64 weight-1 vectors: log2(64) = 6 bits
    h = conditional_entropy(MarkovState.S1, 0.5, 1e-8)
    assert h == pytest.approx(6.0, abs=1e-3)


@pytest.mark.parametrize("state", [MarkovState.S1, MarkovState.S3])
@pytest.mark.parametrize("alpha,eta", [(0.5, 0.0125), (0.3, 0.05), (0.45, 0.001)])
def test_conditional_entropy_matches_distribution_route(state, alpha, eta):
    # second route: entropy recomputed from the weight distribution object
    dist = error_weight_distribution(state, alpha, eta)
    h2 = 0.0
    for w in range(65):
        p = float(dist.probs[w])
        if p > 0.0:
            h2 -= p * (math.log2(p) - log_binom_coeff(w, 64) / math.log(2))
    assert conditional_entropy(state, alpha, eta) == pytest.approx(h2, abs=1e-9)


def test_conditional_entropy_bounds_and_rejections():
    for alpha, eta in [(0.5, 0.0125), (0.2, 0.03)]:
        h = conditional_entropy(MarkovState.S3, alpha, eta)
        assert 0.0 <= h <= 64.0 + 1e-9  # round-off only above 64
    with pytest.raises(ValueError):
        conditional_entropy(MarkovState.S0, 0.5, 0.0125)
    with pytest.raises(ValueError):
        conditional_entropy(MarkovState.S2, 0.5, 0.0125)


def test_state_capacities():
    assert state_capacity(MarkovState.S0, 0.5, 0.0125) == 1.0
    assert state_capacity(MarkovState.S2, 0.5, 0.0125) == 0.0  # 1 - h(1/2)
    assert state_capacity(MarkovState.S3, 0.5, 0.0125) == pytest.approx(0.0, abs=1e-9)
    assert state_capacity(MarkovState.S2, 0.1, 0.0125) == pytest.approx(
        1.0 - binary_entropy(0.1), rel=1e-14)
    assert state_capacity(MarkovState.S1, 0.5, 1e-8) == pytest.approx(
        (64.0 - 6.0) / 64.0, abs=1e-4)


def test_main_capacity_noise_free_and_half_avalanche_reduction():
    assert main_capacity(0.5, 0.0) == 1.0
    eta = 0.0125
    q = block_error_probability(eta)
    c1 = state_capacity(MarkovState.S1, 0.5, eta)
    # S2 and S3 capacities vanish at alpha = 0.5
    want = (1 - q) ** 2 + q * (1 - q) * c1
    assert main_capacity(0.5, eta) == pytest.approx(want, rel=1e-12)


def test_main_capacity_decreases_in_eta():
    vals = [main_capacity(0.5, eta) for eta in (1e-4, 0.005, 0.01, 0.02, 0.05)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_eavesdropper_capacity_limits():
    eta, alpha = 0.0125, 0.5
    c_b = main_capacity(alpha, eta)
    assert eavesdropper_capacity(_outcomes(1.0, 0.0), alpha, eta) == \
        pytest.approx(c_b, rel=1e-14)
    assert eavesdropper_capacity(_outcomes(0.0, 1.0), alpha, eta) == 0.0
    # at alpha = 0.5 the wrong-key term vanishes: c_e = p_c * c_b
    out = _outcomes(0.3, 0.3)
    assert eavesdropper_capacity(out, alpha, eta) == pytest.approx(
        0.3 * c_b, rel=1e-14)


def test_secrecy_capacity_report():
    eta, alpha = 0.0125, 0.5
    report = secrecy_capacity(alpha, eta, _outcomes(1.0, 0.0))
    assert report.c_s == pytest.approx(0.0, abs=1e-14)
    report = secrecy_capacity(alpha, eta, _outcomes(0.2, 0.5))
    assert report.c_s == pytest.approx(report.c_b - report.c_e, abs=1e-15)
    assert 0.0 <= report.c_e <= report.c_b <= 1.0


def test_secrecy_capacity_full_pipeline_at_optimum():
    _, out = optimize_parameters(0.0125)
    report = secrecy_capacity(0.5, 0.0125, out)
    assert report.c_s == pytest.approx(0.3442, abs=0.02)


def test_capacity_report_rejects_non_degraded():
    with pytest.raises(ArithmeticError):
        CapacityReport(c_b=0.4, c_e=0.6, c_s=-0.2)


def test_markov_channel_model_bundle():
    model = markov_channel_model(0.5, 0.0125)
    assert model.q == pytest.approx(0.553, abs=5e-4)
    np.testing.assert_allclose(model.transition_matrix.sum(axis=1), np.ones(4))
    assert model.steady_state.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(model.state_capacities >= 0.0)
    assert np.all(model.state_capacities <= 1.0)
    assert model.state_capacities[0] == 1.0
