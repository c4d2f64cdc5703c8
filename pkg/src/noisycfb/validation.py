"""Monte Carlo validation: run the real DES-CFB pipeline and test every
analytic quantity that is measurable at desk scale against its formula.

Each check draws from its own counter-based random stream derived from
(config seed, check tag), so reports are reproducible bit-for-bit and
independent of execution order. Comparisons use standard errors computed
from the observed counts at a 3-sigma acceptance band, except where a
quantity is exact by construction (then the check demands equality) or a
distribution is compared by total variation distance against a bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .attack import (
    AttackParams,
    false_accept_probabilities,
    minimal_fault_threshold,
    miss_probabilities,
    outcomes_for_keyspace,
    verify_candidate,
)
from .cfb import (
    CfbTrace,
    DEFAULT_IV,
    NoiseSpec,
    cfb_decrypt,
    make_trace,
    measure_avalanche,
    noise_blocks,
    random_blocks,
)
from .channel import (
    MarkovState,
    block_error_probability,
    error_weight_distribution,
    transition_and_steady_state,
)
from .des import (
    BLOCK_BITS,
    MASK64,
    DesKey,
    des_encrypt_block,
    hamming_weight,
    set_effective_bits,
)

_MASK = MASK64

# stream tags; every random draw in this module descends from exactly one
_TAG_OCCUPANCY = 1
_TAG_WEIGHT_KEY = 2
_TAG_WEIGHT_PT = 3
_TAG_WEIGHT_NOISE = 4
_TAG_STAGE_PT = 5
_TAG_STAGE_NOISE = 6
_TAG_MISS_PT = 7
_TAG_MISS_NOISE = 8
_TAG_FALSE_PT = 9
_TAG_FALSE_NOISE = 10
_TAG_FALSE_KEYS = 11
_TAG_ATTACK = 12
_TAG_AVALANCHE = 13
_TAG_TRUE_KEY = 14


def _sub_seed(seed: int, tag: int) -> int:
    # splitmix64 finalizer over (seed, tag)
    x = (seed + tag * 0x9E3779B97F4A7C15) & _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _rng(seed: int, tag: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=[_sub_seed(seed, tag), stream & _MASK])
    )


@dataclass(frozen=True)
class ValidationConfig:
    eta: float = 0.0125
    frames: int = 8
    blocks_per_frame: int = 12_500
    trials: int = 10_000
    seed: int = 7
    reduced_key_bits: int = 16
    inflated_tau: int = 20
    alpha: float = 0.5
    tv_bound: float = 0.05
    attack_trials: int = 400
    attack_advantage: int = 6
    attack_n_c: int = 5
    attack_eta: float = 0.02
    attack_p_s: float = 0.8
    attack_tau: int = 17  # keeps 2^(r-a) * p_f near 1 so all outcomes occur

    def __post_init__(self):
        if self.trials < 1_000:
            raise ValueError("trials must be >= 1000 for 3-sigma comparisons")
        if not 1 <= self.reduced_key_bits <= 24:
            raise ValueError("reduced_key_bits must be in [1, 24]")
        if not 0.0 <= self.eta <= 0.5:
            raise ValueError("eta must be in [0, 0.5]")
        if self.blocks_per_frame < 2 or self.frames < 1:
            raise ValueError("need at least one frame of two blocks")
        if not 0 <= self.attack_advantage <= self.reduced_key_bits:
            raise ValueError("attack_advantage must be in [0, reduced_key_bits]")


@dataclass(frozen=True)
class CheckResult:
    """One validated quantity: analytic value, empirical estimate, and the
    standard error (or bound) the verdict was judged against."""

    name: str
    formula: str
    analytic: float
    empirical: float
    std_error: float
    samples: int
    passed: bool

    def to_line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.name} | {self.formula} | analytic={self.analytic:.10g}"
                f" | empirical={self.empirical:.10g}"
                f" | stderr={self.std_error:.6g} | n={self.samples} | {verdict}")


@dataclass
class ValidationReport:
    config: ValidationConfig
    entries: list[CheckResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_text(self) -> str:
        cfg = self.config
        head = (f"# validation eta={cfg.eta} alpha={cfg.alpha} seed={cfg.seed}"
                f" trials={cfg.trials} blocks_per_frame={cfg.blocks_per_frame}")
        lines = [head] + [e.to_line() for e in self.entries]
        lines.append(f"# result: {'PASS' if self.all_passed else 'FAIL'}"
                     f" ({sum(e.passed for e in self.entries)}"
                     f"/{len(self.entries)} checks)")
        return "\n".join(lines) + "\n"


def _sigma_check(name: str, formula: str, analytic: float,
                 hits: int, n: int) -> CheckResult:
    p_hat = hits / n
    se = math.sqrt(p_hat * (1.0 - p_hat) / n)
    passed = abs(p_hat - analytic) <= 3.0 * se if se > 0 else p_hat == analytic
    return CheckResult(name=name, formula=formula, analytic=analytic,
                       empirical=p_hat, std_error=se, samples=n, passed=passed)


def validate_state_occupancy(cfg: ValidationConfig) -> list[CheckResult]:
    """Empirical Markov-state frequencies and transition rates vs the
    closed forms [(1-q)^2, q(1-q), q(1-q), q^2] and the q / 1-q rows.

    Occupancy is counted on non-overlapping block pairs so the samples
    are i.i.d.; transition draws are conditionally independent given the
    source state, so the binomial standard errors below are exact.
    """
    q = block_error_probability(cfg.eta)
    spec = NoiseSpec(cfg.eta, _sub_seed(cfg.seed, _TAG_OCCUPANCY))
    occupancy = np.zeros(4, dtype=np.int64)
    occ_n = 0
    trans_one = np.zeros(4, dtype=np.int64)  # next block noisy, by source state
    trans_n = np.zeros(4, dtype=np.int64)
    for f in range(cfg.frames):
        blocks = noise_blocks(spec, cfg.blocks_per_frame, frame_index=f)
        flags = np.array([b != 0 for b in blocks], dtype=np.int64)
        states = 2 * flags[:-1] + flags[1:]  # state at times 1..n-1
        pair_states = states[::2]
        occupancy += np.bincount(pair_states, minlength=4)
        occ_n += len(pair_states)
        src, nxt = states[:-1], flags[2:]
        trans_n += np.bincount(src, minlength=4)
        trans_one += np.bincount(src, weights=nxt, minlength=4).astype(np.int64)

    steady = [(1 - q) ** 2, q * (1 - q), q * (1 - q), q**2]
    formulas = ["(1-q)^2", "q(1-q)", "q(1-q)", "q^2"]
    out = [
        _sigma_check(f"occupancy[{s.name}]", formulas[k], steady[k],
                     int(occupancy[k]), occ_n)
        for k, s in enumerate(MarkovState)
    ]
    # transition matrix rows: P[next noisy | state] = q for every state
    t, _ = transition_and_steady_state(q)
    for k, s in enumerate(MarkovState):
        if trans_n[k] == 0:
            continue
        analytic = float(t[k, 1] + t[k, 3])  # next-state has current-flag set
        out.append(
            _sigma_check(f"transition[{s.name}->noisy]", "q", analytic,
                         int(trans_one[k]), int(trans_n[k]))
        )
    return out


def _pipeline_weights(cfg: ValidationConfig, target: MarkovState,
                      needed: int) -> list[int]:
    """Error-vector weights of real decrypted frames, conditioned on the
    ground-truth channel state, resampling frames until `needed` hits."""
    key = DesKey(int(_rng(cfg.seed, _TAG_WEIGHT_KEY).integers(0, 2**64,
                                                              dtype=np.uint64)))
    pt_rng = _rng(cfg.seed, _TAG_WEIGHT_PT)
    spec = NoiseSpec(cfg.eta, _sub_seed(cfg.seed, _TAG_WEIGHT_NOISE))
    q = block_error_probability(cfg.eta)
    occ = {
        MarkovState.S0: (1 - q) ** 2,
        MarkovState.S1: q * (1 - q),
        MarkovState.S2: q * (1 - q),
        MarkovState.S3: q * q,
    }[target]
    if occ <= 0.0:
        raise ValueError(f"state {target.name} unreachable at eta={cfg.eta}")
    max_frames = 2 * math.ceil(needed / (occ * (cfg.blocks_per_frame - 1))) + 2

    weights: list[int] = []
    frame = 0
    while len(weights) < needed:
        if frame >= max_frames:
            raise RuntimeError(
                f"could not collect {needed} {target.name} samples "
                f"in {max_frames} frames"
            )
        plaintexts = random_blocks(pt_rng, cfg.blocks_per_frame)
        trace = make_trace(key, plaintexts, spec, frame_index=frame)
        decrypted = cfb_decrypt(key, DEFAULT_IV, trace.noisy_ciphertexts)
        for i in range(1, len(trace)):
            prev_noisy = trace.noise_blocks[i - 1] != 0
            cur_noisy = trace.noise_blocks[i] != 0
            if 2 * prev_noisy + cur_noisy == target.value:
                weights.append(hamming_weight(plaintexts[i] ^ decrypted[i]))
                if len(weights) == needed:
                    break
        frame += 1
    return weights


def validate_error_weights(cfg: ValidationConfig,
                           state: MarkovState) -> CheckResult:
    """Compare the empirical error-weight histogram in one channel state
    against its analytic distribution.

    S1/S3: total variation distance against the weight law, bounded by
    cfg.tv_bound. S0: every error vector must be zero. S2: the mean
    weight estimates the avalanche rate, which must land in [0.49, 0.51].
    """
    weights = _pipeline_weights(cfg, state, cfg.trials)
    n = len(weights)
    if state is MarkovState.S0:
        nonzero = sum(1 for w in weights if w != 0)
        return CheckResult(
            name="weights[S0]", formula="error vector = 0", analytic=0.0,
            empirical=float(nonzero), std_error=0.0, samples=n,
            passed=nonzero == 0,
        )
    if state is MarkovState.S2:
        arr = np.array(weights) / BLOCK_BITS
        mean = float(arr.mean())
        se = float(arr.std(ddof=1) / math.sqrt(n))
        return CheckResult(
            name="weights[S2]", formula="mean weight/64 in [0.49, 0.51]",
            analytic=cfg.alpha, empirical=mean, std_error=se, samples=n,
            passed=0.49 <= mean <= 0.51,
        )
    dist = error_weight_distribution(state, cfg.alpha, cfg.eta)
    hist = np.bincount(weights, minlength=BLOCK_BITS + 1) / n
    tv = 0.5 * float(np.abs(hist - dist.probs).sum())
    return CheckResult(
        name=f"weights[{state.name}]",
        formula=f"TV(hist, weight law) <= {cfg.tv_bound}",
        analytic=0.0, empirical=tv, std_error=cfg.tv_bound, samples=n,
        passed=tv <= cfg.tv_bound,
    )


def validate_verification_rates(cfg: ValidationConfig,
                                params: AttackParams) -> list[CheckResult]:
    """Empirical stage/miss/false-accept rates of the verification
    procedure against their formulas.

    - per-stage success with the right key vs (1-eta)^64, counted on
      non-overlapping stages;
    - miss rate of the right key over fresh frames vs (1-(1-eta)^64)^n_c;
    - acceptance rate of random wrong keys at the inflated threshold vs
      1-(1-p_2)^n_c.
    """
    true_key = DesKey(int(_rng(cfg.seed, _TAG_TRUE_KEY).integers(
        0, 2**64, dtype=np.uint64)))
    eta = cfg.eta
    out: list[CheckResult] = []

    # (a) per-stage success for the right key
    p_1, _ = miss_probabilities(eta, params.n_c)
    spec = NoiseSpec(eta, _sub_seed(cfg.seed, _TAG_STAGE_NOISE))
    pt_rng = _rng(cfg.seed, _TAG_STAGE_PT)
    hits = 0
    n_stages = 0
    frame = 0
    while n_stages < cfg.trials:
        plaintexts = random_blocks(pt_rng, cfg.blocks_per_frame)
        trace = make_trace(true_key, plaintexts, spec, frame_index=frame)
        for i in range(1, len(trace), 2):
            predicted = plaintexts[i] ^ des_encrypt_block(
                true_key, trace.noisy_ciphertexts[i - 1])
            if hamming_weight(trace.noisy_ciphertexts[i] ^ predicted) <= params.tau:
                hits += 1
            n_stages += 1
            if n_stages == cfg.trials:
                break
        frame += 1
    out.append(_sigma_check("stage-success[right key]", "(1-eta)^64",
                            p_1, hits, n_stages))

    # (b) miss rate for the right key over fresh short frames
    _, p_m = miss_probabilities(eta, params.n_c)
    spec = NoiseSpec(eta, _sub_seed(cfg.seed, _TAG_MISS_NOISE))
    pt_rng = _rng(cfg.seed, _TAG_MISS_PT)
    misses = 0
    for t in range(cfg.trials):
        plaintexts = random_blocks(pt_rng, params.n_c + 1)
        trace = make_trace(true_key, plaintexts, spec, frame_index=t)
        if not verify_candidate(trace, true_key, params):
            misses += 1
    out.append(_sigma_check("miss-rate[right key]", "(1-(1-eta)^64)^n_c",
                            p_m, misses, cfg.trials))

    # (c) false-accept rate for random wrong keys at the inflated threshold
    infl = AttackParams(n_c=params.n_c, tau=cfg.inflated_tau, a=params.a)
    _, p_f = false_accept_probabilities(cfg.alpha, eta, infl.tau, infl.n_c)
    spec = NoiseSpec(eta, _sub_seed(cfg.seed, _TAG_FALSE_NOISE))
    pt_rng = _rng(cfg.seed, _TAG_FALSE_PT)
    key_rng = _rng(cfg.seed, _TAG_FALSE_KEYS)
    accepts = 0
    for t in range(cfg.trials):
        plaintexts = random_blocks(pt_rng, infl.n_c + 1)
        trace = make_trace(true_key, plaintexts, spec, frame_index=t)
        while True:
            wrong = DesKey(int(key_rng.integers(0, 2**64, dtype=np.uint64)))
            if wrong != true_key:
                break
        if verify_candidate(trace, wrong, infl):
            accepts += 1
    out.append(_sigma_check(
        f"false-accept[wrong key, tau={infl.tau}]",
        "1-(1-p_2)^n_c", p_f, accepts, cfg.trials))
    return out


def reduced_keyspace_attack(cfg: ValidationConfig,
                            eta: float | None = None) -> list[CheckResult]:
    """Run the full ranked scan on a reduced key space and compare the
    empirical (correct, erasure, wrong) split against the outcome
    formulas with the key count scaled down to 2^(r-a).

    The ranking phase is synthesized: the right key lands uniformly in
    the examined top slice with probability cfg.attack_p_s, all other
    slice positions are distinct wrong keys from the r-bit subspace.
    The scan itself (chained verification, top rank first, stop on first
    accept) is the real procedure on real DES traces.
    """
    eta = cfg.attack_eta if eta is None else eta
    r = cfg.reduced_key_bits
    n_c = cfg.attack_n_c
    tau = cfg.attack_tau
    m_keys = 2 ** (r - cfg.attack_advantage)
    p_s = cfg.attack_p_s

    base_rng = _rng(cfg.seed, _TAG_ATTACK)
    base_key = int(base_rng.integers(0, 2**64, dtype=np.uint64))
    true_value = int(base_rng.integers(0, 2**r))
    true_key = DesKey(set_effective_bits(base_key, true_value, r))
    params = AttackParams(n_c=n_c, tau=tau, a=0)

    key_cache: dict[int, DesKey] = {true_value: true_key}

    def candidate(value: int) -> DesKey:
        k = key_cache.get(value)
        if k is None:
            k = DesKey(set_effective_bits(base_key, value, r))
            key_cache[value] = k
        return k

    noise = NoiseSpec(eta, _sub_seed(cfg.seed, _TAG_ATTACK + 1))
    counts = {"c": 0, "e": 0, "w": 0}
    for trial in range(cfg.attack_trials):
        rng = _rng(cfg.seed, _TAG_ATTACK, stream=trial + 1)
        in_slice = bool(rng.random() < p_s)
        true_pos = int(rng.integers(0, m_keys)) if in_slice else -1
        # wrong slice values, distinct, never equal to the true value
        n_wrong = m_keys - 1 if in_slice else m_keys
        wrongs = rng.choice(2**r - 1, size=n_wrong, replace=False)
        wrongs = wrongs + (wrongs >= true_value)

        plaintexts = random_blocks(rng, n_c + 1)
        trace = make_trace(true_key, plaintexts, noise, frame_index=trial)

        outcome = "e"
        w_idx = 0
        for pos in range(m_keys):
            if pos == true_pos:
                cand_value = true_value
            else:
                cand_value = int(wrongs[w_idx])
                w_idx += 1
            if verify_candidate(trace, candidate(cand_value), params):
                outcome = "c" if cand_value == true_value else "w"
                break
        counts[outcome] += 1

    _, p_m = miss_probabilities(eta, n_c)
    _, p_f = false_accept_probabilities(cfg.alpha, eta, tau, n_c)
    p_c_a, p_e_a, p_w_a = outcomes_for_keyspace(p_s, p_m, p_f, float(m_keys))
    n = cfg.attack_trials
    return [
        _sigma_check("attack-outcome[correct]",
                     "p_s(1-p_m)[1-(1-p_f)^M]/(p_f M)", p_c_a, counts["c"], n),
        _sigma_check("attack-outcome[erasure]",
                     "(1-p_s)(1-p_f)^M + p_s p_m (1-p_f)^(M-1)",
                     p_e_a, counts["e"], n),
        _sigma_check("attack-outcome[wrong]", "1 - p_c - p_e",
                     p_w_a, counts["w"], n),
    ]


def run_validation(cfg: ValidationConfig) -> ValidationReport:
    """Assemble the full check suite at the configured operating point."""
    report = ValidationReport(config=cfg)

    alpha_hat = measure_avalanche(100, cfg.trials // 100,
                                  _sub_seed(cfg.seed, _TAG_AVALANCHE))
    report.entries.append(CheckResult(
        name="avalanche[DES input-bit]", formula="rate in [0.49, 0.51]",
        analytic=0.5, empirical=alpha_hat,
        std_error=math.sqrt(0.25 / BLOCK_BITS / max(cfg.trials, 1)),
        samples=cfg.trials, passed=0.49 <= alpha_hat <= 0.51,
    ))

    report.entries.extend(validate_state_occupancy(cfg))

    states = ([MarkovState.S0, MarkovState.S1, MarkovState.S2, MarkovState.S3]
              if cfg.eta > 0 else [MarkovState.S0])
    for state in states:
        report.entries.append(validate_error_weights(cfg, state))

    tau = minimal_fault_threshold(cfg.eta, 1e-5)
    p_1, _ = miss_probabilities(cfg.eta, 1)
    if p_1 >= 1.0:
        n_c_miss = 1
    else:
        # smallest n_c with an observable analytic miss rate (~>= 0.05)
        n_c_miss = max(1, min(25, int(math.log(0.05) / math.log(1.0 - p_1))))
    report.entries.extend(validate_verification_rates(
        cfg, AttackParams(n_c=n_c_miss, tau=tau, a=0)))

    report.entries.extend(reduced_keyspace_attack(cfg))
    return report
