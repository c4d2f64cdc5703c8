"""DES-CFB deliberate-noise secrecy workbench.

Encrypt with DES in cipher feedback mode, inject Bernoulli noise into
the ciphertexts, model the eavesdropper's optimized key-verification
attack, derive the four-state Markov channel seen by the legitimate
receiver, and price the resulting wiretap secrecy capacity. A Monte
Carlo harness validates every desk-scale analytic quantity against the
real pipeline.
"""

from .attack import (
    AttackConstraints,
    AttackParams,
    LinearApproxSpec,
    OutcomeProbabilities,
    attack_outcomes,
    false_accept_probabilities,
    fault_probability,
    minimal_fault_threshold,
    minimal_trial_count,
    miss_probabilities,
    optimize_parameters,
    outcomes_for_keyspace,
    success_probability,
    verify_candidate,
    xor_error_rate,
)
from .cfb import (
    CfbTrace,
    DEFAULT_IV,
    NoiseSpec,
    apply_noise,
    cfb_decrypt,
    cfb_encrypt,
    make_trace,
    measure_avalanche,
    noise_blocks,
    random_blocks,
)
from .channel import (
    CapacityReport,
    ErrorWeightDistribution,
    MarkovChannelModel,
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
from .des import (
    BLOCK_BITS,
    DesKey,
    des_decrypt_block,
    des_encrypt_block,
    hamming_weight,
    set_effective_bits,
)
from .sweep import SweepConfig, SweepRow, format_csv, max_secrecy_row, run_sweep, write_csv
from .validation import (
    CheckResult,
    ValidationConfig,
    ValidationReport,
    reduced_keyspace_attack,
    run_validation,
    validate_error_weights,
    validate_state_occupancy,
    validate_verification_rates,
)

__version__ = "0.1.0"
