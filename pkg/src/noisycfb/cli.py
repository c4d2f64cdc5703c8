"""Command-line driver: sweep, optimize, capacity, validate.

All numeric settings can come from a flat key-value config file
(``key = value`` per line, ``#`` comments); explicit flags win over the
file, the file wins over built-in defaults.
"""

from __future__ import annotations

import argparse
import sys
import time

from .attack import (
    AttackConstraints,
    AttackParams,
    LinearApproxSpec,
    OutcomeProbabilities,
    optimize_parameters,
)
from .channel import secrecy_capacity
from .sweep import SweepConfig, format_csv, max_secrecy_row, run_sweep
from .validation import ValidationConfig, run_validation

_CONSTRAINT_KEYS = {
    "theta": float, "n_max": float, "t_m": float, "t_f": float, "nc_max": int,
}
_APPROX_KEYS = {"epsilon": float}
_SWEEP_KEYS = {
    "eta_start": float, "eta_end": float, "eta_step": float, "alpha": float,
}
_VALIDATE_KEYS = {
    "eta": float, "frames": int, "blocks_per_frame": int, "trials": int,
    "seed": int, "reduced_key_bits": int, "inflated_tau": int, "alpha": float,
    "tv_bound": float, "attack_trials": int, "attack_advantage": int,
    "attack_n_c": int, "attack_eta": float, "attack_p_s": float,
    "attack_tau": int,
}


def parse_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; later duplicates win."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _merge(args: argparse.Namespace, keys: dict[str, type]) -> dict:
    """Resolve settings: flag > config file > dataclass default."""
    file_values = parse_config_file(args.config) if args.config else {}
    merged = {}
    for key, cast in keys.items():
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = cast(flag_val)
        elif key in file_values:
            merged[key] = cast(file_values[key])
    return merged


def _build_constraints(args) -> AttackConstraints:
    return AttackConstraints(**_merge(args, _CONSTRAINT_KEYS))


def _build_approx(args) -> LinearApproxSpec:
    return LinearApproxSpec(**_merge(args, _APPROX_KEYS))


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="avalanche bit error rate")
    p.add_argument("--theta", type=float, help="max DES encryptions per frame")
    p.add_argument("--n-max", dest="n_max", type=float,
                   help="max plaintext/ciphertext pairs")
    p.add_argument("--t-m", dest="t_m", type=float,
                   help="threshold on the key-missing probability")
    p.add_argument("--t-f", dest="t_f", type=float,
                   help="threshold on the stage fault probability")
    p.add_argument("--nc-max", dest="nc_max", type=int,
                   help="cap on verification trials per candidate")
    p.add_argument("--epsilon", type=float,
                   help="bias of the linear approximation")
    p.add_argument("--config", help="flat key = value settings file")


def _outcome_lines(params: AttackParams, out: OutcomeProbabilities,
                   constraints: AttackConstraints) -> list[str]:
    budget = params.encryption_budget()
    ok = "ok" if budget <= constraints.theta else "VIOLATED"
    lines = [
        f"n_c = {params.n_c}",
        f"tau = {params.tau}",
        f"a = {params.a}",
        f"keys_examined = 2^{56 - params.a} = {params.keys_examined():.17g}",
        f"encryption_budget = n_c * 2^(56-a) = {budget:.17g}"
        f" (theta = {constraints.theta:.17g}: {ok})",
    ]
    for name in ("p_fault", "p_1", "p_m", "p_2", "p_f", "p_s",
                 "p_c", "p_e", "p_w"):
        lines.append(f"{name} = {getattr(out, name):.17g}")
    return lines


def cmd_sweep(args) -> int:
    merged = _merge(args, _SWEEP_KEYS)
    config = SweepConfig(
        constraints=_build_constraints(args),
        approx=_build_approx(args),
        **merged,
    )
    t0 = time.time()
    rows = run_sweep(config, workers=args.workers)
    csv_text = format_csv(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    best = max_secrecy_row(rows)
    print(f"# {len(rows)} points in {time.time() - t0:.2f}s; "
          f"max c_s = {best.c_s:.6g} at eta = {best.eta:.6g}",
          file=sys.stderr)
    return 0


def cmd_optimize(args) -> int:
    constraints = _build_constraints(args)
    approx = _build_approx(args)
    alpha = args.alpha if args.alpha is not None else 0.5
    params, out = optimize_parameters(args.eta, constraints, approx, alpha=alpha)
    print(f"eta = {args.eta:.17g}")
    print(f"alpha = {alpha:.17g}")
    for line in _outcome_lines(params, out, constraints):
        print(line)
    return 0


def cmd_capacity(args) -> int:
    constraints = _build_constraints(args)
    approx = _build_approx(args)
    alpha = args.alpha if args.alpha is not None else 0.5
    params, out = optimize_parameters(args.eta, constraints, approx, alpha=alpha)
    report = secrecy_capacity(alpha, args.eta, out)
    print(f"eta = {args.eta:.17g}")
    print(f"alpha = {alpha:.17g}")
    for line in _outcome_lines(params, out, constraints):
        print(line)
    print(f"c_b = {report.c_b:.17g}")
    print(f"c_e = {report.c_e:.17g}")
    print(f"c_s = {report.c_s:.17g}")
    return 0


def cmd_validate(args) -> int:
    config = ValidationConfig(**_merge(args, _VALIDATE_KEYS))
    report = run_validation(config)
    sys.stdout.write(report.to_text())
    return 0 if report.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisycfb",
        description="DES-CFB deliberate-noise secrecy workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="optimize the attack and price the "
                                     "channels over a noise-rate grid")
    p.add_argument("--eta-start", dest="eta_start", type=float)
    p.add_argument("--eta-end", dest="eta_end", type=float)
    p.add_argument("--eta-step", dest="eta_step", type=float)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes")
    _add_model_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="attack parameters and outcome "
                                        "probabilities at one noise rate")
    p.add_argument("--eta", type=float, required=True)
    _add_model_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("capacity", help="channel and secrecy capacities "
                                        "at one noise rate")
    p.add_argument("--eta", type=float, required=True)
    _add_model_flags(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("validate", help="Monte Carlo checks of the "
                                        "analytic model on real traces")
    p.add_argument("--eta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--frames", type=int)
    p.add_argument("--blocks-per-frame", dest="blocks_per_frame", type=int)
    p.add_argument("--reduced-key-bits", dest="reduced_key_bits", type=int)
    p.add_argument("--inflated-tau", dest="inflated_tau", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tv-bound", dest="tv_bound", type=float)
    p.add_argument("--attack-trials", dest="attack_trials", type=int)
    p.add_argument("--attack-advantage", dest="attack_advantage", type=int)
    p.add_argument("--attack-n-c", dest="attack_n_c", type=int)
    p.add_argument("--attack-eta", dest="attack_eta", type=float)
    p.add_argument("--attack-p-s", dest="attack_p_s", type=float)
    p.add_argument("--attack-tau", dest="attack_tau", type=int)
    p.add_argument("--config", help="flat key = value settings file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
