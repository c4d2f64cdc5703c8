"""Noise-rate sweep: re-optimize the attack and price the channels at
every grid point, emitting one CSV row per eta.

The (tau, n_c) searches are warm-started from the previous grid point
because both grow slowly in eta; correctness of the warm start is spot
checked by periodic cold recomputation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .attack import (
    AttackConstraints,
    AttackParams,
    LinearApproxSpec,
    OutcomeProbabilities,
    optimize_parameters,
)
from .channel import secrecy_capacity

CSV_COLUMNS = (
    "eta", "n_c", "tau", "a",
    "p_s", "p_m", "p_f", "p_c", "p_e", "p_w",
    "c_b", "c_e", "c_s",
)


@dataclass(frozen=True)
class SweepConfig:
    eta_start: float = 1e-4
    eta_end: float = 0.05
    eta_step: float = 1e-4
    alpha: float = 0.5
    constraints: AttackConstraints = field(default_factory=AttackConstraints)
    approx: LinearApproxSpec = field(default_factory=LinearApproxSpec)

    def __post_init__(self):
        if self.eta_step <= 0:
            raise ValueError("eta_step must be positive")
        if self.eta_start > self.eta_end:
            raise ValueError("eta_start must not exceed eta_end")
        if not 0.0 <= self.eta_start < 0.5 or self.eta_end >= 0.5:
            raise ValueError("eta grid must lie in [0, 0.5)")

    def grid(self) -> list[float]:
        n = int(round((self.eta_end - self.eta_start) / self.eta_step)) + 1
        return [self.eta_start + i * self.eta_step for i in range(n)]


@dataclass(frozen=True)
class SweepRow:
    eta: float
    params: AttackParams
    outcomes: OutcomeProbabilities
    c_b: float
    c_e: float
    c_s: float

    def csv_values(self) -> tuple:
        o = self.outcomes
        return (self.eta, self.params.n_c, self.params.tau, self.params.a,
                o.p_s, o.p_m, o.p_f, o.p_c, o.p_e, o.p_w,
                self.c_b, self.c_e, self.c_s)


def _point(config: SweepConfig, eta: float,
           warm: AttackParams | None) -> SweepRow:
    params, outcomes = optimize_parameters(
        eta, config.constraints, config.approx, alpha=config.alpha,
        warm_start=warm,
    )
    report = secrecy_capacity(config.alpha, eta, outcomes)
    return SweepRow(eta=eta, params=params, outcomes=outcomes,
                    c_b=report.c_b, c_e=report.c_e, c_s=report.c_s)


def _chunk(args: tuple[SweepConfig, list[float], int]) -> list[SweepRow]:
    config, etas, recheck_every = args
    rows: list[SweepRow] = []
    warm: AttackParams | None = None
    for i, eta in enumerate(etas):
        row = _point(config, eta, warm)
        if recheck_every and i % recheck_every == 0:
            cold = _point(config, eta, None)
            if cold.params != row.params:
                raise ArithmeticError(
                    f"warm-start cache invalid at eta={eta}: "
                    f"{row.params} vs cold {cold.params}"
                )
        rows.append(row)
        warm = row.params
    return rows


def run_sweep(
    config: SweepConfig | None = None,
    workers: int = 1,
    recheck_every: int = 50,
) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in eta order regardless
    of how the grid was split across workers."""
    config = config or SweepConfig()
    grid = config.grid()
    if workers <= 1 or len(grid) < 4 * workers:
        return _chunk((config, grid, recheck_every))
    size = math.ceil(len(grid) / workers)
    chunks = [grid[i:i + size] for i in range(0, len(grid), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk, [(config, c, recheck_every) for c in chunks]))
    return [row for part in parts for row in part]


def format_csv(rows: list[SweepRow]) -> str:
    """Fixed column order, 17 significant digits, LF line endings."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        vals = []
        for v in row.csv_values():
            vals.append(str(v) if isinstance(v, int) else f"{v:.17g}")
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def write_csv(rows: list[SweepRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(rows))


def max_secrecy_row(rows: list[SweepRow]) -> SweepRow:
    return max(rows, key=lambda r: r.c_s)
