"""Convergence control: delta-versus-m sweeps and threshold searches.

Step counts are read off a doubling grid because delta(m) is not pointwise
monotone; the contract is "first grid point meeting the threshold".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .attribution import DEFAULT_BATCH_SIZE, AttributionResult, uniform_ig
from .errors import ConfigError, ConvergenceError, DomainError
from .models import DifferentiableModel
from .paths import PathSpec
from .quadrature import DEFAULT_RULE
from .scheduling import nonuniform_ig

DEFAULT_M_START = 16
DEFAULT_M_MAX = 8192
DEFAULT_N_INTS = (2, 4, 8)

CSV_COLUMNS = (
    "scheduler",
    "n_int",
    "delta_th",
    "steps",
    "forwards",
    "backwards",
    "reduction_ratio",
    "overhead_fraction",
)


@dataclass(frozen=True)
class SchedulerConfig:
    """Which scheduler to run and with what fixed parameters."""

    kind: str = "uniform"
    n_int: int = 1
    rule: str = DEFAULT_RULE
    batch_size: int = DEFAULT_BATCH_SIZE
    min_steps: int = 1

    def __post_init__(self):
        if self.kind not in ("uniform", "nonuniform"):
            raise ConfigError(f"unknown scheduler kind {self.kind!r}")
        if self.kind == "nonuniform" and self.n_int < 1:
            raise ConfigError("n_int must be at least 1")

    @property
    def scheduler_id(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        return f"nonuniform(n_int={self.n_int})"

    @property
    def min_total_steps(self) -> int:
        return self.n_int * self.min_steps if self.kind == "nonuniform" else 1

    def run(self, model: DifferentiableModel, path: PathSpec, m: int) -> AttributionResult:
        if self.kind == "uniform":
            return uniform_ig(model, path, m, rule=self.rule, batch_size=self.batch_size)
        return nonuniform_ig(
            model,
            path,
            m,
            self.n_int,
            rule=self.rule,
            batch_size=self.batch_size,
            min_steps=self.min_steps,
        )


@dataclass(frozen=True)
class ConvergenceSweep:
    """(m, delta, work) samples for one scheduler, plus the threshold crossing."""

    scheduler_id: str
    points: tuple
    threshold: Optional[float] = None
    steps_at_threshold: Optional[int] = None


def sweep(
    model: DifferentiableModel,
    path: PathSpec,
    sched: SchedulerConfig,
    m_grid,
    threshold: Optional[float] = None,
) -> ConvergenceSweep:
    """One attribution per grid point; records delta and work counters."""
    grid = [int(m) for m in m_grid]
    if not grid:
        raise ConfigError("m_grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("m_grid must be strictly ascending")
    if grid[0] < sched.min_total_steps:
        raise ConfigError(
            f"grid starts below the scheduler minimum {sched.min_total_steps}"
        )
    points = []
    steps_at = None
    for m in grid:
        res = sched.run(model, path, m)
        points.append((m, res.delta, res.work))
        if threshold is not None and steps_at is None and res.delta <= threshold:
            steps_at = m
    return ConvergenceSweep(
        scheduler_id=sched.scheduler_id,
        points=tuple(points),
        threshold=threshold,
        steps_at_threshold=steps_at,
    )


def search_threshold(
    model: DifferentiableModel,
    path: PathSpec,
    sched: SchedulerConfig,
    delta_th: float,
    m_start: int = DEFAULT_M_START,
    m_max: int = DEFAULT_M_MAX,
) -> tuple[int, AttributionResult]:
    """Doubling search; returns the first passing m with its attribution."""
    if delta_th <= 0:
        raise DomainError("delta_th must be positive")
    if m_start < 1:
        raise DomainError("m_start must be at least 1")
    m = max(m_start, sched.min_total_steps)
    best: tuple[int, float] | None = None
    while m <= m_max:
        res = sched.run(model, path, m)
        if res.delta <= delta_th:
            return m, res
        if best is None or res.delta < best[1]:
            best = (m, res.delta)
        m *= 2
    best_m, best_delta = best if best else (0, float("inf"))
    raise ConvergenceError(
        f"{sched.scheduler_id}: delta_th={delta_th} unreachable within "
        f"m_max={m_max}; best delta {best_delta} at m={best_m}",
        best_m=best_m,
        best_delta=best_delta,
    )


def min_steps_for_threshold(
    model: DifferentiableModel,
    path: PathSpec,
    sched: SchedulerConfig,
    delta_th: float,
    m_start: int = DEFAULT_M_START,
    m_max: int = DEFAULT_M_MAX,
) -> int:
    """First m on the doubling grid m_start, 2 m_start, ... with delta <= delta_th.

    Non-uniform schedulers start at max(m_start, n_int * min_steps) so the
    allocation floor is always satisfiable.
    """
    m, _ = search_threshold(model, path, sched, delta_th, m_start, m_max)
    return m


def compare_schedulers(
    model: DifferentiableModel,
    path: PathSpec,
    delta_ths,
    n_ints=DEFAULT_N_INTS,
    rule: str = DEFAULT_RULE,
    batch_size: int = DEFAULT_BATCH_SIZE,
    min_steps: int = 1,
    m_start: int = DEFAULT_M_START,
    m_max: int = DEFAULT_M_MAX,
) -> list[dict]:
    """Steps-to-threshold table rows for uniform and each nonuniform config.

    Row keys match CSV_COLUMNS. reduction_ratio is the step-reduction ratio
    versus uniform (1.0 for uniform itself); overhead_fraction is stage-1
    forwards over total forwards. Cells a search could not fill (threshold
    unreachable) are left empty rather than failing the whole table.
    """
    delta_ths = list(delta_ths)
    if not delta_ths or not list(n_ints):
        raise ConfigError("need at least one delta_th and one n_int")
    schedulers = [SchedulerConfig("uniform", rule=rule, batch_size=batch_size)]
    schedulers += [
        SchedulerConfig("nonuniform", n_int=int(n), rule=rule,
                        batch_size=batch_size, min_steps=min_steps)
        for n in n_ints
    ]
    rows = []
    for delta_th in delta_ths:
        uniform_steps = None
        for sched in schedulers:
            row = {
                "scheduler": "uniform" if sched.kind == "uniform" else "nonuniform",
                "n_int": "" if sched.kind == "uniform" else sched.n_int,
                "delta_th": delta_th,
                "steps": "",
                "forwards": "",
                "backwards": "",
                "reduction_ratio": "",
                "overhead_fraction": "",
            }
            try:
                m, res = search_threshold(model, path, sched, delta_th, m_start, m_max)
            except ConvergenceError:
                rows.append(row)
                continue
            row["steps"] = m
            row["forwards"] = res.work.n_forward
            row["backwards"] = res.work.n_backward
            row["overhead_fraction"] = res.work.n_probe_forward / res.work.n_forward
            if sched.kind == "uniform":
                uniform_steps = m
                row["reduction_ratio"] = 1.0
            elif uniform_steps is not None:
                row["reduction_ratio"] = uniform_steps / m
            rows.append(row)
    return rows
