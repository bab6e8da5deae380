"""Wall-clock benchmark harness with warm-up, repetition, and work accounting.

Median and median absolute deviation summarize the measured runs; work
counters are the platform-independent signal and must be identical across
repeats of the same job.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, replace
from typing import Optional

from .convergence import SchedulerConfig
from .counters import WorkCounters
from .errors import ConfigError, IgschedError, MeasurementError
from .models import DifferentiableModel
from .paths import PathSpec


@dataclass(frozen=True)
class BenchReport:
    """Measured latencies plus the echoed configuration that produced them."""

    config: dict
    warmup_runs: int
    measured_runs: int
    times: tuple
    probe_times: tuple
    median: Optional[float]
    mad: Optional[float]
    work: Optional[WorkCounters]
    counter_estimate: Optional[float]
    normalized_latency: Optional[float] = None


def _summarize(times) -> tuple[Optional[float], Optional[float]]:
    if not times:
        return None, None
    med = statistics.median(times)
    mad = statistics.median([abs(t - med) for t in times])
    return med, mad


def config_echo(sched: SchedulerConfig, m: int, warmup: int, repeats: int,
                extra: Optional[dict] = None) -> dict:
    echo = {
        "scheduler": sched.scheduler_id,
        "m": m,
        "rule": sched.rule,
        "batch_size": sched.batch_size,
        "threads": 1,
        "warmup_runs": warmup,
        "measured_runs": repeats,
    }
    if extra:
        echo.update(extra)
    return echo


def benchmark(
    model: DifferentiableModel,
    path: PathSpec,
    sched: SchedulerConfig,
    m: int,
    warmup: int = 3,
    repeats: int = 10,
    extra_config: Optional[dict] = None,
) -> BenchReport:
    """Warm up unmeasured, then measure `repeats` serial runs.

    Counters must match across runs (the job is deterministic); an attribution
    error aborts the job and carries the partial report on the exception.
    """
    if repeats < 3:
        raise ConfigError("repeats must be at least 3")
    if warmup < 0:
        raise ConfigError("warmup must be non-negative")
    echo = config_echo(sched, m, warmup, repeats, extra_config)
    times: list[float] = []
    probe_times: list[float] = []
    work: Optional[WorkCounters] = None
    try:
        for _ in range(warmup):
            sched.run(model, path, m)
        for _ in range(repeats):
            t0 = time.perf_counter()
            res = sched.run(model, path, m)
            times.append(time.perf_counter() - t0)
            probe_times.append(res.probe_time or 0.0)
            if work is None:
                work = res.work
            elif res.work != work:
                raise MeasurementError(
                    f"work counters changed between runs: {work} vs {res.work}"
                )
    except IgschedError as exc:
        med, mad = _summarize(times)
        exc.partial_report = BenchReport(
            config=echo,
            warmup_runs=warmup,
            measured_runs=len(times),
            times=tuple(times),
            probe_times=tuple(probe_times),
            median=med,
            mad=mad,
            work=work,
            counter_estimate=work.probe_estimate() if work else None,
        )
        raise
    med, mad = _summarize(times)
    return BenchReport(
        config=echo,
        warmup_runs=warmup,
        measured_runs=repeats,
        times=tuple(times),
        probe_times=tuple(probe_times),
        median=med,
        mad=mad,
        work=work,
        counter_estimate=work.probe_estimate() if work else None,
    )


def overhead_fraction(report: BenchReport) -> float:
    """Stage-1 share of the measured wall time (0.0 for uniform jobs)."""
    med, _ = _summarize(report.times)
    if not med:
        raise MeasurementError("total measured time is zero")
    probe_med = statistics.median(report.probe_times) if report.probe_times else 0.0
    return probe_med / med


def normalize_latencies(reports: list[BenchReport]) -> list[BenchReport]:
    """Divide every median by the set minimum; fastest gets exactly 1.0."""
    if not reports:
        raise ConfigError("no reports to normalize")
    medians = [r.median for r in reports]
    if any(m is None or m <= 0 for m in medians):
        raise MeasurementError("cannot normalize: missing or zero medians")
    fastest = min(medians)
    return [replace(r, normalized_latency=r.median / fastest) for r in reports]
