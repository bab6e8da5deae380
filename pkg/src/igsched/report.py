"""Deterministic text outputs: key=value reports and CSV tables.

Floats are written with repr (shortest round-trip decimal), keys keep
insertion order, and timing fields stay out of reports unless explicitly
requested, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import csv
import io

from .attribution import AttributionResult
from .bench import BenchReport
from .convergence import CSV_COLUMNS, ConvergenceSweep


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_report(pairs: dict) -> str:
    """One key=value line per entry; None values are skipped."""
    lines = [f"{k}={_fmt(v)}" for k, v in pairs.items() if v is not None]
    return "\n".join(lines) + "\n"


def write_report(path, pairs: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_report(pairs))


def format_csv(columns, rows) -> str:
    """CSV text with the documented header row; rows are dicts."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _fmt(row.get(c, "")) if row.get(c, "") != "" else ""
                         for c in columns})
    return buf.getvalue()


def write_csv(path, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(columns, rows))


def attribution_report(
    result: AttributionResult,
    config: dict | None = None,
    include_timing: bool = False,
) -> dict:
    """Flat audit dict for an attribution run.

    phi is emitted as its shape plus row-major values. Timing is excluded by
    default because it would break byte-determinism of the report.
    """
    pairs: dict = {}
    if config:
        for k, v in config.items():
            pairs[f"config.{k}"] = v
    pairs["phi.shape"] = " ".join(str(d) for d in result.phi.shape)
    pairs["phi.values"] = " ".join(repr(float(v)) for v in result.phi.flat())
    pairs["delta"] = result.delta
    pairs["f_input"] = result.f_input
    pairs["f_baseline"] = result.f_baseline
    pairs["total_steps"] = result.total_steps
    pairs["work.forwards"] = result.work.n_forward
    pairs["work.backwards"] = result.work.n_backward
    pairs["work.probe_forwards"] = result.work.n_probe_forward
    if result.schedule is not None:
        pairs.update(result.schedule.to_report_dict())
    if include_timing:
        pairs["timing.wall_s"] = result.wall_time
        pairs["timing.probe_s"] = result.probe_time
    return pairs


def sweep_rows(sweeps: list[ConvergenceSweep]) -> list[dict]:
    """CSV rows for delta-versus-m sweeps."""
    rows = []
    for sw in sweeps:
        for m, delta, work in sw.points:
            rows.append({
                "scheduler": sw.scheduler_id,
                "m": m,
                "delta": delta,
                "forwards": work.n_forward,
                "backwards": work.n_backward,
                "probe_forwards": work.n_probe_forward,
            })
    return rows


SWEEP_COLUMNS = ("scheduler", "m", "delta", "forwards", "backwards", "probe_forwards")

BENCH_COLUMNS = (
    "scheduler",
    "m",
    "rule",
    "batch_size",
    "warmup_runs",
    "measured_runs",
    "median_s",
    "mad_s",
    "forwards",
    "backwards",
    "probe_forwards",
    "counter_estimate",
    "overhead_time_fraction",
    "normalized_latency",
)


def bench_row(report: BenchReport, overhead_time: float | None = None) -> dict:
    work = report.work
    return {
        "scheduler": report.config.get("scheduler", ""),
        "m": report.config.get("m", ""),
        "rule": report.config.get("rule", ""),
        "batch_size": report.config.get("batch_size", ""),
        "warmup_runs": report.warmup_runs,
        "measured_runs": report.measured_runs,
        "median_s": report.median if report.median is not None else "",
        "mad_s": report.mad if report.mad is not None else "",
        "forwards": work.n_forward if work else "",
        "backwards": work.n_backward if work else "",
        "probe_forwards": work.n_probe_forward if work else "",
        "counter_estimate": report.counter_estimate
        if report.counter_estimate is not None else "",
        "overhead_time_fraction": overhead_time if overhead_time is not None else "",
        "normalized_latency": report.normalized_latency
        if report.normalized_latency is not None else "",
    }


def bench_report_pairs(report: BenchReport, overhead_time: float | None = None) -> dict:
    """key=value view of a bench report; includes per-run times (not deterministic)."""
    pairs: dict = {}
    for k, v in report.config.items():
        pairs[f"config.{k}"] = v
    pairs["median_s"] = report.median
    pairs["mad_s"] = report.mad
    pairs["times_s"] = " ".join(repr(t) for t in report.times)
    if report.work:
        pairs["work.forwards"] = report.work.n_forward
        pairs["work.backwards"] = report.work.n_backward
        pairs["work.probe_forwards"] = report.work.n_probe_forward
    pairs["counter_estimate"] = report.counter_estimate
    pairs["overhead_time_fraction"] = overhead_time
    pairs["normalized_latency"] = report.normalized_latency
    return pairs


def compare_csv(rows: list[dict]) -> str:
    return format_csv(CSV_COLUMNS, rows)
