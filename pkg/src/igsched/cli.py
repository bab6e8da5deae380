"""Command-line front end.

Verbs: attribute, compare, bench, sweep. Exit codes: 0 success, 2
configuration error, 3 convergence failure, 4 transport error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench as bench_mod
from . import models as models_mod
from .attribution import uniform_ig
from .config import RunConfig, load_config_file, parse_float_list, parse_int_list
from .convergence import (
    CSV_COLUMNS,
    SchedulerConfig,
    compare_schedulers,
    search_threshold,
    sweep,
)
from .errors import ConfigError, IgschedError, ParseError
from .imaging import read_image, render_heatmap
from .models import TargetSpec
from .paths import PathSpec, make_baseline
from .remote import RemoteModel, TcpTransport
from .report import (
    BENCH_COLUMNS,
    SWEEP_COLUMNS,
    attribution_report,
    bench_report_pairs,
    bench_row,
    format_report,
    sweep_rows,
    write_csv,
    write_report,
)
from .scheduling import nonuniform_ig
from .tensor import Tensor

_IMAGE_SUFFIXES = (".pgm", ".ppm", ".pnm")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igsched",
        description="Integrated-gradients attribution with uniform and "
        "change-aware interpolation scheduling.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, summary in (
        ("attribute", "attribute one input and write a report (and heatmap)"),
        ("compare", "steps-to-threshold table for uniform vs nonuniform"),
        ("bench", "wall-clock benchmark of one scheduler configuration"),
        ("sweep", "delta versus m sweep for one scheduler configuration"),
    ):
        p = sub.add_parser(verb, help=summary)
        p.add_argument("--config", help="INI config file; flags override it")
        p.add_argument("--model", help="builtin model name (default SharpSigmoid1D)")
        p.add_argument("--weights", help="weights file to load the model from")
        p.add_argument("--endpoint", help="remote provider: 'tcp:host:port' or a command line")
        p.add_argument("--logit", action="store_const", const=True, default=None,
                       help="differentiate the pre-softmax score instead of the probability")
        p.add_argument("--input", help="input tensor: .pgm/.ppm image or whitespace-separated text")
        p.add_argument("--baseline", choices=["zero", "constant", "uniform_noise"])
        p.add_argument("--baseline-constant", dest="baseline_constant", type=float)
        p.add_argument("--noise-lo", dest="noise_lo", type=float)
        p.add_argument("--noise-hi", dest="noise_hi", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--target", type=int, help="target class index (default 1)")
        p.add_argument("--scheduler", choices=["uniform", "nonuniform"])
        p.add_argument("--n-int", dest="n_int", type=int)
        p.add_argument("--min-steps", dest="min_steps", type=int)
        p.add_argument("--m", type=int, help="total interpolation steps")
        p.add_argument("--delta-th", dest="delta_th", type=float,
                       help="convergence threshold; the step count is searched")
        p.add_argument("--rule", choices=["paper_inclusive", "left", "right",
                                          "midpoint", "trapezoid"])
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--m-start", dest="m_start", type=int)
        p.add_argument("--m-max", dest="m_max", type=int)
        p.add_argument("--timeout", type=float, help="remote call timeout in seconds")
        p.add_argument("--report", help="key=value report output path (default stdout)")
        p.add_argument("--csv", help="CSV output path")
        p.add_argument("--timing", action="store_const", const=True, default=None,
                       help="include wall-clock fields in the report (not byte-stable)")
        if verb == "attribute":
            p.add_argument("--heatmap", help="heatmap output path (.pgm)")
        if verb == "compare":
            p.add_argument("--delta-ths", dest="delta_ths", type=parse_float_list)
            p.add_argument("--n-ints", dest="n_ints", type=parse_int_list)
            p.add_argument("--latency-csv", dest="latency_csv",
                           help="also benchmark each found configuration")
        if verb in ("bench", "compare"):
            p.add_argument("--warmup", type=int)
            p.add_argument("--repeats", type=int)
        if verb == "sweep":
            p.add_argument("--m-grid", dest="m_grid", type=parse_int_list)
    return parser


def _build_config(args: argparse.Namespace) -> RunConfig:
    flag_values = {k: v for k, v in vars(args).items() if k not in ("verb", "config")}
    file_values = load_config_file(args.config) if args.config else {}
    cfg = RunConfig.from_sources(flag_values, file_values)
    cfg.validate(args.verb)
    return cfg


def _build_model(cfg: RunConfig):
    output = "logit" if cfg.logit else "prob"
    if cfg.endpoint:
        return RemoteModel.connect(cfg.endpoint, timeout=cfg.timeout)
    if cfg.weights:
        return models_mod.load_model(cfg.weights, output=output)
    name = cfg.model or "SharpSigmoid1D"
    if name not in models_mod.BUILTIN_VARIANTS:
        raise ConfigError(
            f"unknown model {name!r}; builtins: {sorted(models_mod.BUILTIN_VARIANTS)}"
        )
    if name != "SharpSigmoid1D":
        raise ConfigError(f"{name} has no default weights; pass --weights")
    return models_mod.SharpSigmoid1D(output=output)


def _load_input(cfg: RunConfig, model) -> Tensor:
    if cfg.input is None:
        return Tensor(np.ones(model.input_shape))
    lowered = cfg.input.lower()
    if lowered.endswith(_IMAGE_SUFFIXES):
        return read_image(cfg.input)
    with open(cfg.input, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"bad input value in {cfg.input}: {exc}") from None
    if values.size != model.input_size:
        raise ConfigError(
            f"input has {values.size} values but the model expects {model.input_size}"
        )
    return Tensor(values.reshape(model.input_shape))


def _build_path(cfg: RunConfig, model) -> PathSpec:
    x = _load_input(cfg, model)
    if x.shape != model.input_shape:
        if x.size != model.input_size:
            raise ConfigError(
                f"input shape {x.shape} does not match model shape {model.input_shape}"
            )
        x = x.reshape(model.input_shape)
    baseline = make_baseline(
        cfg.baseline, x.shape, constant=cfg.baseline_constant,
        seed=cfg.seed, lo=cfg.noise_lo, hi=cfg.noise_hi,
    )
    return PathSpec(input=x, baseline=baseline, target=TargetSpec(cfg.target))


def _scheduler(cfg: RunConfig) -> SchedulerConfig:
    return SchedulerConfig(
        kind=cfg.scheduler,
        n_int=cfg.n_int,
        rule=cfg.rule,
        batch_size=cfg.batch_size,
        min_steps=cfg.min_steps,
    )


def _config_echo(cfg: RunConfig, m) -> dict:
    echo = {
        "scheduler": cfg.scheduler,
        "rule": cfg.rule,
        "batch_size": cfg.batch_size,
        "seed": cfg.seed,
        "target": cfg.target,
        "baseline": cfg.baseline,
        "m": m,
    }
    if cfg.scheduler == "nonuniform":
        echo["n_int"] = cfg.n_int
        echo["min_steps"] = cfg.min_steps
    if cfg.delta_th is not None:
        echo["delta_th"] = cfg.delta_th
    return echo


def _emit_report(cfg: RunConfig, pairs: dict) -> None:
    if cfg.report:
        write_report(cfg.report, pairs)
    else:
        sys.stdout.write(format_report(pairs))


def _release_model(model) -> None:
    """Spawned providers get a clean shutdown; TCP providers persist, so
    only the connection is dropped."""
    if isinstance(model, RemoteModel):
        if isinstance(model.transport, TcpTransport):
            model.transport.close()
        else:
            model.close()


def cmd_attribute(cfg: RunConfig, model, path) -> int:
    sched = _scheduler(cfg)
    if cfg.delta_th is not None:
        m, result = search_threshold(
            model, path, sched, cfg.delta_th, cfg.m_start, cfg.m_max
        )
    else:
        m = cfg.m
        result = sched.run(model, path, m)
    pairs = attribution_report(result, _config_echo(cfg, m), include_timing=cfg.timing)
    _emit_report(cfg, pairs)
    heatmap_path = cfg.heatmap
    if heatmap_path is None and cfg.report and len(result.phi.shape) in (2, 3):
        heatmap_path = cfg.report + ".pgm"
    if heatmap_path is not None:
        render_heatmap(result.phi, heatmap_path)
    return 0


def cmd_compare(cfg: RunConfig, model, path) -> int:
    rows = compare_schedulers(
        model, path, cfg.delta_ths, cfg.n_ints,
        rule=cfg.rule, batch_size=cfg.batch_size, min_steps=cfg.min_steps,
        m_start=cfg.m_start, m_max=cfg.m_max,
    )
    if not any(row["steps"] != "" for row in rows):
        raise ConfigError("no scheduler reached any requested threshold")
    if cfg.csv:
        write_csv(cfg.csv, CSV_COLUMNS, rows)
    else:
        from .report import format_csv

        sys.stdout.write(format_csv(CSV_COLUMNS, rows))
    if cfg.latency_csv:
        _write_compare_latencies(cfg, model, path, rows)
    return 0


def _write_compare_latencies(cfg: RunConfig, model, path, rows) -> None:
    """Benchmark each filled comparison row at its found step count."""
    jobs = []
    for row in rows:
        if row["steps"] == "":
            continue
        kind = row["scheduler"]
        sched = SchedulerConfig(
            kind=kind,
            n_int=row["n_int"] if kind == "nonuniform" else 1,
            rule=cfg.rule,
            batch_size=cfg.batch_size,
            min_steps=cfg.min_steps,
        )
        report = bench_mod.benchmark(
            model, path, sched, int(row["steps"]),
            warmup=cfg.warmup, repeats=cfg.repeats,
            extra_config={"delta_th": row["delta_th"]},
        )
        jobs.append((row, report))
    normalized = bench_mod.normalize_latencies([rep for _, rep in jobs])
    out_rows = []
    for (row, _), rep in zip(jobs, normalized):
        out_rows.append({
            "scheduler": row["scheduler"],
            "n_int": row["n_int"],
            "delta_th": row["delta_th"],
            "steps": row["steps"],
            "median_s": rep.median,
            "mad_s": rep.mad,
            "normalized_latency": rep.normalized_latency,
        })
    write_csv(
        cfg.latency_csv,
        ("scheduler", "n_int", "delta_th", "steps", "median_s", "mad_s",
         "normalized_latency"),
        out_rows,
    )


def cmd_bench(cfg: RunConfig, model, path) -> int:
    sched = _scheduler(cfg)
    if cfg.delta_th is not None:
        m, _ = search_threshold(model, path, sched, cfg.delta_th, cfg.m_start, cfg.m_max)
    else:
        m = cfg.m
    report = bench_mod.benchmark(
        model, path, sched, m, warmup=cfg.warmup, repeats=cfg.repeats,
        extra_config={"seed": cfg.seed},
    )
    overhead_time = bench_mod.overhead_fraction(report)
    pairs = bench_report_pairs(report, overhead_time)
    _emit_report(cfg, pairs)
    if cfg.csv:
        write_csv(cfg.csv, BENCH_COLUMNS, [bench_row(report, overhead_time)])
    return 0


def cmd_sweep(cfg: RunConfig, model, path) -> int:
    sched = _scheduler(cfg)
    result = sweep(model, path, sched, cfg.m_grid, threshold=cfg.delta_th)
    rows = sweep_rows([result])
    if cfg.csv:
        write_csv(cfg.csv, SWEEP_COLUMNS, rows)
    else:
        from .report import format_csv

        sys.stdout.write(format_csv(SWEEP_COLUMNS, rows))
    if cfg.report:
        pairs = {
            "scheduler": result.scheduler_id,
            "threshold": result.threshold,
            "steps_at_threshold": result.steps_at_threshold,
        }
        write_report(cfg.report, pairs)
    return 0


_VERBS = {
    "attribute": cmd_attribute,
    "compare": cmd_compare,
    "bench": cmd_bench,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        model = _build_model(cfg)
        try:
            path = _build_path(cfg, model)
            return _VERBS[args.verb](cfg, model, path)
        finally:
            _release_model(model)
    except IgschedError as exc:
        print(f"igsched: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
