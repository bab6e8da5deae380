"""Integrated-gradients attribution with change-aware step scheduling.

The package computes path-integral feature attributions for batched
differentiable models. Interpolation points are laid out either on one
uniform grid or by a two-stage scheduler that probes the path first and
concentrates steps where the output actually moves. A convergence layer
searches for the cheapest step count meeting a completeness threshold,
and a bench layer measures wall-clock cost with honest work counters.

Numerical kernels run through a compiled extension when it is available
and fall back to a pure NumPy implementation otherwise; see
``igsched.kernels``.
"""

from .attribution import AttributionResult, completeness_delta, uniform_ig
from .bench import BenchReport, benchmark, normalize_latencies, overhead_fraction
from .convergence import (
    ConvergenceSweep,
    SchedulerConfig,
    compare_schedulers,
    min_steps_for_threshold,
    search_threshold,
    sweep,
)
from .counters import WorkCounters
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    IgschedError,
    InputShapeError,
    MeasurementError,
    ParseError,
    ProtocolError,
    ProviderError,
    TargetError,
    TransportError,
)
from .models import (
    AffineProbability,
    BuiltinModel,
    DifferentiableModel,
    LinearSoftmax,
    LogisticScalar,
    MLP2,
    SharpSigmoid1D,
    TargetSpec,
    finite_difference_gradient,
    load_model,
    save_model,
)
from .paths import PathSpec, interpolate, make_baseline
from .quadrature import DEFAULT_RULE, RULES, alpha_grid, point_count
from .remote import RemoteModel
from .report import (
    BENCH_COLUMNS,
    SWEEP_COLUMNS,
    attribution_report,
    bench_report_pairs,
    bench_row,
    compare_csv,
    format_csv,
    format_report,
    sweep_rows,
    write_csv,
    write_report,
)
from .scheduling import (
    IntervalSchedule,
    allocate_steps,
    largest_remainder,
    nonuniform_ig,
    normalized_delta_f,
    probe_boundaries,
)
from .tensor import Tensor, as_tensor

__version__ = "0.1.0"

__all__ = [
    "AffineProbability",
    "AttributionResult",
    "BENCH_COLUMNS",
    "BenchReport",
    "BuiltinModel",
    "ConfigError",
    "ConvergenceError",
    "ConvergenceSweep",
    "DEFAULT_RULE",
    "DifferentiableModel",
    "DomainError",
    "IgschedError",
    "InputShapeError",
    "IntervalSchedule",
    "LinearSoftmax",
    "LogisticScalar",
    "MLP2",
    "MeasurementError",
    "ParseError",
    "PathSpec",
    "ProtocolError",
    "ProviderError",
    "RULES",
    "RemoteModel",
    "SWEEP_COLUMNS",
    "SchedulerConfig",
    "SharpSigmoid1D",
    "TargetError",
    "TargetSpec",
    "Tensor",
    "TransportError",
    "WorkCounters",
    "allocate_steps",
    "alpha_grid",
    "as_tensor",
    "attribution_report",
    "bench_report_pairs",
    "bench_row",
    "benchmark",
    "compare_csv",
    "compare_schedulers",
    "completeness_delta",
    "finite_difference_gradient",
    "format_csv",
    "format_report",
    "interpolate",
    "largest_remainder",
    "load_model",
    "make_baseline",
    "min_steps_for_threshold",
    "nonuniform_ig",
    "normalize_latencies",
    "normalized_delta_f",
    "overhead_fraction",
    "point_count",
    "probe_boundaries",
    "save_model",
    "sweep",
    "sweep_rows",
    "search_threshold",
    "uniform_ig",
    "write_csv",
    "write_report",
    "__version__",
]
