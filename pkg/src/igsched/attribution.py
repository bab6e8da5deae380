"""Integrated-gradients attribution along a straight-line path.

phi_i = (x_i - x'_i) * sum_k weight_k * grad_i(x' + alpha_k (x - x')), with
the completeness delta |sum(phi) - (f(x) - f(x'))| as the convergence signal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .counters import WorkCounters
from .errors import ConfigError, DomainError
from .models import DifferentiableModel
from .paths import PathSpec, interpolate
from .quadrature import DEFAULT_RULE, alpha_grid
from .tensor import Tensor, sequential_sum

DEFAULT_BATCH_SIZE = 16
RECONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True)
class AttributionResult:
    """Per-feature attributions plus the evidence needed to audit them."""

    phi: Tensor
    delta: float
    f_input: float
    f_baseline: float
    total_steps: int
    work: WorkCounters
    schedule: Optional[object] = None
    segments: Optional[list] = None
    wall_time: Optional[float] = None
    probe_time: Optional[float] = None

    def __post_init__(self):
        rec = abs(self.phi.sum() - (self.f_input - self.f_baseline))
        if abs(rec - self.delta) > RECONSTRUCTION_TOL:
            raise DomainError(
                f"delta {self.delta!r} does not reconstruct from phi ({rec!r})"
            )


def completeness_delta(phi: Tensor, f_input: float, f_baseline: float) -> float:
    """|sum_i phi_i - (f_input - f_baseline)|, with a fixed reduction order."""
    return abs(phi.sum() - (float(f_input) - float(f_baseline)))


def weighted_gradient_sum(
    model: DifferentiableModel,
    path: PathSpec,
    alphas: np.ndarray,
    weights: np.ndarray,
    target_index: int,
    batch_size: int,
) -> np.ndarray:
    """sum_k weight_k * grad(x' + alpha_k dx), accumulated in batch order.

    Batches are packed to batch_size with a final ragged batch; partial sums
    are combined sequentially so repeated runs are bitwise identical.
    """
    if batch_size < 1:
        raise ConfigError("batch_size must be at least 1")
    points = interpolate(path, alphas)
    acc = np.zeros(path.size)
    for start in range(0, points.shape[0], batch_size):
        stop = start + batch_size
        grads = model.grad_array(points[start:stop], target_index)
        acc += weights[start:stop] @ grads
    return acc


def endpoint_outputs(model, path: PathSpec, target_index: int) -> tuple[float, float]:
    """f at the path endpoints, one batched call: (f_baseline, f_input)."""
    batch = interpolate(path, np.array([0.0, 1.0]))
    f = model.forward_array(batch, target_index)
    return float(f[0]), float(f[1])


def uniform_ig(
    model: DifferentiableModel,
    path: PathSpec,
    m: int,
    rule: str = DEFAULT_RULE,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> AttributionResult:
    """Single-stage IG with m uniform steps under the given quadrature rule."""
    t0 = time.perf_counter()
    target_index = model._check_target(path.target)
    alphas, weights = alpha_grid(rule, 0.0, 1.0, m)
    acc = weighted_gradient_sum(model, path, alphas, weights, target_index, batch_size)
    f_baseline, f_input = endpoint_outputs(model, path, target_index)
    phi = Tensor((path.difference() * acc).reshape(path.shape))
    delta = completeness_delta(phi, f_input, f_baseline)
    n_points = alphas.size
    return AttributionResult(
        phi=phi,
        delta=delta,
        f_input=f_input,
        f_baseline=f_baseline,
        total_steps=m,
        work=WorkCounters(n_points + 2, n_points, 0),
        wall_time=time.perf_counter() - t0,
        probe_time=0.0,
    )
