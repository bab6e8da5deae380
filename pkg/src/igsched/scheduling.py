"""Two-stage change-aware scheduler.

Stage 1 probes the model's probability at n_int equal interval boundaries
and allocates the step budget proportionally to the square root of each
interval's normalized probability change. Stage 2 runs uniform IG inside
every interval and stitches the segment attributions in interval order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .attribution import (
    DEFAULT_BATCH_SIZE,
    AttributionResult,
    completeness_delta,
    weighted_gradient_sum,
)
from .counters import WorkCounters
from .errors import ConfigError, DomainError, InputShapeError
from .models import DifferentiableModel
from .paths import PathSpec, interpolate
from .quadrature import DEFAULT_RULE, alpha_grid
from .tensor import Tensor


@dataclass(frozen=True)
class IntervalSchedule:
    """Stage-1 outcome: boundaries, probe values, changes, and step counts."""

    boundaries: np.ndarray
    boundary_probs: np.ndarray
    delta_f: np.ndarray
    steps: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.float64)
        p = np.asarray(self.boundary_probs, dtype=np.float64)
        df = np.asarray(self.delta_f, dtype=np.float64)
        s = np.asarray(self.steps, dtype=np.int64)
        if b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0):
            raise DomainError("boundaries must increase strictly from 0 to 1")
        if not (len(s) == len(df) == len(b) - 1 == len(p) - 1):
            raise DomainError("schedule lengths are inconsistent")
        if np.any(s < 1):
            raise DomainError("every interval needs at least one step")
        for name, arr in (("boundaries", b), ("boundary_probs", p),
                          ("delta_f", df), ("steps", s)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_int(self) -> int:
        return len(self.steps)

    @property
    def m_total(self) -> int:
        return int(self.steps.sum())

    def to_report_dict(self) -> dict:
        """Flat audit view for the key=value report format."""
        return {
            "schedule.n_int": self.n_int,
            "schedule.boundaries": " ".join(repr(float(v)) for v in self.boundaries),
            "schedule.boundary_probs": " ".join(repr(float(v)) for v in self.boundary_probs),
            "schedule.delta_f": " ".join(repr(float(v)) for v in self.delta_f),
            "schedule.steps": " ".join(str(int(v)) for v in self.steps),
        }


def probe_boundaries(model: DifferentiableModel, path: PathSpec, n_int: int):
    """f at the n_int+1 equal boundaries: exactly n_int+1 forward passes."""
    if n_int < 1:
        raise ConfigError("n_int must be at least 1")
    target_index = model._check_target(path.target)
    boundaries = np.linspace(0.0, 1.0, n_int + 1)
    probs = model.forward_array(interpolate(path, boundaries), target_index)
    return boundaries, np.asarray(probs, dtype=np.float64)


def largest_remainder(quotas: np.ndarray, total: int) -> np.ndarray:
    """Round fractional quotas to integers summing exactly to total.

    Floors first, then hands the leftover units out by descending fractional
    part, lowest index on ties. Monotone: a strictly larger quota never
    rounds below a smaller one.
    """
    quotas = np.asarray(quotas, dtype=np.float64)
    steps = np.floor(quotas).astype(np.int64)
    remainder = int(total - steps.sum())
    if remainder < 0 or remainder > quotas.size:
        raise ConfigError(
            f"quotas summing to {float(quotas.sum())!r} cannot round to {total}"
        )
    order = np.lexsort((np.arange(quotas.size), -(quotas - steps)))
    steps[order[:remainder]] += 1
    return steps


def allocate_steps(boundary_probs, m_total: int, min_steps: int = 1) -> np.ndarray:
    """Largest-remainder apportionment of m_total over sqrt-change shares.

    Shares follow sqrt of the normalized per-interval |change|; an all-zero
    change falls back to equal shares. Intervals below min_steps are lifted
    and the deficit is taken from the currently largest allocations, so the
    lift can demote a donor below an untouched equal-sized interval.
    """
    probs = np.asarray(boundary_probs, dtype=np.float64)
    n = probs.size - 1
    if n < 1:
        raise ConfigError("need at least two boundary probes")
    if min_steps < 1:
        raise ConfigError("min_steps must be at least 1")
    if m_total < n * min_steps:
        raise ConfigError(
            f"m_total={m_total} cannot give {n} intervals {min_steps} steps each"
        )
    steps = largest_remainder(m_total * _shares(probs), m_total)
    deficit = int(np.sum(np.maximum(0, min_steps - steps)))
    steps = np.maximum(steps, min_steps)
    while deficit > 0:
        candidates = np.flatnonzero(steps > min_steps)
        take = candidates[np.argmax(steps[candidates])]
        steps[take] -= 1
        deficit -= 1
    return steps


def _shares(boundary_probs: np.ndarray) -> np.ndarray:
    raw = np.abs(np.diff(boundary_probs))
    total = raw.sum()
    n = raw.size
    if total == 0.0:
        return np.full(n, 1.0 / n)
    root = np.sqrt(raw / total)
    return root / root.sum()


def normalized_delta_f(boundary_probs: np.ndarray) -> np.ndarray:
    """D1 normalization: |per-interval change| / sum of |changes| (zeros if flat)."""
    raw = np.abs(np.diff(np.asarray(boundary_probs, dtype=np.float64)))
    total = raw.sum()
    if total == 0.0:
        return np.zeros_like(raw)
    return raw / total


def stitch_segments(segments) -> Tensor:
    """Elementwise sum of segment attributions, in interval-index order."""
    if not segments:
        raise DomainError("no segments to stitch")
    first = segments[0]
    acc = np.array(first.data, dtype=np.float64, copy=True)
    for seg in segments[1:]:
        if seg.shape != first.shape:
            raise InputShapeError(
                f"segment shape {seg.shape} != {first.shape}"
            )
        acc += seg.data
    return Tensor(acc)


def nonuniform_ig(
    model: DifferentiableModel,
    path: PathSpec,
    m_total: int,
    n_int: int,
    rule: str = DEFAULT_RULE,
    batch_size: int = DEFAULT_BATCH_SIZE,
    min_steps: int = 1,
) -> AttributionResult:
    """Two-stage IG: probe, allocate, run uniform IG per interval, stitch.

    With n_int=1 this degenerates to uniform_ig bit for bit: one interval
    covering [0, 1] uses the same grid, the same accumulation helper, and the
    same endpoint evaluations (the two probes).
    """
    t0 = time.perf_counter()
    target_index = model._check_target(path.target)
    boundaries, probs = probe_boundaries(model, path, n_int)
    steps = allocate_steps(probs, m_total, min_steps)
    probe_elapsed = time.perf_counter() - t0

    schedule = IntervalSchedule(boundaries, probs, normalized_delta_f(probs), steps)
    diff = path.difference()
    segments = []
    n_points = 0
    for j in range(n_int):
        alphas, weights = alpha_grid(
            rule, float(boundaries[j]), float(boundaries[j + 1]), int(steps[j])
        )
        acc = weighted_gradient_sum(
            model, path, alphas, weights, target_index, batch_size
        )
        segments.append(Tensor((diff * acc).reshape(path.shape)))
        n_points += alphas.size

    phi = stitch_segments(segments)
    # Eq. 3 endpoints come from the stage-1 probes at alpha 0 and 1.
    f_baseline = float(probs[0])
    f_input = float(probs[-1])
    delta = completeness_delta(phi, f_input, f_baseline)
    return AttributionResult(
        phi=phi,
        delta=delta,
        f_input=f_input,
        f_baseline=f_baseline,
        total_steps=m_total,
        work=WorkCounters(n_points + n_int + 1, n_points, n_int + 1),
        schedule=schedule,
        segments=segments,
        wall_time=time.perf_counter() - t0,
        probe_time=probe_elapsed,
    )
