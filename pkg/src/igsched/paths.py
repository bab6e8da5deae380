"""Straight-line attribution paths and baseline construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputShapeError
from .models import TargetSpec
from .tensor import Tensor, as_tensor


@dataclass(frozen=True)
class PathSpec:
    """Straight line from baseline x' to input x, with the attributed class."""

    input: Tensor
    baseline: Tensor
    target: TargetSpec

    def __post_init__(self):
        object.__setattr__(self, "input", as_tensor(self.input))
        object.__setattr__(self, "baseline", as_tensor(self.baseline))
        if self.input.shape != self.baseline.shape:
            raise InputShapeError(
                f"input shape {self.input.shape} != baseline shape "
                f"{self.baseline.shape}"
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return self.input.shape

    @property
    def size(self) -> int:
        return self.input.size

    def difference(self) -> np.ndarray:
        """Flat x - x'."""
        return self.input.flat() - self.baseline.flat()


def interpolate(path: PathSpec, alphas) -> np.ndarray:
    """Flat (n, size) batch of x' + alpha*(x - x') rows.

    The endpoint invariant is bitwise: alpha == 0 returns the baseline and
    alpha == 1 the input exactly, copied rather than recomputed, since the
    interior formula does not round-trip endpoints in float arithmetic.
    """
    al = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if al.size and (al.min() < 0.0 or al.max() > 1.0):
        raise DomainError("alphas must lie in [0, 1]")
    base = path.baseline.flat()
    diff = path.difference()
    out = base[None, :] + al[:, None] * diff[None, :]
    at_zero = al == 0.0
    at_one = al == 1.0
    if at_zero.any():
        out[at_zero] = base
    if at_one.any():
        out[at_one] = path.input.flat()
    return np.ascontiguousarray(out)


def make_baseline(kind: str, shape, constant: float = 0.0, seed: int = 0,
                  lo: float = 0.0, hi: float = 1.0) -> Tensor:
    """Baseline tensor: 'zero', 'constant', or seeded 'uniform_noise'."""
    shape = tuple(int(d) for d in np.atleast_1d(shape))
    if any(d <= 0 for d in shape):
        raise DomainError("shape dimensions must be positive")
    if kind == "zero":
        return Tensor(np.zeros(shape))
    if kind == "constant":
        return Tensor(np.full(shape, float(constant)))
    if kind == "uniform_noise":
        if not lo < hi:
            raise DomainError("need lo < hi for uniform noise")
        rng = np.random.default_rng(seed)
        return Tensor(rng.uniform(lo, hi, size=shape))
    raise DomainError(f"unknown baseline kind {kind!r}")
