"""Dense 64-bit real tensor backed by a numpy array.

The engine computes on raw numpy internally; Tensor is the validated public
carrier for inputs, baselines, gradients, and attributions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputShapeError


@dataclass(frozen=True)
class Tensor:
    """Immutable dense array of 64-bit reals with a fixed shape."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor elements must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)

    def reshape(self, shape: tuple[int, ...]) -> "Tensor":
        return Tensor(self.data.reshape(shape))

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor(self.data + other.data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor(self.data - other.data)

    def __mul__(self, scalar: float) -> "Tensor":
        return Tensor(self.data * float(scalar))

    __rmul__ = __mul__

    def sum(self) -> float:
        # Fixed sequential order so repeated runs are bitwise identical.
        return float(sequential_sum(self.data.reshape(-1)))

    def _check_same_shape(self, other: "Tensor"):
        if self.shape != other.shape:
            raise InputShapeError(
                f"shape mismatch: {self.shape} vs {other.shape}"
            )


def sequential_sum(values: np.ndarray) -> float:
    """Left-to-right accumulation; the engine's one true reduction order.

    np.sum uses pairwise reduction whose grouping can change with internal
    blocking, so determinism-sensitive paths use this instead.
    """
    acc = 0.0
    for v in values:
        acc += float(v)
    return acc


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(np.asarray(value))
