"""Closed-form mirrors of the engine's builtin models.

Forward passes return target-class probabilities; gradients are the
analytic derivatives of those probabilities with respect to the input.
The scalar-sigmoid variants evaluate exp through libm (math.exp) element
by element so a 64-bit provider reproduces the engine's kernels bit for
bit; the softmax variants use vectorized numpy, comfortably inside the
protocol's 1e-4 conformance tolerance. `precision="float32"` computes in
single precision to exercise that tolerance deliberately.
"""

from __future__ import annotations

import math

import numpy as np


def _sigmoid_scalar(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class MirroredModel:
    """Answers batched forward/grad queries for one fixed model."""

    name: str
    input_shape: tuple
    num_classes: int

    def __init__(self, precision: str = "float64"):
        if precision not in ("float64", "float32"):
            raise ValueError(f"unknown precision {precision!r}")
        self.precision = precision
        self.dtype = np.float64 if precision == "float64" else np.float32

    @property
    def input_size(self) -> int:
        return int(np.prod(self.input_shape))

    def _cast(self, X: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(X, dtype=self.dtype)

    def forward_batch(self, X: np.ndarray, target: int) -> np.ndarray:
        raise NotImplementedError

    def grad_batch(self, X: np.ndarray, target: int) -> np.ndarray:
        raise NotImplementedError


class _SigmoidFamily(MirroredModel):
    """Shared math for models whose class-1 probability is sigmoid(z(x))."""

    num_classes = 2

    def _z_rows(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _z_grad_row(self, scale_row: float) -> np.ndarray:
        raise NotImplementedError

    def forward_batch(self, X, target):
        X = self._cast(X)
        if self.precision == "float32":
            z = self._z_rows(X)
            p1 = 1.0 / (1.0 + np.exp(-z.astype(np.float32)))
            return p1 if target == 1 else np.float32(1.0) - p1
        probs = np.array([_sigmoid_scalar(z) for z in self._z_rows(X)])
        return probs if target == 1 else 1.0 - probs

    def grad_batch(self, X, target):
        X = self._cast(X)
        z = self._z_rows(X)
        if self.precision == "float32":
            p1 = 1.0 / (1.0 + np.exp(-z.astype(np.float32)))
        else:
            p1 = np.array([_sigmoid_scalar(v) for v in z])
        scale = p1 * (1.0 - p1)
        if target == 0:
            scale = -scale
        return np.vstack([self._z_grad_row(s) for s in scale])


class LogisticMirror(_SigmoidFamily):
    """Class-1 probability sigmoid(gain*(w.x + b)); input may be image-shaped."""

    def __init__(self, weights, bias, gain, input_shape=None, precision="float64"):
        super().__init__(precision)
        w = np.asarray(weights, dtype=np.float64)
        self.input_shape = tuple(input_shape) if input_shape else w.shape
        self.w = w.reshape(-1).astype(self.dtype)
        self.b = self.dtype(bias)
        self.gain = self.dtype(gain)
        self.name = "LogisticScalar"

    def _z_rows(self, X):
        return self.gain * (X @ self.w + self.b)

    def _z_grad_row(self, scale):
        return self.dtype(scale) * self.gain * self.w


class SharpSigmoidMirror(_SigmoidFamily):
    """1-D input; class-1 probability sigmoid(gain*(x - threshold))."""

    input_shape = (1,)

    def __init__(self, gain, threshold, precision="float64"):
        super().__init__(precision)
        self.gain = self.dtype(gain)
        self.threshold = self.dtype(threshold)
        self.name = "SharpSigmoid1D"

    def _z_rows(self, X):
        return self.gain * (X[:, 0] - self.threshold)

    def _z_grad_row(self, scale):
        return np.array([self.dtype(scale) * self.gain], dtype=self.dtype)


class AffineMirror(MirroredModel):
    """Class-1 probability exactly a.x + c (two classes)."""

    num_classes = 2

    def __init__(self, coeffs, intercept, input_shape=None, precision="float64"):
        super().__init__(precision)
        a = np.asarray(coeffs, dtype=np.float64)
        self.input_shape = tuple(input_shape) if input_shape else a.shape
        self.a = a.reshape(-1).astype(self.dtype)
        self.c = self.dtype(intercept)
        self.name = "AffineProbability"

    def forward_batch(self, X, target):
        p1 = self._cast(X) @ self.a + self.c
        return p1 if target == 1 else (self.dtype(1.0) - p1)

    def grad_batch(self, X, target):
        n = np.asarray(X).shape[0]
        row = self.a if target == 1 else -self.a
        return np.tile(row, (n, 1))


class LinearSoftmaxMirror(MirroredModel):
    """softmax(W x + b); weights (C, d)."""

    def __init__(self, weights, bias, precision="float64"):
        super().__init__(precision)
        self.W = np.atleast_2d(np.asarray(weights, dtype=np.float64)).astype(self.dtype)
        self.b = np.asarray(bias, dtype=np.float64).reshape(-1).astype(self.dtype)
        self.num_classes = self.W.shape[0]
        self.input_shape = (self.W.shape[1],)
        self.name = "LinearSoftmax"

    def forward_batch(self, X, target):
        z = self._cast(X) @ self.W.T + self.b
        return _softmax(z)[:, target].copy()

    def grad_batch(self, X, target):
        p = _softmax(self._cast(X) @ self.W.T + self.b)
        pc = p[:, target]
        mixed = p @ self.W
        return pc[:, None] * (self.W[target][None, :] - mixed)


class MLP2Mirror(MirroredModel):
    """softmax(W2 tanh(W1 x + b1) + b2)."""

    def __init__(self, W1, b1, W2, b2, precision="float64"):
        super().__init__(precision)
        self.W1 = np.atleast_2d(np.asarray(W1, dtype=np.float64)).astype(self.dtype)
        self.b1 = np.asarray(b1, dtype=np.float64).reshape(-1).astype(self.dtype)
        self.W2 = np.atleast_2d(np.asarray(W2, dtype=np.float64)).astype(self.dtype)
        self.b2 = np.asarray(b2, dtype=np.float64).reshape(-1).astype(self.dtype)
        self.num_classes = self.W2.shape[0]
        self.input_shape = (self.W1.shape[1],)
        self.name = "MLP2"

    def forward_batch(self, X, target):
        h = np.tanh(self._cast(X) @ self.W1.T + self.b1)
        z = h @ self.W2.T + self.b2
        return _softmax(z)[:, target].copy()

    def grad_batch(self, X, target):
        h = np.tanh(self._cast(X) @ self.W1.T + self.b1)
        p = _softmax(h @ self.W2.T + self.b2)
        pc = p[:, target]
        gz = -pc[:, None] * p
        gz[:, target] += pc
        gh = (gz @ self.W2) * (1.0 - h * h)
        return gh @ self.W1
