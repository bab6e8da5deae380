"""Differentiable-model contract and builtin models with closed-form gradients.

All builtins differentiate the target-class probability by default; pass
output="logit" to differentiate the pre-softmax score instead (non-default,
and logit outputs are not confined to [0, 1]).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, DomainError, InputShapeError, ParseError, TargetError
from .tensor import Tensor, as_tensor


@dataclass(frozen=True)
class TargetSpec:
    """Classification class whose probability is attributed."""

    class_index: int

    def __post_init__(self):
        if self.class_index < 0:
            raise TargetError("class_index must be non-negative")


class DifferentiableModel:
    """Contract: batched scalar output for a target class + batched gradient.

    Subclasses implement forward_array/grad_array on flat (n, size) float64
    batches; the public forward_batch/grad_batch wrappers validate shapes and
    targets and speak Tensor.
    """

    input_shape: tuple[int, ...]
    num_classes: int

    @property
    def input_size(self) -> int:
        return int(np.prod(self.input_shape))

    def forward_array(self, X: np.ndarray, target: int) -> np.ndarray:
        raise NotImplementedError

    def grad_array(self, X: np.ndarray, target: int) -> np.ndarray:
        raise NotImplementedError

    def _check_target(self, target: TargetSpec) -> int:
        if target.class_index >= self.num_classes:
            raise TargetError(
                f"class_index {target.class_index} out of range for "
                f"{self.num_classes} classes"
            )
        return target.class_index

    def _stack(self, inputs) -> np.ndarray:
        if isinstance(inputs, Tensor):
            inputs = [inputs]
        rows = []
        for t in inputs:
            t = as_tensor(t)
            if t.shape != self.input_shape:
                raise InputShapeError(
                    f"input shape {t.shape} does not match model shape "
                    f"{self.input_shape}"
                )
            rows.append(t.flat())
        return np.ascontiguousarray(np.stack(rows), dtype=np.float64)

    def forward_batch(self, inputs, target: TargetSpec) -> np.ndarray:
        c = self._check_target(target)
        return self.forward_array(self._stack(inputs), c)

    def grad_batch(self, inputs, target: TargetSpec) -> list[Tensor]:
        c = self._check_target(target)
        G = self.grad_array(self._stack(inputs), c)
        return [Tensor(g.reshape(self.input_shape)) for g in G]


def _readonly(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


class BuiltinModel(DifferentiableModel):
    """Base for the shipped models; adds the weights-file representation."""

    variant: str = ""

    def __init__(self, output: str = "prob"):
        if output not in ("prob", "logit"):
            raise ConfigError("output must be 'prob' or 'logit'")
        self.output = output
        self.logit = output == "logit"

    def params(self) -> list[np.ndarray]:
        """Parameter arrays in the order they appear in the weights file."""
        raise NotImplementedError

    def header_dims(self) -> list[int]:
        """Weights-file shape line: classes, hidden units (0 if none), input dims."""
        return [self.num_classes, 0, *self.input_shape]


class LinearSoftmax(BuiltinModel):
    """softmax(W x + b); weights (C, d), bias (C,)."""

    variant = "LinearSoftmax"

    def __init__(self, weights, bias, output: str = "prob"):
        super().__init__(output)
        self.W = _readonly(np.atleast_2d(weights))
        self.b = _readonly(bias).reshape(-1)
        if self.W.shape[0] != self.b.shape[0]:
            raise ConfigError("bias length must equal the number of classes")
        self.num_classes = self.W.shape[0]
        self.input_shape = (self.W.shape[1],)

    def forward_array(self, X, target):
        return kernels.linear_softmax_forward(X, self.W, self.b, target, self.logit)

    def grad_array(self, X, target):
        return kernels.linear_softmax_grad(X, self.W, self.b, target, self.logit)

    def params(self):
        return [self.W.reshape(-1), self.b]


class LogisticScalar(BuiltinModel):
    """Two classes; class 1 has probability sigmoid(gain*(w.x + b)).

    The input may be image-shaped; weights are stored flat over the features.
    """

    variant = "LogisticScalar"

    def __init__(self, weights, bias=0.0, gain=1.0, input_shape=None, output="prob"):
        super().__init__(output)
        w = np.asarray(weights, dtype=np.float64)
        self.input_shape = tuple(input_shape) if input_shape else w.shape
        if int(np.prod(self.input_shape)) != w.size:
            raise ConfigError("weights size does not match input shape")
        self.w = _readonly(w.reshape(-1))
        self.b = float(bias)
        self.gain = float(gain)
        self.num_classes = 2

    def forward_array(self, X, target):
        return kernels.logistic_forward(X, self.w, self.b, self.gain, target, self.logit)

    def grad_array(self, X, target):
        return kernels.logistic_grad(X, self.w, self.b, self.gain, target, self.logit)

    def params(self):
        return [self.w, np.array([self.b]), np.array([self.gain])]


class SharpSigmoid1D(BuiltinModel):
    """1-D input; class-1 probability sigmoid(gain*(x - threshold)).

    The default construction is the canonical sharp-transition demo model:
    nearly all of the probability change happens inside a narrow window
    around alpha = threshold on the 0 -> 1 path.
    """

    variant = "SharpSigmoid1D"

    def __init__(self, gain=300.0, threshold=0.125, output="prob"):
        super().__init__(output)
        self.gain = float(gain)
        self.threshold = float(threshold)
        self.input_shape = (1,)
        self.num_classes = 2

    def forward_array(self, X, target):
        return kernels.sharp1d_forward(X, self.gain, self.threshold, target, self.logit)

    def grad_array(self, X, target):
        return kernels.sharp1d_grad(X, self.gain, self.threshold, target, self.logit)

    def params(self):
        return [np.array([self.gain]), np.array([self.threshold])]


class MLP2(BuiltinModel):
    """Two dense layers: softmax(W2 tanh(W1 x + b1) + b2)."""

    variant = "MLP2"

    def __init__(self, W1, b1, W2, b2, output="prob"):
        super().__init__(output)
        self.W1 = _readonly(np.atleast_2d(W1))
        self.b1 = _readonly(b1).reshape(-1)
        self.W2 = _readonly(np.atleast_2d(W2))
        self.b2 = _readonly(b2).reshape(-1)
        if self.W1.shape[0] != self.b1.shape[0]:
            raise ConfigError("b1 length must equal hidden width")
        if self.W2.shape[1] != self.W1.shape[0]:
            raise ConfigError("W2 columns must equal hidden width")
        if self.W2.shape[0] != self.b2.shape[0]:
            raise ConfigError("b2 length must equal the number of classes")
        self.num_classes = self.W2.shape[0]
        self.hidden = self.W1.shape[0]
        self.input_shape = (self.W1.shape[1],)

    def forward_array(self, X, target):
        return kernels.mlp2_forward(
            X, self.W1, self.b1, self.W2, self.b2, target, self.logit
        )

    def grad_array(self, X, target):
        return kernels.mlp2_grad(
            X, self.W1, self.b1, self.W2, self.b2, target, self.logit
        )

    def params(self):
        return [self.W1.reshape(-1), self.b1, self.W2.reshape(-1), self.b2]

    def header_dims(self):
        return [self.num_classes, self.hidden, *self.input_shape]


class AffineProbability(BuiltinModel):
    """Two classes; class-1 probability is exactly affine: a.x + c.

    Inputs must keep a.x + c inside [0, 1]; violating inputs raise rather
    than clamp, since clamping would silently break the affine contract.
    """

    variant = "AffineProbability"

    def __init__(self, coeffs, intercept=0.5, input_shape=None, output="prob"):
        super().__init__(output)
        if output != "prob":
            raise ConfigError("AffineProbability has no logit form")
        a = np.asarray(coeffs, dtype=np.float64)
        self.input_shape = tuple(input_shape) if input_shape else a.shape
        if int(np.prod(self.input_shape)) != a.size:
            raise ConfigError("coeffs size does not match input shape")
        self.a = _readonly(a.reshape(-1))
        self.c = float(intercept)
        self.num_classes = 2

    def forward_array(self, X, target):
        p1 = X @ self.a + self.c
        if p1.size and (p1.min() < -1e-12 or p1.max() > 1.0 + 1e-12):
            raise DomainError("affine probability left [0, 1] for these inputs")
        return p1 if target == 1 else 1.0 - p1

    def grad_array(self, X, target):
        sign = 1.0 if target == 1 else -1.0
        return np.tile(sign * self.a, (X.shape[0], 1))

    def params(self):
        return [self.a, np.array([self.c])]


BUILTIN_VARIANTS = {
    cls.variant: cls
    for cls in (LinearSoftmax, LogisticScalar, SharpSigmoid1D, MLP2, AffineProbability)
}


def finite_difference_gradient(
    model: DifferentiableModel, input_tensor: Tensor, target: TargetSpec, h: float = 1e-5
) -> Tensor:
    """Central-difference gradient oracle: (f(x+he_i) - f(x-he_i)) / 2h."""
    if h <= 0:
        raise DomainError("h must be positive")
    c = model._check_target(target)
    x = as_tensor(input_tensor)
    if x.shape != model.input_shape:
        raise InputShapeError(
            f"input shape {x.shape} does not match model shape {model.input_shape}"
        )
    flat = x.flat()
    n = flat.size
    batch = np.repeat(flat[None, :], 2 * n, axis=0)
    idx = np.arange(n)
    batch[2 * idx, idx] += h
    batch[2 * idx + 1, idx] -= h
    f = model.forward_array(np.ascontiguousarray(batch), c)
    g = (f[0::2] - f[1::2]) / (2.0 * h)
    return Tensor(g.reshape(model.input_shape))


def save_model(model: BuiltinModel, path) -> None:
    """Write the text weights format; floats use repr for bit-exact round trips."""
    lines = [model.variant, " ".join(str(d) for d in model.header_dims())]
    for arr in model.params():
        lines.append(" ".join(repr(float(v)) for v in arr))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(line: str, lineno: int) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in line.split()], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: bad number ({exc})") from None


def load_model(path, output: str = "prob") -> BuiltinModel:
    """Parse the text weights format back into a BuiltinModel."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = [ln.rstrip("\n") for ln in fh]
    lines = [(i + 1, ln) for i, ln in enumerate(raw) if ln.strip()]
    if len(lines) < 3:
        raise ParseError("weights file needs a variant line, a shape line, and weights")
    variant = lines[0][1].strip()
    if variant not in BUILTIN_VARIANTS:
        raise ParseError(f"line 1: unknown variant {variant!r}")
    try:
        dims = [int(tok) for tok in lines[1][1].split()]
    except ValueError:
        raise ParseError(f"line {lines[1][0]}: shape entries must be integers") from None
    if len(dims) < 3 or any(d < 0 for d in dims) or dims[0] < 1:
        raise ParseError(f"line {lines[1][0]}: expected 'classes hidden dim...' with positive classes")
    classes, hidden, shape = dims[0], dims[1], tuple(dims[2:])
    size = int(np.prod(shape))
    arrays = [_parse_floats(ln, no) for no, ln in lines[2:]]

    def take(expected_lens):
        if len(arrays) != len(expected_lens):
            raise ParseError(
                f"{variant} expects {len(expected_lens)} weight lines, got {len(arrays)}"
            )
        for arr, want in zip(arrays, expected_lens):
            if arr.size != want:
                raise ParseError(
                    f"{variant} weight line has {arr.size} values, expected {want}"
                )
        return arrays

    if variant == "LinearSoftmax":
        W, b = take([classes * size, classes])
        return LinearSoftmax(W.reshape(classes, size), b, output=output)
    if variant == "LogisticScalar":
        w, b, gain = take([size, 1, 1])
        return LogisticScalar(w, float(b[0]), float(gain[0]), input_shape=shape, output=output)
    if variant == "SharpSigmoid1D":
        gain, threshold = take([1, 1])
        return SharpSigmoid1D(float(gain[0]), float(threshold[0]), output=output)
    if variant == "MLP2":
        W1, b1, W2, b2 = take([hidden * size, hidden, classes * hidden, classes])
        return MLP2(W1.reshape(hidden, size), b1, W2.reshape(classes, hidden), b2, output=output)
    w, c = take([size, 1])
    return AffineProbability(w, float(c[0]), input_shape=shape, output=output)
