"""User-model hook: serve any object that quacks like a model.

`--module pkg.mod:attr` imports `pkg.mod` and takes `attr` from it; a
callable attr is called with no arguments to build the model. The object
must provide `input_shape` (tuple of ints), `num_classes` (int), and the
batch methods `forward_batch(X, target) -> (n,) array-like` and
`grad_batch(X, target) -> (n, input_size) array-like`, where X is a numpy
(n, input_size) float64 array. `name` is optional. Gradients typically
come from the host framework's automatic differentiation; the provider
only moves numbers.
"""

from __future__ import annotations

import importlib

import numpy as np


class HookError(Exception):
    """Module spec did not produce a servable model."""


_REQUIRED = ("input_shape", "num_classes", "forward_batch", "grad_batch")


def load_hook(spec: str):
    if ":" not in spec:
        raise HookError(f"module spec {spec!r} must look like package.module:attr")
    module_name, _, attr = spec.partition(":")
    try:
        module = importlib.import_module(module_name)
    except ImportError as exc:
        raise HookError(f"cannot import {module_name!r}: {exc}") from None
    try:
        obj = getattr(module, attr)
    except AttributeError:
        raise HookError(f"{module_name!r} has no attribute {attr!r}") from None
    if callable(obj) and not all(hasattr(obj, a) for a in _REQUIRED):
        obj = obj()
    missing = [a for a in _REQUIRED if not hasattr(obj, a)]
    if missing:
        raise HookError(f"hooked object lacks {', '.join(missing)}")
    shape = tuple(int(d) for d in obj.input_shape)
    classes = int(obj.num_classes)
    if not shape or any(d < 1 for d in shape) or classes < 1:
        raise HookError(
            f"hooked object declares invalid shape {shape} / classes {classes}"
        )
    return _HookAdapter(obj, shape, classes)


class _HookAdapter:
    """Normalizes a user object to the server's model interface."""

    def __init__(self, obj, shape, classes):
        self._obj = obj
        self.input_shape = shape
        self.num_classes = classes
        self.name = str(getattr(obj, "name", type(obj).__name__))
        self.precision = str(getattr(obj, "precision", "float64"))

    @property
    def input_size(self) -> int:
        return int(np.prod(self.input_shape))

    def forward_batch(self, X, target):
        return np.asarray(self._obj.forward_batch(X, target), dtype=np.float64)

    def grad_batch(self, X, target):
        return np.asarray(self._obj.grad_batch(X, target), dtype=np.float64)
