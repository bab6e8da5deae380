"""Kernel backend selection.

Two interchangeable backends provide the builtin model math:

- ``compiled``: the Cython extension ``igsched.kernels._core``
- ``python``: the numpy reference in ``igsched.kernels.numpy_ref``

Selection happens at import time from the ``IGSCHED_BACKEND`` environment
variable (``auto`` | ``compiled`` | ``python``, default ``auto`` = compiled
when available). ``use()`` switches at runtime, mainly for the benchmark
script and the cross-backend tests. Bitwise reproducibility is guaranteed
within one backend, not across backends.
"""

from __future__ import annotations

import os

from . import numpy_ref

try:
    from . import _core

    COMPILED_AVAILABLE = True
except ImportError:
    _core = None
    COMPILED_AVAILABLE = False

_FUNCTIONS = (
    "COMPILED",
    "sigmoid",
    "softmax",
    "logistic_forward",
    "logistic_grad",
    "sharp1d_forward",
    "sharp1d_grad",
    "linear_softmax_forward",
    "linear_softmax_grad",
    "mlp2_forward",
    "mlp2_grad",
)

_impl = numpy_ref
BACKEND = "python"


def use(name: str) -> str:
    """Select the kernel backend; returns the name actually in effect."""
    global _impl, BACKEND
    if name == "auto":
        name = "compiled" if COMPILED_AVAILABLE else "python"
    if name == "compiled":
        if not COMPILED_AVAILABLE:
            raise ImportError(
                "compiled kernel backend requested but the extension "
                "igsched.kernels._core is not built"
            )
        _impl, BACKEND = _core, "compiled"
    elif name == "python":
        _impl, BACKEND = numpy_ref, "python"
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    return BACKEND


def active() -> str:
    return BACKEND


def __getattr__(name: str):
    if name in _FUNCTIONS:
        return getattr(_impl, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


use(os.environ.get("IGSCHED_BACKEND", "auto"))
