"""Loader for the engine's text weights format.

Line 1 names the variant, line 2 is `classes hidden dim...`, and the
remaining non-empty lines carry one whitespace-separated float array each,
in variant order. The format is documented in the engine's README; this
parser is independent so the provider stays importable without it.
"""

from __future__ import annotations

import numpy as np

from .models import (
    AffineMirror,
    LinearSoftmaxMirror,
    LogisticMirror,
    MirroredModel,
    MLP2Mirror,
    SharpSigmoidMirror,
)


class WeightsError(Exception):
    """Unusable weights file."""


_VARIANTS = (
    "LogisticScalar",
    "SharpSigmoid1D",
    "AffineProbability",
    "LinearSoftmax",
    "MLP2",
)


def _parse_floats(line: str, lineno: int) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in line.split()], dtype=np.float64)
    except ValueError as exc:
        raise WeightsError(f"line {lineno}: bad number ({exc})") from None


def load_weights(path, precision: str = "float64") -> MirroredModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise WeightsError(f"cannot read {path}: {exc}") from None
    lines = [(i + 1, ln) for i, ln in enumerate(raw) if ln.strip()]
    if len(lines) < 3:
        raise WeightsError("weights file needs a variant line, a shape line, and weights")
    variant = lines[0][1].strip()
    if variant not in _VARIANTS:
        raise WeightsError(f"line 1: unknown variant {variant!r}")
    try:
        dims = [int(tok) for tok in lines[1][1].split()]
    except ValueError:
        raise WeightsError(f"line {lines[1][0]}: shape entries must be integers") from None
    if len(dims) < 3 or any(d < 0 for d in dims) or dims[0] < 1:
        raise WeightsError(
            f"line {lines[1][0]}: expected 'classes hidden dim...' with positive classes"
        )
    classes, hidden, shape = dims[0], dims[1], tuple(dims[2:])
    size = int(np.prod(shape))
    arrays = [_parse_floats(ln, no) for no, ln in lines[2:]]

    def take(expected_lens):
        if len(arrays) != len(expected_lens):
            raise WeightsError(
                f"{variant} expects {len(expected_lens)} weight lines, got {len(arrays)}"
            )
        for arr, want in zip(arrays, expected_lens):
            if arr.size != want:
                raise WeightsError(
                    f"{variant} weight line has {arr.size} values, expected {want}"
                )
        return arrays

    if variant == "LinearSoftmax":
        W, b = take([classes * size, classes])
        return LinearSoftmaxMirror(W.reshape(classes, size), b, precision=precision)
    if variant == "LogisticScalar":
        w, b, gain = take([size, 1, 1])
        return LogisticMirror(w, float(b[0]), float(gain[0]), input_shape=shape,
                              precision=precision)
    if variant == "SharpSigmoid1D":
        gain, threshold = take([1, 1])
        return SharpSigmoidMirror(float(gain[0]), float(threshold[0]),
                                  precision=precision)
    if variant == "MLP2":
        W1, b1, W2, b2 = take([hidden * size, hidden, classes * hidden, classes])
        return MLP2Mirror(W1.reshape(hidden, size), b1,
                          W2.reshape(classes, hidden), b2, precision=precision)
    w, c = take([size, 1])
    return AffineMirror(w, float(c[0]), input_shape=shape, precision=precision)
