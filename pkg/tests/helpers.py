"""Test helpers: random builtin-model factories."""

import numpy as np

from igsched import (
    AffineProbability,
    LinearSoftmax,
    LogisticScalar,
    MLP2,
    PathSpec,
    SharpSigmoid1D,
    TargetSpec,
    Tensor,
)


def random_builtin(rng, kind=None):
    """One random builtin model plus a valid random path for it."""
    kinds = ("logistic", "sharp", "softmax", "mlp", "affine")
    kind = kind or kinds[int(rng.integers(0, len(kinds)))]
    if kind == "logistic":
        d = int(rng.integers(1, 6))
        model = LogisticScalar(
            weights=rng.normal(0.0, 1.0, d),
            bias=float(rng.normal(0.0, 0.3)),
            gain=float(rng.uniform(0.5, 3.0)),
        )
    elif kind == "sharp":
        model = SharpSigmoid1D(
            gain=float(rng.uniform(5.0, 60.0)),
            threshold=float(rng.uniform(0.1, 0.9)),
        )
    elif kind == "softmax":
        c, d = int(rng.integers(2, 5)), int(rng.integers(1, 6))
        model = LinearSoftmax(
            weights=rng.normal(0.0, 1.0, (c, d)), bias=rng.normal(0.0, 0.2, c)
        )
    elif kind == "mlp":
        d, h, c = int(rng.integers(1, 5)), int(rng.integers(2, 7)), int(rng.integers(2, 4))
        model = MLP2(
            rng.normal(0.0, 0.8, (h, d)),
            rng.normal(0.0, 0.1, h),
            rng.normal(0.0, 0.8, (c, h)),
            rng.normal(0.0, 0.1, c),
        )
    else:
        d = int(rng.integers(1, 6))
        # Small coefficients keep the affine probability inside [0, 1].
        model = AffineProbability(
            coeffs=rng.uniform(-0.05, 0.05, d), intercept=0.5
        )
    shape = model.input_shape
    path = PathSpec(
        input=Tensor(rng.uniform(0.0, 1.0, shape)),
        baseline=Tensor(rng.uniform(0.0, 1.0, shape)),
        target=TargetSpec(int(rng.integers(0, model.num_classes))),
    )
    return model, path
