"""Shared fixtures: canonical models, paths, and random model factories."""

import numpy as np
import pytest

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


@pytest.fixture
def scalar_path():
    """The 1-D path 0 -> 1 used by every sharp-transition check."""
    return PathSpec(
        input=Tensor(np.ones(1)),
        baseline=Tensor(np.zeros(1)),
        target=TargetSpec(1),
    )


@pytest.fixture
def sharp_model():
    """Canonical sharp-transition model (defaults: gain 300, threshold 0.125)."""
    return SharpSigmoid1D()


@pytest.fixture
def smooth_model():
    """Gentler transition where quadrature error stays clear of the float floor."""
    return SharpSigmoid1D(gain=30.0, threshold=0.25)


@pytest.fixture
def affine_model():
    return AffineProbability(coeffs=np.array([0.31, -0.12, 0.05]), intercept=0.55)


@pytest.fixture
def affine_path():
    return PathSpec(
        input=Tensor(np.array([0.4, 0.8, 0.1])),
        baseline=Tensor(np.zeros(3)),
        target=TargetSpec(1),
    )
