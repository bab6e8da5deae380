"""Reference numpy implementations of the builtin model kernels.

Every function takes a C-contiguous (n, d) float64 batch and returns float64
arrays. The compiled backend mirrors these formulas exactly; numerical
agreement between backends is covered by tests and the benchmark script.
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function, branch on sign."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction."""
    z = np.asarray(z, dtype=np.float64)
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def logistic_forward(X, w, b, gain, target, logit):
    """LogisticScalar: class 1 has probability sigmoid(gain*(w.x + b))."""
    z = gain * (X @ w + b)
    if logit:
        return z if target == 1 else -z
    p1 = sigmoid(z)
    return p1 if target == 1 else 1.0 - p1


def logistic_grad(X, w, b, gain, target, logit):
    n = X.shape[0]
    if logit:
        g = gain * w
        sign = 1.0 if target == 1 else -1.0
        return np.tile(sign * g, (n, 1))
    z = gain * (X @ w + b)
    p1 = sigmoid(z)
    scale = gain * p1 * (1.0 - p1)
    if target == 0:
        scale = -scale
    return scale[:, None] * w[None, :]


def sharp1d_forward(X, gain, threshold, target, logit):
    """SharpSigmoid1D: 1-D input, class 1 = sigmoid(gain*(x - threshold))."""
    z = gain * (X[:, 0] - threshold)
    if logit:
        return z if target == 1 else -z
    p1 = sigmoid(z)
    return p1 if target == 1 else 1.0 - p1


def sharp1d_grad(X, gain, threshold, target, logit):
    n = X.shape[0]
    if logit:
        sign = 1.0 if target == 1 else -1.0
        return np.full((n, 1), sign * gain)
    z = gain * (X[:, 0] - threshold)
    p1 = sigmoid(z)
    scale = gain * p1 * (1.0 - p1)
    if target == 0:
        scale = -scale
    return scale[:, None]


def linear_softmax_forward(X, W, b, target, logit):
    """LinearSoftmax: softmax(X W^T + b), probability of the target class."""
    z = X @ W.T + b
    if logit:
        return z[:, target].copy()
    return softmax(z)[:, target].copy()


def linear_softmax_grad(X, W, b, target, logit):
    n = X.shape[0]
    if logit:
        return np.tile(W[target], (n, 1))
    z = X @ W.T + b
    p = softmax(z)
    pc = p[:, target]
    # dp_c/dx = p_c * (W_c - sum_j p_j W_j)
    mixed = p @ W
    return pc[:, None] * (W[target][None, :] - mixed)


def mlp2_forward(X, W1, b1, W2, b2, target, logit):
    """MLP2: softmax(W2 tanh(W1 x + b1) + b2), target-class probability."""
    h = np.tanh(X @ W1.T + b1)
    z = h @ W2.T + b2
    if logit:
        return z[:, target].copy()
    return softmax(z)[:, target].copy()


def mlp2_grad(X, W1, b1, W2, b2, target, logit):
    h = np.tanh(X @ W1.T + b1)
    if logit:
        gh = (1.0 - h * h) * W2[target][None, :]
        return gh @ W1
    z = h @ W2.T + b2
    p = softmax(z)
    pc = p[:, target]
    gz = -pc[:, None] * p
    gz[:, target] += pc
    gh = (gz @ W2) * (1.0 - h * h)
    return gh @ W1
