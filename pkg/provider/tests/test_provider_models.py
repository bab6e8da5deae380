"""Mirrored model math and the weights-file loader."""

from pathlib import Path

import numpy as np
import pytest

from gradprovider import (
    AffineMirror,
    LinearSoftmaxMirror,
    LogisticMirror,
    MLP2Mirror,
    SharpSigmoidMirror,
    WeightsError,
    load_weights,
)

REPO = Path(__file__).resolve().parents[2]


def _fd_grad(model, X, target, h=1e-6):
    X = np.asarray(X, dtype=np.float64)
    grads = np.zeros_like(X)
    for i in range(X.shape[1]):
        hi, lo = X.copy(), X.copy()
        hi[:, i] += h
        lo[:, i] -= h
        grads[:, i] = (model.forward_batch(hi, target) -
                       model.forward_batch(lo, target)) / (2 * h)
    return grads


def _models(precision="float64"):
    rng = np.random.default_rng(5)
    return [
        (LogisticMirror(rng.normal(size=4), 0.1, 2.0, precision=precision),
         rng.random((6, 4))),
        (SharpSigmoidMirror(30.0, 0.25, precision=precision),
         rng.random((6, 1))),
        (AffineMirror([0.2, -0.1, 0.05], 0.5, precision=precision),
         rng.random((6, 3))),
        (LinearSoftmaxMirror(rng.normal(size=(3, 4)), rng.normal(size=3),
                             precision=precision),
         rng.random((6, 4))),
        (MLP2Mirror(rng.normal(size=(5, 3)), rng.normal(size=5),
                    rng.normal(size=(3, 5)), rng.normal(size=3),
                    precision=precision),
         rng.random((6, 3))),
    ]


def test_gradients_match_finite_differences():
    for model, X in _models():
        for target in range(model.num_classes):
            analytic = model.grad_batch(X, target)
            fd = _fd_grad(model, X, target)
            scale = max(float(np.max(np.abs(fd))), 1.0)
            assert float(np.max(np.abs(analytic - fd))) / scale <= 1e-7, model.name


def test_two_class_probabilities_are_complementary():
    for model, X in _models():
        if model.num_classes != 2:
            continue
        p0 = model.forward_batch(X, 0)
        p1 = model.forward_batch(X, 1)
        np.testing.assert_allclose(np.asarray(p0) + np.asarray(p1), 1.0, atol=1e-12)


def test_softmax_probabilities_sum_to_one():
    for model, X in _models():
        total = sum(np.asarray(model.forward_batch(X, t), dtype=np.float64)
                    for t in range(model.num_classes))
        np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test_float32_precision_tracks_float64_within_tolerance():
    pairs = zip(_models("float64"), _models("float32"))
    for (m64, X), (m32, _) in pairs:
        for target in range(m64.num_classes):
            p64 = np.asarray(m64.forward_batch(X, target), dtype=np.float64)
            p32 = np.asarray(m32.forward_batch(X, target), dtype=np.float64)
            assert np.max(np.abs(p64 - p32)) <= 1e-4
            g64 = np.asarray(m64.grad_batch(X, target), dtype=np.float64)
            g32 = np.asarray(m32.grad_batch(X, target), dtype=np.float64)
            scale = max(float(np.max(np.abs(g64))), 1.0)
            assert np.max(np.abs(g64 - g32)) / scale <= 1e-4


def test_float32_models_declare_float32_outputs():
    model = SharpSigmoidMirror(30.0, 0.25, precision="float32")
    probs = model.forward_batch(np.array([[0.3]]), 1)
    assert np.asarray(probs).dtype == np.float32


def test_rejects_unknown_precision():
    with pytest.raises(ValueError, match="unknown precision"):
        SharpSigmoidMirror(30.0, 0.25, precision="float16")


def test_load_weights_round_trips_repo_files():
    cases = {
        "golden/logistic.txt": ("LogisticScalar", (2,), 2),
        "demo/family/sharp_gain300_th125.txt": ("SharpSigmoid1D", (1,), 2),
        "demo/corner_detector.txt": ("LogisticScalar", (8, 8), 2),
        "demo/mlp_3in_3class.txt": ("MLP2", (3,), 3),
    }
    for rel, (name, shape, classes) in cases.items():
        model = load_weights(REPO / rel)
        assert model.name == name
        assert model.input_shape == shape
        assert model.num_classes == classes


def test_loaded_logistic_matches_hand_computation():
    model = load_weights(REPO / "golden" / "logistic.txt")
    probs = model.forward_batch(np.array([[1.0, 0.5]]), 1)
    assert probs[0] == 0.6224593312018546


def test_load_weights_error_cases(tmp_path):
    missing = tmp_path / "absent.txt"
    with pytest.raises(WeightsError, match="cannot read"):
        load_weights(missing)
    bad_variant = tmp_path / "bad.txt"
    bad_variant.write_text("NoSuchModel\n2 0 1\n1.0\n")
    with pytest.raises(WeightsError, match="unknown variant"):
        load_weights(bad_variant)
    bad_count = tmp_path / "count.txt"
    bad_count.write_text("SharpSigmoid1D\n2 0 1\n1.0\n")
    with pytest.raises(WeightsError, match="expects 2 weight lines"):
        load_weights(bad_count)
    bad_float = tmp_path / "float.txt"
    bad_float.write_text("SharpSigmoid1D\n2 0 1\nx\n0.1\n")
    with pytest.raises(WeightsError, match="line 3"):
        load_weights(bad_float)
