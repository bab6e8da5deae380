# cython: language_level=3
"""Compiled kernels for the builtin models.

Formula-for-formula mirror of numpy_ref; the test suite asserts numerical
agreement between the two backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh

cnp.import_array()

COMPILED = True


cdef inline double _sigmoid(double x) nogil:
    cdef double e
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


def sigmoid(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(xv.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _sigmoid(xv[i])
    return out


def softmax(z):
    cdef cnp.ndarray[double, ndim=2] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] out = np.empty_like(zv)
    cdef Py_ssize_t i, j, n = zv.shape[0], c = zv.shape[1]
    cdef double mx, s
    for i in range(n):
        mx = zv[i, 0]
        for j in range(1, c):
            if zv[i, j] > mx:
                mx = zv[i, j]
        s = 0.0
        for j in range(c):
            out[i, j] = exp(zv[i, j] - mx)
            s += out[i, j]
        for j in range(c):
            out[i, j] /= s
    return out


def logistic_forward(const double[:, ::1] X, const double[::1] w, double b, double gain, int target, bint logit):
    cdef Py_ssize_t i, j, n = X.shape[0], d = X.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double z, p
    for i in range(n):
        z = b
        for j in range(d):
            z += X[i, j] * w[j]
        z *= gain
        if logit:
            out[i] = z if target == 1 else -z
        else:
            p = _sigmoid(z)
            out[i] = p if target == 1 else 1.0 - p
    return out


def logistic_grad(const double[:, ::1] X, const double[::1] w, double b, double gain, int target, bint logit):
    cdef Py_ssize_t i, j, n = X.shape[0], d = X.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, d), dtype=np.float64)
    cdef double z, p, scale, sign
    sign = 1.0 if target == 1 else -1.0
    for i in range(n):
        if logit:
            scale = sign * gain
        else:
            z = b
            for j in range(d):
                z += X[i, j] * w[j]
            z *= gain
            p = _sigmoid(z)
            scale = sign * gain * p * (1.0 - p)
        for j in range(d):
            out[i, j] = scale * w[j]
    return out


def sharp1d_forward(const double[:, ::1] X, double gain, double threshold, int target, bint logit):
    cdef Py_ssize_t i, n = X.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double z, p
    for i in range(n):
        z = gain * (X[i, 0] - threshold)
        if logit:
            out[i] = z if target == 1 else -z
        else:
            p = _sigmoid(z)
            out[i] = p if target == 1 else 1.0 - p
    return out


def sharp1d_grad(const double[:, ::1] X, double gain, double threshold, int target, bint logit):
    cdef Py_ssize_t i, n = X.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, 1), dtype=np.float64)
    cdef double z, p, sign
    sign = 1.0 if target == 1 else -1.0
    for i in range(n):
        if logit:
            out[i, 0] = sign * gain
        else:
            z = gain * (X[i, 0] - threshold)
            p = _sigmoid(z)
            out[i, 0] = sign * gain * p * (1.0 - p)
    return out


def linear_softmax_forward(const double[:, ::1] X, const double[:, ::1] W, const double[::1] b, int target, bint logit):
    cdef Py_ssize_t i, j, k, n = X.shape[0], c = W.shape[0], d = W.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] z = np.empty(c, dtype=np.float64)
    cdef double mx, s
    for i in range(n):
        for j in range(c):
            z[j] = b[j]
            for k in range(d):
                z[j] += X[i, k] * W[j, k]
        if logit:
            out[i] = z[target]
            continue
        mx = z[0]
        for j in range(1, c):
            if z[j] > mx:
                mx = z[j]
        s = 0.0
        for j in range(c):
            s += exp(z[j] - mx)
        out[i] = exp(z[target] - mx) / s
    return out


def linear_softmax_grad(const double[:, ::1] X, const double[:, ::1] W, const double[::1] b, int target, bint logit):
    cdef Py_ssize_t i, j, k, n = X.shape[0], c = W.shape[0], d = W.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, d), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] z = np.empty(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] p = np.empty(c, dtype=np.float64)
    cdef double mx, s, pc, mixed
    for i in range(n):
        if logit:
            for k in range(d):
                out[i, k] = W[target, k]
            continue
        for j in range(c):
            z[j] = b[j]
            for k in range(d):
                z[j] += X[i, k] * W[j, k]
        mx = z[0]
        for j in range(1, c):
            if z[j] > mx:
                mx = z[j]
        s = 0.0
        for j in range(c):
            p[j] = exp(z[j] - mx)
            s += p[j]
        for j in range(c):
            p[j] /= s
        pc = p[target]
        for k in range(d):
            mixed = 0.0
            for j in range(c):
                mixed += p[j] * W[j, k]
            out[i, k] = pc * (W[target, k] - mixed)
    return out


def mlp2_forward(const double[:, ::1] X, const double[:, ::1] W1, const double[::1] b1,
                 const double[:, ::1] W2, const double[::1] b2, int target, bint logit):
    cdef Py_ssize_t i, j, k, n = X.shape[0], h = W1.shape[0], d = W1.shape[1], c = W2.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] hid = np.empty(h, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] z = np.empty(c, dtype=np.float64)
    cdef double acc, mx, s
    for i in range(n):
        for j in range(h):
            acc = b1[j]
            for k in range(d):
                acc += X[i, k] * W1[j, k]
            hid[j] = tanh(acc)
        for j in range(c):
            acc = b2[j]
            for k in range(h):
                acc += hid[k] * W2[j, k]
            z[j] = acc
        if logit:
            out[i] = z[target]
            continue
        mx = z[0]
        for j in range(1, c):
            if z[j] > mx:
                mx = z[j]
        s = 0.0
        for j in range(c):
            s += exp(z[j] - mx)
        out[i] = exp(z[target] - mx) / s
    return out


def mlp2_grad(const double[:, ::1] X, const double[:, ::1] W1, const double[::1] b1,
              const double[:, ::1] W2, const double[::1] b2, int target, bint logit):
    cdef Py_ssize_t i, j, k, n = X.shape[0], h = W1.shape[0], d = W1.shape[1], c = W2.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((n, d), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] hid = np.empty(h, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] z = np.empty(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] p = np.empty(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] gz = np.empty(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] gh = np.empty(h, dtype=np.float64)
    cdef double acc, mx, s, pc
    for i in range(n):
        for j in range(h):
            acc = b1[j]
            for k in range(d):
                acc += X[i, k] * W1[j, k]
            hid[j] = tanh(acc)
        if logit:
            for j in range(h):
                gh[j] = (1.0 - hid[j] * hid[j]) * W2[target, j]
        else:
            for j in range(c):
                acc = b2[j]
                for k in range(h):
                    acc += hid[k] * W2[j, k]
                z[j] = acc
            mx = z[0]
            for j in range(1, c):
                if z[j] > mx:
                    mx = z[j]
            s = 0.0
            for j in range(c):
                p[j] = exp(z[j] - mx)
                s += p[j]
            for j in range(c):
                p[j] /= s
            pc = p[target]
            for j in range(c):
                gz[j] = -pc * p[j]
            gz[target] += pc
            for j in range(h):
                acc = 0.0
                for k in range(c):
                    acc += gz[k] * W2[k, j]
                gh[j] = acc * (1.0 - hid[j] * hid[j])
        for k in range(d):
            acc = 0.0
            for j in range(h):
                acc += gh[j] * W1[j, k]
            out[i, k] = acc
    return out
