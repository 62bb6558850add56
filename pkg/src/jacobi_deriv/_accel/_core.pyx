# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled convolution kernels.

Each window is accumulated strictly left to right (j = -m..m), which makes
the output independent of how callers batch or parallelize over centers.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def sliding_correlate(values, weights):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nw = w.shape[0]
    cdef Py_ssize_t nout = v.shape[0] - nw + 1
    if nout <= 0:
        raise ValueError("weights longer than values")
    out_arr = np.empty(nout, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(nout):
        acc = 0.0
        for j in range(nw):
            acc += v[i + j] * w[j]
        out[i] = acc
    return out_arr


def windowed_dot(values, weights, centers):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const Py_ssize_t[::1] c = np.ascontiguousarray(centers, dtype=np.intp)
    cdef Py_ssize_t nw = w.shape[0]
    cdef Py_ssize_t m = (nw - 1) // 2
    cdef Py_ssize_t nc = c.shape[0]
    out_arr = np.empty(nc, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, base
    cdef double acc
    for k in range(nc):
        base = c[k] - m
        if base < 0 or base + nw > v.shape[0]:
            raise IndexError("window exceeds the sample range at some center")
        acc = 0.0
        for j in range(nw):
            acc += v[base + j] * w[j]
        out[k] = acc
    return out_arr
