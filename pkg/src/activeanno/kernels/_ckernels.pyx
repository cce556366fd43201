# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled distance kernels: the inner loops of clustering and neighbour search.

Distances are accumulated as sum((x - c)^2) in index order, so results are
deterministic for a given input.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "cython"


def sqdist_matrix(double[:, ::1] points, double[:, ::1] centers):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    if centers.shape[1] != d:
        raise ValueError("dimension mismatch between points and centers")
    out_arr = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff
    with nogil:
        for i in range(n):
            for j in range(k):
                acc = 0.0
                for m in range(d):
                    diff = points[i, m] - centers[j, m]
                    acc += diff * diff
                out[i, j] = acc
    return out_arr


def assign_nearest(double[:, ::1] points, double[:, ::1] centers):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    if centers.shape[1] != d:
        raise ValueError("dimension mismatch between points and centers")
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, best
    cdef Py_ssize_t best_j
    with nogil:
        for i in range(n):
            best = -1.0
            best_j = 0
            for j in range(k):
                acc = 0.0
                for m in range(d):
                    diff = points[i, m] - centers[j, m]
                    acc += diff * diff
                # strict < keeps the lowest index on exact ties
                if best < 0.0 or acc < best:
                    best = acc
                    best_j = j
            labels[i] = best_j
            dists[i] = best
    return labels_arr, dists_arr


def lloyd_step(double[:, ::1] points, double[:, ::1] centers):
    """Fused assignment + accumulation pass for one Lloyd iteration:
    labels, squared distances, per-cluster coordinate sums and counts."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    if centers.shape[1] != d:
        raise ValueError("dimension mismatch between points and centers")
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr
    cdef double[:, ::1] sums = sums_arr
    cdef long long[::1] counts = counts_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, best
    cdef Py_ssize_t best_j
    with nogil:
        for i in range(n):
            best = -1.0
            best_j = 0
            for j in range(k):
                acc = 0.0
                for m in range(d):
                    diff = points[i, m] - centers[j, m]
                    acc += diff * diff
                if best < 0.0 or acc < best:
                    best = acc
                    best_j = j
            labels[i] = best_j
            dists[i] = best
            counts[best_j] += 1
            for m in range(d):
                sums[best_j, m] += points[i, m]
    return labels_arr, dists_arr, sums_arr, counts_arr


def min_sqdist(double[:, ::1] points, double[:, ::1] refs):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t k = refs.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    if refs.shape[1] != d:
        raise ValueError("dimension mismatch between points and refs")
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, best
    with nogil:
        for i in range(n):
            best = -1.0
            for j in range(k):
                acc = 0.0
                for m in range(d):
                    diff = points[i, m] - refs[j, m]
                    acc += diff * diff
                if best < 0.0 or acc < best:
                    best = acc
            out[i] = best
    return out_arr
