# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: centroid assignment and farthest-point greedy.

Tie-breaking matches the numpy fallback: strict comparisons keep the
lowest index on exact ties.
"""

import numpy as np
cimport numpy as cnp

BACKEND = "cython"


def nearest_centroids(x, centroids):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] cv = np.ascontiguousarray(centroids, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t d = xv.shape[1]
    cdef Py_ssize_t k = cv.shape[0]
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr
    cdef Py_ssize_t i, j, t
    cdef double best, acc, diff
    cdef long long best_j
    for i in range(n):
        best = -1.0
        best_j = 0
        for j in range(k):
            acc = 0.0
            for t in range(d):
                diff = xv[i, t] - cv[j, t]
                acc += diff * diff
            if best < 0.0 or acc < best:
                best = acc
                best_j = j
        labels[i] = best_j
        dists[i] = best
    return labels_arr, dists_arr


def greedy_select(x, initial, count):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t d = xv.shape[1]
    cdef Py_ssize_t budget = count
    selected_arr = np.empty(budget, dtype=np.int64)
    cdef long long[::1] selected = selected_arr
    cdef double[::1] min_dist = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, t, step
    cdef Py_ssize_t pick = initial
    cdef double dot, dist, best
    cdef Py_ssize_t best_i

    selected[0] = pick
    for i in range(n):
        dot = 0.0
        for t in range(d):
            dot += xv[i, t] * xv[pick, t]
        min_dist[i] = 1.0 - dot
    min_dist[pick] = -1.0

    for step in range(1, budget):
        best = min_dist[0]
        best_i = 0
        for i in range(1, n):
            if min_dist[i] > best:
                best = min_dist[i]
                best_i = i
        pick = best_i
        selected[step] = pick
        for i in range(n):
            dot = 0.0
            for t in range(d):
                dot += xv[i, t] * xv[pick, t]
            dist = 1.0 - dot
            if dist < min_dist[i]:
                min_dist[i] = dist
        min_dist[pick] = -1.0
    return selected_arr
