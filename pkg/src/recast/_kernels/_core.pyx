# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: parent sampling, batched tree statistics, pairwise
parent-match counts. Contracts and outputs match ``_pure.py`` exactly."""

import numpy as np


def sample_parents(const double[::1] cdf, const long long[::1] offsets, const double[:, ::1] u):
    cdef Py_ssize_t n_children = offsets.shape[0] - 1
    cdef Py_ssize_t reps = u.shape[0]
    out_arr = np.empty((reps, n_children), dtype=np.int32)
    cdef int[:, ::1] out = out_arr
    cdef Py_ssize_t k, r, lo, hi, mid, start, length
    cdef double x
    for k in range(n_children):
        start = offsets[k]
        length = offsets[k + 1] - start
        for r in range(reps):
            x = u[r, k]
            lo = 0
            hi = length
            while lo < hi:
                mid = (lo + hi) >> 1
                if cdf[start + mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= length:
                lo = length - 1
            out[r, k] = <int>lo
    return out_arr


def tree_stats(const int[::1] parents, const long long[::1] offsets):
    cdef Py_ssize_t n_trees = offsets.shape[0] - 1
    depth_arr = np.empty(n_trees, dtype=np.int32)
    breadth_arr = np.empty(n_trees, dtype=np.int32)
    sv_arr = np.empty(n_trees, dtype=np.float64)
    cdef int[::1] depth_out = depth_arr
    cdef int[::1] breadth_out = breadth_arr
    cdef double[::1] sv_out = sv_arr

    # scratch sized to the largest tree in the batch
    cdef Py_ssize_t max_n = 2, t, i, n, start
    for t in range(n_trees):
        if offsets[t + 1] - offsets[t] + 1 > max_n:
            max_n = offsets[t + 1] - offsets[t] + 1
    depths_arr = np.empty(max_n, dtype=np.int64)
    counts_arr = np.empty(max_n, dtype=np.int64)
    sizes_arr = np.empty(max_n, dtype=np.int64)
    cdef long long[::1] depths = depths_arr
    cdef long long[::1] counts = counts_arr
    cdef long long[::1] sizes = sizes_arr

    cdef long long d, deepest, best, path_count
    for t in range(n_trees):
        start = offsets[t]
        n = offsets[t + 1] - start + 1
        depths[0] = 0
        deepest = 0
        for i in range(n):
            counts[i] = 0
            sizes[i] = 1
        for i in range(1, n):
            d = depths[parents[start + i - 1]] + 1
            depths[i] = d
            counts[d] += 1
            if d > deepest:
                deepest = d
        for i in range(n - 1, 0, -1):
            sizes[parents[start + i - 1]] += sizes[i]
        path_count = 0
        for i in range(1, n):
            path_count += sizes[i] * (n - sizes[i])
        best = 0
        for i in range(1, deepest + 1):
            if counts[i] > best:
                best = counts[i]
        depth_out[t] = <int>deepest
        breadth_out[t] = <int>best
        sv_out[t] = path_count / (n * (n - 1) / 2.0)
    return depth_arr, breadth_arr, sv_arr


def pairwise_matches(const int[:, ::1] parents):
    cdef Py_ssize_t reps = parents.shape[0]
    cdef Py_ssize_t n_children = parents.shape[1]
    out_arr = np.zeros((reps, reps), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, k
    cdef long long m
    for a in range(reps):
        out[a, a] = n_children
        for b in range(a + 1, reps):
            m = 0
            for k in range(n_children):
                if parents[a, k] == parents[b, k]:
                    m += 1
            out[a, b] = m
            out[b, a] = m
    return out_arr
