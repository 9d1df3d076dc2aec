# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the sequential ARMA recursion.

The recursion e_t = phi*e_{t-1} + a_t + theta*a_{t-1} cannot be vectorized
over time, so it is the one genuinely hot loop in the Monte Carlo paths.
Semantics match itsa._kernels._pykernels exactly.
"""

import numpy as np


def arma_recursion(double[::1] innov, double phi, double theta, double e0, double a0):
    """Run the recursion over one innovation path; returns a float64 array."""
    cdef Py_ssize_t n = innov.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double e_prev = e0
    cdef double a_prev = a0
    cdef double a
    cdef Py_ssize_t i
    for i in range(n):
        a = innov[i]
        e_prev = phi * e_prev + a + theta * a_prev
        out[i] = e_prev
        a_prev = a
    return out_arr


def arma_recursion_batch(double[:, ::1] innov, double phi, double theta,
                         double[::1] e0, double[::1] a0):
    """Run the recursion over (paths, steps) innovations; one row per path."""
    cdef Py_ssize_t m = innov.shape[0]
    cdef Py_ssize_t n = innov.shape[1]
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double e_prev, a_prev, a
    cdef Py_ssize_t p, i
    for p in range(m):
        e_prev = e0[p]
        a_prev = a0[p]
        for i in range(n):
            a = innov[p, i]
            e_prev = phi * e_prev + a + theta * a_prev
            out[p, i] = e_prev
            a_prev = a
    return out_arr
