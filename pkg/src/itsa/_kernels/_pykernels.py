"""Pure-Python/numpy fallback for the hot simulation kernels.

Matches the compiled kernels operation-for-operation: the recursion body is
``e = phi*e_prev + a + theta*a_prev`` evaluated left to right, so both
backends agree to floating-point rounding.
"""

from __future__ import annotations

import numpy as np


def arma_recursion(innov, phi, theta, e0, a0):
    """Run e_t = phi*e_{t-1} + a_t + theta*a_{t-1} over one innovation path."""
    innov = np.asarray(innov, dtype=np.float64)
    out = np.empty_like(innov)
    e_prev = float(e0)
    a_prev = float(a0)
    for i in range(innov.shape[0]):
        a = innov[i]
        e_prev = phi * e_prev + a + theta * a_prev
        out[i] = e_prev
        a_prev = a
    return out


def arma_recursion_batch(innov, phi, theta, e0, a0):
    """Vectorized over paths: ``innov`` is (paths, steps), ``e0``/``a0`` (paths,)."""
    innov = np.asarray(innov, dtype=np.float64)
    out = np.empty_like(innov)
    e_prev = np.array(e0, dtype=np.float64, copy=True)
    a_prev = np.array(a0, dtype=np.float64, copy=True)
    for t in range(innov.shape[1]):
        a = innov[:, t]
        e_prev = phi * e_prev + a + theta * a_prev
        out[:, t] = e_prev
        a_prev = a
    return out
