# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the erasure-cycle recurrence and cost convolution."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


def run_cycles(double[:, ::1] table, int m_start, int n_cycles, double[::1] lchoose):
    """Advance the joint (reservoir, memory) table through erasure cycles.

    Applies cycles m = m_start+1 .. m_start+n_cycles in place. `lchoose[k]`
    must hold log C(N, k) for the reservoir size N = table.shape[0] - 1.
    Returns per-cycle arrays (p_up, alpha_frac, mass, jz_gap) where jz_gap is
    the change of the mean total spin projection across the equilibration
    (zero up to roundoff when the exchange rule conserves it).
    """
    cdef int nmax = table.shape[0] - 1
    cdef int m, n, s, cyc
    cdef double t0, t1, a, b, jz_pre, jz_post, tot, up, exc
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p_up = np.empty(n_cycles)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] alpha_frac = np.empty(n_cycles)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mass = np.empty(n_cycles)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] jz_gap = np.empty(n_cycles)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] new0 = np.empty(nmax + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] new1 = np.empty(nmax + 1)
    cdef double[::1] v0 = new0
    cdef double[::1] v1 = new1

    for cyc in range(n_cycles):
        m = m_start + 1 + cyc
        s = m + 1
        jz_pre = 0.0
        jz_post = 0.0
        tot = 0.0
        up = 0.0
        exc = 0.0
        for n in range(nmax + 1):
            jz_pre += table[n, 0] * n + table[n, 1] * (n + s)
            # memory-down sink: stays, or absorbs the memory-ancilla drop
            a = table[n, 0]
            if n - s >= 0:
                a += table[n - s, 1]
                t0 = 1.0 / (1.0 + exp(lchoose[n - s] - lchoose[n]))
            else:
                t0 = 1.0
            # memory-up sink: stays, or is excited at the reservoir's expense
            b = table[n, 1]
            if n + s <= nmax:
                b += table[n + s, 0]
                t1 = 1.0 / (1.0 + exp(lchoose[n + s] - lchoose[n]))
            else:
                t1 = 1.0
            v0[n] = t0 * a
            v1[n] = t1 * b
        for n in range(nmax + 1):
            table[n, 0] = v0[n]
            table[n, 1] = v1[n]
            jz_post += v0[n] * n + v1[n] * (n + s)
            tot += v0[n] + v1[n]
            up += v1[n]
            exc += (v0[n] + v1[n]) * n
        p_up[cyc] = up
        alpha_frac[cyc] = exc / tot / nmax
        mass[cyc] = tot
        jz_gap[cyc] = jz_post - jz_pre
    return p_up, alpha_frac, mass, jz_gap


def bernoulli_chain(double[::1] p_seq):
    """Distribution of a sum of independent 0/1 increments with given probabilities."""
    cdef int steps = p_seq.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] probs = np.zeros(steps + 1)
    cdef double[::1] v = probs
    cdef int i, n
    cdef double p
    v[0] = 1.0
    for i in range(steps):
        p = p_seq[i]
        for n in range(i + 1, 0, -1):
            v[n] = v[n] * (1.0 - p) + v[n - 1] * p
        v[0] = v[0] * (1.0 - p)
    return probs
