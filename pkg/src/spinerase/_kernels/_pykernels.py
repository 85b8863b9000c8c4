"""Pure-NumPy fallback for the compiled kernels.

Mirrors ``_cykernels`` operation for operation; both backends must agree to
floating-point roundoff (see tests/test_kernels.py).
"""

import numpy as np


def run_cycles(table, m_start, n_cycles, lchoose):
    """Advance the joint (reservoir, memory) table through erasure cycles.

    Same contract as the compiled version: cycles m = m_start+1 ..
    m_start+n_cycles applied in place, per-cycle (p_up, alpha_frac, mass,
    jz_gap) returned.
    """
    nmax = table.shape[0] - 1
    n = np.arange(nmax + 1)
    p_up = np.empty(n_cycles)
    alpha_frac = np.empty(n_cycles)
    mass = np.empty(n_cycles)
    jz_gap = np.empty(n_cycles)
    for cyc in range(n_cycles):
        m = m_start + 1 + cyc
        s = m + 1
        old0 = table[:, 0]
        old1 = table[:, 1]
        jz_pre = float(np.dot(old0, n) + np.dot(old1, n + s))

        t0 = np.ones(nmax + 1)
        lo = n >= s
        t0[lo] = 1.0 / (1.0 + np.exp(lchoose[n[lo] - s] - lchoose[n[lo]]))
        t1 = np.ones(nmax + 1)
        hi = n <= nmax - s
        t1[hi] = 1.0 / (1.0 + np.exp(lchoose[n[hi] + s] - lchoose[n[hi]]))

        drop = np.zeros(nmax + 1)
        drop[s:] = old1[: nmax + 1 - s]            # memory-ancilla fell by s
        raised = np.zeros(nmax + 1)
        raised[: nmax + 1 - s] = old0[s:]          # memory-ancilla rose by s
        new0 = t0 * (old0 + drop)
        new1 = t1 * (old1 + raised)
        table[:, 0] = new0
        table[:, 1] = new1

        tot = float(new0.sum() + new1.sum())
        p_up[cyc] = new1.sum()
        alpha_frac[cyc] = float(np.dot(new0 + new1, n)) / tot / nmax
        mass[cyc] = tot
        jz_gap[cyc] = float(np.dot(new0, n) + np.dot(new1, n + s)) - jz_pre
    return p_up, alpha_frac, mass, jz_gap


def bernoulli_chain(p_seq):
    """Distribution of a sum of independent 0/1 increments with given probabilities."""
    steps = len(p_seq)
    probs = np.zeros(steps + 1)
    probs[0] = 1.0
    for i, p in enumerate(p_seq):
        probs[1 : i + 2] = probs[1 : i + 2] * (1.0 - p) + probs[0 : i + 1] * p
        probs[0] *= 1.0 - p
    return probs
