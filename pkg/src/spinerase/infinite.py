"""Unlimited-reservoir baseline: constant spin temperature throughout.

With an unlimited reservoir the memory up-probability after cycle m depends
only on the fixed inverse spin temperature and the current level gap, so the
accumulated cost is a sum of independent 0/1 increments.  Its stationary
distribution has a closed form built from q-Pochhammer products, which this
module also evaluates; agreement between the iterated recurrence and the
closed form is one of the package's primary cross-checks.
"""

import math

import numpy as np

from . import _kernels
from .errors import DomainError
from .stats import SpinlaborDistribution

__all__ = [
    "infinite_analytic_distribution",
    "infinite_spinlabor_recurrence",
    "q_pochhammer",
    "up_probability",
]

DEFAULT_STEPS = 10000
_PRODUCT_EPS = 1e-16


def up_probability(gamma: float, m: int) -> float:
    """Memory up-probability after erasure cycle m at constant temperature.

    Equals ``exp(-(m+1)*gamma) / (1 + exp(-(m+1)*gamma))``, which lies in
    [0, 1/2]; strictly decreasing in m for gamma > 0.
    """
    if m < 0:
        raise DomainError(f"cycle index must be >= 0, got {m}")
    if math.isinf(gamma):
        return 0.0
    x = math.exp(-(m + 1) * gamma)
    return x / (1.0 + x)


def infinite_spinlabor_recurrence(gamma: float, m_max: int) -> SpinlaborDistribution:
    """Cost distribution after ``m_max`` cycles, by iterating the recurrence.

    Starts from all mass at zero cost and convolves one Bernoulli increment
    per cycle with success probability ``up_probability(gamma, m - 1)``.
    """
    if m_max < 0:
        raise DomainError(f"m_max must be >= 0, got {m_max}")
    p_seq = np.array([up_probability(gamma, m) for m in range(m_max)])
    probs = _kernels.bernoulli_chain(p_seq)
    return SpinlaborDistribution("infinite", m_max, probs)


def q_pochhammer(a: float, q: float, n: int | None) -> float:
    """Product ``(a; q)_n``; ``n=None`` gives the infinite product.

    The empty product is 1.  Infinite products truncate once the running
    factor is within 1e-16 of 1, and require |q| < 1.

    Raises
    ------
    DomainError
        For the divergent case |q| >= 1 with n = None, or negative n.
    """
    if n is None:
        if abs(q) >= 1.0:
            raise DomainError(f"infinite product diverges for |q| >= 1, got q={q}")
        out = 1.0
        term = a
        k = 0
        while abs(term) >= _PRODUCT_EPS:
            out *= 1.0 - term
            k += 1
            term = a * q**k
        return out
    if n < 0:
        raise DomainError(f"product length must be >= 0, got {n}")
    out = 1.0
    for k in range(n):
        out *= 1.0 - a * q**k
    return out


def infinite_analytic_distribution(gamma: float, n: int) -> float:
    """Stationary probability that the accumulated cost is ``n`` quanta.

    Closed form ``exp(-n(n+1)*gamma/2) / ((q; q)_n * (-q; q)_inf)`` with
    ``q = exp(-gamma)``.  Rejected at gamma <= 0, where every cycle costs
    with probability 1/2 and no stationary distribution exists.
    """
    if gamma <= 0.0:
        raise DomainError("stationary cost distribution requires gamma > 0")
    if n < 0:
        raise DomainError(f"cost must be >= 0, got {n}")
    q = math.exp(-gamma)
    return math.exp(-0.5 * n * (n + 1) * gamma) / (
        q_pochhammer(q, q, n) * q_pochhammer(-q, q, None)
    )
