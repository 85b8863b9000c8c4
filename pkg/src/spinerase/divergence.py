"""Distribution distances and the minimum-reservoir-size search.

The search asks: how many reservoir spins does a finite run need before its
cost statistics are indistinguishable (below a Jensen-Shannon tolerance,
in nats) from a constant-temperature run over the same number of cycles?
The comparison clamps the constant-temperature recurrence to the finite
run's cycle count so both distributions describe the same number of CNOTs.

The returned size must be stable: every larger size in the verified window
also meets the tolerance, which excludes the accidental small-size dip where
both distributions are merely concentrated near zero cost.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ReservoirSpec
from .errors import DomainError, MatchNotFoundError, NormalizationError, SupportError
from .finite import run_protocol
from .infinite import up_probability

__all__ = ["DivergenceReport", "MatchResult", "jsd", "kl_divergence", "n_min_search"]

# bins with less probability than this contribute < 1e-297 nats and are
# skipped, which also sidesteps subnormal underflow in the mixture
_MASS_EPS = 1e-300


@dataclass(frozen=True)
class DivergenceReport:
    jsd_nats: float
    kl_p_to_m: float
    kl_q_to_m: float
    support_union_size: int


@dataclass(frozen=True)
class MatchResult:
    """Smallest stable reservoir size matching the constant-temperature statistics."""

    alpha_i: float
    n_min: int
    jsd_at_n_min: float
    p_up_final_at_n_min: float


def kl_divergence(p: np.ndarray, m: np.ndarray) -> float:
    """Relative entropy ``sum p ln(p/m)`` in nats, with 0 ln 0 = 0.

    Raises
    ------
    SupportError
        If ``p`` carries mass on a bin where ``m`` has none.
    """
    p = np.asarray(p, dtype=float)
    m = np.asarray(m, dtype=float)
    if p.shape != m.shape:
        raise DomainError("distributions must share one support")
    sel = p > _MASS_EPS
    if np.any(m[sel] == 0.0):
        raise SupportError("first distribution has mass where the reference has none")
    return float(np.sum(p[sel] * (np.log(p[sel]) - np.log(m[sel]))))


def jsd(p: np.ndarray, q: np.ndarray) -> DivergenceReport:
    """Jensen-Shannon divergence between two cost distributions, in nats.

    Supports are zero-padded to their union; the result is symmetric and
    bounded by ln 2.

    Raises
    ------
    NormalizationError
        If either input's mass deviates from 1 by more than 1e-9.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for probs in (p, q):
        if abs(probs.sum() - 1.0) > 1e-9:
            raise NormalizationError("divergence inputs must be normalised")
    size = max(len(p), len(q))
    pp = np.zeros(size)
    pp[: len(p)] = p
    qq = np.zeros(size)
    qq[: len(q)] = q
    mix = 0.5 * (pp + qq)
    kl_p = kl_divergence(pp, mix)
    kl_q = kl_divergence(qq, mix)
    return DivergenceReport(0.5 * (kl_p + kl_q), kl_p, kl_q, size)


def _clamped_pair(alpha_i, n_size):
    """Finite and constant-temperature cost distributions over N - 1 cycles."""
    spec = ReservoirSpec(n_size, alpha_i)
    _, trace = run_protocol(spec)
    fin = _kernels.bernoulli_chain(np.ascontiguousarray(trace.p_up[:-1]))
    q_seq = np.array([up_probability(spec.gamma, m) for m in range(n_size - 1)])
    inf = _kernels.bernoulli_chain(q_seq)
    return fin, inf, trace.p_up_final


def n_min_search(
    alpha_i: float,
    tolerance_nats: float = 0.005,
    n_max_scan: int = 2000,
    stability_window: int = 50,
) -> MatchResult:
    """Smallest reservoir size whose cost statistics match the constant-temperature run.

    Scans sizes in ascending order.  A candidate is accepted once every one
    of the next ``stability_window`` sizes also meets the tolerance (or the
    scan ceiling arrives with the candidate still passing); a failure inside
    the window discards the candidate and the scan resumes.

    Raises
    ------
    MatchNotFoundError
        If no stable size exists at or below ``n_max_scan``.
    """
    if not 0.0 < alpha_i <= 0.5:
        raise DomainError(f"polarisation must be in (0, 0.5], got {alpha_i}")
    if tolerance_nats <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tolerance_nats}")
    candidate = None
    for n_size in range(1, n_max_scan + 1):
        fin, inf, p_f = _clamped_pair(alpha_i, n_size)
        report = jsd(fin, inf)
        if report.jsd_nats < tolerance_nats:
            if candidate is None:
                candidate = MatchResult(alpha_i, n_size, report.jsd_nats, p_f)
        else:
            candidate = None
        if candidate is not None and n_size - candidate.n_min >= stability_window:
            return candidate
    if candidate is not None:
        return candidate
    raise MatchNotFoundError(
        f"no stable size below {n_max_scan} at {tolerance_nats} nats for "
        f"alpha_i={alpha_i}"
    )
