"""Cost accounting for erasure runs: distributions, averages, bounds, resets.

All costs are in units of hbar (= 1).  The accumulated cost of a run is the
number of CNOT steps that hit a memory in the up state, so after m cycles it
is supported on 0..m.  The package-level convention for the distribution of
that cost follows the marginal recurrence: each cycle contributes an
independent increment with the traced up-probability of the preceding
equilibration.  (The exact trajectory law correlates increments through the
reservoir; see the oracle module for the exact small-N reference.)
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ReservoirSpec
from .errors import DomainError
from .finite import ErasureTrace

__all__ = [
    "CostSummary",
    "SpinlaborDistribution",
    "avg_spinlabor",
    "finite_bound",
    "finite_spinlabor_distribution",
    "infinite_bound",
    "ln2_reference_bound",
    "reset_cost",
    "reset_distribution",
    "spinlabor_per_bit",
    "summarize",
    "total_avg_with_reset",
]


@dataclass(frozen=True)
class SpinlaborDistribution:
    """Probability that the accumulated cost equals n quanta.

    ``variant`` is "finite" or "infinite"; ``steps`` the number of CNOT
    steps folded in; ``probs[n]`` the probability of total cost n.
    """

    variant: str
    steps: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs.flags.writeable = False

    def mean(self) -> float:
        return float(np.dot(self.probs, np.arange(len(self.probs))))


@dataclass(frozen=True)
class CostSummary:
    """Headline numbers for one finite-reservoir erasure run."""

    avg_spinlabor: float
    avg_per_bit: float
    bound_finite: float
    bound_infinite: float
    reset_cost: float
    total_with_reset: float
    p_up_final: float
    p_down_final: float


def finite_spinlabor_distribution(trace: ErasureTrace) -> SpinlaborDistribution:
    """Cost distribution of the traced run, one Bernoulli increment per cycle.

    The CNOT of cycle m costs one quantum with the up-probability recorded
    after cycle m - 1, so a trace of C cycles folds in C increments with
    probabilities ``trace.p_up[:-1]``.
    """
    p_seq = np.ascontiguousarray(trace.p_up[:-1])
    probs = _kernels.bernoulli_chain(p_seq)
    return SpinlaborDistribution("finite", len(p_seq), probs)


def avg_spinlabor(trace: ErasureTrace) -> float:
    """Mean accumulated cost of the traced run: the sum of pre-CNOT up-probabilities."""
    return float(trace.p_up[:-1].sum())


def finite_bound(n_size: int, gamma: float) -> float:
    """Lower bound on the mean cost of a full run against a size-N reservoir.

    Equals the exact expected cost of the first CNOT,
    ``N e^-gamma / ((N+1)(1 + e^-gamma)) + 1 / (2(N+1))``, and is tightest
    for small reservoirs.
    """
    if n_size < 1:
        raise DomainError(f"reservoir size must be >= 1, got {n_size}")
    x = math.exp(-gamma)
    return n_size * x / ((n_size + 1) * (1.0 + x)) + 0.5 / (n_size + 1)


def infinite_bound(alpha: float) -> float:
    """Lower bound on the mean cost of complete erasure at constant temperature.

    Equals ``ln(1/(1-alpha)) / ln((1-alpha)/alpha)``; defined only for
    0 < alpha < 0.5.
    """
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"bound requires 0 < alpha < 0.5, got {alpha}")
    return math.log(1.0 / (1.0 - alpha)) / math.log((1.0 - alpha) / alpha)


def ln2_reference_bound(gamma: float) -> float:
    """Reference line ``ln(2) / gamma``: the single-conserved-quantity erasure bound."""
    if gamma <= 0.0:
        raise DomainError(f"reference bound requires gamma > 0, got {gamma}")
    return math.log(2.0) / gamma


def spinlabor_per_bit(avg: float, p_up_f: float) -> float:
    """Mean cost per bit of memory entropy actually erased.

    Rescales ``avg`` by ln 2 over the entropy change
    ``ln 2 + p_down ln p_down + p_up ln p_up`` (with 0 ln 0 = 0), for a
    memory that started with one full bit.

    Raises
    ------
    DomainError
        If ``p_up_f`` is not in [0, 1/2): at exactly 1/2 nothing was erased
        and the ratio diverges.
    """
    if not 0.0 <= p_up_f < 0.5:
        raise DomainError(f"final up-probability must be in [0, 0.5), got {p_up_f}")
    erased = _erased_entropy(p_up_f)
    if erased <= 0.0:
        raise DomainError("no entropy was erased; cost per bit diverges")
    return avg * math.log(2.0) / erased


def _erased_entropy(p_up_f):
    p_down = 1.0 - p_up_f
    out = math.log(2.0)
    if p_up_f > 0.0:
        out += p_up_f * math.log(p_up_f)
    if p_down > 0.0:
        out += p_down * math.log(p_down)
    return out


def reset_cost(n_size: int, p_up_final: float) -> float:
    """Mean cost of returning all N - 1 ancillas to the down state.

    The ancillas are perfectly correlated with the memory, so the reset
    CNOTs cost ``(N - 1) * p_up_final``.
    """
    if n_size < 1:
        raise DomainError(f"reservoir size must be >= 1, got {n_size}")
    return (n_size - 1) * p_up_final


def reset_distribution(
    pre_reset: SpinlaborDistribution, n_size: int, p_up_final: float
) -> SpinlaborDistribution:
    """Cost distribution after the ancilla reset is folded in.

    With probability ``p_up_final`` the reset adds N - 1 quanta (all
    ancillas flip), otherwise nothing: the up-branch mass shifts by N - 1
    while the down branch stays, extending the support to 2(N - 1) and
    raising the mean by exactly ``reset_cost``.
    """
    shift = n_size - 1
    pre = pre_reset.probs
    probs = np.zeros(len(pre) + shift)
    probs[: len(pre)] += pre * (1.0 - p_up_final)
    probs[shift : shift + len(pre)] += pre * p_up_final
    return SpinlaborDistribution("finite", pre_reset.steps + 1, probs)


def total_avg_with_reset(trace: ErasureTrace) -> float:
    """Mean cost of the full run plus the ancilla reset."""
    return avg_spinlabor(trace) + reset_cost(trace.size_n, trace.p_up_final)


def summarize(spec: ReservoirSpec, trace: ErasureTrace) -> CostSummary:
    """Headline cost numbers for a completed run.

    Degenerate corners are reported as infinities rather than errors: the
    per-bit cost when no entropy was erased, and the constant-temperature
    bound at alpha = 0.5 (its gamma -> 0 limit).
    """
    avg = avg_spinlabor(trace)
    p_f = trace.p_up_final
    if p_f < 0.5 and _erased_entropy(p_f) > 0.0:
        per_bit = spinlabor_per_bit(avg, p_f)
    else:
        per_bit = math.inf
    if 0.0 < spec.alpha < 0.5:
        b_inf = infinite_bound(spec.alpha)
    elif spec.alpha == 0.0:
        b_inf = 0.0
    else:
        b_inf = math.inf
    return CostSummary(
        avg_spinlabor=avg,
        avg_per_bit=per_bit,
        bound_finite=finite_bound(spec.size_n, spec.gamma),
        bound_infinite=b_inf,
        reset_cost=reset_cost(trace.size_n, p_f),
        total_with_reset=total_avg_with_reset(trace),
        p_up_final=p_f,
        p_down_final=1.0 - p_f,
    )
