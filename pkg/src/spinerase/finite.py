"""Finite-reservoir erasure protocol.

The protocol couples a memory spin (initially up with probability 1/2) to a
reservoir of N spins.  It starts with one equilibration step, then repeats
erasure cycles, each one a CNOT step (which widens the memory-ancilla level
gap by one quantum) followed by an equilibration step that exchanges the
current gap's worth of spin projection with the reservoir.  Equilibration
makes every accessible microstate equally likely, which reduces to weighting
the two macrostates of each exchange class by their degeneracy counts.  At
most N - 1 cycles are possible, because the memory-ancilla eigenvalue gap
cannot exceed the reservoir's spread.

States are tracked as a joint table ``P[n, M]`` over the reservoir
excitation ``n`` and the memory bit ``M``; entries for ``n`` outside
``0..N`` are hard zeros.  No renormalisation is ever applied: the mass of
the table is monitored so a recurrence bug shows up as drift instead of
being papered over.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ReservoirSpec, binom_ratio, initial_reservoir, log_binomials
from .errors import (
    DomainError,
    HistoryError,
    NormalizationError,
    ProtocolExhaustedError,
)

__all__ = [
    "ErasureTrace",
    "JointDistribution",
    "closed_form_up",
    "erasure_cycle",
    "extract_reservoir",
    "first_equilibration",
    "memory_up_probability",
    "mean_total_spin",
    "reuse_iteration",
    "run_protocol",
    "transition_prob_down",
    "transition_prob_up",
]


@dataclass(frozen=True)
class JointDistribution:
    """Equilibrium joint distribution after ``cycle_m`` completed cycles.

    ``table[n, M]`` is the probability of reservoir excitation ``n`` together
    with memory bit ``M``.  Immutable snapshot; total mass is tracked, not
    silently restored.
    """

    cycle_m: int
    table: np.ndarray

    def __post_init__(self):
        if not 0 <= self.cycle_m <= self.table.shape[0] - 2:
            raise DomainError(
                f"cycle index {self.cycle_m} outside the protocol range "
                f"[0, {self.table.shape[0] - 2}]"
            )
        self.table.flags.writeable = False

    @property
    def size_n(self) -> int:
        return self.table.shape[0] - 1

    def total_mass(self) -> float:
        return float(self.table.sum())


@dataclass(frozen=True)
class ErasureTrace:
    """Per-cycle record of a protocol run, indexed by the cycle number m.

    ``p_up[m]`` is the memory up-probability after the equilibration of
    cycle m, ``alpha_m[m]`` the reservoir's mean excitation fraction,
    ``norm_drift[m]`` the signed deviation of the table mass from one, and
    ``jz_gap[m]`` the change of the mean total spin projection across the
    equilibration step (conserved up to roundoff).
    """

    size_n: int
    p_up: np.ndarray
    alpha_m: np.ndarray
    norm_drift: np.ndarray
    jz_gap: np.ndarray

    @property
    def cycles(self) -> int:
        return len(self.p_up) - 1

    @property
    def p_up_final(self) -> float:
        return float(self.p_up[-1])


def transition_prob_down(n_size: int, m: int, n: int) -> float:
    """Probability that the exchange class feeding ``(n, down)`` lands there.

    The class pairs ``(n, down)`` with ``(n - m - 1, up)``; the result is the
    degeneracy share ``C(N, n) / (C(N, n - m - 1) + C(N, n))`` for
    ``n >= m + 1`` and exactly 1 when the partner state does not exist.
    """
    _check_transition_args(n_size, m, n)
    if n < m + 1:
        return 1.0
    return 1.0 / (1.0 + binom_ratio(n_size, n - m - 1, n))


def transition_prob_up(n_size: int, m: int, n: int) -> float:
    """Probability that the exchange class feeding ``(n, up)`` lands there.

    Degeneracy share ``C(N, n) / (C(N, n + m + 1) + C(N, n))`` for
    ``n <= N - m - 1`` and exactly 1 otherwise.
    """
    _check_transition_args(n_size, m, n)
    if n > n_size - m - 1:
        return 1.0
    return 1.0 / (1.0 + binom_ratio(n_size, n + m + 1, n))


def _check_transition_args(n_size, m, n):
    if not 0 <= n <= n_size:
        raise DomainError(f"excitation index must be in [0, {n_size}], got {n}")
    if not 0 <= m <= n_size - 1:
        raise DomainError(f"cycle index must be in [0, {n_size - 1}], got {m}")


def _transition_arrays(n_size, m, lchoose):
    """Vectorised transition factors for one equilibration stage."""
    n = np.arange(n_size + 1)
    s = m + 1
    t0 = np.ones(n_size + 1)
    lo = n >= s
    t0[lo] = 1.0 / (1.0 + np.exp(lchoose[n[lo] - s] - lchoose[n[lo]]))
    t1 = np.ones(n_size + 1)
    hi = n <= n_size - s
    t1[hi] = 1.0 / (1.0 + np.exp(lchoose[n[hi] + s] - lchoose[n[hi]]))
    return t0, t1


def _first_equilibration_table(reservoir, p_up_init, lchoose):
    n_size = len(reservoir) - 1
    p_down = 1.0 - p_up_init
    t0, t1 = _transition_arrays(n_size, 0, lchoose)
    below = np.zeros(n_size + 1)
    below[1:] = reservoir[:-1]       # reservoir at n - 1
    above = np.zeros(n_size + 1)
    above[:-1] = reservoir[1:]       # reservoir at n + 1
    col0 = t0 * (reservoir * p_down + below * p_up_init)
    col1 = t1 * (reservoir * p_up_init + above * p_down)
    return np.stack([col0, col1], axis=1)


def first_equilibration(reservoir: np.ndarray, p_up_init: float) -> JointDistribution:
    """Joint distribution after the initial reservoir-memory equilibration.

    ``reservoir`` is the excitation distribution the memory is brought in
    contact with; the memory starts up with probability ``p_up_init``
    (1/2 in the standard protocol).
    """
    if not 0.0 <= p_up_init <= 1.0:
        raise DomainError(f"memory up-probability must be in [0, 1], got {p_up_init}")
    reservoir = np.asarray(reservoir, dtype=float)
    lchoose = log_binomials(len(reservoir) - 1)
    return JointDistribution(0, _first_equilibration_table(reservoir, p_up_init, lchoose))


def erasure_cycle(prev: JointDistribution) -> JointDistribution:
    """One more CNOT-plus-equilibration cycle applied to ``prev``.

    Raises
    ------
    ProtocolExhaustedError
        If ``prev`` already sits at the protocol maximum of N - 1 cycles.
    """
    if prev.cycle_m >= prev.size_n - 1:
        raise ProtocolExhaustedError(
            f"reservoir of size {prev.size_n} admits at most {prev.size_n - 1} cycles"
        )
    table = prev.table.copy()
    lchoose = log_binomials(prev.size_n)
    _kernels.run_cycles(table, prev.cycle_m, 1, lchoose)
    return JointDistribution(prev.cycle_m + 1, table)


def memory_up_probability(joint: JointDistribution) -> float:
    """Marginal probability that the memory bit is up."""
    return float(joint.table[:, 1].sum())


def mean_total_spin(joint: JointDistribution) -> float:
    """Mean total spin projection, counting the memory-ancilla gap of m + 1 quanta."""
    n = np.arange(joint.size_n + 1)
    gap = joint.cycle_m + 1
    return float(np.dot(joint.table[:, 0], n) + np.dot(joint.table[:, 1], n + gap))


def run_protocol(
    spec: ReservoirSpec,
    p_up_init: float = 0.5,
    cycles: int | None = None,
    *,
    reservoir: np.ndarray | None = None,
) -> tuple[JointDistribution, ErasureTrace]:
    """Run the first equilibration followed by ``cycles`` erasure cycles.

    ``cycles`` defaults to the protocol maximum N - 1.  ``reservoir``
    overrides the equilibrium initial distribution (used when a reservoir is
    reused after a previous run).  Returns the final joint distribution and
    the per-cycle trace.
    """
    if not 0.0 <= p_up_init <= 1.0:
        raise DomainError(f"memory up-probability must be in [0, 1], got {p_up_init}")
    n_size = spec.size_n
    if cycles is None:
        cycles = spec.max_cycles
    if not 0 <= cycles <= n_size - 1:
        raise DomainError(f"cycles must be in [0, {n_size - 1}], got {cycles}")
    if reservoir is None:
        reservoir = initial_reservoir(spec)
    else:
        reservoir = np.asarray(reservoir, dtype=float)
        if len(reservoir) != n_size + 1:
            raise DomainError(
                f"reservoir must have {n_size + 1} entries, got {len(reservoir)}"
            )

    lchoose = log_binomials(n_size)
    table = _first_equilibration_table(reservoir, p_up_init, lchoose)
    n = np.arange(n_size + 1)
    # the memory contributes one quantum before the first CNOT
    jz_before = float(np.dot(reservoir, n)) + p_up_init
    mass0 = float(table.sum())

    p_up = np.empty(cycles + 1)
    alpha_m = np.empty(cycles + 1)
    norm_drift = np.empty(cycles + 1)
    jz_gap = np.empty(cycles + 1)
    p_up[0] = table[:, 1].sum()
    alpha_m[0] = float(np.dot(table.sum(axis=1), n)) / mass0 / n_size
    norm_drift[0] = mass0 - 1.0
    jz_gap[0] = float(np.dot(table[:, 0], n) + np.dot(table[:, 1], n + 1)) - jz_before

    if cycles > 0:
        ps, als, mass, gaps = _kernels.run_cycles(table, 0, cycles, lchoose)
        p_up[1:] = ps
        alpha_m[1:] = als
        norm_drift[1:] = mass - 1.0
        jz_gap[1:] = gaps

    joint = JointDistribution(cycles, table)
    trace = ErasureTrace(n_size, p_up, alpha_m, norm_drift, jz_gap)
    return joint, trace


def closed_form_up(
    reservoir: np.ndarray,
    p_up_init: float,
    joint_history: list[JointDistribution],
    n: int,
    m: int,
) -> float:
    """Memory-up joint entry ``P_m(n, 1)`` evaluated without the up-recurrence.

    Unrolls the recurrence into a product of up-transition factors times the
    initial seeding plus a correction sum over the memory-down history, so
    it cross-checks the cycle engine through an algebraically independent
    route.  ``joint_history`` must contain the joint distributions for
    cycles 0 .. m-1 in order.

    Raises
    ------
    HistoryError
        If the history does not cover cycles 0 .. m-1.
    """
    reservoir = np.asarray(reservoir, dtype=float)
    n_size = len(reservoir) - 1
    _check_transition_args(n_size, m, n)
    if len(joint_history) < m:
        raise HistoryError(f"need joints for cycles 0..{m - 1}, got {len(joint_history)}")
    for d in range(m):
        if joint_history[d].cycle_m != d:
            raise HistoryError(f"history entry {d} holds cycle {joint_history[d].cycle_m}")

    p_down = 1.0 - p_up_init
    seed = reservoir[n] * p_up_init
    if n + 1 <= n_size:
        seed += reservoir[n + 1] * p_down

    correction = 0.0
    partial = 1.0  # product of up factors for stages 0 .. d-1
    for d in range(1, m + 1):
        partial *= transition_prob_up(n_size, d - 1, n)
        if n + d + 1 <= n_size:
            correction += joint_history[d - 1].table[n + d + 1, 0] / partial
    full = partial * transition_prob_up(n_size, m, n)
    return full * (seed + correction)


def extract_reservoir(joint: JointDistribution) -> np.ndarray:
    """Reservoir excitation marginal, summing out the memory bit."""
    return joint.table.sum(axis=1)


def reuse_iteration(
    spec: ReservoirSpec, reservoir: np.ndarray
) -> tuple[np.ndarray, float]:
    """One full erasure run of a fresh memory against an already-used reservoir.

    Seeds the protocol with ``reservoir`` instead of the equilibrium
    distribution, runs all N - 1 cycles with a fresh memory at up-probability
    1/2, and returns the post-run reservoir marginal together with the final
    memory up-probability.
    """
    reservoir = np.asarray(reservoir, dtype=float)
    if abs(reservoir.sum() - 1.0) > 1e-9:
        raise NormalizationError("reused reservoir distribution must be normalised")
    joint, trace = run_protocol(spec, 0.5, reservoir=reservoir)
    return extract_reservoir(joint), trace.p_up_final
