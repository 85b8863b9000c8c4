"""Independent small-scale validators for the recurrence engines.

Everything here is deliberately brute force.  The enumeration tracks all
2^(N+1) microstates of reservoir bit pattern plus memory bit and applies the
equilibration postulate directly: within each class of states coupled by the
allowed exchange, probability is redistributed uniformly.  Its macrostate
marginals certify the cycle engine exactly.  The trajectory distribution and
the Monte Carlo sampler additionally track the accumulated cost along
individual runs, which correlates increments through the reservoir; they
certify each other, and coincide with the marginal-recurrence cost
distribution when only one CNOT is involved.

Capped at N <= 12 spins: these exist to verify, not to scale.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .core import ReservoirSpec, initial_reservoir, log_binomials
from .errors import DomainError
from .finite import _first_equilibration_table, _transition_arrays

__all__ = [
    "MicrostateEnsemble",
    "SampledSpinlabor",
    "enumerate_equilibration",
    "enumerate_protocol",
    "initial_microstates",
    "macrostate_table",
    "sample_spinlabor",
    "trajectory_cost_distribution",
]

MAX_SPINS = 12
MIN_RUNS = 10_000
GENERATOR = "numpy default_rng (PCG64)"


@dataclass(frozen=True)
class MicrostateEnsemble:
    """Full microstate weights: ``weights[pattern, M]`` over reservoir bit patterns."""

    n_spins: int
    weights: np.ndarray

    def __post_init__(self):
        self.weights.flags.writeable = False


@dataclass(frozen=True)
class SampledSpinlabor:
    """Empirical cost distribution from protocol trajectories, with its provenance."""

    probs: np.ndarray
    runs: int
    seed: int
    generator: str = GENERATOR


def _check_size(n_spins):
    if n_spins > MAX_SPINS:
        raise DomainError(f"exhaustive oracle is capped at {MAX_SPINS} spins, got {n_spins}")


def _popcounts(n_spins):
    return np.array([bin(pat).count("1") for pat in range(2**n_spins)])


def initial_microstates(spec: ReservoirSpec, p_up_init: float = 0.5) -> MicrostateEnsemble:
    """Product ensemble of the equilibrium reservoir and an independent memory."""
    _check_size(spec.size_n)
    level = initial_reservoir(spec)
    pops = _popcounts(spec.size_n)
    # equal weight for each of the C(N, n) patterns at excitation n
    per_pattern = level[pops] / np.array([comb(spec.size_n, n) for n in pops])
    weights = np.stack(
        [per_pattern * (1.0 - p_up_init), per_pattern * p_up_init], axis=1
    )
    return MicrostateEnsemble(spec.size_n, weights)


def enumerate_equilibration(ensemble: MicrostateEnsemble, m: int) -> MicrostateEnsemble:
    """One equilibration step at cycle m, applied to every microstate class.

    The class with total spin projection t couples the memory-down states at
    reservoir excitation t with the memory-up states at excitation t - m - 1;
    its total weight is split equally over all member microstates.
    """
    _check_size(ensemble.n_spins)
    n_spins = ensemble.n_spins
    if not 0 <= m <= n_spins - 1:
        raise DomainError(f"cycle index must be in [0, {n_spins - 1}], got {m}")
    pops = _popcounts(n_spins)
    w = ensemble.weights
    new = np.zeros_like(w)
    for t in range(0, n_spins + m + 2):
        n_down, n_up = t, t - m - 1
        mask_down = pops == n_down if 0 <= n_down <= n_spins else None
        mask_up = pops == n_up if 0 <= n_up <= n_spins else None
        count = 0
        mass = 0.0
        if mask_down is not None:
            count += comb(n_spins, n_down)
            mass += w[mask_down, 0].sum()
        if mask_up is not None:
            count += comb(n_spins, n_up)
            mass += w[mask_up, 1].sum()
        if count == 0:
            continue
        share = mass / count
        if mask_down is not None:
            new[mask_down, 0] = share
        if mask_up is not None:
            new[mask_up, 1] = share
    return MicrostateEnsemble(n_spins, new)


def macrostate_table(ensemble: MicrostateEnsemble) -> np.ndarray:
    """Aggregate microstate weights into the ``(n, M)`` joint table."""
    pops = _popcounts(ensemble.n_spins)
    table = np.zeros((ensemble.n_spins + 1, 2))
    np.add.at(table[:, 0], pops, ensemble.weights[:, 0])
    np.add.at(table[:, 1], pops, ensemble.weights[:, 1])
    return table


def enumerate_protocol(
    spec: ReservoirSpec, p_up_init: float = 0.5, cycles: int | None = None
) -> list[np.ndarray]:
    """Macrostate tables for cycles 0..cycles, from pure microstate enumeration."""
    _check_size(spec.size_n)
    if cycles is None:
        cycles = spec.max_cycles
    ens = initial_microstates(spec, p_up_init)
    tables = []
    for m in range(cycles + 1):
        ens = enumerate_equilibration(ens, m)
        tables.append(macrostate_table(ens))
    return tables


def _class_up_shares(n_size, m, lchoose):
    """P(memory ends up | class t) for t = 0 .. N + m + 1."""
    s = m + 1
    t = np.arange(n_size + s + 1)
    shares = np.zeros(n_size + s + 1)
    up_ok = (t - s >= 0) & (t - s <= n_size)
    down_ok = t <= n_size
    only_up = up_ok & ~down_ok
    both = up_ok & down_ok
    shares[only_up] = 1.0
    shares[both] = 1.0 / (
        1.0 + np.exp(lchoose[t[both]] - lchoose[t[both] - s])
    )
    return shares


def trajectory_cost_distribution(spec: ReservoirSpec, p_up_init: float = 0.5) -> np.ndarray:
    """Exact distribution of the accumulated cost along full-protocol trajectories.

    Propagates the joint law of (reservoir excitation, memory bit,
    accumulated cost), so increment correlations through the reservoir are
    kept exactly.  Reference law for the Monte Carlo sampler.
    """
    _check_size(spec.size_n)
    n_size = spec.size_n
    lchoose = log_binomials(n_size)
    costs = n_size  # accumulated cost after N - 1 CNOTs is at most N - 1
    table = _first_equilibration_table(initial_reservoir(spec), p_up_init, lchoose)
    state = np.zeros((n_size + 1, 2, costs))
    state[:, :, 0] = table
    for m in range(1, n_size):
        shifted = np.zeros_like(state)
        shifted[:, 0, :] = state[:, 0, :]
        shifted[:, 1, 1:] = state[:, 1, :-1]
        state = shifted
        t0, t1 = _transition_arrays(n_size, m, lchoose)
        s = m + 1
        for c in range(costs):
            col0 = state[:, 0, c]
            col1 = state[:, 1, c]
            drop = np.zeros(n_size + 1)
            drop[s:] = col1[: n_size + 1 - s]
            raised = np.zeros(n_size + 1)
            raised[: n_size + 1 - s] = col0[s:]
            state[:, 0, c] = t0 * (col0 + drop)
            state[:, 1, c] = t1 * (col1 + raised)
    return state.sum(axis=(0, 1))


def sample_spinlabor(spec: ReservoirSpec, runs: int, rng_seed: int) -> SampledSpinlabor:
    """Empirical cost histogram from seeded protocol trajectories.

    Each trajectory samples the initial reservoir excitation and memory bit,
    then plays the full protocol: at every cycle the CNOT charges one
    quantum if the memory is up, and the equilibration resolves the
    trajectory's exchange class at random with the class's degeneracy
    shares.  Bit-identical for identical seeds.
    """
    _check_size(spec.size_n)
    if runs < MIN_RUNS:
        raise DomainError(f"at least {MIN_RUNS} runs are needed, got {runs}")
    n_size = spec.size_n
    lchoose = log_binomials(n_size)
    rng = np.random.default_rng(rng_seed)

    excitation = rng.choice(n_size + 1, size=runs, p=initial_reservoir(spec))
    memory = rng.random(runs) < 0.5
    cost = np.zeros(runs, dtype=np.int64)
    for m in range(0, n_size):
        if m > 0:
            cost += memory  # CNOT step of cycle m
        shares = _class_up_shares(n_size, m, lchoose)
        t = excitation + memory * (m + 1)
        goes_up = rng.random(runs) < shares[t]
        excitation = np.where(goes_up, t - (m + 1), t)
        memory = goes_up
    probs = np.bincount(cost, minlength=n_size) / runs
    return SampledSpinlabor(probs[:n_size], runs, rng_seed)
