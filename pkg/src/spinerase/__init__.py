"""Exact statistics of information erasure against finite spin reservoirs.

A memory spin is erased by repeated CNOT-plus-equilibration cycles against a
reservoir of N energy-degenerate spins, paying cost in spin angular momentum
(spinlabor) instead of energy.  The package computes the joint
reservoir-memory dynamics exactly, the resulting cost distributions and
bounds, the reservoir size needed to match unlimited-reservoir statistics,
ancilla-reset costs, and the degradation of a reservoir under reuse.

The cycle recurrences run on a compiled kernel when the extension is built
(``spinerase._kernels.BACKEND`` reports which backend is active); a NumPy
fallback keeps everything functional without it.
"""

from ._kernels import BACKEND
from .core import ReservoirSpec, binom_ratio, initial_reservoir, inverse_spin_temperature
from .divergence import DivergenceReport, MatchResult, jsd, kl_divergence, n_min_search
from .errors import (
    DomainError,
    HistoryError,
    MatchNotFoundError,
    NormalizationError,
    ProtocolExhaustedError,
    SpinEraseError,
    SupportError,
)
from .finite import (
    ErasureTrace,
    JointDistribution,
    closed_form_up,
    erasure_cycle,
    extract_reservoir,
    first_equilibration,
    memory_up_probability,
    mean_total_spin,
    reuse_iteration,
    run_protocol,
    transition_prob_down,
    transition_prob_up,
)
from .infinite import (
    infinite_analytic_distribution,
    infinite_spinlabor_recurrence,
    q_pochhammer,
    up_probability,
)
from .stats import (
    CostSummary,
    SpinlaborDistribution,
    avg_spinlabor,
    finite_bound,
    finite_spinlabor_distribution,
    infinite_bound,
    ln2_reference_bound,
    reset_cost,
    reset_distribution,
    spinlabor_per_bit,
    summarize,
    total_avg_with_reset,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CostSummary",
    "DivergenceReport",
    "DomainError",
    "ErasureTrace",
    "HistoryError",
    "JointDistribution",
    "MatchNotFoundError",
    "MatchResult",
    "NormalizationError",
    "ProtocolExhaustedError",
    "ReservoirSpec",
    "SpinEraseError",
    "SpinlaborDistribution",
    "SupportError",
    "avg_spinlabor",
    "binom_ratio",
    "closed_form_up",
    "erasure_cycle",
    "extract_reservoir",
    "finite_bound",
    "finite_spinlabor_distribution",
    "first_equilibration",
    "infinite_analytic_distribution",
    "infinite_bound",
    "infinite_spinlabor_recurrence",
    "initial_reservoir",
    "inverse_spin_temperature",
    "jsd",
    "kl_divergence",
    "ln2_reference_bound",
    "mean_total_spin",
    "memory_up_probability",
    "n_min_search",
    "q_pochhammer",
    "reset_cost",
    "reset_distribution",
    "reuse_iteration",
    "run_protocol",
    "spinlabor_per_bit",
    "summarize",
    "total_avg_with_reset",
    "transition_prob_down",
    "transition_prob_up",
    "up_probability",
]
