"""Shared helpers for the test suite."""

from fractions import Fraction
from math import comb

from spinerase import ReservoirSpec, erasure_cycle, first_equilibration, initial_reservoir


def protocol_joints(spec, cycles=None, p_up_init=0.5):
    """Joint distributions for cycles 0..cycles, built one cycle at a time."""
    if cycles is None:
        cycles = spec.max_cycles
    joints = [first_equilibration(initial_reservoir(spec), p_up_init)]
    for _ in range(cycles):
        joints.append(erasure_cycle(joints[-1]))
    return joints


def exact_transition_down(n_size, m, n):
    """Degeneracy-share transition factor from exact integer binomials."""
    if n < m + 1:
        return Fraction(1)
    return Fraction(comb(n_size, n), comb(n_size, n - m - 1) + comb(n_size, n))


def exact_transition_up(n_size, m, n):
    if n > n_size - m - 1:
        return Fraction(1)
    return Fraction(comb(n_size, n), comb(n_size, n + m + 1) + comb(n_size, n))
