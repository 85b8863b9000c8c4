import math

import numpy as np
import pytest

from spinerase import (
    DomainError,
    ReservoirSpec,
    avg_spinlabor,
    finite_bound,
    finite_spinlabor_distribution,
    infinite_bound,
    infinite_spinlabor_recurrence,
    ln2_reference_bound,
    reset_cost,
    reset_distribution,
    run_protocol,
    spinlabor_per_bit,
    summarize,
    total_avg_with_reset,
)


def traced(n_size, alpha, cycles=None):
    return run_protocol(ReservoirSpec(n_size, alpha), cycles=cycles)[1]


def local_maxima(values):
    count = 0
    for i, v in enumerate(values):
        left = values[i - 1] if i > 0 else -1.0
        right = values[i + 1] if i < len(values) - 1 else -1.0
        if v > left and v > right:
            count += 1
    return count


class TestFiniteDistribution:
    def test_zero_cycles_is_delta(self):
        dist = finite_spinlabor_distribution(traced(1, 0.3))
        np.testing.assert_allclose(dist.probs, [1.0])

    def test_single_cycle_exact(self):
        dist = finite_spinlabor_distribution(traced(2, 0.25))
        np.testing.assert_allclose(dist.probs, [2 / 3, 1 / 3], atol=1e-15)
        assert dist.steps == 1

    @pytest.mark.parametrize("n_size", [2, 9, 40, 100])
    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
    def test_mean_matches_average_cost(self, n_size, alpha):
        trace = traced(n_size, alpha)
        dist = finite_spinlabor_distribution(trace)
        assert abs(dist.probs.sum() - 1) < 1e-12
        assert dist.mean() == pytest.approx(avg_spinlabor(trace), abs=1e-12)


class TestAverageCost:
    def test_no_cycles_costs_nothing(self):
        assert avg_spinlabor(traced(1, 0.3)) == 0.0

    def test_single_cycle_exact(self):
        assert avg_spinlabor(traced(2, 0.25)) == pytest.approx(1 / 3, abs=1e-15)


class TestBounds:
    def test_small_reservoir_bound_saturates_on_first_cycle(self):
        bound = finite_bound(2, math.log(3))
        assert bound == pytest.approx(1 / 3, abs=1e-15)
        assert avg_spinlabor(traced(2, 0.25)) == pytest.approx(bound, abs=1e-12)

    def test_large_size_limit(self):
        gamma = 0.8
        x = math.exp(-gamma)
        assert finite_bound(10**9, gamma) == pytest.approx(x / (1 + x), rel=1e-8)

    def test_cold_limit_keeps_half_over_size(self):
        assert finite_bound(4, 60.0) == pytest.approx(0.1, abs=1e-15)

    @pytest.mark.parametrize("n_size", [2, 5, 10, 50, 100])
    @pytest.mark.parametrize("alpha", [0.05, 0.15, 0.25, 0.35, 0.45])
    def test_average_cost_respects_bound(self, n_size, alpha):
        trace = traced(n_size, alpha)
        gamma = ReservoirSpec(n_size, alpha).gamma
        assert avg_spinlabor(trace) >= finite_bound(n_size, gamma) - 1e-12

    @pytest.mark.parametrize(
        "alpha,expected", [(0.2, 0.16), (0.4, 1.26), (0.46, 3.84)]
    )
    def test_constant_temperature_bound_values(self, alpha, expected):
        assert round(infinite_bound(alpha), 2) == expected

    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_constant_temperature_bound_domain(self, alpha):
        with pytest.raises(DomainError):
            infinite_bound(alpha)

    def test_infinite_recurrence_mean_respects_bound(self):
        for alpha in (0.1, 0.25, 0.4):
            gamma = math.log((1 - alpha) / alpha)
            mean = infinite_spinlabor_recurrence(gamma, 2000).mean()
            assert mean >= infinite_bound(alpha)

    def test_reference_line(self):
        assert ln2_reference_bound(math.log(2)) == pytest.approx(1.0, abs=1e-15)
        assert ln2_reference_bound(math.log(3)) == pytest.approx(
            math.log(2) / math.log(3), abs=1e-15
        )
        assert ln2_reference_bound(1e6) < 1e-6 + 1e-12
        with pytest.raises(DomainError):
            ln2_reference_bound(0.0)


class TestPerBit:
    def test_perfect_erasure_leaves_average(self):
        assert spinlabor_per_bit(0.7, 0.0) == pytest.approx(0.7, abs=1e-15)

    def test_partial_erasure_formula(self):
        p_f = 0.1131
        erased = math.log(2) + (1 - p_f) * math.log(1 - p_f) + p_f * math.log(p_f)
        assert spinlabor_per_bit(1.0, p_f) == pytest.approx(math.log(2) / erased, rel=1e-14)

    def test_no_erasure_rejected(self):
        with pytest.raises(DomainError):
            spinlabor_per_bit(1.0, 0.5)

    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
    @pytest.mark.parametrize("n_size", [3, 10, 60])
    def test_per_bit_dominates_raw_average_while_erasure_is_partial(self, n_size, alpha):
        trace = traced(n_size, alpha)
        avg = avg_spinlabor(trace)
        assert spinlabor_per_bit(avg, trace.p_up_final) >= avg

    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.4])
    def test_per_bit_improves_with_size(self, alpha):
        # monotone beyond the small-reservoir suppression hump (N <~ 5),
        # where the tiny cycle budget deflates cost and erasure alike
        values = []
        for n_size in (10, 20, 50, 100):
            trace = traced(n_size, alpha)
            values.append(spinlabor_per_bit(avg_spinlabor(trace), trace.p_up_final))
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


class TestReset:
    def test_cost_formula(self):
        assert reset_cost(5, 0.3) == pytest.approx(1.2, abs=1e-15)
        assert reset_cost(5, 0.0) == 0.0
        assert reset_cost(1, 0.4) == 0.0

    def test_no_shift_for_perfect_erasure(self):
        pre = finite_spinlabor_distribution(traced(4, 0.2))
        post = reset_distribution(pre, 4, 0.0)
        np.testing.assert_allclose(post.probs[: len(pre.probs)], pre.probs, atol=1e-15)
        assert post.probs[len(pre.probs) :] == pytest.approx(0.0, abs=1e-15)

    def test_two_point_redistribution_exact(self):
        trace = traced(2, 0.25)
        pre = finite_spinlabor_distribution(trace)
        p_f = trace.p_up_final
        post = reset_distribution(pre, 2, p_f)
        expected = [2 / 3 * (1 - p_f), 1 / 3 * (1 - p_f) + 2 / 3 * p_f, 1 / 3 * p_f]
        np.testing.assert_allclose(post.probs, expected, atol=1e-15)
        assert post.mean() == pytest.approx(pre.mean() + reset_cost(2, p_f), abs=1e-15)

    @pytest.mark.parametrize("n_size,alpha", [(5, 0.4), (12, 0.3), (60, 0.46)])
    def test_mass_and_mean_bookkeeping(self, n_size, alpha):
        trace = traced(n_size, alpha)
        pre = finite_spinlabor_distribution(trace)
        post = reset_distribution(pre, n_size, trace.p_up_final)
        assert len(post.probs) == 2 * (n_size - 1) + 1
        assert abs(post.probs.sum() - 1) < 1e-12
        assert post.mean() - pre.mean() == pytest.approx(
            reset_cost(n_size, trace.p_up_final), abs=1e-12
        )

    def test_moderate_reservoir_goes_bimodal(self):
        trace = traced(5, 0.4)
        pre = finite_spinlabor_distribution(trace)
        post = reset_distribution(pre, 5, trace.p_up_final)
        assert local_maxima(post.probs) == 2


class TestTotalWithReset:
    def test_no_cycles_costs_nothing(self):
        assert total_avg_with_reset(traced(1, 0.3)) == 0.0

    def test_single_cycle_exact(self):
        trace = traced(2, 0.25)
        assert total_avg_with_reset(trace) == pytest.approx(
            1 / 3 + trace.p_up[1], abs=1e-15
        )

    @pytest.mark.parametrize("n_size,alpha", [(6, 0.3), (30, 0.45), (80, 0.2)])
    def test_erasure_cost_exceeds_reset_cost(self, n_size, alpha):
        # the average splits into the reset cost plus non-negative surplus
        # terms, one per cycle, since the up-probability never increases
        trace = traced(n_size, alpha)
        surplus = avg_spinlabor(trace) - reset_cost(n_size, trace.p_up_final)
        gaps = trace.p_up[:-1] - trace.p_up_final
        assert surplus == pytest.approx(gaps.sum(), abs=1e-12)
        assert np.all(gaps >= -1e-15)


class TestSummary:
    def test_matches_components(self):
        spec = ReservoirSpec(7, 0.3)
        _, trace = run_protocol(spec)
        summary = summarize(spec, trace)
        assert summary.avg_spinlabor == pytest.approx(avg_spinlabor(trace))
        assert summary.bound_finite == pytest.approx(finite_bound(7, spec.gamma))
        assert summary.bound_infinite == pytest.approx(infinite_bound(0.3))
        assert summary.reset_cost == pytest.approx(reset_cost(7, trace.p_up_final))
        assert summary.total_with_reset == pytest.approx(total_avg_with_reset(trace))
        assert summary.p_up_final + summary.p_down_final == pytest.approx(1.0)

    def test_degenerate_corners_become_infinities(self):
        spec = ReservoirSpec(4, 0.5)
        _, trace = run_protocol(spec)
        summary = summarize(spec, trace)
        assert summary.avg_per_bit == math.inf
        assert summary.bound_infinite == math.inf

    def test_fully_polarised_reservoir(self):
        spec = ReservoirSpec(4, 0.0)
        _, trace = run_protocol(spec)
        summary = summarize(spec, trace)
        assert summary.bound_infinite == 0.0
        assert summary.avg_per_bit < math.inf
