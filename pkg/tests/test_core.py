import math
from fractions import Fraction

import numpy as np
import pytest

from spinerase import (
    DomainError,
    ReservoirSpec,
    binom_ratio,
    initial_reservoir,
    inverse_spin_temperature,
)


class TestInverseSpinTemperature:
    def test_symmetric_polarisation_is_zero(self):
        assert inverse_spin_temperature(0.5) == 0.0

    def test_quarter_is_log_three(self):
        assert inverse_spin_temperature(0.25) == pytest.approx(math.log(3), abs=1e-15)

    def test_fully_polarised_limit_is_inf(self):
        assert inverse_spin_temperature(0.0) == math.inf

    @pytest.mark.parametrize("alpha", [-0.1, 0.50001, 1.0, 2.0])
    def test_out_of_range_rejected(self, alpha):
        with pytest.raises(DomainError):
            inverse_spin_temperature(alpha)

    def test_strictly_decreasing(self):
        grid = np.linspace(0.01, 0.5, 200)
        values = [inverse_spin_temperature(a) for a in grid]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestReservoirSpec:
    def test_gamma_derived(self):
        assert ReservoirSpec(4, 0.25).gamma == pytest.approx(math.log(3))

    def test_size_must_be_positive(self):
        with pytest.raises(DomainError):
            ReservoirSpec(0, 0.3)

    def test_max_cycles(self):
        assert ReservoirSpec(7, 0.3).max_cycles == 6


class TestInitialReservoir:
    def test_exact_rationals_small_case(self):
        probs = initial_reservoir(ReservoirSpec(2, 0.25))
        expected = [Fraction(9, 16), Fraction(3, 8), Fraction(1, 16)]
        assert probs == pytest.approx([float(x) for x in expected], abs=1e-15)

    def test_uniform_at_symmetric_polarisation(self):
        assert initial_reservoir(ReservoirSpec(1, 0.5)) == pytest.approx([0.5, 0.5])

    def test_fully_polarised_limit_is_delta(self):
        assert initial_reservoir(ReservoirSpec(3, 0.0)) == pytest.approx([1, 0, 0, 0])

    @pytest.mark.parametrize("n_size", [1, 2, 7, 40, 1000])
    @pytest.mark.parametrize("alpha", [0.05, 0.25, 0.5])
    def test_normalised(self, n_size, alpha):
        assert abs(initial_reservoir(ReservoirSpec(n_size, alpha)).sum() - 1) < 1e-12

    @pytest.mark.parametrize("n_size", [2, 10, 100, 1000])
    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5])
    def test_mean_excitation_is_alpha_n(self, n_size, alpha):
        probs = initial_reservoir(ReservoirSpec(n_size, alpha))
        mean = float(np.dot(probs, np.arange(n_size + 1)))
        assert abs(mean - alpha * n_size) < 1e-10 * n_size

    @pytest.mark.parametrize("n_size", [1, 3, 17, 60])
    @pytest.mark.parametrize("alpha", [0.05, 0.25, 0.4])
    def test_matches_direct_binomial_construction(self, n_size, alpha):
        # small sizes admit the direct formula with exact binomials
        gamma = math.log((1 - alpha) / alpha)
        weights = [math.comb(n_size, n) * math.exp(-gamma * n) for n in range(n_size + 1)]
        expected = np.array(weights) / (1 + math.exp(-gamma)) ** n_size
        probs = initial_reservoir(ReservoirSpec(n_size, alpha))
        np.testing.assert_allclose(probs, expected, rtol=1e-13)


class TestBinomRatio:
    def test_one_step(self):
        assert binom_ratio(2, 1, 0) == 2.0

    def test_exact_integer_case(self):
        assert binom_ratio(5, 3, 1) == pytest.approx(2.0, abs=1e-15)

    def test_large_adjacent(self):
        assert binom_ratio(1000, 500, 499) == pytest.approx(501 / 500, rel=1e-14)

    @pytest.mark.parametrize("n_size", [1, 6, 23, 60])
    def test_matches_exact_binomials(self, n_size):
        for a in range(n_size + 1):
            for b in range(n_size + 1):
                exact = Fraction(math.comb(n_size, a), math.comb(n_size, b))
                assert binom_ratio(n_size, a, b) == pytest.approx(float(exact), rel=1e-13)

    @pytest.mark.parametrize("n_size,a,b", [(10000, 5000, 4000), (10000, 9999, 17)])
    def test_large_sizes_stay_accurate(self, n_size, a, b):
        exact = Fraction(math.comb(n_size, a), math.comb(n_size, b))
        assert binom_ratio(n_size, a, b) == pytest.approx(float(exact), rel=1e-13)

    def test_reciprocal_identity(self):
        for n_size, a, b in [(9, 2, 7), (50, 49, 3), (1000, 12, 997)]:
            assert binom_ratio(n_size, a, b) * binom_ratio(n_size, b, a) == pytest.approx(
                1.0, abs=1e-12
            )

    @pytest.mark.parametrize("a,b", [(-1, 0), (0, -1), (3, 0), (0, 3)])
    def test_out_of_range_rejected(self, a, b):
        with pytest.raises(DomainError):
            binom_ratio(2, a, b)
