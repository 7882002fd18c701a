"""
Tests for orthant probabilities and their derivatives.
"""

import math

import numpy as np
import pytest
from scipy.special import ndtr

from shared.errors import InvalidInputError, NotPositiveDefiniteError, SingularCorrelationError
from shared.numerics.rng import RngStream
from shared.orthant import (
    bivariate_cdf,
    orthant_grad_corr,
    orthant_grad_corr_all,
    orthant_grad_mean,
    orthant_prob,
    vech_upper,
)

FD_STEP = 1e-4
FD_POINTS = 2 ** 16
HIGH_DIM_POINTS = 2 ** 18


def _random_correlation(k: int, seed: int) -> np.ndarray:
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((k, 2 * k))
    cov = a @ a.T + 0.5 * np.eye(k)
    scale = 1.0 / np.sqrt(np.diag(cov))
    return cov * np.outer(scale, scale)


def _fixed_qmc(mu, sigma, max_points: int = FD_POINTS):
    """QMC estimate with a frozen point set, smooth in its arguments."""
    return orthant_prob(
        mu, sigma, tol=1e-14, rng=RngStream(seed=21), max_points=max_points, reorder=False
    ).value


class TestClosedForms:
    """Exact low-dimensional cases."""

    @pytest.mark.parametrize("rho", [-0.9, -0.5, 0.0, 0.5, 0.9])
    def test_bivariate_zero_mean_arcsine(self, rho):
        value = orthant_prob(np.zeros(2), np.array([[1.0, rho], [rho, 1.0]])).value
        assert value == pytest.approx(0.25 + math.asin(rho) / (2 * math.pi), abs=1e-12)

    def test_empty_problem(self):
        assert orthant_prob(np.zeros(0), np.zeros((0, 0))).value == 1.0

    def test_univariate(self):
        assert orthant_prob([0.7], [[4.0]]).value == pytest.approx(float(ndtr(0.35)))

    def test_diagonal_factorizes(self):
        mu = np.array([0.3, -1.0, 0.8, 0.0, 2.0])
        sigma = np.diag([1.0, 2.0, 0.5, 1.0, 3.0])
        expected = np.prod(ndtr(mu / np.sqrt(np.diag(sigma))))
        assert orthant_prob(mu, sigma).value == pytest.approx(expected, abs=1e-14)

    def test_bivariate_symmetric_in_arguments(self):
        assert bivariate_cdf(0.3, -0.8, 0.4) == pytest.approx(bivariate_cdf(-0.8, 0.3, 0.4), abs=1e-14)

    def test_bivariate_perfect_correlation(self):
        assert bivariate_cdf(0.2, 1.0, 1.0) == pytest.approx(float(ndtr(0.2)))
        assert bivariate_cdf(0.2, -0.5, -1.0) == pytest.approx(0.0, abs=1e-15)

    def test_trivariate_zero_mean(self):
        c = _random_correlation(3, 1)
        expected = 0.125 + (math.asin(c[0, 1]) + math.asin(c[0, 2]) + math.asin(c[1, 2])) / (4 * math.pi)
        assert orthant_prob(np.zeros(3), c).value == pytest.approx(expected, abs=1e-12)

    def test_trivariate_with_mean_matches_block_genz(self):
        """A fourth independent coordinate at zero mean halves the probability."""
        c3 = _random_correlation(3, 2)
        mu3 = np.array([0.4, -0.2, 0.9])
        c4 = np.zeros((4, 4))
        c4[:3, :3] = c3
        c4[3, 3] = 1.0
        three = orthant_prob(mu3, c3).value
        four = orthant_prob(np.append(mu3, 0.0), c4, tol=1e-6, rng=RngStream(seed=4)).value
        assert four == pytest.approx(0.5 * three, abs=1e-5)


class TestGenz:
    """Quasi Monte Carlo path for k >= 4."""

    def test_matches_plain_monte_carlo(self):
        c = _random_correlation(4, 3)
        mu = np.array([0.2, -0.1, 0.0, 0.3])
        result = orthant_prob(mu, c, tol=1e-6, rng=RngStream(seed=8))

        gen = np.random.default_rng(99)
        draws = gen.multivariate_normal(mu, c, size=1_000_000)
        mc = np.mean(np.all(draws > 0, axis=1))
        sigma = math.sqrt(mc * (1 - mc) / 1_000_000)
        assert abs(result.value - mc) < 5 * sigma
        assert result.err_estimate < 1e-4

    def test_equal_streams_reproduce(self):
        c = _random_correlation(5, 4)
        a = orthant_prob(np.zeros(5), c, rng=RngStream(seed=2))
        b = orthant_prob(np.zeros(5), c, rng=RngStream(seed=2))
        assert a.value == b.value
        assert a.n_points == b.n_points

    def test_budget_caps_points(self):
        c = _random_correlation(5, 5)
        result = orthant_prob(np.zeros(5), c, tol=1e-14, max_points=2 ** 13)
        assert result.n_points <= 2 ** 13


class TestInvariances:
    """Monotonicity, scaling and partition properties."""

    @pytest.mark.parametrize("k", [4, 5])
    def test_monotone_in_mean(self, k):
        c = _random_correlation(k, 11)
        mu = np.linspace(-0.3, 0.3, k)
        base = orthant_prob(mu, c, tol=1e-6, rng=RngStream(seed=6)).value
        for j in range(k):
            shifted = mu.copy()
            shifted[j] += 0.2
            assert orthant_prob(shifted, c, tol=1e-6, rng=RngStream(seed=6)).value > base

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_diagonal_scaling_invariance(self, k):
        """Pr{x > 0} is unchanged when x is rescaled by a positive diagonal."""
        c = _random_correlation(k, 12)
        mu = np.linspace(0.5, -0.4, k)
        scale = np.linspace(0.3, 4.0, k)
        plain = orthant_prob(mu, c, tol=1e-6, rng=RngStream(seed=9)).value
        scaled = orthant_prob(scale * mu, c * np.outer(scale, scale), tol=1e-6, rng=RngStream(seed=9)).value
        assert scaled == pytest.approx(plain, abs=1e-6)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_reflected_orthants_sum_to_one(self, k):
        """The 2^k sign-reflected orthants partition the space."""
        c = _random_correlation(k, 13)
        mu = np.linspace(-0.4, 0.6, k)
        total = 0.0
        for bits in range(2 ** k):
            signs = np.array([1.0 if (bits >> i) & 1 else -1.0 for i in range(k)])
            total += orthant_prob(
                signs * mu, c * np.outer(signs, signs), tol=1e-6, rng=RngStream(seed=10, key=(bits,))
            ).value
        assert total == pytest.approx(1.0, abs=5e-6 * 2 ** k)


class TestValidation:
    """Input checks."""

    def test_non_positive_tol(self):
        with pytest.raises(InvalidInputError):
            orthant_prob(np.zeros(2), np.eye(2), tol=0.0)

    def test_shape_mismatch(self):
        with pytest.raises(InvalidInputError):
            orthant_prob(np.zeros(3), np.eye(2))

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            orthant_prob(np.zeros(2), np.array([[1.0, 1.5], [1.5, 1.0]]))

    def test_zero_variance(self):
        with pytest.raises(InvalidInputError):
            orthant_prob(np.zeros(2), np.diag([1.0, 0.0]))


class TestMeanDerivative:
    """Derivative with respect to a mean entry at zero mean."""

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_trivariate_finite_difference(self, j):
        sigma = _random_correlation(3, 6) * np.outer([1.0, 2.0, 0.5], [1.0, 2.0, 0.5])
        step = np.zeros(3)
        step[j] = FD_STEP
        fd = (orthant_prob(step, sigma).value - orthant_prob(-step, sigma).value) / (2 * FD_STEP)
        assert orthant_grad_mean(np.zeros(3), sigma, j) == pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("j", [0, 3])
    def test_four_dimensional_finite_difference(self, j):
        c = _random_correlation(4, 7)
        step = np.zeros(4)
        step[j] = FD_STEP
        fd = (_fixed_qmc(step, c) - _fixed_qmc(-step, c)) / (2 * FD_STEP)
        assert orthant_grad_mean(np.zeros(4), c, j) == pytest.approx(fd, abs=1e-4)

    @pytest.mark.slow
    @pytest.mark.parametrize("k,j", [(5, 0), (5, 4), (6, 2)])
    def test_high_dimensional_finite_difference(self, k, j):
        c = _random_correlation(k, 14)
        step = np.zeros(k)
        step[j] = FD_STEP
        fd = (_fixed_qmc(step, c, HIGH_DIM_POINTS) - _fixed_qmc(-step, c, HIGH_DIM_POINTS)) / (2 * FD_STEP)
        grad = orthant_grad_mean(np.zeros(k), c, j, tol=1e-7, rng=RngStream(seed=22))
        assert grad == pytest.approx(fd, abs=3e-4)

    def test_univariate_is_density(self):
        assert orthant_grad_mean([0.0], [[2.0]], 0) == pytest.approx(1.0 / math.sqrt(4.0 * math.pi))

    def test_index_out_of_range(self):
        with pytest.raises(InvalidInputError):
            orthant_grad_mean(np.zeros(2), np.eye(2), 2)


class TestCorrelationDerivative:
    """Derivative with respect to a correlation coefficient."""

    def test_bivariate_closed_form(self):
        c = np.array([[1.0, 0.3], [0.3, 1.0]])
        expected = 1.0 / (2 * math.pi * math.sqrt(1 - 0.09))
        assert orthant_grad_corr(c, 0, 1) == pytest.approx(expected)

    @pytest.mark.parametrize("r,s", [(0, 1), (0, 2), (1, 2)])
    def test_trivariate_finite_difference(self, r, s):
        c = _random_correlation(3, 8)
        bump = np.zeros((3, 3))
        bump[r, s] = bump[s, r] = FD_STEP
        fd = (orthant_prob(np.zeros(3), c + bump).value
              - orthant_prob(np.zeros(3), c - bump).value) / (2 * FD_STEP)
        assert orthant_grad_corr(c, r, s) == pytest.approx(fd, abs=1e-7)

    @pytest.mark.parametrize("r,s", [(0, 1), (1, 3)])
    def test_four_dimensional_finite_difference(self, r, s):
        c = _random_correlation(4, 9)
        bump = np.zeros((4, 4))
        bump[r, s] = bump[s, r] = FD_STEP
        fd = (_fixed_qmc(np.zeros(4), c + bump) - _fixed_qmc(np.zeros(4), c - bump)) / (2 * FD_STEP)
        assert orthant_grad_corr(c, r, s) == pytest.approx(fd, abs=1e-4)

    @pytest.mark.slow
    @pytest.mark.parametrize("k,r,s", [(5, 0, 1), (5, 2, 4), (6, 1, 5)])
    def test_high_dimensional_finite_difference(self, k, r, s):
        c = _random_correlation(k, 15)
        bump = np.zeros((k, k))
        bump[r, s] = bump[s, r] = FD_STEP
        fd = (_fixed_qmc(np.zeros(k), c + bump, HIGH_DIM_POINTS)
              - _fixed_qmc(np.zeros(k), c - bump, HIGH_DIM_POINTS)) / (2 * FD_STEP)
        grad = orthant_grad_corr(c, r, s, tol=1e-7, rng=RngStream(seed=23))
        assert grad == pytest.approx(fd, abs=3e-4)

    def test_all_pairs_in_vech_order(self):
        c = _random_correlation(3, 10)
        grads = orthant_grad_corr_all(c)
        expected = [orthant_grad_corr(c, r, s) for r, s in [(0, 1), (0, 2), (1, 2)]]
        np.testing.assert_allclose(grads, expected)

    def test_vech_upper_order(self):
        m = np.arange(16.0).reshape(4, 4)
        np.testing.assert_array_equal(vech_upper(m), [1, 2, 3, 6, 7, 11])

    def test_pole_rejected(self):
        c = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularCorrelationError):
            orthant_grad_corr(c, 0, 1)

    def test_pair_order(self):
        with pytest.raises(InvalidInputError):
            orthant_grad_corr(np.eye(3), 2, 1)
