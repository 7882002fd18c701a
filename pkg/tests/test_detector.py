"""
Tests for sign patterns, detector tables and the Rao statistic.
"""

import importlib
import math

import numpy as np
import pytest
from scipy.special import ndtr

from shared.detector import (
    build_noise_tables,
    build_signal_tables,
    check_noise_tables,
    coherence_hash,
    enumerate_patterns,
    orbit_partition,
    pattern_taus,
    pfa_for_threshold,
    rao_from_bits,
    rao_scores,
    rao_statistic,
    rotate,
    rotation_matrix,
    threshold_for_pfa,
    threshold_grid,
    white_noise_tables,
    white_upsilon_sq,
)
from shared.detector.tables import validate_coherence
from shared.errors import InvalidInputError, TableConsistencyError
from shared.models.scenario import QuantizedData
from shared.numerics.linalg import complex_to_composite
from shared.numerics.rng import RngStream
from shared.radar.quantizer import simulate_quantized, simulate_sign_batch


class TestPatterns:
    """Enumeration order and rotation orbits."""

    def test_binary_order(self):
        np.testing.assert_array_equal(
            pattern_taus(1),
            [[-1, -1], [-1, 1], [1, -1], [1, 1]]
        )

    def test_single_antenna_orbit(self):
        assert orbit_partition(enumerate_patterns(1)) == [[0, 1, 3, 2]]

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_orbits_partition_patterns(self, m):
        patterns = enumerate_patterns(m)
        orbits = orbit_partition(patterns)
        assert len(patterns) == 4 ** m
        assert all(len(orbit) == 4 for orbit in orbits)
        assert sorted(j for orbit in orbits for j in orbit) == list(range(4 ** m))
        assert all(orbit[0] == min(orbit) for orbit in orbits)

    def test_orbit_members_are_rotations(self):
        patterns = enumerate_patterns(2)
        for orbit in orbit_partition(patterns):
            for first, second in zip(orbit, orbit[1:]):
                np.testing.assert_array_equal(rotate(patterns[first].tau), patterns[second].tau)

    def test_orbit_ids(self):
        patterns = enumerate_patterns(2)
        for orbit in orbit_partition(patterns):
            assert {patterns[j].orbit_id for j in orbit} == {orbit[0]}

    def test_rotation_matrix_matches_rotate(self):
        v = np.arange(1.0, 7.0)
        np.testing.assert_allclose(rotation_matrix(3) @ v, rotate(v))

    @pytest.mark.parametrize("m", [0, 7])
    def test_antenna_range(self, m):
        with pytest.raises(InvalidInputError):
            pattern_taus(m)


class TestCoherenceChecks:
    """Validation and hashing of coherence matrices."""

    def test_non_circular_rejected(self):
        c = np.eye(4)
        c[0, 2] = c[2, 0] = 0.5
        with pytest.raises(InvalidInputError):
            validate_coherence(c)

    def test_non_unit_diagonal_rejected(self):
        with pytest.raises(InvalidInputError):
            validate_coherence(2.0 * np.eye(4))

    def test_hash_stable_under_rounding_noise(self, colored_scenario):
        c = colored_scenario.composite.c
        assert coherence_hash(c) == coherence_hash(c + 1e-15)
        assert coherence_hash(c) != coherence_hash(np.eye(4))


class TestNoiseTables:
    """Orthant and derivative tables on colored noise."""

    def test_probabilities_sum_to_one(self, colored_tables):
        assert colored_tables.o.sum() == pytest.approx(1.0, abs=1e-4)
        assert np.all(colored_tables.o > 0)

    def test_constant_on_orbits(self, colored_tables):
        for orbit in colored_tables.noise.orbits:
            assert np.ptp(colored_tables.o[orbit]) == 0.0

    def test_derivatives_rotate(self, colored_tables):
        d = colored_tables.d
        for orbit in colored_tables.noise.orbits:
            for first, second in zip(orbit, orbit[1:]):
                np.testing.assert_allclose(d[second], rotate(d[first]))

    def test_derivatives_sum_to_zero(self, colored_tables):
        np.testing.assert_allclose(colored_tables.d.sum(axis=0), 0.0, atol=1e-6)

    def test_pattern_index_inverts_enumeration(self, colored_tables):
        np.testing.assert_array_equal(
            colored_tables.pattern_index(pattern_taus(2)), np.arange(16)
        )

    def test_white_noise_closed_form(self):
        tables = build_noise_tables(np.eye(4))
        np.testing.assert_allclose(tables.o, 1.0 / 16)
        np.testing.assert_allclose(np.abs(tables.d), 1.0 / (8.0 * math.sqrt(2 * math.pi)))

    def test_corrupted_derivatives_rejected(self, colored_tables):
        d = colored_tables.d.copy()
        d[5] += 1e-3
        with pytest.raises(TableConsistencyError):
            check_noise_tables(colored_tables.o, d, 1e-5)

    def test_corrupted_probabilities_rejected(self, colored_tables):
        o = colored_tables.o.copy()
        o[0] += 1e-3
        with pytest.raises(TableConsistencyError):
            check_noise_tables(o, colored_tables.d, 1e-5)
        o[0] = 0.0
        with pytest.raises(TableConsistencyError):
            check_noise_tables(o, colored_tables.d, 1.0)

    def test_consistent_tables_pass(self, colored_tables):
        check_noise_tables(colored_tables.o, colored_tables.d, 1e-4)

    @pytest.mark.parametrize("m", [1, 2])
    def test_one_evaluation_set_per_orbit(self, monkeypatch, colored_sigma, m):
        """kappa / 4 orthants and m 2^(2m-1) mean derivatives per build."""
        module = importlib.import_module("shared.detector.tables")
        calls = {"prob": 0, "grad": 0}

        def counting(name, func):
            def wrapped(*args, **kwargs):
                calls[name] += 1
                return func(*args, **kwargs)
            return wrapped

        monkeypatch.setattr(module, "orthant_prob", counting("prob", module.orthant_prob))
        monkeypatch.setattr(module, "orthant_grad_mean", counting("grad", module.orthant_grad_mean))
        c = complex_to_composite(colored_sigma[:m, :m]).c
        build_noise_tables(c, tol=1e-6, rng=RngStream(seed=3))
        assert calls["prob"] == 4 ** m // 4
        assert calls["grad"] == m * 2 ** (2 * m - 1)


class TestFisherStructure:
    """Information identities of the signal tables."""

    def test_two_upsilon_expressions_agree(self, colored_tables):
        alt = np.sum(colored_tables.delta2 ** 2 / colored_tables.o)
        assert alt == pytest.approx(colored_tables.upsilon_sq, rel=1e-6)

    def test_cross_information_vanishes(self, colored_tables):
        cross = np.sum(colored_tables.delta1 * colored_tables.delta2 / colored_tables.o)
        assert abs(cross) <= 1e-6 * colored_tables.upsilon_sq

    def test_white_upsilon_closed_form(self, colored_scenario):
        tables = white_noise_tables(colored_scenario)
        assert tables.upsilon_sq == pytest.approx(white_upsilon_sq(colored_scenario), rel=1e-5)

    def test_mismatched_dimensions(self, colored_tables, scalar_scenario):
        with pytest.raises(InvalidInputError):
            build_signal_tables(scalar_scenario, colored_tables.noise)


class TestThresholds:
    """CFAR threshold helpers."""

    def test_one_percent_threshold(self):
        assert threshold_for_pfa(0.01) == pytest.approx(9.21034, abs=1e-5)

    def test_inverse(self):
        gammas = np.array([0.0, 1.0, 9.0])
        np.testing.assert_allclose(threshold_for_pfa(pfa_for_threshold(gammas[1:])), gammas[1:])
        assert pfa_for_threshold(0.0) == 1.0

    @pytest.mark.parametrize("pfa", [0.0, 1.0, 2.0])
    def test_invalid_pfa(self, pfa):
        with pytest.raises(InvalidInputError):
            threshold_for_pfa(pfa)

    def test_grid_reaches_floor(self):
        grid = threshold_grid(20, ratio=1.5)
        assert grid[0] == 0.0
        assert grid[-1] == pytest.approx(-2 * math.log(1e-3) * 1.5)
        assert len(grid) == 20


class TestRaoStatistic:
    """Scoring of quantized data."""

    def test_single_and_batch_agree(self, colored_scenario, colored_tables):
        data = simulate_quantized(colored_scenario, 0.3, RngStream(seed=4))
        bits = (data.composite.T > 0)[None, :, :]
        assert rao_statistic(colored_tables, data) == pytest.approx(float(rao_from_bits(colored_tables, bits)[0]))

    def test_scores_shape(self, colored_tables):
        indices = np.zeros((5, 20), dtype=int)
        w1, w2 = rao_scores(colored_tables, indices)
        assert w1.shape == (5,) and w2.shape == (5,)

    def test_score_arrays_built_once(self, colored_tables):
        assert colored_tables.score1 is colored_tables.score1
        assert colored_tables.score2 is colored_tables.score2
        np.testing.assert_allclose(colored_tables.score1, colored_tables.delta1 / colored_tables.o)

    def test_wrong_snapshot_count(self, colored_tables):
        with pytest.raises(InvalidInputError):
            rao_scores(colored_tables, np.zeros((2, 19), dtype=int))

    def test_wrong_antenna_count(self, colored_tables):
        with pytest.raises(InvalidInputError):
            rao_statistic(colored_tables, QuantizedData(y=np.ones((1, 20)) * (1 + 1j)))

    def test_null_mean_is_two(self, colored_scenario, colored_tables):
        """Unit-variance scores give E[T] = 2 at any sample size."""
        bits = simulate_sign_batch(
            np.zeros((4, 20)), colored_scenario.composite.sigma, 20_000, RngStream(seed=12)
        )
        statistics = rao_from_bits(colored_tables, bits)
        assert statistics.mean() == pytest.approx(2.0, abs=0.1)
        assert np.all(statistics >= 0)


def _definitional_rao(scenario, y_composite: np.ndarray, step: float = 1e-5) -> float:
    """
    Rao statistic from numerically differentiated log-likelihoods of a
    single-antenna scenario (independent real and imaginary parts).
    """
    sd = np.sqrt(scenario.composite.d)
    u, v = scenario.w.real[0], scenario.w.imag[0]

    def probs(a: float, b: float) -> np.ndarray:
        # n x 4 pattern probabilities, patterns in binary order
        nu = np.stack([a * u - b * v, a * v + b * u], axis=1) / sd
        taus = pattern_taus(1)
        return np.stack([ndtr(t[0] * nu[:, 0]) * ndtr(t[1] * nu[:, 1]) for t in taus], axis=1)

    def grads() -> np.ndarray:
        da = (probs(step, 0.0) - probs(-step, 0.0)) / (2 * step)
        db = (probs(0.0, step) - probs(0.0, -step)) / (2 * step)
        return np.stack([da, db], axis=-1)

    p0 = probs(0.0, 0.0)
    g = grads()
    idx = ((y_composite > 0).astype(int) @ np.array([2, 1]))
    rows = np.arange(len(idx))
    score = np.sum(g[rows, idx] / p0[rows, idx][:, None], axis=0)
    fisher = np.einsum("nja,njb->ab", g / p0[..., None], g)
    return float(score @ np.linalg.solve(fisher, score))


class TestBruteForceOracle:
    """Table-based statistic against the definition for one antenna."""

    def test_matches_definition(self, scalar_scenario, scalar_tables):
        gen = np.random.default_rng(31)
        for _ in range(100):
            y = gen.choice([-1.0, 1.0], size=(1, 3)) + 1j * gen.choice([-1.0, 1.0], size=(1, 3))
            data = QuantizedData(y=y)
            expected = _definitional_rao(scalar_scenario, data.composite.T)
            assert rao_statistic(scalar_tables, data) == pytest.approx(expected, rel=1e-6, abs=1e-9)
