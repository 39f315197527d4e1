"""OAT 态、闭式矩与角度优化的测试"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dicke_operators import (X_AXIS, Z_AXIS, DickeSpace, Direction, bell_expectation, directions_from_angles,
                             expectation_correlators, spin_matrix)
from exceptions import NoViolation, ValidationError
from inequality_catalog import get_family
from oat_states import (BellFunctional, OATParams, SymState, bell_value, closed_form_moment, correlator_point,
                        evaluate_certificate_curve, min_purity, optimize_angles, optimize_state_angles, oat_vector,
                        quasi_random_starts, scan_mu, spin_moments)


def random_direction(rng):
    return Direction.normalized(rng.normal(size=3))


def mixed_density(params):
    state = oat_vector(params).amplitudes
    dim = params.n_parties + 1
    return params.eta * np.outer(state, state.conj()) + (1 - params.eta) * np.eye(dim) / dim


class TestParams:
    @pytest.mark.parametrize("kwargs", [dict(n_parties=0, mu=0.1), dict(n_parties=5, mu=2 * math.pi),
                                        dict(n_parties=5, mu=-0.1), dict(n_parties=5, mu=0.1, eta=1.5)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            OATParams(**kwargs)

    def test_unnormalized_state(self):
        with pytest.raises(ValidationError):
            SymState(np.array([1.0, 1.0]))


class TestOATVector:
    @pytest.mark.parametrize("n,mu", [(1, 0.0), (10, 0.3), (400, 1.7)])
    def test_normalized(self, n, mu):
        assert np.linalg.norm(oat_vector(OATParams(n, mu)).amplitudes) == pytest.approx(1.0, abs=1e-12)

    def test_zero_twist_is_coherent_along_x(self):
        params = OATParams(12, 0.0)
        state = oat_vector(params).amplitudes
        sx = spin_matrix(DickeSpace(12), X_AXIS)
        assert np.real(np.vdot(state, sx @ state)) == pytest.approx(6.0, abs=1e-10)
        assert spin_moments(params, X_AXIS, 1)[1] == pytest.approx(6.0, abs=1e-12)

    def test_closed_forms_match_dicke_expectations(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 21))
            params = OATParams(n, float(rng.uniform(0, 2 * math.pi)))
            direction = random_direction(rng)
            state = oat_vector(params).amplitudes
            s = spin_matrix(DickeSpace(n), direction)
            power = np.eye(n + 1, dtype=complex)
            for order in range(1, 5):
                power = power @ s
                direct = np.real(np.vdot(state, power @ state))
                assert closed_form_moment(params, direction, order) == pytest.approx(direct, rel=1e-9, abs=1e-9)

    def test_closed_form_order_range(self):
        with pytest.raises(ValidationError):
            closed_form_moment(OATParams(4, 0.1), Z_AXIS, 5)


class TestCorrelatorPoint:
    def test_matches_state_expectation(self, rng):
        params = OATParams(9, 0.45)
        d0, d1 = random_direction(rng), random_direction(rng)
        expected = expectation_correlators(oat_vector(params).amplitudes, d0, d1, 4)
        point = correlator_point(params, d0, d1, 4)
        assert_allclose(point.as_array(), expected.as_array(), atol=1e-8)

    def test_white_noise_mixture(self, rng):
        params = OATParams(7, 0.8, eta=0.6)
        d0, d1 = random_direction(rng), random_direction(rng)
        expected = expectation_correlators(mixed_density(params), d0, d1, 3)
        assert_allclose(correlator_point(params, d0, d1, 3).as_array(), expected.as_array(), atol=1e-8)

    def test_equal_directions(self, rng):
        params = OATParams(6, 0.2)
        direction = random_direction(rng)
        point = correlator_point(params, direction, direction, 3)
        assert point["001"] == pytest.approx(point["000"])
        assert point["1"] == pytest.approx(point["0"])


class TestBellValue:
    def test_matches_density_expectation(self):
        family = get_family("I3")
        params = OATParams(8, 0.5, eta=0.8)
        angles = [0.3, 1.0, 2.5, 1.4]
        d0, d1 = directions_from_angles(angles)
        expected = bell_expectation(family, mixed_density(params), d0, d1)
        assert bell_value(family, params, angles) == pytest.approx(expected, abs=1e-8)

    def test_requires_four_angles(self):
        with pytest.raises(ValidationError):
            bell_value(get_family("I2"), OATParams(4, 0.1), [0.0, 1.0])

    def test_functional_rejects_small_n(self):
        with pytest.raises(ValidationError):
            BellFunctional.from_family(get_family("I3"), 1)


class TestAngleOptimization:
    def test_sobol_starts(self):
        starts = quasi_random_starts(5, 7)
        assert starts.shape == (5, 4)
        assert np.all(starts >= 0)
        assert np.all(starts[:, [0, 2]] <= 2 * math.pi)
        assert np.all(starts[:, [1, 3]] <= math.pi)
        assert_allclose(quasi_random_starts(5, 7), starts)

    def test_never_worse_than_default_start(self):
        family = get_family("I3")
        params = OATParams(10, 0.3)
        best = optimize_angles(family, params, starts=2, seed=1)
        default = bell_value(family, params, [0.0, math.pi / 2, 0.0, math.pi / 2]) / family.constant_at(10)
        assert best.ratio <= default + 1e-12
        assert best.value == pytest.approx(bell_value(family, params, best.angles), abs=1e-6)

    def test_coherent_state_is_local(self):
        result = optimize_angles(get_family("I2"), OATParams(8, 0.0), starts=2, seed=3)
        assert result.ratio >= -1e-9

    def test_state_angles_agree_with_oat_search(self):
        family = get_family("I3")
        params = OATParams(10, 0.3)
        best = optimize_angles(family, params, starts=2, seed=1)
        angles, ratio = optimize_state_angles(family, oat_vector(params), starts=2, seed=1,
                                              extra_starts=[best.angles])
        assert ratio <= best.ratio + 1e-9
        assert len(angles) == 4

    def test_scan_rows(self):
        rows = scan_mu([get_family("I2")], 6, [0.0, 0.3], starts=2)
        assert [row.mu for row in rows] == [0.0, 0.3]
        assert set(rows[0].to_dict()) == {"mu", "ratio_I2"}

    def test_certificate_curve(self):
        family = get_family("I2")
        coeffs = {label: float(c) for label, c in family.coefficients_at(6).items()}
        curve = evaluate_certificate_curve(coeffs, float(family.constant_at(6)), 6, [0.0], starts=2)
        assert curve[0][0] == 0.0
        assert curve[0][1] >= -1e-9


@pytest.mark.slow
class TestTwistWindows:
    def test_i3_window_contains_i2_window(self):
        grid = np.linspace(0.01, 0.6, 60)
        rows = scan_mu([get_family("I2"), get_family("I3")], 50, grid, starts=8)
        i2 = np.array([row.ratios["I2"] for row in rows])
        i3 = np.array([row.ratios["I3"] for row in rows])
        assert np.all(i3[i2 < 0] < 0)
        assert np.sum(i3 < 0) > np.sum(i2 < 0)
        assert i3.min() < i2.min()


class TestMinPurity:
    def test_coherent_state_raises(self):
        with pytest.raises(NoViolation):
            min_purity(get_family("I2"), 8, 0.0, starts=2)


@pytest.mark.slow
class TestPurityOrdering:
    def test_root_stays_inside_bisection_bracket(self):
        family = get_family("I3")
        grid = [0.05, 0.1, 0.2, 0.3, 0.4]
        ratios = [optimize_angles(family, OATParams(20, mu), starts=4).ratio for mu in grid]
        mu = grid[int(np.argmin(ratios))]
        assert min(ratios) < 0
        coarse = min_purity(family, 20, mu, tolerance=1e-2, starts=4)
        fine = min_purity(family, 20, mu, tolerance=1e-4, starts=4)
        assert 0.0 < coarse < 1.0
        assert 0.0 < fine < 1.0
        assert abs(coarse - fine) <= 1e-2 + 1e-4

    def test_i3_tolerates_more_noise_than_i2(self):
        i2, i3 = get_family("I2"), get_family("I3")
        grid = np.linspace(0.01, 0.6, 30)
        ratios = [optimize_angles(i2, OATParams(50, mu), starts=4).ratio for mu in grid]
        mu = float(grid[int(np.argmin(ratios))])
        assert min(ratios) < 0
        eta_i2 = min_purity(i2, 50, mu, tolerance=1e-3, starts=4)
        eta_i3 = min_purity(i3, 50, mu, tolerance=1e-3, starts=4)
        assert eta_i3 <= eta_i2 + 1e-3
