"""Dicke 基算符、Bell 算符与 θ 优化的测试"""

import json
import math
from math import comb

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dicke_operators import (X_AXIS, Z_AXIS, DickeSpace, Direction, bell_expectation, bell_operator,
                             correlator_operator, correlators_to_moments, directions_from_angles,
                             dump_operator, expectation_correlators, fourth_moment_identity,
                             full_space_bell_operator, full_space_oracle, i4_collective_operator,
                             min_eigenvalue, moments_to_correlators, optimize_theta, rotate_direction,
                             rotation_operator, spin_matrix, theta_slice, third_moment_identity)
from exceptions import SizeLimit, ValidationError
from inequality_catalog import builtin_catalog, get_family


def random_state(rng, n):
    vec = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return vec / np.linalg.norm(vec)


def random_direction(rng):
    return Direction.normalized(rng.normal(size=3))


def dicke_isometry(n):
    """2^N × (N+1) 矩阵，第 k 列为 k 个自旋向下的 Dicke 态"""
    iso = np.zeros((2 ** n, n + 1))
    for index in range(2 ** n):
        k = bin(index).count("1")
        iso[index, k] = 1 / math.sqrt(comb(n, k))
    return iso


class TestSpinAlgebra:
    @pytest.mark.parametrize("n", [1, 4, 7])
    def test_commutators(self, n):
        space = DickeSpace(n)
        sx, sy, sz = (spin_matrix(space, axis) for axis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        assert_allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-12)
        assert_allclose(sx @ sx + sy @ sy + sz @ sz, space.j * (space.j + 1) * np.eye(space.dim), atol=1e-10)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ValidationError):
            Direction((1.0, 1.0, 0.0))

    def test_angles_round_trip(self):
        direction = Direction.from_angles(0.7, 1.1)
        assert_allclose(direction.angles(), (0.7, 1.1), atol=1e-12)


class TestCorrelatorOperators:
    def test_all_up_state(self):
        n = 6
        state = np.zeros(n + 1)
        state[0] = 1.0
        values = expectation_correlators(state, Z_AXIS, X_AXIS, 2)
        assert values["0"] == pytest.approx(n)
        assert values["00"] == pytest.approx(n * (n - 1))
        assert values["1"] == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", [3, 4])
    def test_symmetric_block_is_projection_of_full_operator(self, rng, n):
        iso = dicke_isometry(n)
        for name in ("I2", "I3", "I3_17", "I4"):
            family = get_family(name)
            d0, d1 = random_direction(rng), random_direction(rng)
            full = full_space_bell_operator(family, n, d0, d1)
            sym = bell_operator(family, DickeSpace(n), d0, d1).matrix
            assert_allclose(iso.T @ full @ iso, sym, atol=1e-9)

    def test_full_space_minimum_is_below_block_minimum(self, rng):
        family = get_family("I3")
        d0, d1 = random_direction(rng), random_direction(rng)
        sym_value, _ = min_eigenvalue(bell_operator(family, DickeSpace(5), d0, d1))
        assert full_space_oracle(family, 5, d0, d1) <= sym_value + 1e-9

    def test_full_space_size_limit(self):
        with pytest.raises(SizeLimit):
            full_space_bell_operator(get_family("I2"), 6, Z_AXIS, X_AXIS, limit=5)

    def test_expectation_matches_operator(self, rng):
        n = 7
        state = random_state(rng, n)
        d0, d1 = random_direction(rng), random_direction(rng)
        values = expectation_correlators(state, d0, d1, 4)
        for label in values.labels:
            op = correlator_operator(DickeSpace(n), label, d0, d1)
            assert values[label] == pytest.approx(np.real(np.vdot(state, op @ state)), abs=1e-9)
        density = np.outer(state, state.conj())
        assert_allclose(expectation_correlators(density, d0, d1, 4).as_array(), values.as_array(), atol=1e-9)


class TestMomentIdentities:
    def test_single_direction_moments(self, rng):
        n = 8
        state = random_state(rng, n)
        direction = random_direction(rng)
        values = expectation_correlators(state, direction, Z_AXIS, 4)
        s = spin_matrix(DickeSpace(n), direction)
        moments = correlators_to_moments(values)
        for k in range(1, 5):
            direct = np.real(np.vdot(state, np.linalg.matrix_power(s, k) @ state))
            assert moments[k] == pytest.approx(direct, abs=1e-9)
        back = moments_to_correlators(n, moments)
        for label, value in back.items():
            assert value == pytest.approx(values[label], abs=1e-8)

    def test_third_moment(self, rng):
        n = 5
        alpha, beta = 0.3, 0.8
        state = random_state(rng, n)
        d0, d1 = random_direction(rng), random_direction(rng)
        values = expectation_correlators(state, d0, d1, 3)
        s_a = spin_matrix(DickeSpace(n), alpha * d1.array + beta * d0.array)
        direct = np.real(np.vdot(state, s_a @ s_a @ s_a @ state))
        assert third_moment_identity(alpha, beta, d0.dot(d1), values) == pytest.approx(direct, abs=1e-9)

    def test_fourth_moment(self, rng):
        n = 6
        state = random_state(rng, n)
        d0, d1 = random_direction(rng), random_direction(rng)
        values = expectation_correlators(state, d0, d1, 4)
        s_a = spin_matrix(DickeSpace(n), (d0.array + d1.array) / math.sqrt(2))
        direct = np.real(np.vdot(state, np.linalg.matrix_power(s_a, 4) @ state))
        assert fourth_moment_identity(d0.dot(d1), values) == pytest.approx(direct, abs=1e-8)

    def test_i4_collective_form(self, rng):
        n = 9
        d0, d1 = random_direction(rng), random_direction(rng)
        expected = bell_operator(get_family("I4"), DickeSpace(n), d0, d1).matrix
        assert_allclose(i4_collective_operator(n, d0, d1), expected, atol=1e-7)

    def test_missing_party_count(self):
        with pytest.raises(ValidationError):
            third_moment_identity(1.0, 0.0, 0.0, {"0": 1, "1": 1, "000": 0, "001": 0, "011": 0, "111": 0})


class TestBellOperator:
    def test_min_eigenvalue(self, rng):
        op = bell_operator(get_family("I3"), DickeSpace(10), random_direction(rng), random_direction(rng))
        value, vector = min_eigenvalue(op)
        assert value == pytest.approx(np.linalg.eigvalsh(op.matrix)[0], abs=1e-9)
        assert op.expectation(vector) == pytest.approx(value, abs=1e-9)

    def test_expectation_consistency(self, rng):
        family = get_family("I3_4")
        state = random_state(rng, 6)
        d0, d1 = random_direction(rng), random_direction(rng)
        op = bell_operator(family, DickeSpace(6), d0, d1)
        assert bell_expectation(family, state, d0, d1) == pytest.approx(op.expectation(state), abs=1e-8)

    def test_product_states_do_not_violate(self, rng):
        n = 6
        for _ in range(5):
            d0, d1 = random_direction(rng), random_direction(rng)
            local = rng.normal(size=2) + 1j * rng.normal(size=2)
            local /= np.linalg.norm(local)
            # |ψ⟩^⊗N 的 Dicke 分量：√C(N,k) a^(N-k) b^k
            state = np.array([math.sqrt(comb(n, k)) * local[0] ** (n - k) * local[1] ** k for k in range(n + 1)])
            for family in builtin_catalog():
                assert bell_expectation(family, state, d0, d1) >= -1e-8

    def test_theta_slice_matches_expectation(self, rng):
        family = get_family("I3")
        state = random_state(rng, 5)
        angles = [0.1, 0.4, 1.2, 2.0]
        rows = theta_slice(family, state, angles, 3, [0.5, 1.5])
        for theta, ratio in rows:
            d0, d1 = directions_from_angles([0.1, 0.4, 1.2, theta])
            assert ratio * family.constant_at(5) == pytest.approx(bell_expectation(family, state, d0, d1), abs=1e-8)
        with pytest.raises(ValidationError):
            theta_slice(family, state, angles, 4, [0.0])

    def test_optimize_theta_finds_violation(self):
        result = optimize_theta(get_family("I2"), 10)
        assert result.ratio < 0
        assert 0 <= result.theta_star <= math.pi
        assert result.to_dict()["N"] == 10

    def test_optimize_theta_rejects_small_n(self):
        with pytest.raises(ValidationError):
            optimize_theta(get_family("I3"), 1)

    def test_dump_operator(self, tmp_path):
        op = bell_operator(get_family("I2"), DickeSpace(3), Z_AXIS, X_AXIS)
        path = tmp_path / "op.json"
        dump_operator(op, str(path), np.ones(4) / 2, {"theta": 0.5})
        data = json.loads(path.read_text())
        assert len(data["matrix"]["real"]) == 4
        assert data["theta"] == 0.5


class TestRotations:
    def test_unitary_and_covariant(self, rng):
        space = DickeSpace(5)
        angles = (0.4, 1.3, -0.7)
        rot = rotation_operator(space, *angles)
        assert_allclose(rot @ rot.conj().T, np.eye(space.dim), atol=1e-10)
        for _ in range(3):
            u = random_direction(rng)
            rotated = rotate_direction(u, *angles)
            assert_allclose(rot @ spin_matrix(space, u) @ rot.conj().T, spin_matrix(space, rotated), atol=1e-10)


@pytest.mark.slow
class TestOracleAndAsymptotics:
    def test_block_minimum_equals_full_space(self, rng):
        families = builtin_catalog()
        for n in range(2, 9):
            space = DickeSpace(n)
            for _ in range(20):
                d0, d1 = random_direction(rng), random_direction(rng)
                for family in families:
                    sym_value, _ = min_eigenvalue(bell_operator(family, space, d0, d1))
                    assert full_space_oracle(family, n, d0, d1) == pytest.approx(sym_value, abs=1e-7)

    @pytest.mark.parametrize("name,limit", [("I3", -2 * math.sqrt(3) / 9), ("I2", -0.25)])
    def test_large_n_ratios(self, name, limit):
        family = get_family(name)
        at_1000 = optimize_theta(family, 1000).ratio
        at_100 = optimize_theta(family, 100).ratio
        assert abs(at_1000 - limit) <= 0.03 * abs(limit)
        assert abs(at_1000 - limit) < abs(at_100 - limit)


@pytest.mark.slow
class TestViolationCurves:
    sizes = (20, 50, 100, 200)

    def test_i3_beats_i2(self):
        for n in (50, 100, 200):
            i2 = optimize_theta(get_family("I2"), n, grid_points=180).ratio
            i3 = optimize_theta(get_family("I3"), n, grid_points=180).ratio
            assert i3 < i2 < 0

    def test_curves_settle_toward_plateau(self):
        families = [f for f in builtin_catalog() if f.name.startswith("I3_") or f.name == "I4"]
        assert len(families) == 18
        for family in families:
            ratios = [optimize_theta(family, n, grid_points=180).ratio for n in self.sizes]
            assert all(math.isfinite(r) for r in ratios)
            assert abs(ratios[3] - ratios[2]) <= abs(ratios[1] - ratios[0]) + 1e-3, (family.name, ratios)
