"""矩矩阵松弛与证书提取的测试"""

import dataclasses
import math
from types import SimpleNamespace

import numpy as np
import pytest

from correlator_algebra import CorrelatorVector, Partition, eval_partition_correlators, partition_iter
from dicke_operators import directions_from_angles
from exceptions import DegreeOverflow, NoViolationFound, SolverFailure, ValidationError
from inequality_catalog import get_family
import moment_sdp
from moment_sdp import (BASIS_LABELS, ONE, MembershipResult, MomentMonomial, ReducedPolynomial, build_moment_spec,
                        certify, check_tensor_scaling, constrained_membership_sdp, ensure_origin_inside,
                        extract_certificate, membership_sdp, moment_matrix_at_vertex, optimize_alpha_beta,
                        optimize_directions, reduce_mod_ideal, third_order_weights, vertex_minimum)
from oat_states import OATParams, correlator_point
from sdp_module import SolveResult, SolveStatus
from sdp_module.config.settings import get_settings


class TestReduction:
    def test_degree_overflow(self):
        with pytest.raises(DegreeOverflow):
            MomentMonomial(4, 4, 0)
        MomentMonomial(3, 3, 1)

    def test_negative_exponent(self):
        with pytest.raises(ValidationError):
            MomentMonomial(-1, 0, 0)

    def test_two_body(self):
        expected = ReducedPolynomial(5, {MomentMonomial(2, 0, 0): 1, ONE: -5})
        assert reduce_mod_ideal("S_00", 5) == expected

    def test_unknown_symbol(self):
        with pytest.raises(ValidationError):
            reduce_mod_ideal("S_00 + foo", 5)

    @pytest.mark.parametrize("n", [3, 6])
    def test_reduced_labels_agree_on_vertices(self, n):
        reduced = {label: reduce_mod_ideal(f"S_{label}", n) for label in BASIS_LABELS[1:]}
        for p in partition_iter(n):
            exact = eval_partition_correlators(p, 3)
            for label, poly in reduced.items():
                assert poly.evaluate(p.s0, p.s1, p.z) == pytest.approx(exact[label], abs=1e-9)


class TestMomentMatrix:
    def test_spec_shape(self):
        spec = build_moment_spec(8)
        assert spec.size == 50
        assert spec.max_degree() <= 7
        assert spec.tensors.shape[0] == 5

    def test_small_n_rejected(self):
        with pytest.raises(ValidationError):
            build_moment_spec(1)

    def test_vertex_matrices_are_psd(self):
        n = 6
        spec = build_moment_spec(n)
        for p in partition_iter(n):
            matrix = moment_matrix_at_vertex(spec, p)
            assert matrix.shape == (50, 50)
            assert np.linalg.eigvalsh(matrix)[0] >= -1e-9
            exact = eval_partition_correlators(p, 3)
            assert matrix[0, 0] == pytest.approx(1.0)
            for col, label in enumerate(BASIS_LABELS[1:], start=1):
                assert matrix[0, col] == pytest.approx(exact[label] / n ** len(label), abs=1e-12)

    def test_partition_size_mismatch(self):
        with pytest.raises(ValidationError):
            moment_matrix_at_vertex(build_moment_spec(6), Partition(1, 1, 1, 0))


class TestCertificateHelpers:
    def test_vertex_minimum_of_i3(self):
        family = get_family("I3")
        coeffs = {label: float(c) for label, c in family.coefficients_at(6).items()}
        minimum, witness = vertex_minimum(coeffs, float(family.constant_at(6)), 6)
        assert minimum == pytest.approx(0.0, abs=1e-9)
        assert witness.n_parties == 6

    def test_third_order_weights(self):
        weights = third_order_weights(0.0, 1.0)
        assert weights == {"000": 1.0, "001": 0.0, "011": 0.0, "111": 0.0}

    def test_alpha_beta_must_be_unit(self):
        spec = build_moment_spec(4)
        point = eval_partition_correlators(Partition(1, 1, 1, 1), 3)
        with pytest.raises(ValidationError):
            constrained_membership_sdp(spec, point, 0.5, 0.5)

    def test_member_has_no_certificate(self):
        point = eval_partition_correlators(Partition(2, 1, 0, 1), 3)
        solve = SolveResult(SolveStatus.OPTIMAL, 1.5, None, None, "none", "test")
        result = MembershipResult(4, 1.5, {}, point, solve)
        assert result.is_member
        with pytest.raises(ValidationError):
            extract_certificate(result)


class TestMembershipSolve:
    def test_vertex_is_member(self):
        spec = build_moment_spec(4)
        point = eval_partition_correlators(Partition(2, 1, 0, 1), 3)
        result = membership_sdp(spec, point)
        assert result.lambda_star >= 1 - 1e-5
        assert result.to_dict()["N"] == 4

    def test_constrained_lambda_not_below_full(self):
        # 约束版只保留三阶的一个组合，松弛更宽
        spec = build_moment_spec(10)
        params = OATParams(10, 0.2)
        for angles in ((0.3, 1.1, 2.0, 0.4), (1.7, 0.9, 0.2, 2.3)):
            point = correlator_point(params, *directions_from_angles(angles))
            full = membership_sdp(spec, point).lambda_star
            for gamma in (0.2, 0.7, 1.3):
                constrained = constrained_membership_sdp(spec, point, math.sin(gamma), math.cos(gamma))
                assert constrained.lambda_star >= full - 1e-4


class TestOriginGuard:
    def test_origin_reaches_cap(self):
        spec = dataclasses.replace(build_moment_spec(4), origin_lambda=None)
        cap = get_settings().lambda_cap
        assert ensure_origin_inside(spec) == pytest.approx(cap, rel=1e-4)
        assert spec.origin_lambda == pytest.approx(cap, rel=1e-4)

    def test_guard_runs_once_per_spec(self, monkeypatch):
        spec = dataclasses.replace(build_moment_spec(4), origin_lambda=1.5)

        def fail(*args, **kwargs):
            raise AssertionError("origin solved twice")

        monkeypatch.setattr(moment_sdp, "_solve_raw", fail)
        assert ensure_origin_inside(spec) == 1.5

    def test_origin_outside_raises(self, monkeypatch):
        spec = dataclasses.replace(build_moment_spec(4), origin_lambda=None)
        monkeypatch.setattr(moment_sdp, "_solve_raw", lambda *a, **k: (0.5, {}, SimpleNamespace(solver="stub")))
        point = eval_partition_correlators(Partition(2, 1, 0, 1), 3)
        with pytest.raises(SolverFailure) as info:
            membership_sdp(spec, point)
        assert info.value.status == "origin_outside"
        assert spec.origin_lambda is None

    def test_ray_through_vertex(self):
        vertex = eval_partition_correlators(Partition(2, 1, 0, 1), 3)
        shrunk = CorrelatorVector(4, 3, {label: 0.8 * value for label, value in vertex.values.items()})
        assert membership_sdp(build_moment_spec(4), shrunk).lambda_star >= 1.25 - 1e-4

    def test_tensor_scaling(self):
        spec = build_moment_spec(6)
        check_tensor_scaling(spec)
        broken = dataclasses.replace(spec, tensors=spec.tensors * 2, origin_lambda=None)
        with pytest.raises(ValidationError):
            check_tensor_scaling(broken)
        with pytest.raises(ValidationError):
            ensure_origin_inside(broken)


@pytest.mark.slow
class TestDirectionSearch:
    def test_product_state_has_no_violation(self):
        with pytest.raises(NoViolationFound):
            optimize_directions(8, 0.0, starts=2, max_evals=20)


@pytest.mark.slow
class TestCertificateAtFifty:
    def test_certificate_at_fifty(self):
        search = optimize_directions(50, 0.2)
        spec = build_moment_spec(50)
        assert membership_sdp(spec, search.point).lambda_star < 1
        best = optimize_alpha_beta(spec, search.point)
        assert abs(best.ratio - 41 / 59) <= 0.05 * 41 / 59
        cert = certify(spec, search.point, best.alpha, best.beta)
        assert cert.evaluate(search.point) < 0
        assert cert.min_vertex_value >= -1e-7
        assert math.isclose(cert.constant, 1.0)
