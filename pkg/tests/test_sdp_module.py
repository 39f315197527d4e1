"""SDP 求解适配层、配置与工具函数的测试"""

import json
from fractions import Fraction

import numpy as np
import pytest

from exceptions import SolverFailure, ValidationError
from sdp_module import ConicProblem, CvxpyBackend, PSDBlock, SDPManager
from sdp_module.config.settings import SDPSettings, load_config, save_config
from sdp_module.utils.helpers import (parse_float_range, parse_int_range, read_csv_result, write_csv_result,
                                      write_json_result)
from sdp_module.utils.validators import validate_accuracy, validate_problem, validate_solver_names


def tiny_problem(x1_value=0.5, extra_block=None):
    """max x0  s.t.  x1 = x1_value,  [[1, x0], [x0, 1]] ⪰ 0"""
    coeffs = np.zeros((2, 2, 2))
    coeffs[0] = [[0, 1], [1, 0]]
    blocks = [PSDBlock("disk", coeffs, np.eye(2))]
    if extra_block is not None:
        blocks.append(extra_block)
    return ConicProblem(
        n_vars=2,
        objective=np.array([1.0, 0.0]),
        eq_matrix=np.array([[0.0, 1.0]]),
        eq_rhs=np.array([x1_value]),
        blocks=blocks,
        eq_names=["fix_x1"],
    )


@pytest.fixture
def manager():
    manager = SDPManager(accuracy=1e-8)
    assert manager.register_backend(CvxpyBackend(), set_as_default=True)
    return manager


class TestManager:
    def test_solves_tiny_sdp(self, manager):
        result = manager.solve(tiny_problem())
        assert result.status.is_solved
        assert result.x[0] == pytest.approx(1.0, abs=1e-5)
        assert result.x[1] == pytest.approx(0.5, abs=1e-6)
        assert result.eq_duals.shape == (1,)
        assert len(result.block_duals) == 1

    def test_infeasible_raises(self, manager):
        # x1 - 1 ⪰ 0 与 x1 = 0.5 矛盾
        coeffs = np.zeros((2, 1, 1))
        coeffs[1] = [[1.0]]
        block = PSDBlock("lower", coeffs, np.array([[-1.0]]))
        with pytest.raises(SolverFailure):
            manager.solve(tiny_problem(extra_block=block))

    def test_rejects_malformed_problem(self, manager):
        problem = tiny_problem()
        problem.blocks[0].coefficients[0] = [[0, 1], [0, 0]]
        with pytest.raises(ValidationError):
            manager.solve(problem)

    def test_rejects_coarse_accuracy(self, manager):
        with pytest.raises(ValidationError):
            manager.solve(tiny_problem(), accuracy=1e-2)

    def test_backend_listing(self, manager):
        info = manager.list_backends()
        assert info[0]["name"] == "cvxpy"
        assert info[0]["is_default"]


class TestValidators:
    def test_problem_shapes(self):
        problem = tiny_problem()
        assert validate_problem(problem) == []
        problem.objective = np.zeros(3)
        assert validate_problem(problem)

    def test_accuracy_and_solvers(self):
        assert validate_accuracy(1e-8)
        assert not validate_accuracy(0)
        assert validate_solver_names(["clarabel", "SCS"])
        assert not validate_solver_names(["GUROBI-ISH"])
        assert not validate_solver_names([])


class TestSettings:
    def test_save_and_load(self, tmp_path, monkeypatch):
        monkeypatch.delenv("PIBI_SDP_ACCURACY", raising=False)
        path = tmp_path / "sdp.yaml"
        settings = SDPSettings(accuracy=1e-7, lambda_cap=3.0)
        assert save_config(settings, str(path))
        loaded = load_config(str(path))
        assert loaded.accuracy == pytest.approx(1e-7)
        assert loaded.lambda_cap == 3.0
        assert loaded.cvxpy.solvers == ["MOSEK", "CLARABEL", "SCS"]

    def test_environment_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("PIBI_SDP_ACCURACY", "1e-6")
        assert load_config(str(tmp_path / "missing.yaml")).accuracy == pytest.approx(1e-6)

    def test_invalid_file_falls_back(self, tmp_path, monkeypatch):
        monkeypatch.delenv("PIBI_SDP_ACCURACY", raising=False)
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"lambda_cap": 0.5}))
        assert load_config(str(path)).lambda_cap == 2.0

    def test_cannot_save_invalid(self, tmp_path):
        assert not save_config(SDPSettings(accuracy=0.1), str(tmp_path / "x.yaml"))


class TestHelpers:
    def test_int_ranges(self):
        assert parse_int_range("5..8") == [5, 6, 7, 8]
        assert parse_int_range("2,3,5") == [2, 3, 5]
        for bad in ("8..5", "a..b", "1,x"):
            with pytest.raises(ValidationError):
                parse_int_range(bad)

    def test_float_ranges(self):
        assert parse_float_range("0..1", 3) == [0.0, 0.5, 1.0]
        assert parse_float_range("0.1,0.2") == [0.1, 0.2]
        with pytest.raises(ValidationError):
            parse_float_range("0..1")

    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "out.csv"
        rows = [{"family": "I2", "N": 4, "ratio": np.float64(-0.1)}]
        write_csv_result(str(path), rows, ["family", "N", "ratio"], {"command": "violation", "N": [4]})
        lines = path.read_text().splitlines()
        assert lines[0] == '# command: "violation"'
        assert lines[1] == "# N: [4]"
        assert read_csv_result(str(path)) == [{"family": "I2", "N": "4", "ratio": "-0.1"}]

    def test_json_converts_numeric_types(self, tmp_path):
        path = tmp_path / "out.json"
        write_json_result(str(path), {"x": np.arange(2), "c": Fraction(1, 2), "ok": np.bool_(True)}, {"seed": 1})
        data = json.loads(path.read_text())
        assert data == {"x": [0, 1], "c": "1/2", "ok": True, "run_config": {"seed": 1}}
