"""命令行入口的测试"""

import json

import pytest

from main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, run
from sdp_module.utils.helpers import read_csv_result


class TestCommands:
    def test_catalog_export(self, tmp_path):
        path = tmp_path / "catalog.json"
        assert run(["catalog", "--out", str(path)]) == EXIT_OK
        assert len(json.loads(path.read_text())["families"]) == 20

    def test_verify_classical(self, tmp_path):
        path = tmp_path / "verify.json"
        assert run(["verify-classical", "--family", "I2,I3", "--n-max", "8", "--out", str(path)]) == EXIT_OK
        data = json.loads(path.read_text())
        assert [r["status"] for r in data["reports"]] == ["PASS", "PASS"]
        assert data["run_config"]["subcommand"] == "verify-classical"

    def test_verify_classical_reports_failure(self, tmp_path):
        bad = {"name": "bad", "K": 1, "coeffs": {"0": [[0, 2]]}, "constant": [[1, 1]]}
        catalog = tmp_path / "user.json"
        catalog.write_text(json.dumps({"families": [bad]}))
        assert run(["--catalog", str(catalog), "verify-classical", "--family", "bad", "--n-max", "4"]) \
            == EXIT_CHECK_FAILED

    def test_violation_csv(self, tmp_path):
        path = tmp_path / "violation.csv"
        assert run(["violation", "--family", "I2", "--n", "4..5", "--out", str(path)]) == EXIT_OK
        assert path.read_text().startswith("# subcommand: ")
        rows = read_csv_result(str(path))
        assert list(rows[0]) == ["family", "N", "theta_star", "ratio"]
        assert [row["N"] for row in rows] == ["4", "5"]

    def test_vertices_json(self, tmp_path):
        path = tmp_path / "vertices.json"
        assert run(["vertices", "--n", "4", "--order", "3", "--out", str(path)]) == EXIT_OK
        data = json.loads(path.read_text())
        assert data["run_config"]["subcommand"] == "vertices"
        assert data["K"] == 3

    def test_facet_check(self, tmp_path):
        path = tmp_path / "facets.json"
        assert run(["--format", "json", "facet-check", "--family", "I3", "--n", "4..5", "--out", str(path)]) \
            == EXIT_OK
        data = json.loads(path.read_text())
        assert [row["N"] for row in data["rows"]] == [4, 5]

    def test_oat_scan(self, tmp_path):
        path = tmp_path / "scan.csv"
        assert run(["oat-scan", "--family", "I2", "--n", "6", "--mu", "0.0,0.3", "--out", str(path)]) == EXIT_OK
        rows = read_csv_result(str(path))
        assert list(rows[0]) == ["mu", "ratio_I2"]
        assert len(rows) == 2

    def test_nongauss_without_negativity(self, tmp_path):
        path = tmp_path / "ng.csv"
        assert run(["nongauss", "--n", "4", "--mu", "0.0", "--no-negativity", "--out", str(path)]) == EXIT_OK
        assert list(read_csv_result(str(path))[0]) == ["mu", "K_ex"]


class TestUsageErrors:
    def test_bad_range(self, tmp_path):
        assert run(["violation", "--n", "9..3", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE

    def test_unknown_family(self):
        assert run(["violation", "--family", "I9", "--n", "4"]) == EXIT_USAGE

    def test_size_limit(self, tmp_path):
        assert run(["vertices", "--n", "500", "--out", str(tmp_path / "v.json")]) == EXIT_USAGE

    def test_mu_out_of_range(self, tmp_path):
        assert run(["oat-scan", "--n", "6", "--mu", "7.0", "--out", str(tmp_path / "s.csv")]) == EXIT_USAGE

    def test_malformed_angles(self, tmp_path):
        assert run(["sdp-membership", "--n", "4", "--mu", "0.1", "--angles", "0,1",
                    "--out", str(tmp_path / "c.json")]) == EXIT_USAGE

    def test_argparse_error_exits_with_usage_code(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run(["no-such-command"])
        assert excinfo.value.code == EXIT_USAGE
        assert "RunConfig schema" in capsys.readouterr().err
