"""数值配置加载器的测试"""

import os

import pytest
import yaml

from config_loader import ConfigLoader, mu_grid_values


class TestConfigLoader:
    def test_missing_file_uses_defaults(self, tmp_path):
        loader = ConfigLoader(str(tmp_path / "absent.yml"))
        assert loader.get_theta_grid_points() == 720
        assert loader.get_mu_grid() == (0.0, 0.6, 200)
        assert loader.get("no.such.key", "fallback") == "fallback"

    def test_partial_file_is_merged(self, tmp_path):
        path = tmp_path / "config.yml"
        path.write_text(yaml.safe_dump({"oat": {"angle_starts": 5}, "logging": {"level": "DEBUG"}}))
        loader = ConfigLoader(str(path))
        assert loader.get_angle_starts() == 5
        assert loader.get_angle_seed() == 2024
        assert loader.get_log_level() == "DEBUG"

    def test_update_and_persist(self, tmp_path):
        path = tmp_path / "config.yml"
        loader = ConfigLoader(str(path))
        loader.update_config("nongauss.kurtosis_grid", 16, persist=True)
        assert ConfigLoader(str(path)).get_kurtosis_grid() == 16

    def test_repository_config(self):
        loader = ConfigLoader(os.environ["PIBI_CONFIG"])
        assert loader.get_oracle_n_max() == 10
        assert loader.get_gamma_grid_points() == 180
        assert loader.get_wigner_tolerance() == pytest.approx(1e-3)


def test_mu_grid_values():
    assert mu_grid_values(0.0, 0.6, 4) == pytest.approx([0.0, 0.2, 0.4, 0.6])
    assert mu_grid_values(0.3, 0.6, 1) == [0.3]
