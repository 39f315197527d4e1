#!/usr/bin/env python3
"""
配置文件加载器
用于加载和管理工具包的数值配置（网格、容差、随机种子、输出目录）
"""

import os
import yaml
from pathlib import Path
from typing import Dict, Any, List, Tuple
import logging

logger = logging.getLogger(__name__)

class ConfigLoader:
    """配置文件加载器"""

    def __init__(self, config_file: str = "config.yml"):
        """初始化配置加载器"""
        self.config_file = Path(config_file)
        self._config = None
        self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """加载配置文件，缺失的键用默认值补齐"""
        defaults = self._get_default_config()
        if not self.config_file.exists():
            logger.warning(f"配置文件不存在: {self.config_file}")
            self._config = defaults
            return self._config

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            self._config = _merge(defaults, loaded)
            logger.info(f"成功加载配置文件: {self.config_file}")
        except Exception as e:
            logger.error(f"加载配置文件失败: {e}")
            self._config = defaults

        return self._config

    def get(self, key_path: str, default: Any = None) -> Any:
        """获取配置值，支持点分隔的路径"""
        if self._config is None:
            self.load_config()

        keys = key_path.split('.')
        value = self._config

        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def get_verify_n_max(self) -> int:
        """经典界穷举验证的 N 上限"""
        return int(self.get('classical.n_max', 100))

    def get_polytope_n_max(self) -> int:
        """顶点物化的 N 保护上限"""
        return int(self.get('polytope.n_max', 60))

    def get_theta_grid_points(self) -> int:
        return int(self.get('operators.theta_grid_points', 720))

    def get_theta_tolerance(self) -> float:
        return float(self.get('operators.theta_tolerance', 1e-8))

    def get_oracle_n_max(self) -> int:
        return int(self.get('operators.oracle_n_max', 10))

    def get_angle_starts(self) -> int:
        """四角优化的多起点数"""
        return int(self.get('oat.angle_starts', 24))

    def get_angle_seed(self) -> int:
        return int(self.get('oat.angle_seed', 2024))

    def get_angle_tolerance(self) -> float:
        return float(self.get('oat.angle_tolerance', 1e-9))

    def get_mu_grid(self) -> Tuple[float, float, int]:
        """μ 扫描网格 (起点, 终点, 点数)"""
        grid = self.get('oat.mu_grid', {})
        return (float(grid.get('start', 0.0)), float(grid.get('stop', 0.6)), int(grid.get('points', 200)))

    def get_eta_tolerance(self) -> float:
        return float(self.get('oat.eta_tolerance', 1e-4))

    def get_gamma_grid_points(self) -> int:
        """(α,β) 角度扫描点数"""
        return int(self.get('sdp.gamma_grid_points', 180))

    def get_direction_starts(self) -> int:
        return int(self.get('sdp.direction_starts', 8))

    def get_kurtosis_grid(self) -> int:
        return int(self.get('nongauss.kurtosis_grid', 64))

    def get_wigner_tolerance(self) -> float:
        return float(self.get('nongauss.wigner_tolerance', 1e-3))

    def get_wigner_max_doublings(self) -> int:
        return int(self.get('nongauss.wigner_max_doublings', 4))

    def get_output_dir(self) -> str:
        """获取输出目录"""
        return self.get('output.dir', './pibi_output')

    def get_log_level(self) -> str:
        """获取日志级别"""
        return self.get('logging.level', 'INFO')

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置"""
        return {
            'classical': {
                'n_max': 100
            },
            'polytope': {
                'n_max': 60
            },
            'operators': {
                'theta_grid_points': 720,
                'theta_tolerance': 1e-8,
                'oracle_n_max': 10
            },
            'oat': {
                'angle_starts': 24,
                'angle_seed': 2024,
                'angle_tolerance': 1e-9,
                'mu_grid': {'start': 0.0, 'stop': 0.6, 'points': 200},
                'eta_tolerance': 1e-4
            },
            'sdp': {
                'gamma_grid_points': 180,
                'direction_starts': 8
            },
            'nongauss': {
                'kurtosis_grid': 64,
                'wigner_tolerance': 1e-3,
                'wigner_max_doublings': 4
            },
            'output': {
                'dir': './pibi_output'
            },
            'logging': {
                'level': 'INFO'
            }
        }

    def save_config(self, config_data: Dict[str, Any] = None):
        """保存配置到文件"""
        if config_data is None:
            config_data = self._config

        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                yaml.dump(config_data, f, default_flow_style=False,
                         allow_unicode=True, indent=2)
            logger.info(f"配置已保存到: {self.config_file}")
        except Exception as e:
            logger.error(f"保存配置文件失败: {e}")

    def update_config(self, key_path: str, value: Any, persist: bool = False):
        """更新配置值，persist=True 时写回文件"""
        if self._config is None:
            self.load_config()

        keys = key_path.split('.')
        config = self._config

        # 导航到目标位置
        for key in keys[:-1]:
            if key not in config:
                config[key] = {}
            config = config[key]

        config[keys[-1]] = value

        if persist:
            self.save_config()


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并，override 中的值优先"""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# 全局配置实例
_config_loader = None
_config_path = os.getenv('PIBI_CONFIG', 'config.yml')

def get_config() -> ConfigLoader:
    """获取全局配置实例"""
    global _config_loader
    if _config_loader is None:
        _config_loader = ConfigLoader(_config_path)
    return _config_loader

def reload_config(config_file: str = None) -> ConfigLoader:
    """重新加载配置，可切换配置文件"""
    global _config_loader, _config_path
    if config_file:
        _config_path = config_file
    _config_loader = None
    return get_config()


def mu_grid_values(start: float = None, stop: float = None, points: int = None) -> List[float]:
    """按配置生成 μ 网格"""
    default_start, default_stop, default_points = get_config().get_mu_grid()
    start = default_start if start is None else start
    stop = default_stop if stop is None else stop
    points = default_points if points is None else points
    if points == 1:
        return [start]
    step = (stop - start) / (points - 1)
    return [start + i * step for i in range(points)]
