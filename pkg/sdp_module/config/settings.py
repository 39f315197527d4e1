"""
SDP Settings - 矩矩阵 SDP 的配置管理

提供求解配置的加载、保存和验证功能。环境变量 PIBI_SDP_ACCURACY 覆盖文件中的精度。
"""

import os
import json
import yaml
from dataclasses import dataclass, asdict, field
from typing import Dict, Any, List
import logging

logger = logging.getLogger(__name__)


@dataclass
class CvxpySolverConfig:
    """cvxpy 后端配置"""
    solvers: List[str] = field(default_factory=lambda: ["MOSEK", "CLARABEL", "SCS"])
    max_iters: int = 500
    verbose: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SDPSettings:
    """SDP 配置"""
    default_backend: str = "cvxpy"
    accuracy: float = 1e-8
    lambda_cap: float = 2.0
    vertex_tolerance: float = 1e-7
    log_level: str = "INFO"
    cvxpy: CvxpySolverConfig = None

    def __post_init__(self):
        if self.cvxpy is None:
            self.cvxpy = CvxpySolverConfig()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SDPSettings':
        cvxpy_data = data.get('cvxpy', {})
        cvxpy_config = CvxpySolverConfig(**cvxpy_data) if isinstance(cvxpy_data, dict) else CvxpySolverConfig()
        return cls(
            default_backend=data.get('default_backend', 'cvxpy'),
            accuracy=float(data.get('accuracy', 1e-8)),
            lambda_cap=float(data.get('lambda_cap', 2.0)),
            vertex_tolerance=float(data.get('vertex_tolerance', 1e-7)),
            log_level=data.get('log_level', 'INFO'),
            cvxpy=cvxpy_config,
        )

    def validate(self) -> bool:
        """验证配置有效性"""
        if not (0 < self.accuracy < 1e-3):
            logger.error(f"accuracy must be in (0, 1e-3), got {self.accuracy}")
            return False
        if self.lambda_cap <= 1:
            logger.error("lambda_cap must exceed 1 so that classical points stay inside")
            return False
        if self.vertex_tolerance <= 0:
            logger.error("vertex_tolerance must be positive")
            return False
        if self.log_level not in ['DEBUG', 'INFO', 'WARNING', 'ERROR']:
            logger.error(f"Invalid log_level: {self.log_level}")
            return False
        if not self.cvxpy.solvers:
            logger.error("cvxpy solver list cannot be empty")
            return False
        if self.cvxpy.max_iters < 1:
            logger.error("cvxpy max_iters must be greater than 0")
            return False
        return True


def _apply_env(settings: SDPSettings) -> SDPSettings:
    value = os.getenv('PIBI_SDP_ACCURACY')
    if value:
        try:
            settings.accuracy = float(value)
            logger.info(f"SDP accuracy overridden by environment: {settings.accuracy}")
        except ValueError:
            logger.warning(f"Ignoring invalid PIBI_SDP_ACCURACY={value!r}")
    return settings


def load_config(config_path: str = "sdp_config.yaml") -> SDPSettings:
    """加载配置文件

    Args:
        config_path: 配置文件路径（.yaml/.yml/.json）

    Returns:
        SDPSettings: 配置对象，文件缺失或无效时为默认值
    """
    try:
        if not os.path.exists(config_path):
            logger.info(f"Config file {config_path} not found, using default settings")
            return _apply_env(SDPSettings())

        _, ext = os.path.splitext(config_path)
        with open(config_path, 'r', encoding='utf-8') as f:
            if ext.lower() in ['.yaml', '.yml']:
                data = yaml.safe_load(f)
            elif ext.lower() == '.json':
                data = json.load(f)
            else:
                logger.error(f"Unsupported config file format: {ext}")
                return _apply_env(SDPSettings())

        if not data:
            logger.warning("Empty config file, using default settings")
            return _apply_env(SDPSettings())

        settings = _apply_env(SDPSettings.from_dict(data))
        if not settings.validate():
            logger.error("Invalid configuration, using default settings")
            return _apply_env(SDPSettings())

        logger.info(f"Successfully loaded configuration from {config_path}")
        return settings

    except Exception as e:
        logger.error(f"Error loading config file {config_path}: {e}")
        return _apply_env(SDPSettings())


def save_config(settings: SDPSettings, config_path: str = "sdp_config.yaml") -> bool:
    """保存配置文件"""
    try:
        if not settings.validate():
            logger.error("Invalid configuration, cannot save")
            return False

        data = settings.to_dict()
        _, ext = os.path.splitext(config_path)
        os.makedirs(os.path.dirname(config_path) if os.path.dirname(config_path) else '.', exist_ok=True)

        with open(config_path, 'w', encoding='utf-8') as f:
            if ext.lower() in ['.yaml', '.yml']:
                yaml.dump(data, f, default_flow_style=False, allow_unicode=True, indent=2)
            elif ext.lower() == '.json':
                json.dump(data, f, indent=2, ensure_ascii=False)
            else:
                logger.error(f"Unsupported config file format: {ext}")
                return False

        logger.info(f"Successfully saved configuration to {config_path}")
        return True

    except Exception as e:
        logger.error(f"Error saving config file {config_path}: {e}")
        return False


def create_default_config(config_path: str = "sdp_config.yaml") -> bool:
    """创建默认配置文件"""
    if os.path.exists(config_path):
        logger.info(f"Config file {config_path} already exists")
        return True
    return save_config(SDPSettings(), config_path)


_settings = None
_settings_path = os.getenv('PIBI_SDP_CONFIG', 'sdp_config.yaml')


def get_settings() -> SDPSettings:
    """获取全局 SDP 配置"""
    global _settings
    if _settings is None:
        _settings = load_config(_settings_path)
    return _settings


def reload_settings(config_path: str = None) -> SDPSettings:
    global _settings, _settings_path
    if config_path:
        _settings_path = config_path
    _settings = None
    return get_settings()
