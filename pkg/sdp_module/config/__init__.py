"""
SDP Config - 配置管理模块
"""

from .settings import (SDPSettings, CvxpySolverConfig, load_config, save_config, create_default_config,
                       get_settings, reload_settings)

__all__ = [
    "SDPSettings",
    "CvxpySolverConfig",
    "load_config",
    "save_config",
    "create_default_config",
    "get_settings",
    "reload_settings"
]
