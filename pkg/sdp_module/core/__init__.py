"""
SDP Module Core - 核心组件

包含锥规划问题的数据模型、后端抽象接口和管理器。
"""

from .interfaces import ConicProblem, PSDBlock, SDPBackend, SolveResult, SolveStatus
from .manager import SDPManager, get_manager, reset_manager

__all__ = [
    "ConicProblem",
    "PSDBlock",
    "SDPBackend",
    "SolveResult",
    "SolveStatus",
    "SDPManager",
    "get_manager",
    "reset_manager"
]
