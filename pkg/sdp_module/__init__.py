"""
SDP Module - 锥规划求解适配层

为矩矩阵松弛提供可替换的求解后端。

主要组件:
- core: 问题数据模型、后端抽象接口和管理器
- providers: 后端实现（cvxpy）
- config: 求解配置
- utils: 日志、结果写出与校验

使用示例:
    from sdp_module import get_manager

    result = get_manager().solve(problem)
"""

from .core.manager import SDPManager, get_manager, reset_manager
from .core.interfaces import ConicProblem, PSDBlock, SDPBackend, SolveResult, SolveStatus
from .providers.cvxpy_backend import CvxpyBackend

__version__ = "1.0.0"

__all__ = [
    "SDPManager",
    "get_manager",
    "reset_manager",
    "ConicProblem",
    "PSDBlock",
    "SDPBackend",
    "SolveResult",
    "SolveStatus",
    "CvxpyBackend"
]
