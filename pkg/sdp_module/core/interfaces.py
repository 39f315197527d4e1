"""
SDP Module Interfaces - 核心接口定义

定义锥规划问题的数据模型和求解后端的抽象接口。
问题统一写成关于向量 x 的形式：
    max  c·x
    s.t. A_eq x = b_eq
         A_ub x ≤ b_ub
         F_i(x) = Σ_k x_k F_ik + F_i0 ⪰ 0
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional
import time

import numpy as np


class SolveStatus(Enum):
    """求解状态枚举"""
    OPTIMAL = "optimal"
    OPTIMAL_INACCURATE = "optimal_inaccurate"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ERROR = "error"

    @property
    def is_solved(self) -> bool:
        return self in (SolveStatus.OPTIMAL, SolveStatus.OPTIMAL_INACCURATE)


@dataclass
class PSDBlock:
    """线性矩阵不等式块 F(x) = Σ_k x_k·coefficients[k] + constant ⪰ 0"""
    name: str
    coefficients: np.ndarray  # 形状 (n_vars, d, d)
    constant: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.coefficients.shape[1]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        value = np.tensordot(x, self.coefficients, axes=1)
        if self.constant is not None:
            value = value + self.constant
        return value


@dataclass
class ConicProblem:
    """线性目标 + 线性等式/不等式 + PSD 块"""
    n_vars: int
    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    blocks: List[PSDBlock] = field(default_factory=list)
    ub_matrix: Optional[np.ndarray] = None
    ub_rhs: Optional[np.ndarray] = None
    eq_names: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """问题规模摘要"""
        return {
            "n_vars": self.n_vars,
            "n_eq": int(self.eq_matrix.shape[0]),
            "n_ub": int(self.ub_matrix.shape[0]) if self.ub_matrix is not None else 0,
            "blocks": [{"name": b.name, "size": b.size} for b in self.blocks],
            "metadata": self.metadata,
        }


@dataclass
class SolveResult:
    """求解结果"""
    status: SolveStatus
    value: Optional[float]
    x: Optional[np.ndarray]
    eq_duals: Optional[np.ndarray]
    solver: str
    backend: str
    block_duals: List[np.ndarray] = field(default_factory=list)
    solve_time: float = 0.0
    timestamp: float = field(default_factory=time.time)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "value": self.value,
            "solver": self.solver,
            "backend": self.backend,
            "solve_time": self.solve_time,
            "metadata": self.metadata,
        }


class SDPBackend(ABC):
    """锥规划求解后端抽象基类

    后端之间可替换；实现不得在两次 solve 之间共享可变的问题状态。
    """

    def __init__(self, name: str, config: Dict[str, Any] = None):
        self.name = name
        self.config = config or {}
        self._initialized = False

    @abstractmethod
    def initialize(self) -> bool:
        """初始化后端

        Returns:
            bool: 初始化是否成功
        """
        pass

    @abstractmethod
    def is_available(self) -> bool:
        """检查后端是否至少有一个可用求解器"""
        pass

    @abstractmethod
    def available_solvers(self) -> List[str]:
        """按优先顺序返回可用求解器名称"""
        pass

    @abstractmethod
    def solve(self, problem: ConicProblem, accuracy: float = 1e-8, **kwargs) -> SolveResult:
        """求解锥规划

        Args:
            problem: 问题描述
            accuracy: 求解精度
            **kwargs: 其他求解器参数

        Returns:
            SolveResult: 求解结果（含等式约束对偶乘子）
        """
        pass

    def get_backend_info(self) -> Dict[str, Any]:
        """获取后端信息"""
        return {
            "name": self.name,
            "initialized": self._initialized,
            "available": self.is_available(),
            "solvers": self.available_solvers(),
            "config": self.config,
        }
