#!/usr/bin/env python3
"""
异常定义
工具包中各模块抛出的异常类型，CLI 根据类型映射退出码
"""

from typing import Any, Dict, Optional


class PIBIError(Exception):
    """工具包异常基类"""


class ValidationError(PIBIError):
    """输入参数或目录文件校验失败"""


class MissingCorrelator(PIBIError):
    """关联量向量缺少不等式所需的标签"""

    def __init__(self, label: str, family: str = ""):
        self.label = label
        self.family = family
        where = f" (family {family})" if family else ""
        super().__init__(f"correlator S_{label} missing{where}")


class SizeLimit(PIBIError):
    """N 超过保护上限"""

    def __init__(self, n_parties: int, limit: int, what: str = ""):
        self.n_parties = n_parties
        self.limit = limit
        super().__init__(f"N={n_parties} exceeds limit {limit}{' for ' + what if what else ''}")


class DegreeOverflow(PIBIError):
    """约化后的多项式次数超过上限"""


class ConvergenceFailure(PIBIError):
    """本征值求解失败"""


class NonConvergence(PIBIError):
    """网格加密次数用尽仍未收敛"""


class DegenerateVariance(PIBIError):
    """方差过小，峰度无定义"""


class NoViolation(PIBIError):
    """纯态本身不违背不等式"""


class NoViolationFound(PIBIError):
    """搜索范围内没有找到 λ* < 1 的点"""


class SolverFailure(PIBIError):
    """锥规划求解失败，附带求解器状态"""

    def __init__(self, message: str, status: str = "unknown", details: Optional[Dict[str, Any]] = None):
        self.status = status
        self.details = details or {}
        super().__init__(f"{message} (status: {status})")


class InvalidCertificate(PIBIError):
    """对偶证书在某个经典顶点上为负"""

    def __init__(self, min_value: float, witness: Any):
        self.min_value = min_value
        self.witness = witness
        super().__init__(f"certificate violated on vertex {witness}: {min_value:.3e}")
