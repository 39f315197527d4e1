"""
SDP Validators - 验证工具函数
"""

from typing import List

import numpy as np

from ..core.interfaces import ConicProblem

KNOWN_SOLVERS = {"MOSEK", "CLARABEL", "SCS", "CVXOPT", "SDPA", "COPT"}


def validate_accuracy(accuracy: float) -> bool:
    """精度必须为 (0, 1e-3) 内的实数"""
    return isinstance(accuracy, (int, float)) and 0 < accuracy < 1e-3


def validate_solver_names(solvers: List[str]) -> bool:
    if not solvers:
        return False
    return all(isinstance(s, str) and s.upper() in KNOWN_SOLVERS for s in solvers)


def validate_problem(problem: ConicProblem) -> List[str]:
    """检查问题维度与块对称性，返回问题描述列表（空表示有效）"""
    issues = []
    n = problem.n_vars
    if problem.objective.shape != (n,):
        issues.append(f"objective has shape {problem.objective.shape}, expected ({n},)")
    if problem.eq_matrix.ndim != 2 or problem.eq_matrix.shape[1] != n:
        issues.append(f"equality matrix has shape {problem.eq_matrix.shape}")
    elif problem.eq_matrix.shape[0] != len(problem.eq_rhs):
        issues.append("equality matrix and right-hand side disagree in length")
    if problem.ub_matrix is not None and problem.ub_matrix.shape[1] != n:
        issues.append(f"inequality matrix has shape {problem.ub_matrix.shape}")
    for block in problem.blocks:
        coeffs = block.coefficients
        if coeffs.ndim != 3 or coeffs.shape[0] != n or coeffs.shape[1] != coeffs.shape[2]:
            issues.append(f"block {block.name} has shape {coeffs.shape}")
            continue
        if not np.allclose(coeffs, np.transpose(coeffs, (0, 2, 1))):
            issues.append(f"block {block.name} is not symmetric")
    return issues
