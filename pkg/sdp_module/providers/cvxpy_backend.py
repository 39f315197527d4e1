"""
Cvxpy Backend - 基于 cvxpy 的锥规划后端

按优先级依次尝试已安装的求解器（默认 MOSEK、CLARABEL、SCS），
每次 solve 都构造新的 cvxpy.Problem。
"""

import logging
import time
from typing import Any, Dict, List, Optional

import cvxpy as cp
import numpy as np
from scipy import sparse

from ..core.interfaces import ConicProblem, SDPBackend, SolveResult, SolveStatus
from ..utils.validators import validate_solver_names

logger = logging.getLogger(__name__)

DEFAULT_SOLVERS = ["MOSEK", "CLARABEL", "SCS"]

_STATUS_MAP = {
    cp.OPTIMAL: SolveStatus.OPTIMAL,
    cp.OPTIMAL_INACCURATE: SolveStatus.OPTIMAL_INACCURATE,
    cp.INFEASIBLE: SolveStatus.INFEASIBLE,
    cp.INFEASIBLE_INACCURATE: SolveStatus.INFEASIBLE,
    cp.UNBOUNDED: SolveStatus.UNBOUNDED,
    cp.UNBOUNDED_INACCURATE: SolveStatus.UNBOUNDED,
}


def solver_options(solver: str, accuracy: float, max_iters: int) -> Dict[str, Any]:
    """各求解器的精度参数"""
    if solver == "MOSEK":
        return {"mosek_params": {
            "MSK_DPAR_INTPNT_CO_TOL_REL_GAP": accuracy,
            "MSK_DPAR_INTPNT_CO_TOL_PFEAS": accuracy,
            "MSK_DPAR_INTPNT_CO_TOL_DFEAS": accuracy,
        }}
    if solver == "CLARABEL":
        return {"tol_gap_abs": accuracy, "tol_gap_rel": accuracy, "tol_feas": accuracy, "max_iter": max_iters}
    if solver == "SCS":
        return {"eps_abs": accuracy, "eps_rel": accuracy, "max_iters": max_iters * 100}
    return {}


class CvxpyBackend(SDPBackend):
    """cvxpy 锥规划后端"""

    def __init__(self, solvers: Optional[List[str]] = None, max_iters: int = 500, verbose: bool = False, **kwargs):
        super().__init__("cvxpy", {"solvers": solvers or DEFAULT_SOLVERS, "max_iters": max_iters,
                                   "verbose": verbose, **kwargs})
        self.preferred = [s.upper() for s in (solvers or DEFAULT_SOLVERS)]
        self.max_iters = max_iters
        self.verbose = verbose
        self._installed: List[str] = []

    def initialize(self) -> bool:
        try:
            self._installed = list(cp.installed_solvers())
            if not validate_solver_names(self.preferred):
                logger.warning(f"Unrecognized names in solver preference list: {self.preferred}")
            self._initialized = True
            logger.info(f"cvxpy {cp.__version__} backend initialized, solvers: {self.available_solvers()}")
            return True
        except Exception as e:
            logger.error(f"Failed to initialize cvxpy backend: {e}")
            return False

    def is_available(self) -> bool:
        return bool(self.available_solvers())

    def available_solvers(self) -> List[str]:
        return [s for s in self.preferred if s in self._installed]

    def _build(self, problem: ConicProblem):
        x = cp.Variable(problem.n_vars)
        eq = problem.eq_matrix @ x == problem.eq_rhs
        constraints = [eq]
        if problem.ub_matrix is not None:
            constraints.append(problem.ub_matrix @ x <= problem.ub_rhs)
        psd_constraints = []
        for block in problem.blocks:
            d = block.size
            flat = sparse.csr_matrix(block.coefficients.reshape(problem.n_vars, d * d).T)
            expr = cp.reshape(flat @ x, (d, d), order="C")
            if block.constant is not None:
                expr = expr + block.constant
            gram = cp.Variable((d, d), symmetric=True)
            constraints.append(gram == expr)
            psd = gram >> 0
            psd_constraints.append(psd)
            constraints.append(psd)
        objective = cp.Maximize(problem.objective @ x)
        return cp.Problem(objective, constraints), x, eq, psd_constraints

    def solve(self, problem: ConicProblem, accuracy: float = 1e-8, **kwargs) -> SolveResult:
        """依次尝试可用求解器，返回第一个最优结果；全部失败时返回最后的状态"""
        solvers = kwargs.pop("solvers", None) or self.available_solvers()
        last = SolveResult(SolveStatus.ERROR, None, None, None, solver="none", backend=self.name)
        for solver in solvers:
            cvx_problem, x, eq, psd_constraints = self._build(problem)
            start = time.time()
            try:
                cvx_problem.solve(solver=solver, verbose=self.verbose,
                                  **solver_options(solver, accuracy, self.max_iters), **kwargs)
            except (cp.error.SolverError, ValueError) as e:
                logger.warning(f"Solver {solver} failed: {e}")
                last = SolveResult(SolveStatus.ERROR, None, None, None, solver=solver, backend=self.name,
                                   metadata={"error": str(e)})
                continue
            status = _STATUS_MAP.get(cvx_problem.status, SolveStatus.ERROR)
            elapsed = time.time() - start
            logger.debug(f"{solver}: status={cvx_problem.status}, value={cvx_problem.value}, time={elapsed:.2f}s")
            if not status.is_solved:
                logger.warning(f"Solver {solver} returned status {cvx_problem.status}")
                last = SolveResult(status, None, None, None, solver=solver, backend=self.name,
                                   solve_time=elapsed, metadata={"raw_status": cvx_problem.status})
                continue
            if status is SolveStatus.OPTIMAL_INACCURATE:
                logger.warning(f"Solver {solver} reports an inaccurate optimum")
            return SolveResult(
                status=status,
                value=float(cvx_problem.value),
                x=np.asarray(x.value, dtype=float),
                eq_duals=np.atleast_1d(np.asarray(eq.dual_value, dtype=float)),
                solver=solver,
                backend=self.name,
                block_duals=[np.asarray(c.dual_value) for c in psd_constraints],
                solve_time=elapsed,
                metadata={"accuracy": accuracy, "raw_status": cvx_problem.status},
            )
        return last
