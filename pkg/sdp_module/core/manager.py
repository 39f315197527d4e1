"""
SDP Manager - 求解后端管理器

统一管理锥规划后端，负责注册、默认选择与失败时抛出 SolverFailure。
"""

import logging
from typing import Any, Dict, List, Optional

from exceptions import SolverFailure, ValidationError
from .interfaces import ConicProblem, SDPBackend, SolveResult
from ..utils.validators import validate_accuracy, validate_problem

logger = logging.getLogger(__name__)


class SDPManager:
    """锥规划后端管理器"""

    def __init__(self, accuracy: float = 1e-8):
        self._backends: Dict[str, SDPBackend] = {}
        self._default_backend: Optional[str] = None
        self.accuracy = accuracy

    def register_backend(self, backend: SDPBackend, set_as_default: bool = False) -> bool:
        """注册求解后端

        Args:
            backend: 后端实例
            set_as_default: 是否设为默认后端

        Returns:
            bool: 注册是否成功
        """
        try:
            if not backend.initialize():
                logger.error(f"Failed to initialize SDP backend: {backend.name}")
                return False

            if not backend.is_available():
                logger.warning(f"SDP backend {backend.name} has no usable solver")
                return False

            self._backends[backend.name] = backend
            if set_as_default or self._default_backend is None:
                self._default_backend = backend.name

            logger.info(f"Registered SDP backend {backend.name} with solvers {backend.available_solvers()}")
            return True

        except Exception as e:
            logger.error(f"Error registering SDP backend {backend.name}: {e}")
            return False

    def get_backend(self, name: str = None) -> Optional[SDPBackend]:
        if name is None:
            name = self._default_backend
        if name is None:
            logger.error("No default SDP backend set and no backend name specified")
            return None
        return self._backends.get(name)

    def list_backends(self) -> List[Dict[str, Any]]:
        return [
            {**backend.get_backend_info(), "is_default": name == self._default_backend}
            for name, backend in self._backends.items()
        ]

    def solve(self, problem: ConicProblem, backend_name: str = None, **kwargs) -> SolveResult:
        """求解问题；后端缺失或未得到最优解时抛出 SolverFailure"""
        backend = self.get_backend(backend_name)
        if backend is None:
            raise SolverFailure("no SDP backend available", status="unavailable")

        issues = validate_problem(problem)
        if issues:
            raise ValidationError(f"malformed conic problem: {'; '.join(issues)}")
        accuracy = kwargs.pop("accuracy", self.accuracy)
        if not validate_accuracy(accuracy):
            raise ValidationError(f"solver accuracy must lie in (0, 1e-3), got {accuracy}")

        result = backend.solve(problem, accuracy=accuracy, **kwargs)
        if not result.status.is_solved:
            raise SolverFailure(f"{result.solver} returned {result.status.value}",
                                status=result.status.value, details=result.metadata)
        return result


_default_manager: Optional[SDPManager] = None


def get_manager() -> SDPManager:
    """按 SDP 配置构造并缓存默认管理器"""
    global _default_manager
    if _default_manager is None:
        from ..config.settings import get_settings
        from ..providers.cvxpy_backend import CvxpyBackend

        settings = get_settings()
        manager = SDPManager(accuracy=settings.accuracy)
        manager.register_backend(CvxpyBackend(**settings.cvxpy.to_dict()), set_as_default=True)
        _default_manager = manager
    return _default_manager


def reset_manager() -> None:
    global _default_manager
    _default_manager = None
