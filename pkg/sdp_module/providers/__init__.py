"""
SDP Providers - 求解后端实现
"""

from .cvxpy_backend import CvxpyBackend

__all__ = [
    "CvxpyBackend"
]
