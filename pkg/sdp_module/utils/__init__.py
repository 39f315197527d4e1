"""
SDP Utils - 工具函数模块
"""

from .helpers import (setup_logging, write_json_result, write_csv_result, read_csv_result,
                      parse_int_range, parse_float_range)
from .validators import validate_accuracy, validate_solver_names, validate_problem

__all__ = [
    "setup_logging",
    "write_json_result",
    "write_csv_result",
    "read_csv_result",
    "parse_int_range",
    "parse_float_range",
    "validate_accuracy",
    "validate_solver_names",
    "validate_problem"
]
