"""
SDP Helpers - 辅助工具函数

提供日志设置、结果文件写出和命令行范围解析。
"""

import csv
import json
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from exceptions import ValidationError


def setup_logging(level: str = "INFO",
                  format_string: str = None,
                  log_file: str = None) -> logging.Logger:
    """设置日志配置

    Args:
        level: 日志级别
        format_string: 日志格式字符串
        log_file: 日志文件路径（可选）

    Returns:
        logging.Logger: 配置好的根日志器
    """
    if format_string is None:
        format_string = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    log_level = getattr(logging, level.upper(), logging.INFO)

    logger = logging.getLogger()
    logger.setLevel(log_level)
    logger.handlers.clear()

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(format_string))
    logger.addHandler(console_handler)

    if log_file:
        try:
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(log_level)
            file_handler.setFormatter(logging.Formatter(format_string))
            logger.addHandler(file_handler)
        except Exception as e:
            logger.warning(f"Failed to setup file logging: {e}")

    # 求解器自身的日志过于冗长
    logging.getLogger('cvxpy').setLevel(max(log_level, logging.WARNING))
    return logger


def _to_builtin(value: Any) -> Any:
    """numpy / Fraction 等转换为 JSON 可序列化类型"""
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, (int, bool)):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return value


def write_json_result(path: str, payload: Dict[str, Any], run_config: Optional[Dict[str, Any]] = None) -> str:
    """写出 JSON 结果，run_config 嵌入为同名键"""
    data = dict(payload)
    if run_config is not None:
        data["run_config"] = run_config
    os.makedirs(os.path.dirname(path) if os.path.dirname(path) else '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(_to_builtin(data), f, indent=2, ensure_ascii=False, sort_keys=True)
    return path


def write_csv_result(path: str, rows: Iterable[Dict[str, Any]], columns: Sequence[str],
                     run_config: Optional[Dict[str, Any]] = None) -> str:
    """写出 CSV 结果，run_config 以 "# key: value" 注释行写在表头之前"""
    os.makedirs(os.path.dirname(path) if os.path.dirname(path) else '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for key, value in (run_config or {}).items():
            f.write(f"# {key}: {json.dumps(_to_builtin(value))}\n")
        writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow(_to_builtin(row))
    return path


def read_csv_result(path: str) -> List[Dict[str, str]]:
    """读取 write_csv_result 写出的文件，跳过注释行"""
    with open(path, 'r', encoding='utf-8') as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))


def parse_int_range(text: str) -> List[int]:
    """解析 "5..100"（闭区间）或 "2,3,5" 形式的整数列表"""
    text = str(text).strip()
    try:
        if ".." in text:
            start, stop = text.split("..", 1)
            start, stop = int(start), int(stop)
            if stop < start:
                raise ValidationError(f"empty range {text!r}")
            return list(range(start, stop + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValidationError(f"cannot parse integer range {text!r}") from e


def parse_float_range(text: str, points: int = None) -> List[float]:
    """解析 "0..0.6"（需配合点数）或 "0.1,0.2" 形式的实数列表"""
    text = str(text).strip()
    try:
        if ".." in text:
            start, stop = (float(x) for x in text.split("..", 1))
            if points is None or points < 1:
                raise ValidationError(f"range {text!r} needs a positive number of points")
            return [float(v) for v in np.linspace(start, stop, points)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValidationError(f"cannot parse real range {text!r}") from e
