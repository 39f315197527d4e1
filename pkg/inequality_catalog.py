#!/usr/bin/env python3
"""
内置不等式目录
I2、I3、十七个三阶族 I3^(1..17) 以及四阶 I4，并提供 JSON 读写
"""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Sequence

from correlator_algebra import InequalityFamily, NPolynomial
from exceptions import ValidationError

logger = logging.getLogger(__name__)

# 每项为 标签 -> (c0, c1, c2)，表示 c0 + c1·N + c2·N²
_HALF = Fraction(1, 2)

_THIRD_ORDER_FAMILIES: Dict[str, Dict[str, Sequence]] = {
    "I3_1": {"0": (24, -24), "00": (6, 3), "01": (12, -6), "11": (-6, 3),
             "000": (-2,), "001": (3,), "111": (-1,), "const": (0, -12, 12)},
    "I3_2": {"0": (4, -12), "1": (4, -4), "00": (6, 1), "01": (0, 2), "11": (-2, 1),
             "000": (-1,), "001": (-2,), "011": (-1,), "const": (0, 4, 4)},
    "I3_3": {"0": (0, -8), "1": (8, -8), "00": (2, 1), "01": (4, 2), "11": (-2, 1),
             "000": (-1,), "001": (-2,), "011": (-1,), "const": (0, 4, 4)},
    "I3_4": {"0": (8, -8), "1": (-8,), "00": (-2, 1), "01": (12, -2), "11": (-6, 1),
             "001": (-1,), "011": (2,), "111": (-1,), "const": (0, 4, 4)},
    "I3_5": {"0": (8, -8), "00": (2, 1), "01": (4, -2), "11": (-2, 1),
             "000": (-1,), "001": (2,), "011": (-1,), "const": (0, -4, 4)},
    "I3_6": {"0": (4, -4), "1": (4, -4), "00": (-2, 1), "01": (8, -2), "11": (-2, 1),
             "000": (-1,), "001": (2,), "011": (-1,), "const": (0, -4, 4)},
    "I3_7": {"0": (4, -4), "1": (4, -4), "00": (-2, 1), "01": (0, 2), "11": (-2, 1),
             "000": (-1,), "001": (-2,), "011": (-1,), "const": (0, -4, 4)},
    "I3_8": {"00": (-6, 1), "01": (4, -2), "11": (-2, 1),
             "000": (-1,), "001": (2,), "011": (-1,), "const": (0, -4, 4)},
    "I3_9": {"00": (-12, 3), "01": (0, -6), "11": (0, 3),
             "000": (-2,), "001": (3,), "111": (-1,), "const": (0, -12, 12)},
    "I3_10": {"0": (12, -12), "1": (28, -4), "00": (-2, 1), "01": (-16, 2), "11": (-10, 1),
              "001": (1,), "011": (2,), "111": (1,), "const": (0, 20, 4)},
    "I3_11": {"0": (12, -12), "1": (12, 12), "00": (-2, 1), "01": (-8, -2), "11": (6, 1),
              "001": (1,), "011": (-2,), "111": (1,), "const": (0, 20, 4)},
    "I3_12": {"0": (-8, 8), "1": (8, 16), "00": (-2, 1), "01": (4, 2), "11": (10, 1),
              "001": (1,), "011": (2,), "111": (1,), "const": (0, 20, 4)},
    "I3_13": {"0": (16, -16), "1": (56, -8), "00": (-2, 1), "01": (-20, 2), "11": (-14, 1),
              "001": (1,), "011": (2,), "111": (1,), "const": (0, 44, 4)},
    "I3_14": {"0": (16, -16), "1": (32, 16), "00": (-2, 1), "01": (-12, -2), "11": (10, 1),
              "001": (1,), "011": (-2,), "111": (1,), "const": (0, 44, 4)},
    "I3_15": {"0": (-12, 12), "1": (28, 20), "00": (-2, 1), "01": (8, 2), "11": (14, 1),
              "001": (1,), "011": (2,), "111": (1,), "const": (0, 44, 4)},
    "I3_16": {"0": (-44, 20), "00": (2, 2), "01": (16, -4), "11": (-8, 2),
              "000": (1,), "001": (-1,), "011": (-1,), "111": (1,), "const": (48, -34, 10)},
    "I3_17": {"0": (-72, 24), "1": (-72, 24), "00": (-10, 5), "01": (44, -10), "11": (-10, 5),
              "000": (2,), "001": (-1,), "011": (-4,), "111": (3,), "const": (192, -120, 24)},
}

_CORE_FAMILIES: Dict[str, Dict[str, Any]] = {
    "I2": {
        "K": 2,
        "terms": {"0": (-2,), "00": (_HALF,), "01": (-1,), "11": (_HALF,), "const": (0, 2)},
        "description": "two-body PIBI for spin-squeezed ensembles",
    },
    "I3": {
        "K": 3,
        "terms": {"0": (12, -12), "1": (12, -12), "00": (-6, 3), "01": (0, 6), "11": (-6, 3),
                  "000": (-2,), "001": (-3,), "111": (1,), "const": (0, -12, 12)},
        "description": "third-order PIBI with asymptotic relative violation -2*sqrt(3)/9",
    },
    "I4": {
        "K": 4,
        "terms": {"00": (-24, 24), "01": (-48, 48), "11": (-72, 24),
                  "0000": (1,), "0001": (4,), "0011": (6,), "0111": (4,), "1111": (1,),
                  "const": (0, -48, 48)},
        "description": "fourth-order PIBI involving two- and four-body correlators",
    },
}


def _family_from_terms(name: str, order: int, terms: Mapping[str, Sequence], description: str = "") -> InequalityFamily:
    coeffs = {label: NPolynomial.from_coefficients(*c) for label, c in terms.items() if label != "const"}
    return InequalityFamily(
        name=name,
        max_order=order,
        coeffs=coeffs,
        constant=NPolynomial.from_coefficients(*terms["const"]),
        n_min=2,
        description=description,
    )


def builtin_catalog() -> List[InequalityFamily]:
    """返回 I2、I3、I3^(1)…I3^(17)、I4 共 20 个族"""
    families = [
        _family_from_terms("I2", 2, _CORE_FAMILIES["I2"]["terms"], _CORE_FAMILIES["I2"]["description"]),
        _family_from_terms("I3", 3, _CORE_FAMILIES["I3"]["terms"], _CORE_FAMILIES["I3"]["description"]),
    ]
    for index, (name, terms) in enumerate(_THIRD_ORDER_FAMILIES.items(), start=1):
        families.append(_family_from_terms(name, 3, terms, f"third-order family number {index}"))
    families.append(_family_from_terms("I4", 4, _CORE_FAMILIES["I4"]["terms"], _CORE_FAMILIES["I4"]["description"]))
    return families


def catalog_by_name() -> Dict[str, InequalityFamily]:
    return {family.name: family for family in builtin_catalog()}


def get_family(name: str) -> InequalityFamily:
    """按名称取族，接受 "I3^(5)"、"I3(5)"、"I3_5" 等写法"""
    normalized = name.strip().replace("^", "").replace("(", "_").replace(")", "")
    families = catalog_by_name()
    if normalized not in families:
        raise ValidationError(f"unknown family {name!r}; known: {', '.join(families)}")
    return families[normalized]


def resolve_families(names: Iterable[str], extra: Iterable[InequalityFamily] = ()) -> List[InequalityFamily]:
    """解析族名列表，用户目录中的同名族优先"""
    user = {family.name: family for family in extra}
    resolved = []
    for name in names:
        name = name.strip()
        if not name:
            continue
        resolved.append(user[name] if name in user else get_family(name))
    return resolved


def catalog_to_json(families: Iterable[InequalityFamily]) -> List[Dict[str, Any]]:
    return [family.to_dict() for family in families]


def catalog_from_json(data: Any) -> List[InequalityFamily]:
    """解析目录 JSON：对象列表，或带 "families" 键的对象"""
    if isinstance(data, dict):
        data = data.get("families", [data] if "name" in data else None)
    if not isinstance(data, list):
        raise ValidationError("catalog JSON must be a list of inequality objects")
    return [InequalityFamily.from_dict(entry) for entry in data]


def dump_catalog(families: Iterable[InequalityFamily], path: str) -> None:
    families = list(families)
    os.makedirs(os.path.dirname(path) if os.path.dirname(path) else '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump({"families": catalog_to_json(families)}, f, indent=2, ensure_ascii=False, sort_keys=True)
    logger.info(f"Saved {len(families)} inequality families to {path}")


def load_catalog(path: str) -> List[InequalityFamily]:
    if not os.path.exists(path):
        raise ValidationError(f"catalog file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"catalog file {path} is not valid JSON: {e}") from e
    families = catalog_from_json(data)
    logger.info(f"Loaded {len(families)} inequality families from {path}")
    return families
