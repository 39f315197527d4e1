#!/usr/bin/env python3
"""
置换不变关联量代数
在局域确定性策略（四元划分）上精确计算 PI 关联量，并穷举验证不等式族的经典界
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, perm
from numbers import Rational
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from exceptions import MissingCorrelator, ValidationError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, float]

LABELS_BY_ORDER: Dict[int, Tuple[str, ...]] = {
    1: ("0", "1"),
    2: ("00", "01", "11"),
    3: ("000", "001", "011", "111"),
    4: ("0000", "0001", "0011", "0111", "1111"),
}

# 每个划分元的 (设置0输出, 设置1输出)
STRATEGY_OUTCOMES = {"a": (1, 1), "b": (1, -1), "c": (-1, 1), "d": (-1, -1)}


def labels_up_to(order: int) -> List[str]:
    """按规范顺序列出阶数不超过 order 的全部标签"""
    if order not in (1, 2, 3, 4):
        raise ValidationError(f"order must be in 1..4, got {order}")
    return [label for k in range(1, order + 1) for label in LABELS_BY_ORDER[k]]


@dataclass(frozen=True)
class CorrelatorLabel:
    """关联量标签，字符按非降序存储（如 "010" 规范化为 "001"）"""
    word: str

    def __post_init__(self):
        raw = self.word[2:] if self.word.startswith("S_") else self.word
        if not raw or any(ch not in "01" for ch in raw):
            raise ValidationError(f"invalid correlator label: {self.word!r}")
        if len(raw) > 4:
            raise ValidationError(f"correlator order {len(raw)} exceeds 4: {self.word!r}")
        object.__setattr__(self, "word", "".join(sorted(raw)))

    @property
    def order(self) -> int:
        return len(self.word)

    @property
    def ones(self) -> int:
        """设置 1 出现的次数"""
        return self.word.count("1")

    def __str__(self) -> str:
        return self.word


def canonical_label(label: Union[str, CorrelatorLabel]) -> str:
    if isinstance(label, CorrelatorLabel):
        return label.word
    return CorrelatorLabel(label).word


@dataclass(frozen=True)
class Partition:
    """LDS 的四元划分 (a,b,c,d)"""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValidationError(f"partition entries must be non-negative: {self.as_tuple()}")

    @property
    def n_parties(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def s0(self) -> int:
        return self.a + self.b - self.c - self.d

    @property
    def s1(self) -> int:
        return self.a - self.b + self.c - self.d

    @property
    def z(self) -> int:
        return self.a - self.b - self.c + self.d

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c},{self.d})"


@dataclass(frozen=True)
class CorrelatorVector:
    """对称关联量空间中的点"""
    n_parties: int
    max_order: int
    values: Mapping[str, Number] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_parties < 1:
            raise ValidationError(f"n_parties must be positive, got {self.n_parties}")
        if self.max_order not in (1, 2, 3, 4):
            raise ValidationError(f"max_order must be in 1..4, got {self.max_order}")
        normalized = {canonical_label(k): v for k, v in self.values.items()}
        object.__setattr__(self, "values", normalized)

    def __getitem__(self, label: Union[str, CorrelatorLabel]) -> Number:
        return self.values[canonical_label(label)]

    def __contains__(self, label) -> bool:
        return canonical_label(label) in self.values

    def get(self, label, default=None):
        return self.values.get(canonical_label(label), default)

    @property
    def labels(self) -> List[str]:
        return labels_up_to(self.max_order)

    def as_array(self, labels: Optional[Sequence[str]] = None) -> np.ndarray:
        labels = labels if labels is not None else self.labels
        return np.array([float(self[label]) for label in labels])

    def is_exact(self) -> bool:
        return all(isinstance(v, Rational) for v in self.values.values())

    def __add__(self, other: "CorrelatorVector") -> "CorrelatorVector":
        if self.n_parties != other.n_parties:
            raise ValidationError("cannot add correlator vectors with different N")
        order = min(self.max_order, other.max_order)
        return CorrelatorVector(self.n_parties, order,
                                {k: self[k] + other[k] for k in labels_up_to(order)})

    def scaled(self, factor: Number) -> "CorrelatorVector":
        return CorrelatorVector(self.n_parties, self.max_order,
                                {k: v * factor for k, v in self.values.items()})

    def truncated(self, order: int) -> "CorrelatorVector":
        return CorrelatorVector(self.n_parties, order, {k: self[k] for k in labels_up_to(order)})

    def validate(self, tolerance: float = 1e-9) -> List[str]:
        """返回违反不变量的描述列表（空列表表示有效）"""
        problems = []
        expected = set(labels_up_to(self.max_order))
        if set(self.values) != expected:
            problems.append(f"labels {sorted(self.values)} != {sorted(expected)}")
        for label, value in self.values.items():
            bound = perm(self.n_parties, len(label))
            if abs(value) > bound + tolerance * max(1, bound):
                problems.append(f"|S_{label}|={abs(value)} exceeds tuple count {bound}")
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_parties": self.n_parties,
            "max_order": self.max_order,
            "values": {k: _jsonable(v) for k, v in self.values.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CorrelatorVector":
        return cls(
            n_parties=int(data["n_parties"]),
            max_order=int(data["max_order"]),
            values={k: _parse_number(v) for k, v in data["values"].items()},
        )


@dataclass(frozen=True)
class NPolynomial:
    """N 的多项式，系数为精确有理数，以 (幂次, 系数) 对存储"""
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    MAX_DEGREE = 2

    def __post_init__(self):
        merged: Dict[int, Fraction] = {}
        for power, coeff in self.terms:
            power = int(power)
            if power < 0:
                raise ValidationError(f"negative power {power} in polynomial")
            merged[power] = merged.get(power, Fraction(0)) + Fraction(coeff)
        cleaned = tuple(sorted((p, c) for p, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_coefficients(cls, *coeffs) -> "NPolynomial":
        """按升幂给出系数：from_coefficients(c0, c1, c2) = c0 + c1 N + c2 N²"""
        return cls(tuple((power, Fraction(c)) for power, c in enumerate(coeffs)))

    @property
    def degree(self) -> int:
        return max((p for p, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, n: int) -> Union[int, Fraction]:
        total = sum((c * n ** p for p, c in self.terms), Fraction(0))
        return int(total) if total.denominator == 1 else total

    def denominator(self) -> int:
        den = 1
        for _, c in self.terms:
            den = den * c.denominator // gcd(den, c.denominator)
        return den

    def to_json(self) -> List[List[Any]]:
        return [[p, _jsonable(c)] for p, c in self.terms]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[Any]]) -> "NPolynomial":
        terms = []
        for entry in data:
            if len(entry) != 2:
                raise ValidationError(f"polynomial term must be [power, coeff], got {entry!r}")
            power, coeff = entry
            if not isinstance(power, int) or isinstance(power, bool):
                raise ValidationError(f"polynomial power must be an integer, got {power!r}")
            terms.append((power, _parse_number(coeff, exact=True)))
        poly = cls(tuple(terms))
        if poly.degree > cls.MAX_DEGREE:
            raise ValidationError(f"polynomial degree {poly.degree} exceeds {cls.MAX_DEGREE}")
        return poly

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms:
            mono = "" if p == 0 else ("N" if p == 1 else f"N^{p}")
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)


@dataclass(frozen=True)
class InequalityFamily:
    """PIBI 族：constant(N) + Σ_w coeffs_w(N)·S_w ≥ 0"""
    name: str
    max_order: int
    coeffs: Mapping[str, NPolynomial]
    constant: NPolynomial
    n_min: int = 2
    description: str = ""

    def __post_init__(self):
        normalized = {canonical_label(k): v for k, v in self.coeffs.items()}
        object.__setattr__(self, "coeffs", normalized)

    def coefficients_at(self, n: int) -> Dict[str, Union[int, Fraction]]:
        """N 处的非零系数"""
        values = {label: poly(n) for label, poly in self.coeffs.items()}
        return {label: v for label, v in values.items() if v != 0}

    def constant_at(self, n: int) -> Union[int, Fraction]:
        return self.constant(n)

    @property
    def labels(self) -> List[str]:
        return [label for label in labels_up_to(self.max_order) if label in self.coeffs]

    def denominator(self) -> int:
        """所有系数分母的最小公倍数，用于整数化扫描"""
        den = self.constant.denominator()
        for poly in self.coeffs.values():
            d = poly.denominator()
            den = den * d // gcd(den, d)
        return int(den)

    def validate(self, n_check: int = 200) -> bool:
        """检查结构不变量：标签合法、次数 ≤ 2、常数项在 n_min..n_check 上为正"""
        try:
            if self.max_order not in (1, 2, 3, 4):
                logger.error(f"{self.name}: invalid max_order {self.max_order}")
                return False
            for label, poly in self.coeffs.items():
                if len(label) > self.max_order:
                    logger.error(f"{self.name}: label {label} exceeds order {self.max_order}")
                    return False
                if poly.degree > NPolynomial.MAX_DEGREE:
                    logger.error(f"{self.name}: coefficient of S_{label} has degree {poly.degree}")
                    return False
            if self.constant.degree > NPolynomial.MAX_DEGREE:
                logger.error(f"{self.name}: constant has degree {self.constant.degree}")
                return False
            for n in range(self.n_min, n_check + 1):
                if self.constant(n) <= 0:
                    logger.error(f"{self.name}: constant term not positive at N={n}")
                    return False
            return True
        except (ValidationError, KeyError, ValueError) as e:
            logger.error(f"Error validating family {self.name}: {e}")
            return False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "K": self.max_order,
            "coeffs": {label: self.coeffs[label].to_json() for label in self.labels},
            "constant": self.constant.to_json(),
            "meta": {"n_min": self.n_min, "description": self.description},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InequalityFamily":
        try:
            name = str(data["name"])
            order = int(data["K"])
            coeffs = {canonical_label(k): NPolynomial.from_json(v) for k, v in data["coeffs"].items()}
            constant = NPolynomial.from_json(data["constant"])
        except KeyError as e:
            raise ValidationError(f"inequality entry missing field {e}") from e
        meta = data.get("meta", {}) or {}
        family = cls(
            name=name,
            max_order=order,
            coeffs=coeffs,
            constant=constant,
            n_min=int(meta.get("n_min", 2)),
            description=str(meta.get("description", "")),
        )
        if not family.validate():
            raise ValidationError(f"inequality {name} failed validation")
        return family


def _parse_number(value: Any, exact: bool = False) -> Number:
    if isinstance(value, bool):
        raise ValidationError(f"boolean is not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as e:
            raise ValidationError(f"cannot parse number {value!r}") from e
    if isinstance(value, float):
        if exact:
            if not value.is_integer():
                raise ValidationError(f"non-integer coefficient {value!r}; write rationals as strings like \"1/2\"")
            return int(value)
        return value
    raise ValidationError(f"unsupported number {value!r}")


def _jsonable(value: Number) -> Union[int, float, str]:
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def correlator_polynomials(n, s0, s1, z, order: int) -> Dict[str, Any]:
    """以 (N, S_0, S_1, Z) 表示的关联量多项式

    参数可以是 int、numpy 数组或 sympy 符号，同一组公式供精确计算、
    向量化扫描和理想约化共用。
    """
    values = {"0": s0, "1": s1}
    if order >= 2:
        values["00"] = s0 ** 2 - n
        values["01"] = s0 * s1 - z
        values["11"] = s1 ** 2 - n
    if order >= 3:
        values["000"] = s0 ** 3 + 2 * s0 - 3 * n * s0
        values["001"] = s0 ** 2 * s1 + 2 * s1 - n * s1 - 2 * z * s0
        values["011"] = s0 * s1 ** 2 + 2 * s0 - n * s0 - 2 * z * s1
        values["111"] = s1 ** 3 + 2 * s1 - 3 * n * s1
    if order >= 4:
        values["0000"] = s0 ** 4 - 6 * n + 3 * n ** 2 - 6 * n * s0 ** 2 + 8 * s0 ** 2
        values["0001"] = (s0 ** 3 * s1 - 6 * z + 3 * n * z - 3 * n * s0 * s1
                          - 3 * z * s0 ** 2 + 8 * s0 * s1)
        values["0011"] = (s0 ** 2 * s1 ** 2 - 6 * n + n ** 2 + 2 * z ** 2 - n * s1 ** 2
                          - n * s0 ** 2 - 4 * z * s0 * s1 + 4 * s1 ** 2 + 4 * s0 ** 2)
        values["0111"] = (s1 ** 3 * s0 - 6 * z + 3 * n * z - 3 * n * s0 * s1
                          - 3 * z * s1 ** 2 + 8 * s0 * s1)
        values["1111"] = s1 ** 4 - 6 * n + 3 * n ** 2 - 6 * n * s1 ** 2 + 8 * s1 ** 2
    return values


def eval_partition_correlators(p: Partition, order: int) -> CorrelatorVector:
    """划分 p 对应的 LDS 类的精确整数关联量向量"""
    if order not in (1, 2, 3, 4):
        raise ValidationError(f"order must be in 1..4, got {order}")
    values = correlator_polynomials(p.n_parties, p.s0, p.s1, p.z, order)
    return CorrelatorVector(p.n_parties, order, values)


def brute_force_correlators(p: Partition, order: int) -> CorrelatorVector:
    """直接对所有有序互异指标元组求积和，作为小 N 的校验基准"""
    outcomes: List[Tuple[int, int]] = []
    for key, count in zip("abcd", p.as_tuple()):
        outcomes.extend([STRATEGY_OUTCOMES[key]] * count)
    n = len(outcomes)
    values: Dict[str, int] = {}
    for label in labels_up_to(order):
        total = 0
        for indices in itertools.permutations(range(n), len(label)):
            prod = 1
            for party, setting in zip(indices, label):
                prod *= outcomes[party][int(setting)]
            total += prod
        values[label] = total
    return CorrelatorVector(n, order, values)


def partition_iter(n: int) -> Iterator[Partition]:
    """按字典序流式生成 a+b+c+d=N 的全部划分"""
    for bars in itertools.combinations(range(n + 3), 3):
        yield Partition(bars[0], bars[1] - bars[0] - 1, bars[2] - bars[1] - 1, n + 2 - bars[2])


def partition_count(n: int) -> int:
    return comb(n + 3, 3)


@lru_cache(maxsize=8)
def partition_arrays(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """与 partition_iter 同序的 (a,b,c,d) int64 数组"""
    bars = np.array(list(itertools.combinations(range(n + 3), 3)), dtype=np.int64).reshape(-1, 3)
    a = bars[:, 0]
    b = bars[:, 1] - bars[:, 0] - 1
    c = bars[:, 2] - bars[:, 1] - 1
    d = n + 2 - bars[:, 2]
    for arr in (a, b, c, d):
        arr.setflags(write=False)
    return a, b, c, d


def partition_coordinates(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    a, b, c, d = partition_arrays(n)
    return a + b - c - d, a - b + c - d, a - b - c + d


def eval_inequality(f: InequalityFamily, v: CorrelatorVector) -> Number:
    """constant(N) + Σ_w coeffs_w(N)·v[w]；整数向量上为精确算术"""
    n = v.n_parties
    total: Number = f.constant_at(n)
    for label, coeff in f.coefficients_at(n).items():
        if label not in v:
            raise MissingCorrelator(label, f.name)
        total = total + coeff * v[label]
    if isinstance(total, Fraction) and total.denominator == 1:
        return int(total)
    return total


def i3_factored(p: Partition) -> int:
    """I3 在划分上的因式分解形式"""
    a, b, c, d = p.as_tuple()
    return 8 * (a - d) * (a - d - 1) * (3 * c + 2 * d + a - 2) + 48 * b * (c + d)


@dataclass
class BoundCheck:
    """单个 N 的经典界验证结果"""
    n_parties: int
    min_value: Union[int, Fraction]
    argmin: Partition
    partitions: int

    @property
    def passed(self) -> bool:
        return self.min_value >= 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.n_parties,
            "min_value": _jsonable(self.min_value),
            "argmin": list(self.argmin.as_tuple()),
            "partitions": self.partitions,
            "status": "PASS" if self.passed else "FAIL",
        }


@dataclass
class BoundReport:
    """不等式族在一组 N 上的经典界验证报告"""
    family: str
    checks: List[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def worst(self) -> Optional[BoundCheck]:
        return min(self.checks, key=lambda c: c.min_value, default=None)

    def to_dict(self) -> Dict[str, Any]:
        worst = self.worst
        return {
            "family": self.family,
            "status": "PASS" if self.passed else "FAIL",
            "min_value": _jsonable(worst.min_value) if worst else None,
            "argmin": list(worst.argmin.as_tuple()) if worst else None,
            "argmin_N": worst.n_parties if worst else None,
            "checks": [check.to_dict() for check in self.checks],
        }


# int64 安全上限，超过后退回 Python 大整数
_INT64_SAFE = 2 ** 62


def _integer_coefficients(f: InequalityFamily, n: int) -> Tuple[int, Dict[str, int], int]:
    den = f.denominator()
    const = int(f.constant_at(n) * den)
    coeffs = {label: int(c * den) for label, c in f.coefficients_at(n).items()}
    return const, coeffs, den


def evaluate_on_partitions(f: InequalityFamily, n: int) -> Tuple[np.ndarray, int]:
    """对 N 的全部划分计算 den·I，返回 (数组, den)

    数组元素是精确整数：幅值可能越界时使用 object 数组累加。
    """
    const, coeffs, den = _integer_coefficients(f, n)
    s0, s1, z = partition_coordinates(n)
    magnitude = abs(const) + sum(abs(c) * perm(n, len(label)) for label, c in coeffs.items())
    if magnitude >= _INT64_SAFE:
        logger.debug(f"{f.name} at N={n}: magnitude {magnitude} exceeds int64, using object arithmetic")
        s0, s1, z = (arr.astype(object) for arr in (s0, s1, z))
    correlators = correlator_polynomials(n, s0, s1, z, f.max_order)
    total = np.full(s0.shape, const, dtype=s0.dtype)
    for label, coeff in coeffs.items():
        total = total + coeff * correlators[label]
    return total, den


def check_bound_at(f: InequalityFamily, n: int) -> BoundCheck:
    values, den = evaluate_on_partitions(f, n)
    idx = int(np.argmin(values))
    a, b, c, d = (int(arr[idx]) for arr in partition_arrays(n))
    min_value = Fraction(int(values[idx]), den)
    min_value = int(min_value) if min_value.denominator == 1 else min_value
    return BoundCheck(n, min_value, Partition(a, b, c, d), len(values))


def verify_classical_bound(f: InequalityFamily, n_range: Iterable[int]) -> BoundReport:
    """在每个 N 上遍历全部 C(N+3,3) 个划分，给出最小值、取到最小值的划分和 PASS/FAIL"""
    report = BoundReport(family=f.name)
    for n in n_range:
        if n < 1:
            raise ValidationError(f"N must be positive, got {n}")
        check = check_bound_at(f, n)
        report.checks.append(check)
        if not check.passed:
            logger.warning(f"{f.name}: classical bound violated at N={n} by partition {check.argmin} "
                           f"(value {check.min_value})")
    logger.info(f"{f.name}: {'PASS' if report.passed else 'FAIL'} over {len(report.checks)} values of N")
    return report
