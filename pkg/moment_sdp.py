#!/usr/bin/env python3
"""
矩矩阵半定松弛
判断关联量点是否属于经典集合凸包的外逼近；不属于时由对偶给出分离的 PIBI 证书。
约化坐标为 (S_0, S_1, Z)，N 作为常数；数值问题中 k 阶量除以 N^k 以改善条件数。
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy.linalg import block_diag
from scipy.optimize import minimize

from config_loader import get_config
from correlator_algebra import (CorrelatorVector, Partition, correlator_polynomials, eval_partition_correlators, labels_up_to,
                                partition_arrays)
from dicke_operators import Direction, directions_from_angles, golden_refine, state_moment_table
from exceptions import DegreeOverflow, InvalidCertificate, NoViolationFound, SolverFailure, ValidationError
from inequality_catalog import get_family
from oat_states import OATParams, correlator_point, optimize_angles, oat_vector, quasi_random_starts
from sdp_module import ConicProblem, PSDBlock, SolveResult, get_manager
from sdp_module.config.settings import get_settings

logger = logging.getLogger(__name__)

MAX_DEGREE = 7

S0, S1, Z = sympy.symbols("S_0 S_1 Z")
CORRELATOR_SYMBOLS: Dict[str, sympy.Symbol] = {label: sympy.Symbol(f"S_{label}") for label in labels_up_to(3)}

BASIS_LABELS: Tuple[str, ...] = ("", "0", "1", "00", "01", "11", "000", "001", "011", "111")
THIRD_ORDER_LABELS: Tuple[str, ...] = ("000", "001", "011", "111")
REFERENCE_CERTIFICATE = (1.0, -0.0055, -0.0141, 0.0046, 0.0099, 0.0051, -56.1412)


@dataclass(frozen=True, order=True)
class MomentMonomial:
    """S_0^p S_1^q Z^r"""
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise ValidationError(f"negative exponent in monomial {self.exponents}")
        if self.degree > MAX_DEGREE:
            raise DegreeOverflow(f"monomial {self.exponents} has degree {self.degree} > {MAX_DEGREE}")

    @property
    def exponents(self) -> Tuple[int, int, int]:
        return self.p, self.q, self.r

    @property
    def degree(self) -> int:
        return self.p + self.q + self.r

    def __mul__(self, other: "MomentMonomial") -> "MomentMonomial":
        return MomentMonomial(self.p + other.p, self.q + other.q, self.r + other.r)

    def value(self, s0: float, s1: float, z: float) -> float:
        return s0 ** self.p * s1 ** self.q * z ** self.r


ONE = MomentMonomial(0, 0, 0)


@dataclass(frozen=True)
class ReducedPolynomial:
    """约化坐标下的多项式，N 已代入为常数；不存零系数"""
    n_parties: int
    terms: Mapping[MomentMonomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {m: Fraction(c) for m, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    @classmethod
    def constant(cls, n_parties: int, value=1) -> "ReducedPolynomial":
        return cls(n_parties, {ONE: Fraction(value)})

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ReducedPolynomial") -> "ReducedPolynomial":
        merged = dict(self.terms)
        for m, c in other.terms.items():
            merged[m] = merged.get(m, Fraction(0)) + c
        return ReducedPolynomial(self.n_parties, merged)

    def __mul__(self, other: Union["ReducedPolynomial", int, Fraction]) -> "ReducedPolynomial":
        if not isinstance(other, ReducedPolynomial):
            return ReducedPolynomial(self.n_parties, {m: c * Fraction(other) for m, c in self.terms.items()})
        product: Dict[MomentMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                product[m] = product.get(m, Fraction(0)) + c1 * c2
        return ReducedPolynomial(self.n_parties, product)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedPolynomial):
            return NotImplemented
        return self.n_parties == other.n_parties and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n_parties, tuple(self.terms.items())))

    def to_expr(self) -> sympy.Expr:
        return sum((sympy.Rational(c.numerator, c.denominator) * S0 ** m.p * S1 ** m.q * Z ** m.r
                    for m, c in self.terms.items()), sympy.Integer(0))

    def evaluate(self, s0: float, s1: float, z: float) -> float:
        return float(sum(float(c) * m.value(s0, s1, z) for m, c in self.terms.items()))


def ideal_substitutions(n_parties: int) -> Dict[sympy.Symbol, sympy.Expr]:
    """经典集合上关联量关于 (S_0, S_1, Z) 的多项式表示"""
    n = sympy.Integer(n_parties)
    sym = CORRELATOR_SYMBOLS
    return {
        sym["00"]: S0 ** 2 - n,
        sym["01"]: S0 * S1 - Z,
        sym["11"]: S1 ** 2 - n,
        sym["000"]: S0 ** 3 + (2 - 3 * n) * S0,
        sym["001"]: S0 ** 2 * S1 + 2 * S1 - n * S1 - 2 * Z * S0,
        sym["011"]: S0 * S1 ** 2 + 2 * S0 - n * S0 - 2 * Z * S1,
        sym["111"]: S1 ** 3 + (2 - 3 * n) * S1,
    }


def reduce_mod_ideal(expr: Union[str, sympy.Expr, int, float], n_parties: int) -> ReducedPolynomial:
    """把关联量多项式代入约化坐标、展开并规范化"""
    if isinstance(expr, ReducedPolynomial):
        expr = expr.to_expr()
    if isinstance(expr, str):
        local = {f"S_{label}": s for label, s in CORRELATOR_SYMBOLS.items()}
        local["Z"] = Z
        expr = sympy.sympify(expr, locals=local)
    expr = sympy.nsimplify(sympy.sympify(expr), rational=True)
    allowed = set(CORRELATOR_SYMBOLS.values()) | {Z}
    unknown = expr.free_symbols - allowed
    if unknown:
        raise ValidationError(f"unknown symbols in expression: {sorted(str(s) for s in unknown)}")
    reduced = sympy.expand(expr.xreplace(ideal_substitutions(n_parties)))
    if reduced == 0:
        return ReducedPolynomial(n_parties, {})
    poly = sympy.Poly(reduced, S0, S1, Z, domain="QQ")
    terms = {}
    for (p, q, r), coeff in zip(poly.monoms(), poly.coeffs()):
        coeff = sympy.Rational(coeff)
        terms[MomentMonomial(p, q, r)] = Fraction(int(coeff.p), int(coeff.q))
    return ReducedPolynomial(n_parties, terms)


def _label_order(label: str) -> int:
    return len(label)


@dataclass
class MomentMatrixSpec:
    """一阶矩矩阵：Γ_0 = b·bᵀ，Γ_i = g_i·b·bᵀ (i=1..4)，全部约化到 (S_0, S_1, Z)"""
    n_parties: int
    basis: List[ReducedPolynomial]
    localizers: List[ReducedPolynomial]
    blocks: List[List[List[ReducedPolynomial]]]
    monomials: List[MomentMonomial]
    index: Dict[MomentMonomial, int]
    tensors: np.ndarray = field(repr=False, default=None)
    # 原点处的 λ*，首次求解前由 ensure_origin_inside 填入
    origin_lambda: Optional[float] = None

    @property
    def size(self) -> int:
        return len(self.blocks) * len(self.basis)

    @property
    def n_monomials(self) -> int:
        return len(self.monomials)

    def max_degree(self) -> int:
        return max(entry.degree for block in self.blocks for row in block for entry in row)

    def scale(self, block: int, row: int, col: int) -> int:
        """数值块中该元素除以的 N 的幂次"""
        return _label_order(BASIS_LABELS[row]) + _label_order(BASIS_LABELS[col]) + (1 if block > 0 else 0)

    def _build_tensors(self) -> np.ndarray:
        n = self.n_parties
        dim = len(self.basis)
        tensors = np.zeros((len(self.blocks), self.n_monomials, dim, dim))
        for b, block in enumerate(self.blocks):
            for i in range(dim):
                for j in range(dim):
                    shift = self.scale(b, i, j)
                    for mono, coeff in block[i][j].terms.items():
                        tensors[b, self.index[mono], i, j] = float(coeff * Fraction(n) ** mono.degree / Fraction(n) ** shift)
        return tensors

    def monomial_vector(self, s0: float, s1: float, z: float) -> np.ndarray:
        """缩放坐标下各单项式的取值 y_m"""
        n = self.n_parties
        return np.array([m.value(s0 / n, s1 / n, z / n) for m in self.monomials])

    def scaled_target(self, point: CorrelatorVector) -> Dict[str, float]:
        return {label: float(point[label]) / self.n_parties ** len(label) for label in BASIS_LABELS[1:]}


@lru_cache(maxsize=32)
def build_moment_spec(n_parties: int) -> MomentMatrixSpec:
    """构造 N 处的矩矩阵描述；同一单项式在所有块中共用一个 SDP 变量"""
    if n_parties < 2:
        raise ValidationError(f"moment SDP needs N >= 2, got {n_parties}")
    sym = CORRELATOR_SYMBOLS
    basis = [ReducedPolynomial.constant(n_parties)]
    basis += [reduce_mod_ideal(sym[label], n_parties) for label in BASIS_LABELS[1:]]
    n_expr = sym["0"] ** 2 - sym["00"]
    z_expr = sym["0"] * sym["1"] - sym["01"]
    localizers = [
        reduce_mod_ideal((n_expr + sign0 * sym["0"] + sign1 * sym["1"] + signz * z_expr) / 4, n_parties)
        for sign0, sign1, signz in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
    ]
    outer = [[basis[i] * basis[j] for j in range(len(basis))] for i in range(len(basis))]
    blocks = [outer] + [[[g * entry for entry in row] for row in outer] for g in localizers]
    monomials = sorted({m for block in blocks for row in block for entry in row for m in entry.terms} | {ONE})
    index = {m: i for i, m in enumerate(monomials)}
    spec = MomentMatrixSpec(n_parties, basis, localizers, blocks, monomials, index)
    spec.tensors = spec._build_tensors()
    spec.tensors.setflags(write=False)
    logger.info(f"Moment matrix spec N={n_parties}: {len(monomials)} monomials, "
                f"max degree {spec.max_degree()}, size {spec.size}x{spec.size}")
    return spec


def moment_matrix_at_vertex(spec: MomentMatrixSpec, partition: Partition) -> np.ndarray:
    """用顶点的实际单项式取值组装 50×50 块对角矩阵"""
    if partition.n_parties != spec.n_parties:
        raise ValidationError(f"partition has N={partition.n_parties}, spec has N={spec.n_parties}")
    y = spec.monomial_vector(partition.s0, partition.s1, partition.z)
    return block_diag(*[np.tensordot(y, spec.tensors[b], axes=1) for b in range(len(spec.blocks))])


def third_order_weights(alpha: float, beta: float) -> Dict[str, float]:
    """β³S_000 + 3αβ²S_001 + 3α²βS_011 + α³S_111 的权重"""
    return {"000": beta ** 3, "001": 3 * alpha * beta ** 2, "011": 3 * alpha ** 2 * beta, "111": alpha ** 3}


@dataclass
class MembershipResult:
    """成员判定 SDP 的结果"""
    n_parties: int
    lambda_star: float
    duals: Dict[str, float]
    point: CorrelatorVector
    solve: SolveResult
    constrained: bool = False
    alpha: Optional[float] = None
    beta: Optional[float] = None

    @property
    def is_member(self) -> bool:
        return self.lambda_star >= 1

    def to_dict(self) -> Dict[str, Any]:
        data = {"N": self.n_parties, "lambda_star": self.lambda_star, "constrained": self.constrained,
                "solver": self.solve.solver, "status": self.solve.status.value}
        if self.constrained:
            data.update({"alpha": self.alpha, "beta": self.beta})
        return data


def _row_names(constrained: bool) -> List[str]:
    labels = BASIS_LABELS[1:6] if constrained else BASIS_LABELS[1:]
    names = ["const"] + [f"S_{label}" for label in labels]
    return names + (["y3"] if constrained else [])


def _build_problem(spec: MomentMatrixSpec, point: CorrelatorVector, weights: Optional[Dict[str, float]],
                   lambda_cap: float, fixed_lambda: Optional[float] = None) -> ConicProblem:
    if point.n_parties != spec.n_parties:
        raise ValidationError(f"point has N={point.n_parties}, spec has N={spec.n_parties}")
    missing = [label for label in BASIS_LABELS[1:] if label not in point]
    if missing:
        raise ValidationError(f"point lacks correlators {missing}; the SDP needs K=3")
    n_mono = spec.n_monomials
    n_vars = n_mono + 1
    target = spec.scaled_target(point)
    first_row = {label: spec.tensors[0, :, 0, col] for col, label in enumerate(BASIS_LABELS) if col > 0}

    rows, rhs = [], []
    const_row = np.zeros(n_vars)
    const_row[spec.index[ONE]] = 1.0
    rows.append(const_row)
    rhs.append(1.0)
    individual = BASIS_LABELS[1:6] if weights is not None else BASIS_LABELS[1:]
    for label in individual:
        rows.append(np.concatenate([first_row[label], [-target[label]]]))
        rhs.append(0.0)
    if weights is not None:
        combined = sum(w * first_row[label] for label, w in weights.items())
        combined_target = sum(w * target[label] for label, w in weights.items())
        rows.append(np.concatenate([combined, [-combined_target]]))
        rhs.append(0.0)
    if fixed_lambda is not None:
        lam_row = np.zeros(n_vars)
        lam_row[-1] = 1.0
        rows.append(lam_row)
        rhs.append(fixed_lambda)

    blocks = []
    for b in range(len(spec.blocks)):
        coeffs = np.zeros((n_vars,) + spec.tensors[b].shape[1:])
        coeffs[:n_mono] = spec.tensors[b]
        blocks.append(PSDBlock(f"gamma_{b}", coeffs))

    objective = np.zeros(n_vars)
    if fixed_lambda is None:
        objective[-1] = 1.0
    ub = np.zeros((1, n_vars))
    ub[0, -1] = 1.0
    names = _row_names(weights is not None) + (["lambda"] if fixed_lambda is not None else [])
    return ConicProblem(
        n_vars=n_vars,
        objective=objective,
        eq_matrix=np.array(rows),
        eq_rhs=np.array(rhs),
        blocks=blocks,
        ub_matrix=ub,
        ub_rhs=np.array([lambda_cap]),
        eq_names=names,
        metadata={"N": spec.n_parties, "constrained": weights is not None},
    )


def _solve_raw(spec: MomentMatrixSpec, point: CorrelatorVector, weights: Optional[Dict[str, float]],
               accuracy: Optional[float]) -> Tuple[float, Dict[str, float], SolveResult]:
    settings = get_settings()
    problem = _build_problem(spec, point, weights, settings.lambda_cap)
    result = get_manager().solve(problem, accuracy=accuracy or settings.accuracy)
    lambda_star = float(result.x[-1])
    duals = {name: float(v) for name, v in zip(problem.eq_names, result.eq_duals)}
    return lambda_star, duals, result


def check_tensor_scaling(spec: MomentMatrixSpec, tolerance: float = 1e-9) -> None:
    """在全 +1 顶点上比对缩放后的首行与未缩放关联量 / N^k"""
    vertex = Partition(spec.n_parties, 0, 0, 0)
    first_row = moment_matrix_at_vertex(spec, vertex)[0, :len(BASIS_LABELS)]
    exact = eval_partition_correlators(vertex, 3)
    for col, label in enumerate(BASIS_LABELS):
        expected = 1.0 if col == 0 else float(exact[label]) / spec.n_parties ** len(label)
        if abs(first_row[col] - expected) > tolerance * max(1.0, abs(expected)):
            raise ValidationError(f"scaled moment tensor for S_{label or '1'} at N={spec.n_parties}: "
                                  f"{first_row[col]:.12g} != {expected:.12g}")


def ensure_origin_inside(spec: MomentMatrixSpec, accuracy: Optional[float] = None) -> float:
    """原点（全部关联量为零）必须在松弛内，λ* 应达到上界；每个 spec 只检查一次"""
    if spec.origin_lambda is not None:
        return spec.origin_lambda
    check_tensor_scaling(spec)
    cap = get_settings().lambda_cap
    origin = CorrelatorVector(spec.n_parties, 3, {label: 0 for label in labels_up_to(3)})
    lambda_star, _, result = _solve_raw(spec, origin, None, accuracy)
    if lambda_star < cap - 1e-4 * cap:
        raise SolverFailure(f"origin not inside the relaxation at N={spec.n_parties}: "
                            f"lambda*={lambda_star:.8f} < cap {cap}", status="origin_outside",
                            details={"solver": result.solver})
    logger.debug(f"origin check N={spec.n_parties}: lambda*={lambda_star:.8f}")
    spec.origin_lambda = lambda_star
    return lambda_star


def _solve_membership(spec: MomentMatrixSpec, point: CorrelatorVector, weights: Optional[Dict[str, float]],
                      accuracy: Optional[float]) -> Tuple[float, Dict[str, float], SolveResult]:
    ensure_origin_inside(spec, accuracy)
    return _solve_raw(spec, point, weights, accuracy)


def membership_sdp(spec: MomentMatrixSpec, point: CorrelatorVector,
                   accuracy: Optional[float] = None) -> MembershipResult:
    """max λ s.t. Γ̃ ⪰ 0, Γ̃_00 = 1, 首行 = λ·S*，λ ≤ cap"""
    lambda_star, duals, result = _solve_membership(spec, point, None, accuracy)
    logger.debug(f"membership N={spec.n_parties}: lambda*={lambda_star:.8f} via {result.solver}")
    return MembershipResult(spec.n_parties, lambda_star, duals, point, result)


def constrained_membership_sdp(spec: MomentMatrixSpec, point: CorrelatorVector, alpha: float, beta: float,
                               accuracy: Optional[float] = None) -> MembershipResult:
    """三阶首行约束合并为单个 y = λ(β³S*_000 + 3αβ²S*_001 + 3α²βS*_011 + α³S*_111)"""
    if abs(alpha ** 2 + beta ** 2 - 1) > 1e-9:
        raise ValidationError(f"alpha^2 + beta^2 must equal 1, got {alpha ** 2 + beta ** 2}")
    lambda_star, duals, result = _solve_membership(spec, point, third_order_weights(alpha, beta), accuracy)
    logger.debug(f"constrained membership N={spec.n_parties} alpha={alpha:.6f} beta={beta:.6f}: "
                 f"lambda*={lambda_star:.8f}")
    return MembershipResult(spec.n_parties, lambda_star, duals, point, result, True, alpha, beta)


def feasibility_sdp(spec: MomentMatrixSpec, point: CorrelatorVector, accuracy: Optional[float] = None) -> bool:
    """λ 固定为 1 的可行性问题：点是否在外逼近内"""
    ensure_origin_inside(spec, accuracy)
    settings = get_settings()
    problem = _build_problem(spec, point, None, settings.lambda_cap, fixed_lambda=1.0)
    backend = get_manager().get_backend()
    if backend is None:
        raise SolverFailure("no SDP backend available", status="unavailable")
    result = backend.solve(problem, accuracy=accuracy or settings.accuracy)
    if result.status.is_solved:
        return True
    if result.status.value == "infeasible":
        return False
    raise SolverFailure("feasibility problem could not be decided", status=result.status.value,
                        details=result.metadata)


@dataclass
class Certificate:
    """对偶证书：c_0 + Σ c_w S_w (+ c_y·三阶组合) ≥ 0，在分离点为负"""
    n_parties: int
    coefficients: Dict[str, float]
    lambda_star: float
    point: CorrelatorVector
    constrained: bool = False
    alpha: Optional[float] = None
    beta: Optional[float] = None
    solver: str = ""
    accuracy: float = 1e-8
    min_vertex_value: Optional[float] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def constant(self) -> float:
        return self.coefficients["const"]

    def vector(self) -> Tuple[float, ...]:
        """(c_0, c_1, …)：约束情形为 7 个分量，否则 10 个"""
        return tuple(self.coefficients[name] for name in _row_names(self.constrained))

    def expanded_coefficients(self) -> Dict[str, float]:
        """展开三阶组合项后的逐标签系数（不含常数项）"""
        out = {name[2:]: c for name, c in self.coefficients.items() if name.startswith("S_")}
        if self.constrained:
            for label, w in third_order_weights(self.alpha, self.beta).items():
                out[label] = out.get(label, 0.0) + self.coefficients["y3"] * w
        return out

    def evaluate(self, values: CorrelatorVector) -> float:
        return self.constant + sum(c * float(values[label]) for label, c in self.expanded_coefficients().items())

    def sum_one_normalization(self) -> Dict[str, float]:
        """α+β=1 的写法：α' = α/(α+β)，β' = β/(α+β)，组合系数乘 (α+β)³"""
        if not self.constrained:
            return {}
        total = self.alpha + self.beta
        return {"alpha": self.alpha / total, "beta": self.beta / total,
                "coefficient": self.coefficients["y3"] * total ** 3}

    def to_family(self, name: str = "I3sdp") -> Dict[str, Any]:
        """按不等式 JSON 格式输出（系数为 N 的零次多项式）"""
        expanded = self.expanded_coefficients()
        data: Dict[str, Any] = {
            "name": name,
            "K": 3,
            "coeffs": {label: [[0, expanded[label]]] for label in labels_up_to(3) if expanded.get(label, 0.0) != 0},
            "constant": [[0, self.constant]],
            "meta": {
                "N": self.n_parties,
                "lambda_star": self.lambda_star,
                "solver": self.solver,
                "accuracy": self.accuracy,
                "vertex_tolerance": get_settings().vertex_tolerance,
                "min_vertex_value": self.min_vertex_value,
                "point": self.point.to_dict(),
                "normalizations": {
                    "c0_one_combined": list(self.vector()),
                    "c0_one_expanded": {"const": self.constant, **expanded},
                },
                **self.meta,
            },
        }
        if self.constrained:
            data["combined_third_order"] = {"alpha": self.alpha, "beta": self.beta,
                                            "coefficient": self.coefficients["y3"]}
            data["meta"]["normalizations"]["alpha_plus_beta_one"] = self.sum_one_normalization()
        return data


def vertex_minimum(coefficients: Mapping[str, float], constant: float, n_parties: int) -> Tuple[float, Partition]:
    """线性泛函在全部划分上的最小值与取到最小值的划分"""
    a, b, c, d = partition_arrays(n_parties)
    values = correlator_polynomials(n_parties, (a + b - c - d).astype(float), (a - b + c - d).astype(float),
                                    (a - b - c + d).astype(float), 3)
    total = np.full(len(a), float(constant))
    for label, coeff in coefficients.items():
        total = total + coeff * values[label]
    idx = int(np.argmin(total))
    return float(total[idx]), Partition(int(a[idx]), int(b[idx]), int(c[idx]), int(d[idx]))


def _soft_compare(cert: Certificate) -> None:
    if not cert.constrained:
        return
    candidates = {"c0_one_combined": cert.vector()}
    sum_one = cert.sum_one_normalization()
    candidates["alpha_plus_beta_one"] = cert.vector()[:-1] + (sum_one["coefficient"],)
    for name, vec in candidates.items():
        deviation = max(abs(x - y) / max(abs(y), 1e-12) for x, y in zip(vec, REFERENCE_CERTIFICATE))
        signs = all(np.sign(x) == np.sign(y) for x, y in zip(vec, REFERENCE_CERTIFICATE))
        logger.info(f"certificate ({name}) vs reference vector: max relative deviation {deviation:.3g}, "
                    f"sign pattern {'matches' if signs else 'differs'}")
        if deviation > 0.05:
            logger.warning(f"certificate ({name}) deviates from the reference vector by {deviation:.3g}")


def extract_certificate(result: MembershipResult, tolerance: Optional[float] = None) -> Certificate:
    """读取首行（及组合 y）约束的对偶乘子，归一化 c_0 = 1 并在全部划分上验证"""
    if result.lambda_star >= 1:
        raise ValidationError(f"no separation: lambda* = {result.lambda_star:.8f} >= 1")
    tolerance = tolerance if tolerance is not None else get_settings().vertex_tolerance
    n = result.n_parties
    raw = dict(result.duals)
    coefficients = {"const": raw["const"]}
    for name, value in raw.items():
        if name.startswith("S_"):
            coefficients[name] = value / n ** len(name[2:])
    if result.constrained:
        coefficients["y3"] = raw["y3"] / n ** 3

    c0 = coefficients["const"]
    if abs(c0) < 1e-12:
        raise InvalidCertificate(c0, "constant term vanishes")
    sign = 1.0 if c0 > 0 else -1.0
    coefficients = {k: sign * v / abs(c0) for k, v in coefficients.items()}

    cert = Certificate(n, coefficients, result.lambda_star, result.point, result.constrained,
                       result.alpha, result.beta, result.solve.solver,
                       float(result.solve.metadata.get("accuracy", get_settings().accuracy)))
    at_point = cert.evaluate(result.point)
    if at_point >= 0:
        raise InvalidCertificate(at_point, "separated point")
    minimum, witness = vertex_minimum(cert.expanded_coefficients(), cert.constant, n)
    cert.min_vertex_value = minimum
    if minimum < -tolerance:
        raise InvalidCertificate(minimum, witness)
    logger.info(f"certificate N={n}: value at point {at_point:.6g}, vertex minimum {minimum:.3g}")
    _soft_compare(cert)
    return cert


def certify(spec: MomentMatrixSpec, point: CorrelatorVector, alpha: Optional[float] = None,
            beta: Optional[float] = None, accuracy: Optional[float] = None) -> Certificate:
    """求解并提取证书；验证失败时以 100 倍精度重解一次"""
    accuracy = accuracy or get_settings().accuracy
    for attempt in range(2):
        if alpha is None:
            result = membership_sdp(spec, point, accuracy)
        else:
            result = constrained_membership_sdp(spec, point, alpha, beta, accuracy)
        try:
            return extract_certificate(result)
        except InvalidCertificate as e:
            if attempt == 1:
                raise
            logger.warning(f"{e}; re-solving at accuracy {accuracy / 100:.1e}")
            accuracy = accuracy / 100


@dataclass
class AlphaBetaOptimum:
    alpha: float
    beta: float
    lambda_star: float
    grid: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.alpha / self.beta if self.beta else math.inf


def optimize_alpha_beta(spec: MomentMatrixSpec, point: CorrelatorVector, grid_points: Optional[int] = None,
                        tolerance: float = 1e-6) -> AlphaBetaOptimum:
    """(α, β) = (sin γ, cos γ)，γ ∈ [0, π) 网格扫描后黄金分割细化，最小化受限 λ*"""
    grid_points = grid_points or get_config().get_gamma_grid_points()
    ensure_origin_inside(spec)

    def objective(gamma: float) -> float:
        try:
            return constrained_membership_sdp(spec, point, math.sin(gamma), math.cos(gamma)).lambda_star
        except SolverFailure as e:
            logger.debug(f"gamma={gamma:.6f}: {e}")
            return get_settings().lambda_cap

    grid = np.linspace(0.0, math.pi, grid_points, endpoint=False)
    values = np.array([objective(g) for g in grid])
    gamma, lam = golden_refine(objective, grid, values, tolerance)
    logger.info(f"alpha/beta scan N={spec.n_parties}: gamma*={gamma:.6f}, "
                f"alpha/beta={math.tan(gamma):.6f}, lambda*={lam:.8f}")
    return AlphaBetaOptimum(math.sin(gamma), math.cos(gamma), lam,
                            [(float(g), float(v)) for g, v in zip(grid, values)])


@dataclass
class DirectionSearch:
    """方向搜索得到的最非局域点"""
    n_parties: int
    mu: float
    angles: Tuple[float, float, float, float]
    n: Direction
    m: Direction
    point: CorrelatorVector
    lambda_star: float

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.n_parties, "mu": self.mu, "angles": list(self.angles),
                "n": list(self.n.vector), "m": list(self.m.vector), "lambda_star": self.lambda_star,
                "point": self.point.to_dict()}


def optimize_directions(n_parties: int, mu: float, starts: Optional[int] = None, seed: Optional[int] = None,
                        refine: int = 2, max_evals: int = 150,
                        spec: Optional[MomentMatrixSpec] = None) -> DirectionSearch:
    """外层四角无导数搜索，内层 membership_sdp；起点为 I3 最优角加 Sobol 序列，取最好的若干个细化"""
    config = get_config()
    starts = starts or config.get_direction_starts()
    seed = config.get_angle_seed() if seed is None else seed
    spec = spec or build_moment_spec(n_parties)
    params = OATParams(n_parties, mu)
    table = state_moment_table(oat_vector(params).amplitudes, 3)
    ensure_origin_inside(spec)
    cap = get_settings().lambda_cap

    def point_at(angles) -> CorrelatorVector:
        n, m = directions_from_angles(angles)
        return correlator_point(params, n, m, 3, table)

    def objective(angles) -> float:
        try:
            return membership_sdp(spec, point_at(angles)).lambda_star
        except SolverFailure as e:
            logger.debug(f"angles {np.round(angles, 4)}: {e}")
            return cap

    seeded = optimize_angles(get_family("I3"), params, starts=starts, seed=seed)
    initial = [np.array(seeded.angles)] + list(quasi_random_starts(starts, seed))
    scored = sorted(((objective(x0), i) for i, x0 in enumerate(initial)))
    best_x, best_val = initial[scored[0][1]], scored[0][0]
    for _, i in scored[:refine]:
        result = minimize(objective, initial[i], method="Nelder-Mead",
                          options={"xatol": 1e-6, "fatol": 1e-8, "maxfev": max_evals})
        if result.fun < best_val:
            best_x, best_val = np.asarray(result.x), float(result.fun)
    logger.info(f"direction search N={n_parties} mu={mu:.4f}: lambda*={best_val:.8f}")
    if best_val >= 1 - 1e-6:
        raise NoViolationFound(f"no direction pair with lambda* < 1 at N={n_parties}, mu={mu}")
    n, m = directions_from_angles(best_x)
    return DirectionSearch(n_parties, mu, tuple(float(a) for a in best_x), n, m, point_at(best_x), best_val)
