#!/usr/bin/env python3
"""
单轴扭曲（OAT）态
闭式集体自旋矩、任意方向对下的关联量、四角 Bell 值优化与白噪声鲁棒性
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln
from scipy.stats import qmc

from config_loader import get_config
from correlator_algebra import CorrelatorVector, InequalityFamily, labels_up_to
from dicke_operators import (DickeSpace, Direction, correlator_traces, correlators_from_moment_table,
                             correlators_to_moments, directions_from_angles, expectation_correlators,
                             moments_to_correlators, state_moment_table)
from exceptions import NoViolation, ValidationError

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class OATParams:
    """OAT 态参数：N、相互作用强度 μ = 2χt、纯度 η"""
    n_parties: int
    mu: float
    eta: float = 1.0

    def __post_init__(self):
        if self.n_parties < 1:
            raise ValidationError(f"n_parties must be positive, got {self.n_parties}")
        if not 0 <= self.mu < TWO_PI:
            raise ValidationError(f"mu must lie in [0, 2π), got {self.mu}")
        if not 0 <= self.eta <= 1:
            raise ValidationError(f"eta must lie in [0, 1], got {self.eta}")

    def with_eta(self, eta: float) -> "OATParams":
        return OATParams(self.n_parties, self.mu, eta)

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.n_parties, "mu": self.mu, "eta": self.eta}


@dataclass
class SymState:
    """对称子空间中的纯态，Dicke 基振幅"""
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > 1e-12:
            raise ValidationError(f"state is not normalized (norm {norm})")

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    @property
    def n_parties(self) -> int:
        return len(self.amplitudes) - 1

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def oat_vector(params: OATParams) -> SymState:
    """2^{-N/2} √C(N,k) exp(-i(N/2-k)² μ/2)，二项式在对数空间计算"""
    n = params.n_parties
    k = np.arange(n + 1)
    log_mag = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)) - 0.5 * n * math.log(2)
    phase = -0.5 * params.mu * (n / 2 - k) ** 2
    amplitudes = np.exp(log_mag) * np.exp(1j * phase)
    return SymState(amplitudes / np.linalg.norm(amplitudes))


def _cpow(x: float, e: int) -> float:
    if x == 0 and e < 0:
        return math.inf
    return x ** e


def closed_form_moment(params: OATParams, direction: Direction, order: int) -> float:
    """纯 OAT 态上 ⟨S_u^order⟩ 的闭式表达式，S = N/2"""
    if order not in (1, 2, 3, 4):
        raise ValidationError(f"closed forms exist for orders 1..4, got {order}")
    s = params.n_parties / 2
    two_s = params.n_parties
    mu = params.mu
    ux, uy, uz = direction.vector
    perp = ux ** 2 + uy ** 2
    c_half, c_one, c_three_half, c_two = (math.cos(mu / 2), math.cos(mu), math.cos(1.5 * mu), math.cos(2 * mu))
    s_half, s_one, s_three_half = math.sin(mu / 2), math.sin(mu), math.sin(1.5 * mu)

    if order == 1:
        return s * ux * _cpow(c_half, two_s - 1)

    if order == 2:
        return s / 4 * ((1 + 2 * s) * perp + 2 * uz ** 2
                        + (2 * s - 1) * ((ux ** 2 - uy ** 2) * _cpow(c_one, two_s - 2)
                                         + 4 * uy * uz * _cpow(c_half, two_s - 2) * s_half))

    if order == 3:
        first = ux * _cpow(c_half, two_s - 3) * (
            (1 - 3 * s + 6 * s ** 2) * perp
            - 4 * (2 + 3 * (s - 2) * s) * uz ** 2
            + 2 * ((3 * s - 1) * perp + 2 * (1 + 3 * (s - 1) * s) * uz ** 2) * c_one)
        second = (s - 1) * (2 * s - 1) * ux * (ux ** 2 - 3 * uy ** 2) * _cpow(c_three_half, two_s - 3)
        third = 12 * (s - 1) * (2 * s - 1) * ux * uy * uz * _cpow(c_one, two_s - 3) * s_one
        return s / 8 * (first + second + third)

    base = ((-1 + s + 12 * s ** 2 + 12 * s ** 3) * perp ** 2
            + 8 * s * (6 * s - 1) * perp * uz ** 2
            + 8 * (3 * s - 1) * uz ** 4)
    t1 = (s - 1) * (2 * s - 3) * (ux ** 4 - 6 * ux ** 2 * uy ** 2 + uy ** 4) * _cpow(c_two, two_s - 4)
    t2 = 4 * (ux ** 2 - uy ** 2) * _cpow(c_one, two_s - 4) * (
        perp * (1 - 2 * s + 2 * s ** 2) + uz ** 2 * (-11 + 18 * s - 6 * s ** 2)
        + math.cos(2 * mu) * (perp * (3 * s - 2) + uz ** 2 * (7 - 12 * s + 6 * s ** 2)))
    t3 = -8 * (s - 1) * (2 * s - 3) * uy * (uy ** 2 - 3 * ux ** 2) * uz * _cpow(c_three_half, two_s - 4) * s_three_half
    t4 = 8 * uy * uz * _cpow(c_half, two_s - 4) * (
        s_half * (perp * (7 - 12 * s + 6 * s ** 2) + uz ** 2 * (-11 + 18 * s - 6 * s ** 2))
        + s_three_half * (perp * (3 * s - 2) + uz ** 2 * (1 - 2 * s + 2 * s ** 2)))
    return s / 32 * (base + (2 * s - 1) * (t1 + t2 + t3 + t4))


def _pure_label_values(params: OATParams, direction: Direction, setting: str, order: int) -> Dict[str, float]:
    moments = {k: closed_form_moment(params, direction, k) for k in range(1, order + 1)}
    return {setting * len(label): value
            for label, value in moments_to_correlators(params.n_parties, moments).items()}


def _same_direction(n: Direction, m: Direction) -> bool:
    return n.vector == m.vector


def _mix(pure: CorrelatorVector, traces: Mapping[str, float], eta: float) -> CorrelatorVector:
    if eta == 1:
        return pure
    dim = pure.n_parties + 1
    values = {label: eta * v + (1 - eta) * traces[label] / dim for label, v in pure.values.items()}
    return CorrelatorVector(pure.n_parties, pure.max_order, values)


def correlator_point(params: OATParams, n: Direction, m: Direction, order: int = 3,
                     table: Optional[Dict[int, np.ndarray]] = None) -> CorrelatorVector:
    """OAT 态在 (n, m) 方向下的关联量向量

    单方向标签用闭式矩反演得到；混合标签用 Dicke 基正规序矩。
    n = m 时混合标签直接等于同阶单方向标签。η < 1 时按迹与白噪声混合。
    """
    if not 1 <= order <= 4:
        raise ValidationError(f"correlator order must be 1..4, got {order}")
    big_n = params.n_parties
    values = _pure_label_values(params, n, "0", order)
    values.update(_pure_label_values(params, m, "1", order))
    if _same_direction(n, m):
        for label in labels_up_to(order):
            values.setdefault(label, values["0" * len(label)])
    else:
        if table is None:
            table = state_moment_table(oat_vector(params).amplitudes, order)
        mixed = correlators_from_moment_table(table, big_n, n, m, order)
        for label in labels_up_to(order):
            values.setdefault(label, mixed[label])
    pure = CorrelatorVector(big_n, order, {label: values[label] for label in labels_up_to(order)})
    if params.eta == 1:
        return pure
    return _mix(pure, correlator_traces(DickeSpace(big_n), n, m, order), params.eta)


def state_correlators(state: Union[SymState, np.ndarray], n: Direction, m: Direction, order: int) -> CorrelatorVector:
    """任意对称纯态或密度矩阵的关联量向量"""
    return expectation_correlators(np.asarray(state), n, m, order)


@dataclass
class BellFunctional:
    """固定 N 的线性泛函 constant + Σ coeffs[label]·S_label"""
    name: str
    max_order: int
    constant: float
    coeffs: Dict[str, float]

    @classmethod
    def from_family(cls, f: InequalityFamily, n_parties: int) -> "BellFunctional":
        if n_parties < f.n_min:
            raise ValidationError(f"{f.name} requires N >= {f.n_min}, got {n_parties}")
        return cls(f.name, f.max_order, float(f.constant_at(n_parties)),
                   {label: float(c) for label, c in f.coefficients_at(n_parties).items()})

    def evaluate(self, values: CorrelatorVector) -> float:
        return self.constant + sum(c * values[label] for label, c in self.coeffs.items())


FamilyLike = Union[InequalityFamily, BellFunctional]


def _functional(f: FamilyLike, n_parties: int) -> BellFunctional:
    return f if isinstance(f, BellFunctional) else BellFunctional.from_family(f, n_parties)


class _OATEvaluator:
    """固定 (N, μ) 时缓存态与正规序矩，供多次角度评估"""

    def __init__(self, functional: BellFunctional, params: OATParams):
        self.functional = functional
        self.params = params
        self.space = DickeSpace(params.n_parties)
        self.table = state_moment_table(oat_vector(params).amplitudes, functional.max_order)

    def values(self, angles: Sequence[float], eta: float) -> Tuple[float, float]:
        """返回 (纯态值, 最大混态值)；ρ(η) 的值为二者的凸组合"""
        n, m = directions_from_angles(angles)
        order = self.functional.max_order
        pure = correlator_point(self.params.with_eta(1.0), n, m, order, self.table)
        pure_value = self.functional.evaluate(pure)
        if eta == 1:
            return pure_value, pure_value
        traces = correlator_traces(self.space, n, m, order)
        mixed_value = self.functional.constant + sum(c * traces[label] / self.space.dim
                                                     for label, c in self.functional.coeffs.items())
        return pure_value, mixed_value

    def value(self, angles: Sequence[float], eta: float) -> float:
        pure_value, mixed_value = self.values(angles, eta)
        return eta * pure_value + (1 - eta) * mixed_value


def bell_value(f: FamilyLike, params: OATParams, angles: Sequence[float]) -> float:
    """⟨ρ(η,μ), Î(φ0,θ0,φ1,θ1)⟩，ρ = η|Φ⟩⟨Φ| + (1-η)·Id/(N+1)"""
    if len(angles) != 4:
        raise ValidationError(f"bell_value needs four angles, got {len(angles)}")
    evaluator = _OATEvaluator(_functional(f, params.n_parties), params)
    return evaluator.value(angles, params.eta)


@dataclass
class AngleOptimum:
    """四角优化结果"""
    family: str
    params: OATParams
    angles: Tuple[float, float, float, float]
    value: float
    ratio: float
    starts: int = 0

    def directions(self) -> Tuple[Direction, Direction]:
        return directions_from_angles(self.angles)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, **self.params.to_dict(), "angles": list(self.angles),
                "value": self.value, "ratio": self.ratio}


def quasi_random_starts(count: int, seed: int) -> np.ndarray:
    """Sobol 序列给出的 (φ0,θ0,φ1,θ1) 起点，确定性"""
    sampler = qmc.Sobol(d=4, scramble=True, seed=seed)
    points = sampler.random_base2(max(1, math.ceil(math.log2(max(count, 2)))))[:count]
    return qmc.scale(points, [0, 0, 0, 0], [TWO_PI, math.pi, TWO_PI, math.pi])


def _optimize(evaluator: _OATEvaluator, eta: float, starts: np.ndarray, tolerance: float) -> Tuple[np.ndarray, float]:
    constant = evaluator.functional.constant

    def objective(x):
        return evaluator.value(x, eta) / constant

    best_x, best_ratio = None, math.inf
    for x0 in starts:
        result = minimize(objective, x0, method="Nelder-Mead",
                          options={"xatol": 1e-8, "fatol": tolerance, "maxiter": 4000, "maxfev": 8000})
        if result.fun < best_ratio:
            best_x, best_ratio = np.asarray(result.x), float(result.fun)
    return best_x, best_ratio


def optimize_angles(f: FamilyLike, params: OATParams, starts: Optional[int] = None, seed: Optional[int] = None,
                    tolerance: Optional[float] = None,
                    extra_starts: Iterable[Sequence[float]] = ()) -> AngleOptimum:
    """多起点 Nelder–Mead 最小化 bell_value；起点为 Sobol 序列加上 n=m=x 与给定的额外起点"""
    config = get_config()
    starts = starts or config.get_angle_starts()
    seed = config.get_angle_seed() if seed is None else seed
    tolerance = tolerance or config.get_angle_tolerance()
    functional = _functional(f, params.n_parties)
    evaluator = _OATEvaluator(functional, params)
    initial = [np.array(x, dtype=float) for x in extra_starts]
    initial.append(np.array([0.0, math.pi / 2, 0.0, math.pi / 2]))
    initial.extend(quasi_random_starts(starts, seed))
    best_x, best_ratio = _optimize(evaluator, params.eta, np.array(initial), tolerance)
    value = best_ratio * functional.constant
    logger.debug(f"{functional.name} N={params.n_parties} mu={params.mu:.4f} eta={params.eta:.4f}: "
                 f"ratio={best_ratio:.6f}")
    return AngleOptimum(functional.name, params, tuple(float(a) for a in best_x), value, best_ratio, len(initial))


def optimize_state_angles(f: FamilyLike, state: Union[SymState, np.ndarray], starts: Optional[int] = None,
                          seed: Optional[int] = None,
                          extra_starts: Iterable[Sequence[float]] = ()) -> Tuple[Tuple[float, ...], float]:
    """任意对称纯态上的四角优化，返回 (最优角, 相对违背)"""
    config = get_config()
    starts = starts or config.get_angle_starts()
    seed = config.get_angle_seed() if seed is None else seed
    amplitudes = np.asarray(state)
    n_parties = amplitudes.shape[0] - 1
    functional = _functional(f, n_parties)
    table = state_moment_table(amplitudes, functional.max_order)

    def objective(x):
        n, m = directions_from_angles(x)
        values = correlators_from_moment_table(table, n_parties, n, m, functional.max_order)
        return functional.evaluate(values) / functional.constant

    best_x, best_ratio = None, math.inf
    initial = [np.array(x, dtype=float) for x in extra_starts]
    initial.append(np.array([0.0, math.pi / 2, 0.0, math.pi / 2]))
    initial.extend(quasi_random_starts(starts, seed))
    for x0 in initial:
        result = minimize(objective, x0, method="Nelder-Mead",
                          options={"xatol": 1e-8, "fatol": config.get_angle_tolerance(), "maxiter": 4000})
        if result.fun < best_ratio:
            best_x, best_ratio = np.asarray(result.x), float(result.fun)
    logger.debug(f"{functional.name} N={n_parties}: state-specific ratio={best_ratio:.6f}")
    return tuple(float(a) for a in best_x), best_ratio


def min_purity(f: FamilyLike, n_parties: int, mu: float, tolerance: Optional[float] = None,
               starts: Optional[int] = None) -> float:
    """违背所需的最小纯度 η：二分并在每个 η 上重新优化角度（以上一次最优角热启动）"""
    tolerance = tolerance or get_config().get_eta_tolerance()
    params = OATParams(n_parties, mu, 1.0)
    functional = _functional(f, n_parties)
    best = optimize_angles(functional, params, starts=starts)
    if best.value >= 0:
        raise NoViolation(f"{functional.name} is not violated by the pure OAT state at N={n_parties}, mu={mu}")

    evaluator = _OATEvaluator(functional, params)
    warm = np.array(best.angles)
    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        candidate = optimize_angles(functional, params.with_eta(mid), starts=starts, extra_starts=[warm])
        if candidate.value < 0:
            hi, warm = mid, np.array(candidate.angles)
        else:
            lo = mid
    # 固定最优角时值对 η 线性，取线性零点
    pure_value, mixed_value = evaluator.values(warm, 0.5)
    if mixed_value <= 0:
        return 0.0
    eta = mixed_value / (mixed_value - pure_value)
    eta = min(max(eta, lo), hi)
    logger.info(f"{functional.name} N={n_parties} mu={mu:.4f}: eta_min={eta:.6f}")
    return float(eta)


@dataclass
class MuScanRow:
    """μ 扫描的一行"""
    mu: float
    ratios: Dict[str, float] = field(default_factory=dict)
    eta_min: Dict[str, Optional[float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"mu": self.mu}
        row.update({f"ratio_{name}": value for name, value in self.ratios.items()})
        row.update({f"eta_min_{name}": ("" if value is None else value) for name, value in self.eta_min.items()})
        return row


def scan_mu(families: Sequence[FamilyLike], n_parties: int, mu_grid: Sequence[float], with_purity: bool = False,
            starts: Optional[int] = None) -> List[MuScanRow]:
    """对每个 μ 优化各族的相对违背（可选最小纯度），相邻 μ 间热启动角度"""
    functionals = [_functional(f, n_parties) for f in families]
    warm: Dict[str, np.ndarray] = {}
    rows = []
    for index, mu in enumerate(mu_grid):
        row = MuScanRow(float(mu))
        params = OATParams(n_parties, float(mu))
        for functional in functionals:
            extra = [warm[functional.name]] if functional.name in warm else []
            best = optimize_angles(functional, params, starts=starts, extra_starts=extra)
            warm[functional.name] = np.array(best.angles)
            row.ratios[functional.name] = best.ratio
            if with_purity:
                try:
                    row.eta_min[functional.name] = (min_purity(functional, n_parties, float(mu), starts=starts)
                                                    if best.value < 0 else None)
                except NoViolation:
                    row.eta_min[functional.name] = None
        rows.append(row)
        if (index + 1) % 10 == 0 or index + 1 == len(mu_grid):
            logger.info(f"mu scan N={n_parties}: {index + 1}/{len(mu_grid)} points done")
    return rows


def evaluate_certificate_curve(coefficients: Mapping[str, float], constant: float, n_parties: int,
                               mu_grid: Sequence[float], eta: float = 1.0, name: str = "I3sdp",
                               starts: Optional[int] = None) -> List[Tuple[float, float]]:
    """固定的证书不等式在 μ 网格上的相对违背（每个 μ 重新优化角度）"""
    order = max(len(label) for label in coefficients)
    functional = BellFunctional(name, order, float(constant), {k: float(v) for k, v in coefficients.items()})
    curve = []
    warm: List[np.ndarray] = []
    for mu in mu_grid:
        best = optimize_angles(functional, OATParams(n_parties, float(mu), eta), starts=starts, extra_starts=warm)
        warm = [np.array(best.angles)]
        curve.append((float(mu), best.ratio))
    return curve


def spin_moments(params: OATParams, direction: Direction, order: int = 4) -> Dict[int, float]:
    """方向 u 上 ⟨S_u^k⟩，k=1..order（闭式）"""
    return {k: closed_form_moment(params, direction, k) for k in range(1, order + 1)}


def moments_from_point(point: CorrelatorVector, setting: str = "0") -> Dict[int, float]:
    """由关联量向量反推单方向自旋矩"""
    return correlators_to_moments(point, setting)
