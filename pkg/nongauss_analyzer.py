#!/usr/bin/env python3
"""
对称自旋态的非高斯性诊断
方向优化的超峰度，以及自旋 Wigner 函数（T_kq 多极展开）的负体积
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import roots_legendre

from config_loader import get_config
from dicke_operators import DickeSpace, Direction, rotate_direction, rotation_operator, spin_matrix
from exceptions import DegenerateVariance, NonConvergence, ValidationError
from oat_states import OATParams, oat_vector

try:
    from scipy.special import sph_harm_y

    def _ylm(k: int, q: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return sph_harm_y(k, q, theta, phi)
except ImportError:  # scipy < 1.15
    from scipy.special import sph_harm

    def _ylm(k: int, q: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return sph_harm(q, k, phi, theta)

logger = logging.getLogger(__name__)

StateLike = Union[np.ndarray, Any]


def _twice(x) -> int:
    doubled = Fraction(x) * 2
    if doubled.denominator != 1:
        raise ValidationError(f"{x} is not an integer or half-integer")
    return int(doubled)


@lru_cache(maxsize=None)
def _cg_twice(tj1: int, tm1: int, tj2: int, tm2: int, tj: int, tm: int) -> float:
    """参数均为两倍值的 Racah 公式，精确有理运算"""
    if tm1 + tm2 != tm:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        return 0.0
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tj + tm) % 2:
        return 0.0
    if tj < abs(tj1 - tj2) or tj > tj1 + tj2 or (tj1 + tj2 + tj) % 2:
        return 0.0
    f = math.factorial
    j1p, j1m = (tj1 + tm1) // 2, (tj1 - tm1) // 2
    j2p, j2m = (tj2 + tm2) // 2, (tj2 - tm2) // 2
    jp, jm = (tj + tm) // 2, (tj - tm) // 2
    a = (tj1 + tj2 - tj) // 2
    b = (tj1 - tj2 + tj) // 2
    c = (-tj1 + tj2 + tj) // 2
    total = (tj1 + tj2 + tj) // 2 + 1
    prefactor = Fraction((tj + 1) * f(a) * f(b) * f(c) * f(jp) * f(jm) * f(j1p) * f(j1m) * f(j2p) * f(j2m), f(total))
    # Σ_k (-1)^k / [k!(j1+j2-J-k)!(j1-m1-k)!(j2+m2-k)!(J-j2+m1+k)!(J-j1-m2+k)!]
    d1 = (tj - tj2 + tm1) // 2
    d2 = (tj - tj1 - tm2) // 2
    k_min = max(0, -d1, -d2)
    k_max = min(a, j1m, j2p)
    series = Fraction(0)
    for k in range(k_min, k_max + 1):
        term = Fraction(1, f(k) * f(a - k) * f(j1m - k) * f(j2p - k) * f(d1 + k) * f(d2 + k))
        series += -term if k % 2 else term
    if series == 0:
        return 0.0
    value = math.sqrt(float(prefactor * series * series))
    return value if series > 0 else -value


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """⟨j1 m1; j2 m2 | j m⟩，不满足选择定则时返回 0"""
    return _cg_twice(_twice(j1), _twice(m1), _twice(j2), _twice(m2), _twice(j), _twice(m))


@lru_cache(maxsize=16)
def _multipole_elements(n_parties: int) -> Dict[Tuple[int, int], np.ndarray]:
    """(k, q) -> ⟨j m+q|T_kq|j m⟩ 沿 m 的取值（Dicke 下标 i 对应 m = j - i）"""
    two_j = n_parties
    table = {}
    for k in range(two_j + 1):
        norm = math.sqrt((2 * k + 1) / (two_j + 1))
        for q in range(-k, k + 1):
            tms = [two_j - 2 * i for i in range(two_j + 1)]
            table[(k, q)] = np.array([norm * _cg_twice(two_j, tm, 2 * k, 2 * q, two_j, tm + 2 * q) for tm in tms])
    return table


@dataclass
class MultipoleDecomposition:
    """ρ_kq，k = 0..2j，q = -k..k；coefficients[k, q + 2j]"""
    n_parties: int
    coefficients: np.ndarray

    @property
    def two_j(self) -> int:
        return self.n_parties

    def __getitem__(self, kq: Tuple[int, int]) -> complex:
        k, q = kq
        if not (0 <= k <= self.two_j and abs(q) <= k):
            raise ValidationError(f"multipole index ({k}, {q}) out of range for 2j={self.two_j}")
        return complex(self.coefficients[k, q + self.two_j])

    def hermiticity_defect(self) -> float:
        """max |ρ_{k,-q} - (-1)^q conj(ρ_kq)|"""
        worst = 0.0
        for k in range(self.two_j + 1):
            for q in range(1, k + 1):
                worst = max(worst, abs(self[k, -q] - (-1) ** q * np.conj(self[k, q])))
        return worst


def _density(state: StateLike) -> np.ndarray:
    arr = np.asarray(state)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr


def multipole_decomposition(state: StateLike) -> MultipoleDecomposition:
    """ρ_kq = Tr(ρ T_kq†) = Σ_m ρ_{m+q, m} ⟨j m+q|T_kq|j m⟩"""
    rho = _density(state)
    if abs(np.trace(rho) - 1) > 1e-10:
        raise ValidationError(f"state must have unit trace, got {np.trace(rho)}")
    two_j = rho.shape[0] - 1
    elements = _multipole_elements(two_j)
    coeffs = np.zeros((two_j + 1, 2 * two_j + 1), dtype=complex)
    idx = np.arange(two_j + 1)
    for (k, q), values in elements.items():
        # m+q 的下标为 i - q
        target = idx - q
        valid = (target >= 0) & (target <= two_j)
        coeffs[k, q + two_j] = np.sum(rho[target[valid], idx[valid]] * values[valid])
    return MultipoleDecomposition(two_j, coeffs)


@dataclass
class SphereGrid:
    """cosθ 上 Gauss–Legendre × 均匀 φ 的求积网格；旋转后的网格只保留点与权重"""
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    n_theta: int = 0
    n_phi: int = 0
    refinement: int = 0
    structured: bool = True

    @classmethod
    def build(cls, two_j: int, refinement: int = 0) -> "SphereGrid":
        """默认 2(2j+1) 个 θ 节点、2(2j+1)+1 个 φ 点，每次加密翻倍"""
        n_theta = 2 * (two_j + 1) * 2 ** refinement
        n_phi = n_theta + 1
        x, w = roots_legendre(n_theta)
        theta = np.arccos(x)
        phi = 2 * math.pi * np.arange(n_phi) / n_phi
        weights = np.outer(w, np.full(n_phi, 2 * math.pi / n_phi))
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        return cls(tt.ravel(), pp.ravel(), weights.ravel(), n_theta, n_phi, refinement, True)

    @property
    def size(self) -> int:
        return len(self.weights)

    def rotated(self, alpha: float, beta: float, gamma: float) -> "SphereGrid":
        """节点作 R(α,β,γ) 转动，权重不变"""
        xyz = np.stack([np.sin(self.theta) * np.cos(self.phi), np.sin(self.theta) * np.sin(self.phi),
                        np.cos(self.theta)], axis=1)
        basis = np.stack([rotate_direction(Direction(tuple(e)), alpha, beta, gamma).array for e in np.eye(3)], axis=1)
        moved = xyz @ basis.T
        theta = np.arccos(np.clip(moved[:, 2], -1, 1))
        phi = np.mod(np.arctan2(moved[:, 1], moved[:, 0]), 2 * math.pi)
        return SphereGrid(theta, phi, self.weights.copy(), self.n_theta, self.n_phi, self.refinement, False)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(self.weights * values))


def _wigner_structured(decomposition: MultipoleDecomposition, grid: SphereGrid) -> np.ndarray:
    two_j = decomposition.two_j
    theta = grid.theta.reshape(grid.n_theta, grid.n_phi)[:, 0]
    phi = grid.phi.reshape(grid.n_theta, grid.n_phi)[0]
    qs = np.arange(-two_j, two_j + 1)
    # F_q(θ) = Σ_k ρ_kq Y_kq(θ, 0)
    radial = np.zeros((len(theta), len(qs)), dtype=complex)
    zeros = np.zeros_like(theta)
    for k in range(two_j + 1):
        for q in range(-k, k + 1):
            rho_kq = decomposition.coefficients[k, q + two_j]
            if rho_kq != 0:
                radial[:, q + two_j] += rho_kq * _ylm(k, q, theta, zeros)
    field_values = radial @ np.exp(1j * np.outer(qs, phi))
    return field_values.real.ravel()


def _wigner_points(decomposition: MultipoleDecomposition, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    two_j = decomposition.two_j
    total = np.zeros(theta.shape, dtype=complex)
    for k in range(two_j + 1):
        for q in range(-k, k + 1):
            rho_kq = decomposition.coefficients[k, q + two_j]
            if rho_kq != 0:
                total += rho_kq * _ylm(k, q, theta, phi)
    return total.real


def wigner_function(state: StateLike, grid: Optional[SphereGrid] = None,
                    decomposition: Optional[MultipoleDecomposition] = None) -> np.ndarray:
    """W = sqrt(4π/(2j+1)) Σ ρ_kq Y_kq，使 (2j+1)/(4π)∫W dΩ = 1"""
    decomposition = decomposition or multipole_decomposition(state)
    two_j = decomposition.two_j
    grid = grid or SphereGrid.build(two_j)
    raw = _wigner_structured(decomposition, grid) if grid.structured else \
        _wigner_points(decomposition, grid.theta, grid.phi)
    return math.sqrt(4 * math.pi / (two_j + 1)) * raw


def wigner_normalization(state: StateLike, grid: Optional[SphereGrid] = None) -> float:
    decomposition = multipole_decomposition(state)
    grid = grid or SphereGrid.build(decomposition.two_j)
    values = wigner_function(state, grid, decomposition)
    return (decomposition.two_j + 1) / (4 * math.pi) * grid.integrate(values)


def _negativity_on(decomposition: MultipoleDecomposition, grid: SphereGrid) -> float:
    values = wigner_function(None, grid, decomposition)
    return 0.5 * ((decomposition.two_j + 1) / (4 * math.pi) * grid.integrate(np.abs(values)) - 1)


@dataclass
class NegativityResult:
    value: float
    refinement: int
    history: List[float] = field(default_factory=list)


def wigner_negativity(state: StateLike, tolerance: Optional[float] = None, max_doublings: Optional[int] = None,
                      rotation: Optional[Sequence[float]] = None) -> NegativityResult:
    """𝒩 = ½((2j+1)/(4π)∫|W| − 1)；网格逐次翻倍直到变化小于容差"""
    config = get_config()
    tolerance = tolerance or config.get_wigner_tolerance()
    max_doublings = config.get_wigner_max_doublings() if max_doublings is None else max_doublings
    decomposition = multipole_decomposition(state)
    history = []
    for level in range(max_doublings + 1):
        grid = SphereGrid.build(decomposition.two_j, level)
        if rotation is not None:
            grid = grid.rotated(*rotation)
        history.append(_negativity_on(decomposition, grid))
        if level > 0 and abs(history[-1] - history[-2]) < tolerance:
            logger.debug(f"negativity converged at refinement {level}: {history[-1]:.6f}")
            return NegativityResult(history[-1], level, history)
    raise NonConvergence(f"Wigner negativity not converged after {max_doublings} doublings: {history}")


def rotate_state(state: StateLike, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """整体转动 D(α,β,γ)·ψ（或 D ρ D†）"""
    arr = np.asarray(state)
    n_parties = arr.shape[0] - 1
    d = rotation_operator(DickeSpace(n_parties), alpha, beta, gamma)
    if arr.ndim == 1:
        return d @ arr
    return d @ arr @ d.conj().T


def _central_moments(state: np.ndarray, s_u: np.ndarray) -> Tuple[float, float]:
    if state.ndim == 1:
        v1 = s_u @ state
        v2 = s_u @ v1
        m1 = np.vdot(state, v1).real
        m2 = np.vdot(v1, v1).real
        m3 = np.vdot(v1, v2).real
        m4 = np.vdot(v2, v2).real
    else:
        s2 = s_u @ s_u
        m1 = np.trace(state @ s_u).real
        m2 = np.trace(state @ s2).real
        m3 = np.trace(state @ s2 @ s_u).real
        m4 = np.trace(state @ s2 @ s2).real
    var = m2 - m1 ** 2
    fourth = m4 - 4 * m3 * m1 + 6 * m2 * m1 ** 2 - 3 * m1 ** 4
    return var, fourth


def kurtosis_along(state: StateLike, direction: Direction) -> float:
    """K(u) = ⟨(S_u-⟨S_u⟩)⁴⟩/⟨(S_u-⟨S_u⟩)²⟩² - 3"""
    arr = np.asarray(state)
    space = DickeSpace(arr.shape[0] - 1)
    var, fourth = _central_moments(arr, spin_matrix(space, direction))
    if var < 1e-12:
        raise DegenerateVariance(f"variance {var:.3e} along {direction.vector}")
    return float(fourth / var ** 2 - 3)


@dataclass
class KurtosisResult:
    value: float
    direction: Direction
    angles: Tuple[float, float]

    def to_dict(self) -> Dict[str, Any]:
        return {"K_ex": self.value, "direction": list(self.direction.vector), "phi": self.angles[0],
                "theta": self.angles[1]}


def excess_kurtosis(state: StateLike, optimize: bool = True, direction: Optional[Direction] = None,
                    grid_size: Optional[int] = None) -> KurtosisResult:
    """方向优化的超峰度：64×64 网格 + Nelder–Mead 细化；方差退化的方向跳过"""
    if not optimize:
        direction = direction or Direction((0.0, 0.0, 1.0))
        phi, theta = direction.angles()
        return KurtosisResult(kurtosis_along(state, direction), direction, (phi, theta))

    grid_size = grid_size or get_config().get_kurtosis_grid()
    arr = np.asarray(state)

    def objective(angles) -> float:
        try:
            return kurtosis_along(arr, Direction.from_angles(angles[0], angles[1]))
        except DegenerateVariance:
            return math.inf

    best_angles, best_value = None, math.inf
    for phi in np.linspace(0, 2 * math.pi, grid_size, endpoint=False):
        for theta in np.linspace(0, math.pi, grid_size):
            value = objective((phi, theta))
            if value < best_value:
                best_angles, best_value = (phi, theta), value
    if best_angles is None:
        raise DegenerateVariance("variance vanishes along every grid direction")
    result = minimize(objective, np.array(best_angles), method="Nelder-Mead",
                      options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 2000})
    if result.fun < best_value:
        best_angles, best_value = (float(result.x[0]), float(result.x[1])), float(result.fun)
    direction = Direction.from_angles(*best_angles)
    return KurtosisResult(float(best_value), direction, tuple(best_angles))


def oat_nongauss_scan(n_parties: int, mu_grid: Sequence[float], with_negativity: bool = True) -> List[Dict[str, Any]]:
    """OAT 态随 μ 的超峰度与 Wigner 负体积"""
    rows = []
    for index, mu in enumerate(mu_grid):
        state = oat_vector(OATParams(n_parties, float(mu))).amplitudes
        row: Dict[str, Any] = {"mu": float(mu), "K_ex": excess_kurtosis(state).value}
        if with_negativity:
            row["negativity"] = wigner_negativity(state).value
        rows.append(row)
        if (index + 1) % 10 == 0 or index + 1 == len(mu_grid):
            logger.info(f"non-Gaussianity scan N={n_parties}: {index + 1}/{len(mu_grid)} points done")
    return rows


def wigner_field_rows(state: StateLike, refinement: int = 0) -> List[Dict[str, float]]:
    """(θ, φ, W) 行，用于导出 CSV"""
    arr = np.asarray(state)
    grid = SphereGrid.build(arr.shape[0] - 1, refinement)
    values = wigner_function(arr, grid)
    return [{"theta": float(t), "phi": float(p), "W": float(w)} for t, p, w in zip(grid.theta, grid.phi, values)]
