#!/usr/bin/env python3
"""
Dicke 基下的集体自旋算符与 Bell 算符

k 体关联量算符用双模玻色子正规序表示：
    Ŝ_w = Σ C_w[p,q] (a0†)^p (a1†)^(k-p) a0^q a1^(k-q)
其中 mode 0 为自旋向上，C_w 由单比特测量矩阵 u·σ 的乘积展开得到。
Dicke 基按 m=+j 到 m=-j 排序，下标 i 即自旋向下的粒子数。
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg
from scipy.optimize import minimize_scalar
from scipy.signal import convolve2d

from config_loader import get_config
from correlator_algebra import CorrelatorVector, InequalityFamily, canonical_label, labels_up_to
from exceptions import ConvergenceFailure, SizeLimit, ValidationError

logger = logging.getLogger(__name__)

StateLike = np.ndarray

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class DickeSpace:
    """N 个量子比特的全对称子空间，维数 N+1，总自旋 j=N/2"""
    n_parties: int

    def __post_init__(self):
        if self.n_parties < 1:
            raise ValidationError(f"n_parties must be positive, got {self.n_parties}")

    @property
    def dim(self) -> int:
        return self.n_parties + 1

    @property
    def j(self) -> float:
        return self.n_parties / 2

    def m_values(self) -> np.ndarray:
        return self.j - np.arange(self.dim)


@dataclass(frozen=True)
class Direction:
    """测量方向单位矢量"""
    vector: Tuple[float, float, float]

    def __post_init__(self):
        vec = tuple(float(x) for x in self.vector)
        if len(vec) != 3:
            raise ValidationError(f"direction needs 3 components, got {len(vec)}")
        norm = math.sqrt(sum(x * x for x in vec))
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"direction {vec} is not unit (norm {norm})")
        object.__setattr__(self, "vector", vec)

    @classmethod
    def from_angles(cls, phi: float, theta: float) -> "Direction":
        """u = (cosφ sinθ, sinφ sinθ, cosθ)"""
        return cls((math.cos(phi) * math.sin(theta), math.sin(phi) * math.sin(theta), math.cos(theta)))

    @classmethod
    def normalized(cls, vector: Sequence[float]) -> "Direction":
        arr = np.asarray(vector, dtype=float)
        return cls(tuple(arr / np.linalg.norm(arr)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vector)

    def dot(self, other: "Direction") -> float:
        return float(np.dot(self.vector, other.vector))

    def angles(self) -> Tuple[float, float]:
        x, y, z = self.vector
        return math.atan2(y, x), math.acos(max(-1.0, min(1.0, z)))


Z_AXIS = Direction((0.0, 0.0, 1.0))
X_AXIS = Direction((1.0, 0.0, 0.0))


def directions_from_angles(angles: Sequence[float]) -> Tuple[Direction, Direction]:
    """四个角 (φ0, θ0, φ1, θ1) 对应的测量方向 n, m"""
    phi0, theta0, phi1, theta1 = angles
    return Direction.from_angles(phi0, theta0), Direction.from_angles(phi1, theta1)


def family_directions(theta: float) -> Tuple[Direction, Direction]:
    """单角问题：M0 = σz，M1 = sinθ σx + cosθ σz"""
    return Z_AXIS, Direction((math.sin(theta), 0.0, math.cos(theta)))


def qubit_operator(direction: Union[Direction, Sequence[float]]) -> np.ndarray:
    """单比特 u·σ"""
    ux, uy, uz = direction.vector if isinstance(direction, Direction) else direction
    return np.array([[uz, ux - 1j * uy], [ux + 1j * uy, -uz]], dtype=complex)


@lru_cache(maxsize=64)
def _spin_components(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    space = DickeSpace(n)
    j = space.j
    m = space.m_values()
    s_plus = np.zeros((space.dim, space.dim), dtype=complex)
    idx = np.arange(1, space.dim)
    s_plus[idx - 1, idx] = np.sqrt(j * (j + 1) - m[idx] * (m[idx] + 1))
    s_minus = s_plus.conj().T
    sx = (s_plus + s_minus) / 2
    sy = (s_plus - s_minus) / 2j
    sz = np.diag(m).astype(complex)
    for mat in (sx, sy, sz):
        mat.setflags(write=False)
    return sx, sy, sz


def spin_matrix(space: DickeSpace, direction: Union[Direction, Sequence[float]]) -> np.ndarray:
    """S_u = u_x S_x + u_y S_y + u_z S_z；方向可为非单位矢量（线性组合）"""
    ux, uy, uz = direction.vector if isinstance(direction, Direction) else direction
    sx, sy, sz = _spin_components(space.n_parties)
    return ux * sx + uy * sy + uz * sz


def normal_order_coefficients(label: str, n: Direction, m: Direction) -> np.ndarray:
    """C_w[p,q]：p 为产生算符中 mode 0 的个数，q 为湮灭算符中 mode 0 的个数"""
    label = canonical_label(label)
    kernels = {}
    for setting, direction in (("0", n), ("1", m)):
        mat = qubit_operator(direction)
        # 行：x 的幂（α=0），列：y 的幂（β=0）
        kernels[setting] = np.array([[mat[1, 1], mat[1, 0]], [mat[0, 1], mat[0, 0]]])
    coeffs = np.ones((1, 1), dtype=complex)
    for setting in label:
        coeffs = convolve2d(coeffs, kernels[setting])
    return coeffs


def _falling(x: np.ndarray, r: int) -> np.ndarray:
    out = np.ones_like(x, dtype=float)
    for t in range(r):
        out = out * (x - t)
    return out


@lru_cache(maxsize=4096)
def _ladder_band(n: int, k: int, p: int, q: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a0†)^p (a1†)^(k-p) a0^q a1^(k-q) 的非零元 (行, 列, 值)"""
    cols = np.arange(n + 1)
    n0 = (n - cols).astype(float)
    n1 = cols.astype(float)
    valid = (n0 >= q) & (n1 >= k - q)
    cols = cols[valid]
    n0, n1 = n0[valid], n1[valid]
    vals = np.sqrt(_falling(n0, q) * _falling(n1, k - q)
                   * _falling(n0 - q + p, p) * _falling(n1 + q - p, k - p))
    rows = cols + q - p
    for arr in (rows, cols, vals):
        arr.setflags(write=False)
    return rows, cols, vals


def correlator_operator(space: DickeSpace, label: str, n: Direction, m: Direction) -> np.ndarray:
    """对称块中期望值等于 S_label 的算符"""
    label = canonical_label(label)
    k = len(label)
    coeffs = normal_order_coefficients(label, n, m)
    op = np.zeros((space.dim, space.dim), dtype=complex)
    for p in range(k + 1):
        for q in range(k + 1):
            c = coeffs[p, q]
            if c == 0:
                continue
            rows, cols, vals = _ladder_band(space.n_parties, k, p, q)
            op[rows, cols] += c * vals
    return (op + op.conj().T) / 2


def _normal_moments(state: StateLike, n_parties: int, k: int) -> np.ndarray:
    """E[p,q] = ⟨(a0†)^p (a1†)^(k-p) a0^q a1^(k-q)⟩，state 为态矢量或密度矩阵"""
    moments = np.zeros((k + 1, k + 1), dtype=complex)
    is_density = state.ndim == 2
    for p in range(k + 1):
        for q in range(k + 1):
            rows, cols, vals = _ladder_band(n_parties, k, p, q)
            if is_density:
                moments[p, q] = np.sum(state[cols, rows] * vals)
            else:
                moments[p, q] = np.sum(np.conj(state[rows]) * vals * state[cols])
    return moments


def state_moment_table(state: StateLike, order: int) -> Dict[int, np.ndarray]:
    """态的全部正规序矩，k = 1..order"""
    state = np.asarray(state)
    n_parties = state.shape[0] - 1
    return {k: _normal_moments(state, n_parties, k) for k in range(1, order + 1)}


def correlators_from_moment_table(table: Dict[int, np.ndarray], n_parties: int, n: Direction, m: Direction,
                                  order: int) -> CorrelatorVector:
    values = {}
    for label in labels_up_to(order):
        coeffs = normal_order_coefficients(label, n, m)
        values[label] = float(np.real(np.sum(coeffs * table[len(label)])))
    return CorrelatorVector(n_parties, order, values)


def expectation_correlators(state: StateLike, n: Direction, m: Direction, order: int) -> CorrelatorVector:
    """纯态或密度矩阵在方向 (n, m) 下的关联量向量"""
    state = np.asarray(state)
    table = state_moment_table(state, order)
    return correlators_from_moment_table(table, state.shape[0] - 1, n, m, order)


@lru_cache(maxsize=256)
def _band_traces(n: int, k: int) -> np.ndarray:
    traces = np.zeros((k + 1, k + 1))
    for p in range(k + 1):
        rows, cols, vals = _ladder_band(n, k, p, p)
        traces[p, p] = vals.sum()
    return traces


def correlator_traces(space: DickeSpace, n: Direction, m: Direction, order: int) -> Dict[str, float]:
    """Tr(Ŝ_w) 在对称块上的精确值"""
    return {label: float(np.real(np.sum(normal_order_coefficients(label, n, m)
                                        * _band_traces(space.n_parties, len(label)))))
            for label in labels_up_to(order)}


@dataclass
class BellOperatorSym:
    """对称块 Bell 算符"""
    space: DickeSpace
    matrix: np.ndarray
    family: str
    directions: Tuple[Direction, Direction]
    constant: float = 0.0

    def __post_init__(self):
        deviation = float(np.max(np.abs(self.matrix - self.matrix.conj().T))) if self.matrix.size else 0.0
        if deviation > 1e-12:
            raise ValidationError(f"Bell operator for {self.family} is not Hermitian (deviation {deviation:.2e})")

    def expectation(self, state: StateLike) -> float:
        state = np.asarray(state)
        if state.ndim == 2:
            return float(np.real(np.trace(state @ self.matrix)))
        return float(np.real(np.vdot(state, self.matrix @ state)))


def bell_operator(f: InequalityFamily, space: DickeSpace, n: Direction, m: Direction) -> BellOperatorSym:
    """constant(N)·Id + Σ_w coeffs_w(N)·Ŝ_w"""
    big_n = space.n_parties
    constant = float(f.constant_at(big_n))
    matrix = constant * np.eye(space.dim, dtype=complex)
    for label, coeff in f.coefficients_at(big_n).items():
        matrix += float(coeff) * correlator_operator(space, label, n, m)
    return BellOperatorSym(space, matrix, f.name, (n, m), constant)


def min_eigenvalue(op: Union[BellOperatorSym, np.ndarray]) -> Tuple[float, np.ndarray]:
    """最小本征值与单位本征矢（稠密对称求解）"""
    matrix = op.matrix if isinstance(op, BellOperatorSym) else np.asarray(op)
    if np.iscomplexobj(matrix) and not np.any(matrix.imag):
        matrix = matrix.real
    try:
        values, vectors = linalg.eigh(matrix, subset_by_index=[0, 0])
    except linalg.LinAlgError as e:
        raise ConvergenceFailure(f"eigensolver failed: {e}") from e
    vector = vectors[:, 0]
    return float(values[0]), vector / np.linalg.norm(vector)


def _theta_objective(f: InequalityFamily, space: DickeSpace):
    def objective(theta: float) -> float:
        n, m = family_directions(theta)
        value, _ = min_eigenvalue(bell_operator(f, space, n, m))
        return value
    return objective


@dataclass
class ThetaOptimum:
    """单角 θ 优化结果"""
    family: str
    n_parties: int
    theta_star: float
    q_v: float
    ratio: float
    eigenvector: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "N": self.n_parties, "theta_star": self.theta_star,
                "Q_V": self.q_v, "ratio": self.ratio}


def golden_refine(objective, grid: np.ndarray, values: np.ndarray, tolerance: float) -> Tuple[float, float]:
    """在网格最优点两侧的区间内做黄金分割细化，返回 (x, f(x))"""
    idx = int(np.argmin(values))
    best_x, best_f = float(grid[idx]), float(values[idx])
    lo, hi = grid[max(idx - 1, 0)], grid[min(idx + 1, len(grid) - 1)]
    try:
        if 0 < idx < len(grid) - 1:
            result = minimize_scalar(objective, bracket=(lo, best_x, hi), method="golden", tol=tolerance)
        else:
            raise ValueError("grid optimum on the boundary")
    except (ValueError, RuntimeError) as e:
        logger.debug(f"golden bracket rejected ({e}), using bounded search")
        result = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                 options={"xatol": tolerance})
    if lo <= result.x <= hi and result.fun < best_f:
        return float(result.x), float(result.fun)
    return best_x, best_f


def optimize_theta(f: InequalityFamily, n_parties: int, grid_points: Optional[int] = None,
                   tolerance: Optional[float] = None) -> ThetaOptimum:
    """在 θ∈[0,π] 上最小化 λ_min(Î(θ))：粗网格 + 黄金分割"""
    if n_parties < f.n_min:
        raise ValidationError(f"{f.name} requires N >= {f.n_min}, got {n_parties}")
    config = get_config()
    grid_points = grid_points or config.get_theta_grid_points()
    tolerance = tolerance or config.get_theta_tolerance()
    space = DickeSpace(n_parties)
    objective = _theta_objective(f, space)
    grid = np.linspace(0.0, math.pi, grid_points)
    values = np.array([objective(theta) for theta in grid])
    theta_star, q_v = golden_refine(objective, grid, values, tolerance)
    n, m = family_directions(theta_star)
    q_v, vector = min_eigenvalue(bell_operator(f, space, n, m))
    ratio = q_v / float(f.constant_at(n_parties))
    logger.info(f"{f.name} N={n_parties}: theta*={theta_star:.8f}, Q_V={q_v:.6g}, ratio={ratio:.6f}")
    return ThetaOptimum(f.name, n_parties, theta_star, q_v, ratio, vector)


def _full_space_correlators(n_parties: int, n: Direction, m: Direction, order: int) -> Dict[str, np.ndarray]:
    """张量积逐位构造 2^N 维关联量算符

    G[(i,j)] 为在 i 个格点放 M0、j 个格点放 M1（互不相交）的所有无序选择之和，
    有序求和 Ŝ_w = i!·j!·G[(i,j)]。
    """
    ops = {"0": qubit_operator(n), "1": qubit_operator(m)}
    eye = np.eye(2, dtype=complex)
    states: Dict[Tuple[int, int], np.ndarray] = {(0, 0): np.ones((1, 1), dtype=complex)}
    for _ in range(n_parties):
        updated: Dict[Tuple[int, int], np.ndarray] = {}
        for (i, j), mat in states.items():
            moves = [((i, j), eye), ((i + 1, j), ops["0"]), ((i, j + 1), ops["1"])]
            for key, single in moves:
                if sum(key) > order:
                    continue
                term = np.kron(mat, single)
                updated[key] = updated[key] + term if key in updated else term
        states = updated
    dim = 2 ** n_parties
    result = {}
    for label in labels_up_to(order):
        zeros, ones = label.count("0"), label.count("1")
        mat = states.get((zeros, ones))
        result[label] = (math.factorial(zeros) * math.factorial(ones) * mat
                         if mat is not None else np.zeros((dim, dim), dtype=complex))
    return result


def full_space_bell_operator(f: InequalityFamily, n_parties: int, n: Direction, m: Direction,
                             limit: Optional[int] = None) -> np.ndarray:
    limit = limit if limit is not None else get_config().get_oracle_n_max()
    if n_parties > limit:
        raise SizeLimit(n_parties, limit, "full Hilbert space oracle")
    correlators = _full_space_correlators(n_parties, n, m, f.max_order)
    matrix = float(f.constant_at(n_parties)) * np.eye(2 ** n_parties, dtype=complex)
    for label, coeff in f.coefficients_at(n_parties).items():
        matrix += float(coeff) * correlators[label]
    return (matrix + matrix.conj().T) / 2


def full_space_oracle(f: InequalityFamily, n_parties: int, n: Direction, m: Direction,
                      limit: Optional[int] = None) -> float:
    """完整 2^N 维 Bell 算符的最小本征值"""
    matrix = full_space_bell_operator(f, n_parties, n, m, limit)
    value, _ = min_eigenvalue(matrix)
    return value


def correlators_to_moments(values: CorrelatorVector, setting: str = "0") -> Dict[int, float]:
    """单方向关联量 → 集体自旋矩 ⟨S^k⟩"""
    big_n = values.n_parties
    s1 = values[setting]
    moments = {1: s1 / 2}
    if values.max_order >= 2:
        s2 = values[setting * 2]
        moments[2] = (s2 + big_n) / 4
    if values.max_order >= 3:
        moments[3] = (values[setting * 3] + (3 * big_n - 2) * s1) / 8
    if values.max_order >= 4:
        moments[4] = (values[setting * 4] + 2 * (3 * big_n - 4) * values[setting * 2]
                      + big_n * (3 * big_n - 2)) / 16
    return moments


def moments_to_correlators(n_parties: int, moments: Dict[int, float]) -> Dict[str, float]:
    """集体自旋矩 ⟨S^k⟩ → 单方向关联量 S_0, S_00, S_000, S_0000"""
    big_n = n_parties
    values = {"0": 2 * moments[1]}
    if 2 in moments:
        values["00"] = 4 * moments[2] - big_n
    if 3 in moments:
        values["000"] = 8 * moments[3] - (3 * big_n - 2) * values["0"]
    if 4 in moments:
        values["0000"] = 16 * moments[4] - 2 * (3 * big_n - 4) * values["00"] - big_n * (3 * big_n - 2)
    return values


def third_moment_weights(alpha: float, beta: float) -> Dict[str, float]:
    """a = αm + βn 时 ⟨S_a³⟩ 中三阶关联量的权重（未除以 8）"""
    return {"000": beta ** 3, "001": 3 * alpha * beta ** 2, "011": 3 * alpha ** 2 * beta, "111": alpha ** 3}


def third_moment_identity(alpha: float, beta: float, nm: float, values: Union[CorrelatorVector, Dict[str, Any]],
                          n_parties: Optional[int] = None):
    """由关联量（或关联量算符）组装 ⟨S_a³⟩，a = αm + βn，nm = n·m"""
    if isinstance(values, CorrelatorVector):
        n_parties = values.n_parties
    if n_parties is None:
        raise ValidationError("n_parties is required for plain mappings")
    big_n = n_parties
    total = sum(w * values[label] for label, w in third_moment_weights(alpha, beta).items()) / 8
    total = total + (3 * big_n - 2) / 8 * (beta ** 3 + alpha ** 2 * beta + 2 * alpha * beta ** 2 * nm) * values["0"]
    total = total + (3 * big_n - 2) / 8 * (alpha ** 3 + alpha * beta ** 2 + 2 * alpha ** 2 * beta * nm) * values["1"]
    return total


def fourth_moment_identity(nm: float, values: Union[CorrelatorVector, Dict[str, Any]],
                           n_parties: Optional[int] = None):
    """a = (n+m)/√2 时由关联量组装 ⟨S_a⁴⟩"""
    if isinstance(values, CorrelatorVector):
        n_parties = values.n_parties
    if n_parties is None:
        raise ValidationError("n_parties is required for plain mappings")
    big_n = n_parties
    four_body = (values["0000"] + 4 * values["0001"] + 6 * values["0011"]
                 + 4 * values["0111"] + values["1111"])
    two_body = values["00"] + values["11"] + 2 * values["01"]
    offset = big_n * (3 * big_n - 2) * (2 + 8 * nm + 2 * (2 * nm ** 2 + 1))
    return (four_body + 4 * (3 * big_n - 4) * (1 + nm) * two_body + offset) / 64


def i4_collective_operator(n_parties: int, n: Direction, m: Direction) -> np.ndarray:
    """只用两个集体测量方向 a=(n+m)/√2 与 n、m 的二体项写出的 Î4"""
    space = DickeSpace(n_parties)
    big_n = n_parties
    nm = n.dot(m)
    s_a = spin_matrix(space, (n.array + m.array) / math.sqrt(2))
    s_a2 = s_a @ s_a
    op = 64 * (s_a2 @ s_a2)
    op = op + (4 * (3 * big_n - 2) - 4 * (3 * big_n - 4) * nm) * correlator_operator(space, "00", n, m)
    op = op + (4 * (3 * big_n - 14) - 4 * (3 * big_n - 4) * nm) * correlator_operator(space, "11", n, m)
    op = op + (8 * (3 * big_n - 2) - 8 * (3 * big_n - 4) * nm) * correlator_operator(space, "01", n, m)
    constant = 48 * big_n * (big_n - 1) - big_n * (3 * big_n - 2) * (2 + 8 * nm + 2 * (2 * nm ** 2 + 1))
    op = op + constant * np.eye(space.dim)
    return (op + op.conj().T) / 2


def bell_expectation(f: InequalityFamily, state: StateLike, n: Direction, m: Direction) -> float:
    """⟨Î⟩ = constant + Σ c_w S_w(state)"""
    state = np.asarray(state)
    big_n = state.shape[0] - 1
    values = expectation_correlators(state, n, m, f.max_order)
    return float(f.constant_at(big_n)) + sum(float(c) * values[label]
                                             for label, c in f.coefficients_at(big_n).items())


def theta_slice(f: InequalityFamily, state: StateLike, angles: Sequence[float], index: int,
                thetas: Sequence[float]) -> List[Tuple[float, float]]:
    """固定其余三个角，扫描 angles[index]，返回 (角度, 相对违背) 列表"""
    if not 0 <= index < 4:
        raise ValidationError(f"angle index must be 0..3, got {index}")
    state = np.asarray(state)
    big_n = state.shape[0] - 1
    table = state_moment_table(state, f.max_order)
    constant = float(f.constant_at(big_n))
    coeffs = f.coefficients_at(big_n)
    rows = []
    for theta in thetas:
        current = list(angles)
        current[index] = theta
        n, m = directions_from_angles(current)
        values = correlators_from_moment_table(table, big_n, n, m, f.max_order)
        value = constant + sum(float(c) * values[label] for label, c in coeffs.items())
        rows.append((float(theta), value / constant))
    return rows


def rotation_operator(space: DickeSpace, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Wigner-D 转动 exp(-iαSz) exp(-iβSy) exp(-iγSz)"""
    _, sy, sz = _spin_components(space.n_parties)
    return linalg.expm(-1j * alpha * sz) @ linalg.expm(-1j * beta * sy) @ linalg.expm(-1j * gamma * sz)


def rotate_direction(direction: Direction, alpha: float, beta: float, gamma: float) -> Direction:
    """与 rotation_operator 对应的三维转动 R(α,β,γ)·u"""
    def rz(angle):
        c, s = math.cos(angle), math.sin(angle)
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])

    def ry(angle):
        c, s = math.cos(angle), math.sin(angle)
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])

    return Direction.normalized(rz(alpha) @ ry(beta) @ rz(gamma) @ direction.array)


def dump_operator(op: BellOperatorSym, path: str, eigenvector: Optional[np.ndarray] = None,
                  extra: Optional[Dict[str, Any]] = None) -> None:
    """把算符（及本征矢）写成实部/虚部分开的 JSON"""
    payload: Dict[str, Any] = {
        "family": op.family,
        "N": op.space.n_parties,
        "directions": [list(d.vector) for d in op.directions],
        "matrix": {"real": op.matrix.real.tolist(), "imag": op.matrix.imag.tolist()},
    }
    if eigenvector is not None:
        payload["eigenvector"] = {"real": np.real(eigenvector).tolist(), "imag": np.imag(eigenvector).tolist()}
    if extra:
        payload.update(extra)
    os.makedirs(os.path.dirname(path) if os.path.dirname(path) else '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    logger.info(f"Operator {op.family} (N={op.space.n_parties}) written to {path}")
