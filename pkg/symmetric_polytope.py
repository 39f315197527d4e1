#!/usr/bin/env python3
"""
对称局域多面体 P^S_{N,K}
枚举顶点（划分像去重），并用精确有理秩判断候选不等式是否为有效面与刻面
"""

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import sympy
from scipy.optimize import linprog

from config_loader import get_config
from correlator_algebra import (CorrelatorVector, InequalityFamily, Partition, _integer_coefficients,
                                _jsonable, correlator_polynomials, labels_up_to, partition_arrays)
from exceptions import SizeLimit, ValidationError

logger = logging.getLogger(__name__)


@dataclass
class VertexSet:
    """多面体顶点集合：coordinates 每行一个去重后的点，列按规范标签顺序"""
    n_parties: int
    max_order: int
    coordinates: np.ndarray
    partitions: List[Partition] = field(default_factory=list)

    @property
    def labels(self) -> List[str]:
        return labels_up_to(self.max_order)

    @property
    def points(self) -> List[CorrelatorVector]:
        labels = self.labels
        return [CorrelatorVector(self.n_parties, self.max_order,
                                 {label: int(v) for label, v in zip(labels, row)})
                for row in self.coordinates]

    def __len__(self) -> int:
        return len(self.coordinates)

    def barycenter(self) -> CorrelatorVector:
        count = len(self.coordinates)
        sums = self.coordinates.astype(object).sum(axis=0)
        return CorrelatorVector(self.n_parties, self.max_order,
                                {label: Fraction(int(s), count) for label, s in zip(self.labels, sums)})


@dataclass
class FacetReport:
    """刻面检查结果"""
    family: str
    n_parties: int
    valid: bool
    min_value: Any
    tight_count: int
    tight_affine_rank: int
    ambient_dim: int
    argmin: Optional[Partition] = None

    @property
    def is_facet(self) -> bool:
        return self.valid and self.tight_count > 0 and self.tight_affine_rank == self.ambient_dim - 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "N": self.n_parties,
            "valid": self.valid,
            "min_value": _jsonable(self.min_value),
            "argmin": list(self.argmin.as_tuple()) if self.argmin else None,
            "tight_count": self.tight_count,
            "tight_affine_rank": self.tight_affine_rank,
            "ambient_dim": self.ambient_dim,
            "is_facet": self.is_facet,
        }


def _guard(n: int, limit: Optional[int] = None) -> None:
    limit = limit if limit is not None else get_config().get_polytope_n_max()
    if n > limit:
        raise SizeLimit(n, limit, "vertex materialization")
    if n < 2:
        raise ValidationError(f"polytope needs N >= 2, got {n}")


def enumerate_vertices(n: int, order: int, limit: Optional[int] = None) -> VertexSet:
    """全部划分在关联量空间中的像，按首次出现顺序精确去重"""
    _guard(n, limit)
    if order not in (2, 3, 4):
        raise ValidationError(f"polytope order must be 2, 3 or 4, got {order}")
    a, b, c, d = partition_arrays(n)
    values = correlator_polynomials(n, a + b - c - d, a - b + c - d, a - b - c + d, order)
    coords = np.stack([values[label] for label in labels_up_to(order)], axis=1).astype(np.int64)
    _, first = np.unique(coords, axis=0, return_index=True)
    keep = np.sort(first)
    partitions = [Partition(int(a[i]), int(b[i]), int(c[i]), int(d[i])) for i in keep]
    logger.info(f"P^S_(N={n},K={order}): {len(keep)} distinct vertices from {len(a)} partitions")
    return VertexSet(n, order, coords[keep], partitions)


def exact_affine_rank(points: np.ndarray) -> int:
    """整数点集的精确仿射秩：rank(DᵀD)，D 为相对首点的差"""
    if len(points) == 0:
        return -1
    diffs = points.astype(object)[1:] - points.astype(object)[0]
    if len(diffs) == 0:
        return 0
    gram = diffs.T.dot(diffs)
    return int(sympy.Matrix(gram.tolist()).rank())


def affine_dimension(vertex_set: VertexSet) -> int:
    return exact_affine_rank(vertex_set.coordinates)


def vertex_values(f: InequalityFamily, vertex_set: VertexSet) -> np.ndarray:
    """den·I 在每个顶点上的精确整数值（den 为系数公分母）"""
    const, coeffs, _ = _integer_coefficients(f, vertex_set.n_parties)
    labels = vertex_set.labels
    coords = vertex_set.coordinates.astype(object)
    total = np.full(len(coords), const, dtype=object)
    for label, coeff in coeffs.items():
        if label not in labels:
            raise ValidationError(f"{f.name} uses S_{label}, beyond polytope order {vertex_set.max_order}")
        total = total + coeff * coords[:, labels.index(label)]
    return total


def facet_check(f: InequalityFamily, n: int, limit: Optional[int] = None) -> FacetReport:
    """有效性 ⇔ 顶点上最小值 ≥ 0；刻面 ⇔ 有效且紧顶点集的仿射秩 = 环境维数 − 1"""
    vertex_set = enumerate_vertices(n, max(f.max_order, 2), limit)
    values = vertex_values(f, vertex_set)
    den = f.denominator()
    idx = int(np.argmin(values))
    min_value = Fraction(int(values[idx]), den)
    min_value = int(min_value) if min_value.denominator == 1 else min_value
    tight = np.array([v == 0 for v in values], dtype=bool)
    tight_rank = exact_affine_rank(vertex_set.coordinates[tight]) if tight.any() else -1
    ambient = affine_dimension(vertex_set)
    report = FacetReport(
        family=f.name,
        n_parties=n,
        valid=min_value >= 0,
        min_value=min_value,
        tight_count=int(tight.sum()),
        tight_affine_rank=tight_rank,
        ambient_dim=ambient,
        argmin=vertex_set.partitions[idx],
    )
    logger.info(f"{f.name} at N={n}: valid={report.valid}, tight={report.tight_count}, "
                f"rank={tight_rank}/{ambient}, facet={report.is_facet}")
    return report


def contains_point(vertex_set: VertexSet, point: CorrelatorVector) -> bool:
    """凸组合可行性线性规划（HiGHS），判断点是否在顶点凸包内"""
    target = point.truncated(vertex_set.max_order).as_array(vertex_set.labels)
    vertices = vertex_set.coordinates.astype(float)
    count = len(vertices)
    a_eq = np.vstack([vertices.T, np.ones((1, count))])
    b_eq = np.concatenate([target, [1.0]])
    result = linprog(np.zeros(count), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    logger.debug(f"convex membership LP status: {result.status} ({result.message})")
    return result.status == 0


def export_vertices(vertex_set: VertexSet, path: str, fmt: Optional[str] = None,
                    run_config: Optional[Dict[str, Any]] = None) -> None:
    """导出顶点集为 JSON 或 CSV"""
    fmt = (fmt or os.path.splitext(path)[1].lstrip('.') or "json").lower()
    labels = vertex_set.labels
    os.makedirs(os.path.dirname(path) if os.path.dirname(path) else '.', exist_ok=True)
    if fmt == "json":
        payload = {
            "N": vertex_set.n_parties,
            "K": vertex_set.max_order,
            "labels": labels,
            "vertices": [[int(v) for v in row] for row in vertex_set.coordinates],
            "partitions": [list(p.as_tuple()) for p in vertex_set.partitions],
        }
        if run_config is not None:
            payload["run_config"] = run_config
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2, sort_keys=True)
    elif fmt == "csv":
        with open(path, 'w', encoding='utf-8', newline='') as f:
            for key, value in (run_config or {}).items():
                f.write(f"# {key}: {value}\n")
            writer = csv.writer(f)
            writer.writerow(["a", "b", "c", "d"] + [f"S_{label}" for label in labels])
            for p, row in zip(vertex_set.partitions, vertex_set.coordinates):
                writer.writerow(list(p.as_tuple()) + [int(v) for v in row])
    else:
        raise ValidationError(f"unsupported vertex export format: {fmt}")
    logger.info(f"Exported {len(vertex_set)} vertices to {path}")
