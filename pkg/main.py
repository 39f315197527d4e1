#!/usr/bin/env python3
"""
置换不变 Bell 不等式工具 - 命令行入口

子命令输出 CSV（曲线）或 JSON（结构化对象），每个输出文件都嵌入完整的运行配置。
退出码：0 成功，1 经典检查失败 / 未找到违背，2 求解或证书失败，64 参数错误。
"""

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config_loader import get_config, mu_grid_values, reload_config
from correlator_algebra import verify_classical_bound
from dicke_operators import (DickeSpace, bell_operator, directions_from_angles, dump_operator, family_directions,
                             optimize_theta, theta_slice)
from exceptions import (InvalidCertificate, NoViolationFound, PIBIError, SizeLimit, SolverFailure,
                        ValidationError)
from inequality_catalog import builtin_catalog, dump_catalog, load_catalog, resolve_families
from moment_sdp import build_moment_spec, certify, membership_sdp, optimize_alpha_beta, optimize_directions
from nongauss_analyzer import excess_kurtosis, oat_nongauss_scan, wigner_field_rows, wigner_negativity
from oat_states import (OATParams, correlator_point, evaluate_certificate_curve, optimize_angles,
                        optimize_state_angles, scan_mu)
from sdp_module import reset_manager
from sdp_module.config.settings import get_settings, reload_settings
from sdp_module.utils.helpers import (parse_float_range, parse_int_range, setup_logging, write_csv_result,
                                      write_json_result)
from symmetric_polytope import affine_dimension, enumerate_vertices, export_vertices, facet_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SOLVER = 2
EXIT_USAGE = 64

RUN_CONFIG_SCHEMA = {
    "subcommand": "verify-classical | vertices | facet-check | violation | oat-scan | noise-robustness | "
                  "sdp-membership | i4-state | nongauss | catalog",
    "families": "comma separated family names, e.g. I2,I3,I3^(5),I4",
    "n_values": "integer N or range: 50, 5..100, 4,8,16",
    "mu_values": "real list 0.1,0.2 or range 0..0.6 with --mu-points",
    "eta": "white-noise purity in [0, 1]",
    "constrain": "none | one-third-moment",
    "accuracy": "positive solver accuracy (default from sdp_config.yaml)",
    "out": "output path; .csv or .json",
    "format": "csv | json (overrides the extension)",
}


class UsageError(ValidationError):
    """命令行参数错误"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        _print_schema()
        sys.exit(EXIT_USAGE)


def _print_schema():
    print("RunConfig schema:", file=sys.stderr)
    print(json.dumps(RUN_CONFIG_SCHEMA, indent=2, ensure_ascii=False), file=sys.stderr)


@dataclass
class RunConfig:
    """解析后的运行配置"""
    subcommand: str
    families: List[str] = field(default_factory=list)
    n_values: List[int] = field(default_factory=list)
    mu_values: List[float] = field(default_factory=list)
    eta: float = 1.0
    constrain: str = "none"
    accuracy: Optional[float] = None
    out: Optional[str] = None
    format: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        """数值范围在分发前全部校验，失败抛出 UsageError"""
        if any(n < 1 for n in self.n_values):
            raise UsageError(f"N must be positive: {self.n_values}")
        if any(not 0 <= mu < 2 * math.pi for mu in self.mu_values):
            raise UsageError("mu must lie in [0, 2π)")
        if not 0 <= self.eta <= 1:
            raise UsageError(f"eta must lie in [0, 1], got {self.eta}")
        if self.accuracy is not None and not self.accuracy > 0:
            raise UsageError(f"accuracy must be positive, got {self.accuracy}")
        if self.constrain not in ("none", "one-third-moment"):
            raise UsageError(f"unknown constraint {self.constrain!r}")
        if self.format not in (None, "csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def output_path(self, default_name: str) -> str:
        path = self.out or os.path.join(get_config().get_output_dir(), default_name)
        return path

    def output_format(self, path: str, default: str) -> str:
        if self.format:
            return self.format
        ext = os.path.splitext(path)[1].lstrip('.').lower()
        return ext if ext in ("csv", "json") else default


def _write_rows(config: RunConfig, default_name: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> str:
    path = config.output_path(default_name)
    if config.output_format(path, "csv") == "json":
        return write_json_result(path, {"columns": list(columns), "rows": rows}, config.to_dict())
    return write_csv_result(path, rows, columns, config.to_dict())


def _write_payload(config: RunConfig, default_name: str, payload: Dict[str, Any]) -> str:
    path = config.output_path(default_name)
    return write_json_result(path, payload, config.to_dict())


def _families(args, default: str) -> List:
    extra = load_catalog(args.catalog) if getattr(args, "catalog", None) else []
    if getattr(args, "all", False):
        return builtin_catalog() + list(extra)
    names = (getattr(args, "family", None) or default).split(",")
    return resolve_families(names, extra)


def _mu_values(args) -> List[float]:
    if getattr(args, "mu", None) is None:
        return mu_grid_values(points=args.mu_points)
    return parse_float_range(args.mu, args.mu_points or get_config().get_mu_grid()[2])


def _n_values(args, default: str) -> List[int]:
    return parse_int_range(getattr(args, "n", None) or default)


# ---------------------------------------------------------------- 子命令

def cmd_verify_classical(args) -> int:
    families = _families(args, "I2,I3")
    n_max = args.n_max or get_config().get_verify_n_max()
    config = RunConfig("verify-classical", [f.name for f in families], out=args.out, format=args.format,
                       options={"n_max": n_max})
    config.validate()
    print(f"🔍 穷举验证经典界: {len(families)} 个族, N ≤ {n_max}")
    reports = []
    for family in families:
        report = verify_classical_bound(family, range(family.n_min, n_max + 1))
        worst = report.worst
        if worst is None:
            raise UsageError(f"no N in {family.n_min}..{n_max} for {family.name}")
        status = "✅ PASS" if report.passed else "❌ FAIL"
        print(f"  {status} {family.name:<10} min={worst.min_value} at N={worst.n_parties} {worst.argmin}")
        reports.append(report)
    if args.out:
        _write_payload(config, "verify_classical.json", {"reports": [r.to_dict() for r in reports]})
        print(f"📝 报告已写入: {args.out}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_vertices(args) -> int:
    n_values = _n_values(args, "4")
    config = RunConfig("vertices", n_values=n_values, out=args.out, format=args.format,
                       options={"order": args.order})
    config.validate()
    if len(n_values) != 1:
        raise UsageError("vertices takes a single N")
    vertex_set = enumerate_vertices(n_values[0], args.order)
    path = config.output_path(f"vertices_N{n_values[0]}_K{args.order}.json")
    export_vertices(vertex_set, path, config.output_format(path, "json"), config.to_dict())
    print(f"✅ {len(vertex_set)} 个顶点, 仿射维数 {affine_dimension(vertex_set)}")
    print(f"📝 已导出: {path}")
    return EXIT_OK


def cmd_facet_check(args) -> int:
    families = _families(args, "I2,I3")
    n_values = _n_values(args, "4..8")
    config = RunConfig("facet-check", [f.name for f in families], n_values, out=args.out, format=args.format)
    config.validate()
    rows = []
    for family in families:
        for n in n_values:
            if n < family.n_min:
                continue
            report = facet_check(family, n)
            rows.append(report.to_dict())
            mark = "✅" if report.valid else "❌"
            print(f"  {mark} {family.name:<10} N={n:<4} facet={report.is_facet} "
                  f"rank={report.tight_affine_rank}/{report.ambient_dim}")
    columns = ["family", "N", "valid", "min_value", "tight_count", "tight_affine_rank", "ambient_dim", "is_facet"]
    path = _write_rows(config, "facet_check.csv", rows, columns)
    print(f"📝 已写入: {path}")
    return EXIT_OK if all(row["valid"] for row in rows) else EXIT_CHECK_FAILED


def cmd_violation(args) -> int:
    families = _families(args, "I2,I3")
    n_values = _n_values(args, "5..100")
    config = RunConfig("violation", [f.name for f in families], n_values, out=args.out, format=args.format,
                       options={"theta_grid_points": get_config().get_theta_grid_points()})
    config.validate()
    print(f"🚀 最大量子违背: {', '.join(config.families)}, {len(n_values)} 个 N")
    rows = []
    for family in families:
        for n in n_values:
            if n < family.n_min:
                continue
            optimum = optimize_theta(family, n)
            rows.append({"family": family.name, "N": n, "theta_star": optimum.theta_star, "ratio": optimum.ratio})
        print(f"  ✅ {family.name}: ratio at N={rows[-1]['N']} = {rows[-1]['ratio']:.6f}")
    path = _write_rows(config, "violation.csv", rows, ["family", "N", "theta_star", "ratio"])
    print(f"📝 已写入: {path}")
    return EXIT_OK


def _scan(args, subcommand: str, with_purity: bool) -> int:
    families = _families(args, "I2,I3")
    n_values = _n_values(args, "50")
    mu_values = _mu_values(args)
    config = RunConfig(subcommand, [f.name for f in families], n_values, mu_values, eta=args.eta,
                       out=args.out, format=args.format,
                       options={"angle_starts": get_config().get_angle_starts(),
                                "angle_seed": get_config().get_angle_seed(), "certificate": args.certificate})
    config.validate()
    if len(n_values) != 1:
        raise UsageError(f"{subcommand} takes a single N")
    n = n_values[0]
    print(f"🚀 OAT 扫描 N={n}: {len(mu_values)} 个 μ, 族 {', '.join(config.families)}")
    if args.eta != 1.0 and not with_purity:
        rows = []
        for mu in mu_values:
            row = {"mu": mu}
            for family in families:
                row[f"ratio_{family.name}"] = optimize_angles(family, OATParams(n, mu, args.eta)).ratio
            rows.append(row)
    else:
        rows = [row.to_dict() for row in scan_mu(families, n, mu_values, with_purity=with_purity)]
    columns = ["mu"] + [f"ratio_{f.name}" for f in families]
    if with_purity:
        columns += [f"eta_min_{f.name}" for f in families]
    if args.certificate:
        with open(args.certificate, 'r', encoding='utf-8') as fh:
            cert = json.load(fh)
        coefficients = {label: terms[0][1] for label, terms in cert["coeffs"].items()}
        curve = evaluate_certificate_curve(coefficients, cert["constant"][0][1], n, mu_values, args.eta,
                                           name=cert.get("name", "I3sdp"))
        for row, (_, ratio) in zip(rows, curve):
            row[f"ratio_{cert.get('name', 'I3sdp')}"] = ratio
        columns.append(f"ratio_{cert.get('name', 'I3sdp')}")
    path = _write_rows(config, f"{subcommand.replace('-', '_')}_N{n}.csv", rows, columns)
    print(f"📝 已写入: {path}")
    return EXIT_OK


def cmd_oat_scan(args) -> int:
    return _scan(args, "oat-scan", with_purity=False)


def cmd_noise_robustness(args) -> int:
    return _scan(args, "noise-robustness", with_purity=True)


def cmd_sdp_membership(args) -> int:
    n_values = _n_values(args, "50")
    config = RunConfig("sdp-membership", n_values=n_values, mu_values=[args.mu], eta=args.eta,
                       constrain=args.constrain, accuracy=args.accuracy, out=args.out, format=args.format,
                       options={"angles": args.angles, "alpha": args.alpha, "beta": args.beta,
                                "gamma_grid_points": get_config().get_gamma_grid_points(),
                                "direction_starts": get_config().get_direction_starts(),
                                "lambda_cap": get_settings().lambda_cap,
                                "vertex_tolerance": get_settings().vertex_tolerance})
    config.validate()
    if len(n_values) != 1:
        raise UsageError("sdp-membership takes a single N")
    n = n_values[0]
    accuracy = args.accuracy or get_settings().accuracy
    spec = build_moment_spec(n)
    print(f"🔧 矩矩阵松弛: N={n}, μ={args.mu}, 约束={args.constrain}")

    payload: Dict[str, Any] = {}
    if args.angles:
        try:
            angles = [float(x) for x in args.angles.split(",")]
        except ValueError as e:
            raise UsageError(f"cannot parse --angles {args.angles!r}") from e
        if len(angles) != 4:
            raise UsageError("--angles needs four comma separated values")
        nvec, mvec = directions_from_angles(angles)
        point = correlator_point(OATParams(n, args.mu, args.eta), nvec, mvec, 3)
    else:
        print("🔍 正在搜索最非局域的测量方向...")
        search = optimize_directions(n, args.mu, spec=spec)
        angles, point = list(search.angles), search.point
        payload["direction_search"] = search.to_dict()

    membership = membership_sdp(spec, point, accuracy)
    payload["membership"] = membership.to_dict()
    print(f"  λ* = {membership.lambda_star:.8f}")
    if membership.is_member:
        print("ℹ️ 该点在松弛的外逼近之内，没有分离证书")
        payload["point"] = point.to_dict()
        path = _write_payload(config, f"sdp_membership_N{n}.json", payload)
        print(f"📝 已写入: {path}")
        return EXIT_OK

    alpha = beta = None
    if args.constrain == "one-third-moment":
        if args.alpha is not None and args.beta is not None:
            norm = math.hypot(args.alpha, args.beta)
            alpha, beta = args.alpha / norm, args.beta / norm
        else:
            print("🔍 正在扫描 α/β...")
            optimum = optimize_alpha_beta(spec, point)
            alpha, beta = optimum.alpha, optimum.beta
            payload["alpha_beta"] = {"alpha": alpha, "beta": beta, "ratio": optimum.ratio,
                                     "lambda_star": optimum.lambda_star}
            print(f"  α/β = {optimum.ratio:.6f}, 受限 λ* = {optimum.lambda_star:.8f}")

    cert = certify(spec, point, alpha, beta, accuracy)
    cert.meta.update({"mu": args.mu, "eta": args.eta, "angles": angles})
    payload.update(cert.to_family())
    path = _write_payload(config, f"certificate_N{n}.json", payload)
    print(f"✅ 证书已验证: 顶点最小值 {cert.min_vertex_value:.3g}, 目标点值 {cert.evaluate(point):.6g}")
    print(f"📝 已写入: {path}")
    return EXIT_OK


def cmd_i4_state(args) -> int:
    families = _families(args, "I4")
    n_values = _n_values(args, "50")
    config = RunConfig("i4-state", [f.name for f in families], n_values, out=args.out, format=args.format,
                       options={"wigner_out": args.wigner_out, "operator_out": args.operator_out,
                                "compare": args.compare, "slice_points": args.slice_points})
    config.validate()
    if len(families) != 1 or len(n_values) != 1:
        raise UsageError("i4-state takes a single family and a single N")
    family, n = families[0], n_values[0]
    print(f"🚀 {family.name} 最小本征态: N={n}")
    optimum = optimize_theta(family, n)
    state = optimum.eigenvector
    kurtosis = excess_kurtosis(state)
    negativity = wigner_negativity(state)
    print(f"  ratio={optimum.ratio:.6f}, K_ex={kurtosis.value:.4f}, 𝒩={negativity.value:.4f}")

    own_angles = [0.0, 0.0, 0.0, optimum.theta_star]
    thetas = np.linspace(0.0, math.pi, args.slice_points)
    payload: Dict[str, Any] = {
        "family": family.name,
        **optimum.to_dict(),
        "kurtosis": kurtosis.to_dict(),
        "negativity": {"value": negativity.value, "refinement": negativity.refinement,
                       "history": negativity.history},
        "eigenvector": {"real": np.real(state).tolist(), "imag": np.imag(state).tolist()},
        "theta_profile": {family.name: theta_slice(family, state, own_angles, 3, thetas)},
    }
    for other in resolve_families(args.compare.split(",")) if args.compare else []:
        angles, ratio = optimize_state_angles(other, state)
        payload.setdefault("comparison", {})[other.name] = {"angles": list(angles), "ratio": ratio}
        payload["theta_profile"][other.name] = theta_slice(other, state, list(angles), 3, thetas)
        flag = "⚠️ 未揭示 Bell 关联" if ratio >= 0 else "✅ 违背"
        print(f"  {other.name} 在自身最优角: ratio={ratio:.6f} {flag}")

    path = _write_payload(config, f"i4_state_N{n}.json", payload)
    print(f"📝 已写入: {path}")
    if args.wigner_out:
        write_csv_result(args.wigner_out, wigner_field_rows(state), ["theta", "phi", "W"], config.to_dict())
        print(f"📝 Wigner 函数已写入: {args.wigner_out}")
    if args.operator_out:
        nvec, mvec = family_directions(optimum.theta_star)
        dump_operator(bell_operator(family, DickeSpace(n), nvec, mvec), args.operator_out, state,
                      {"run_config": config.to_dict()})
        print(f"📝 Bell 算符已写入: {args.operator_out}")
    return EXIT_OK


def cmd_nongauss(args) -> int:
    n_values = _n_values(args, "50")
    mu_values = _mu_values(args)
    config = RunConfig("nongauss", n_values=n_values, mu_values=mu_values, out=args.out, format=args.format,
                       options={"kurtosis_grid": get_config().get_kurtosis_grid(),
                                "wigner_tolerance": get_config().get_wigner_tolerance(),
                                "negativity": not args.no_negativity})
    config.validate()
    if len(n_values) != 1:
        raise UsageError("nongauss takes a single N")
    print(f"🚀 非高斯性扫描 N={n_values[0]}: {len(mu_values)} 个 μ")
    rows = oat_nongauss_scan(n_values[0], mu_values, with_negativity=not args.no_negativity)
    columns = ["mu", "K_ex"] + ([] if args.no_negativity else ["negativity"])
    path = _write_rows(config, f"nongauss_N{n_values[0]}.csv", rows, columns)
    print(f"📝 已写入: {path}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    families = _families(args, ",".join(f.name for f in builtin_catalog()))
    print(f"📋 {len(families)} 个不等式族:")
    for family in families:
        print(f"  {family.name:<10} K={family.max_order}  N≥{family.n_min}  {family.description}")
    if args.out:
        dump_catalog(families, args.out)
        print(f"📝 已导出: {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- 参数解析

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(description='置换不变 Bell 不等式工具')
    parser.add_argument('--config', help='数值配置文件 (config.yml)')
    parser.add_argument('--sdp-config', help='求解器配置文件 (sdp_config.yaml)')
    parser.add_argument('--log-level', help='日志级别，默认取配置文件')
    parser.add_argument('--format', choices=['csv', 'json'], help='输出格式，覆盖扩展名推断')
    parser.add_argument('--catalog', help='用户不等式目录 JSON，可在 --family 中引用')

    sub = parser.add_subparsers(dest='subcommand', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('verify-classical', help='穷举划分验证经典界')
    p.add_argument('--family', help='族名，逗号分隔')
    p.add_argument('--all', action='store_true', help='验证全部内置族')
    p.add_argument('--n-max', type=int, help='N 上限')
    p.add_argument('--out', help='JSON 报告路径')
    p.set_defaults(handler=cmd_verify_classical)

    p = sub.add_parser('vertices', help='枚举对称多面体顶点')
    p.add_argument('--n', help='粒子数 N')
    p.add_argument('--order', type=int, default=3, choices=[2, 3, 4], help='关联阶数 K')
    p.add_argument('--out', help='输出路径 (.json / .csv)')
    p.set_defaults(handler=cmd_vertices)

    p = sub.add_parser('facet-check', help='有效性与刻面检查')
    p.add_argument('--family', help='族名，逗号分隔')
    p.add_argument('--all', action='store_true')
    p.add_argument('--n', help='N 或范围，如 4..8')
    p.add_argument('--out', help='输出路径')
    p.set_defaults(handler=cmd_facet_check)

    p = sub.add_parser('violation', help='对称子空间 Bell 算符的最大量子违背')
    p.add_argument('--family', help='族名，逗号分隔')
    p.add_argument('--all', action='store_true')
    p.add_argument('--n', help='N 范围，如 5..100')
    p.add_argument('--out', help='输出路径')
    p.set_defaults(handler=cmd_violation)

    for name, handler, text in (('oat-scan', cmd_oat_scan, 'OAT 态相对违背随 μ 的曲线'),
                                ('noise-robustness', cmd_noise_robustness, 'OAT 态最小纯度 η 随 μ 的曲线')):
        p = sub.add_parser(name, help=text)
        p.add_argument('--family', help='族名，逗号分隔')
        p.add_argument('--all', action='store_true')
        p.add_argument('--n', help='粒子数 N')
        p.add_argument('--mu', help='μ 列表或范围，如 0..0.6')
        p.add_argument('--mu-points', type=int, help='μ 范围的点数')
        p.add_argument('--eta', type=float, default=1.0, help='纯度 η')
        p.add_argument('--certificate', help='附加一条证书不等式曲线 (JSON)')
        p.add_argument('--out', help='输出路径')
        p.set_defaults(handler=handler)

    p = sub.add_parser('sdp-membership', help='矩矩阵松弛成员判定与证书提取')
    p.add_argument('--n', help='粒子数 N')
    p.add_argument('--mu', type=float, required=True, help='OAT 扭曲参数 μ')
    p.add_argument('--eta', type=float, default=1.0, help='纯度 η')
    p.add_argument('--angles', help='固定测量角 φ0,θ0,φ1,θ1；缺省时搜索方向')
    p.add_argument('--constrain', default='none', choices=['none', 'one-third-moment'])
    p.add_argument('--alpha', type=float, help='固定 α（与 --beta 一起使用）')
    p.add_argument('--beta', type=float, help='固定 β')
    p.add_argument('--accuracy', type=float, help='求解精度')
    p.add_argument('--out', help='证书 JSON 路径')
    p.set_defaults(handler=cmd_sdp_membership)

    p = sub.add_parser('i4-state', help='最小本征态的违背、超峰度与 Wigner 负体积')
    p.add_argument('--family', help='族名，默认 I4')
    p.add_argument('--n', help='粒子数 N')
    p.add_argument('--compare', default='I2', help='在该态上比较的族，逗号分隔')
    p.add_argument('--slice-points', type=int, default=181, help='θ 剖面点数')
    p.add_argument('--wigner-out', help='Wigner 函数 CSV 路径')
    p.add_argument('--operator-out', help='Bell 算符与本征矢 JSON 路径')
    p.add_argument('--out', help='输出路径')
    p.set_defaults(handler=cmd_i4_state)

    p = sub.add_parser('nongauss', help='OAT 态超峰度与 Wigner 负体积随 μ 的曲线')
    p.add_argument('--n', help='粒子数 N')
    p.add_argument('--mu', help='μ 列表或范围')
    p.add_argument('--mu-points', type=int, help='μ 范围的点数')
    p.add_argument('--no-negativity', action='store_true', help='只计算超峰度')
    p.add_argument('--out', help='输出路径')
    p.set_defaults(handler=cmd_nongauss)

    p = sub.add_parser('catalog', help='列出或导出不等式目录')
    p.add_argument('--family', help='族名，逗号分隔')
    p.add_argument('--all', action='store_true')
    p.add_argument('--out', help='导出 JSON 路径')
    p.set_defaults(handler=cmd_catalog)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """解析参数、加载配置并分发子命令，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        reload_config(args.config)
    if args.sdp_config:
        reload_settings(args.sdp_config)
        reset_manager()
    setup_logging(args.log_level or get_config().get_log_level())

    try:
        return args.handler(args)
    except (SolverFailure, InvalidCertificate) as e:
        logger.error(f"{args.subcommand}: {e}")
        print(f"❌ 求解失败: {e}")
        return EXIT_SOLVER
    except NoViolationFound as e:
        print(f"❌ {e}")
        return EXIT_CHECK_FAILED
    except (ValidationError, SizeLimit) as e:
        parser.print_usage(sys.stderr)
        print(f"❌ 参数错误: {e}", file=sys.stderr)
        _print_schema()
        return EXIT_USAGE
    except PIBIError as e:
        logger.error(f"{args.subcommand}: {e}")
        print(f"❌ {e}")
        return EXIT_CHECK_FAILED


def main():
    """主函数"""
    sys.exit(run())


if __name__ == "__main__":
    main()
