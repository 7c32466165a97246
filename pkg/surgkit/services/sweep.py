"""
表格校验驱动
按配置的参数范围生成网格，逐表运行检查，合并为确定性的报告
"""

import csv
import io
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .berge import berge_classify, berge_instances, quadratic_dual_identity
from .catalog import Catalog, load_catalog
from .core import FamilyError, SurgkitError
from .families import (
    STATUS_FAIL, STATUS_INFO, STATUS_PASS, CheckEntry, family_pk, specialize_check,
    specialize_symbolic, square_identity, verify_record,
)
from .formula import SYMBOLS
from .graph_sphere import GRAPH_TABLE, GraphSphereDescriptor, graph_ambient, graph_certify, graph_sphere_solve
from .seifert import SEIFERT_TABLE_RULES, brieskorn_match, is_homology_sphere, table6_instances

# 命令行表名 -> 目录表名
TABLE_KEYS = {"1": "T1", "2": "T2", "3": "T3", "4": "T4", "5": "T5", "6": "T6", "p": "P", "graph": GRAPH_TABLE}
VERIFY_TABLES = ("1", "2", "3", "4", "5", "6", "p", "s", "graph")

Range = Tuple[int, int]


@dataclass
class SweepOptions:
    table: str
    ranges: Dict[str, Range] = field(default_factory=dict)
    bound: int = 1
    max_length: int = 12
    workers: int = 1
    variant: Optional[int] = None
    pq_bound: int = 12
    max_multiplicity: int = 9

    def meta(self) -> Dict[str, Any]:
        """报告头；不含 workers，保证并行与串行输出一致"""
        meta: Dict[str, Any] = {
            "table": self.table,
            "ranges": {k: list(v) for k, v in sorted(self.ranges.items())},
            "bound": self.bound,
            "max_search_length": self.max_length,
        }
        if self.table == "graph":
            meta["variant"] = self.variant
            meta["pq_bound"] = self.pq_bound
        if self.table == "s":
            meta["max_multiplicity"] = self.max_multiplicity
        return meta


def build_options(
    table: str,
    overrides: Optional[Mapping[str, Range]] = None,
    bound: Optional[int] = None,
    workers: Optional[int] = None,
    variant: Optional[int] = None,
    pq_bound: Optional[int] = None,
    settings: Optional[Mapping[str, Any]] = None
) -> SweepOptions:
    """
    配置默认值 < 环境变量 SURGKIT_WORKERS < 命令行参数

    异常:
        FamilyError: 表名未知或范围上下界颠倒
    """
    if table not in VERIFY_TABLES:
        raise FamilyError(f"未知的表 {table}，可选 {list(VERIFY_TABLES)}")
    if settings is None:
        from ..config_manager import config_manager
        settings = config_manager.verify_settings()

    table_cfg = dict(settings.get("ranges", {}).get(table, {}))
    scalars = {k: table_cfg.pop(k) for k in ("max_multiplicity", "pq_bound") if k in table_cfg}
    ranges = {name: (int(lo), int(hi)) for name, (lo, hi) in table_cfg.items()}
    for name, (lo, hi) in (overrides or {}).items():
        ranges[name] = (int(lo), int(hi))
    for name, (lo, hi) in ranges.items():
        if lo > hi:
            raise FamilyError(f"{name} 的范围 [{lo}, {hi}] 上下界颠倒")

    if workers is None:
        env = os.environ.get("SURGKIT_WORKERS", "").strip()
        workers = int(env) if env.isdigit() else int(settings.get("workers", 1))

    return SweepOptions(
        table=table,
        ranges=ranges,
        bound=int(bound if bound is not None else settings.get("bound", 1)),
        max_length=int(settings.get("max_search_length", 12)),
        workers=max(1, workers),
        variant=variant,
        pq_bound=int(pq_bound if pq_bound is not None else scalars.get("pq_bound", 12)),
        max_multiplicity=int(scalars.get("max_multiplicity", 9)),
    )


# ==================== 参数网格 ====================

def _values(name: str, ranges: Mapping[str, Range]) -> List[int]:
    if name == "sigma":
        return [-1, 1]
    if name not in ranges:
        raise FamilyError(f"缺少参数 {name} 的范围")
    lo, hi = ranges[name]
    values = list(range(lo, hi + 1))
    # ℓ = 0 不在任何族里
    return [v for v in values if v != 0] if name == "l" else values


def parameter_grid(params: Sequence[str], ranges: Mapping[str, Range]) -> List[Dict[str, int]]:
    names = list(params)
    return [dict(zip(names, combo)) for combo in itertools.product(*[_values(n, ranges) for n in names])]


# ==================== 工作单元 ====================
# 单元是可 pickle 的元组，子进程里按路径重新加载目录

def _record_unit(table: str, type_tag: str, params: Dict[str, int], bound: int, max_length: int) -> List[CheckEntry]:
    catalog = load_catalog()
    row = catalog.row(table, type_tag)
    try:
        rec = family_pk(table, type_tag, params, catalog)
    except FamilyError as e:
        return [CheckEntry.make(row.row_id, params, "instance", STATUS_INFO, skipped=str(e))]
    return verify_record(rec, row, bound, max_length)


def _graph_unit(variant: int, P: int, Q: int, m: int, l: int, bound: int, max_length: int) -> List[CheckEntry]:
    return graph_certify(GraphSphereDescriptor(variant, P, Q, m), l, bound, max_length)


_UNIT_RUNNERS = {"record": _record_unit, "graph": _graph_unit}


def run_unit(unit: Tuple[Any, ...]) -> List[CheckEntry]:
    kind, args = unit[0], unit[1:]
    return _UNIT_RUNNERS[kind](*args)


def _run_units(units: List[Tuple[Any, ...]], workers: int) -> List[CheckEntry]:
    entries: List[CheckEntry] = []
    if workers > 1 and len(units) > 1:
        chunk = max(1, len(units) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for result in executor.map(run_unit, units, chunksize=chunk):
                entries.extend(result)
    else:
        for unit in units:
            entries.extend(run_unit(unit))
    return entries


def _record_units(catalog: Catalog, table: str, ranges: Mapping[str, Range], opts: SweepOptions) -> List[Tuple[Any, ...]]:
    cat_table = catalog.table(table)
    grid = parameter_grid(cat_table.params, ranges)
    units = []
    for row in cat_table.rows:
        seen = set()
        for point in grid:
            if row.sporadic:
                point = {k: v for k, v in point.items() if k != "l"}
            key = tuple(sorted(point.items()))
            if key in seen:
                continue
            seen.add(key)
            units.append(("record", table, row.type_tag, point, opts.bound, opts.max_length))
    return units


# ==================== 分表检查 ====================

def _berge_entries(catalog: Catalog, opts: SweepOptions) -> List[CheckEntry]:
    entries = []
    kmin, kmax = opts.ranges.get("k", (1, 30))
    for tag, p, k in berge_instances(kmin, kmax):
        tags = sorted(berge_classify(p, k))
        entries.append(CheckEntry.make(f"T1.{tag}", {"p": p, "k": k}, "berge_classify",
                                       STATUS_PASS if tag in tags else STATUS_FAIL, expected=tag, tags=tags))
    for row in catalog.table("T1").rows:
        if row.berge != "VII/VIII":
            continue
        found = quadratic_dual_identity(row.p.expr, row.k.expr, SYMBOLS["l"])
        witness = {"p": row.p.text, "k": row.k.text}
        if found:
            witness.update(a=found[0], b=found[1], multiple=found[2])
        entries.append(CheckEntry.make(row.row_id, {}, "berge_identity",
                                       STATUS_PASS if found else STATUS_FAIL, **witness))
    return entries


def _square_entries(catalog: Catalog, opts: SweepOptions) -> List[CheckEntry]:
    entries = []
    for row in catalog.table("T3").rows:
        if row.square is None:
            continue
        for l in _values("l", opts.ranges):
            try:
                ok = square_identity(row.type_tag, l, catalog)
            except SurgkitError as e:
                entries.append(CheckEntry.make(row.row_id, {"l": l}, "square", STATUS_FAIL, error=str(e)))
                continue
            entries.append(CheckEntry.make(row.row_id, {"l": l}, "square", STATUS_PASS if ok else STATUS_FAIL,
                                           square=row.square.integer({"l": l}), pair=row.square_pair))
    return entries


def _specialization_entries(catalog: Catalog, source: str, opts: SweepOptions) -> List[CheckEntry]:
    entries = []
    for spec in catalog.specializations:
        if spec.source != source:
            continue
        names = [n for n in catalog.table(spec.target).params if n not in spec.fixed]
        grid = parameter_grid(names, opts.ranges)
        entries.extend(specialize_check(spec, grid, catalog))
        entries.extend(specialize_symbolic(spec, catalog))
    return entries


def _seifert_entries(opts: SweepOptions) -> List[CheckEntry]:
    """表 s 的实例：三纤维同调球须与同重数的 Brieskorn 球一致（允许反定向）"""
    entries = []
    lo, hi = opts.ranges.get("param", (1, 6))
    values = list(range(lo, hi + 1))
    for type_tag in sorted(SEIFERT_TABLE_RULES):
        names = SEIFERT_TABLE_RULES[type_tag]["params"]
        grid = {name: values for name in names}
        for params, wild, data in table6_instances(type_tag, grid, opts.max_multiplicity):
            if not is_homology_sphere(data):
                continue
            point = dict(params)
            for i, (a, b) in enumerate(wild, start=1):
                point[f"w{i}_a"] = a
                point[f"w{i}_b"] = b
            try:
                match = brieskorn_match(data)
            except SurgkitError as e:
                entries.append(CheckEntry.make(f"S.{type_tag}", point, "brieskorn", STATUS_FAIL,
                                               data=str(data), error=str(e)))
                continue
            entries.append(CheckEntry.make(f"S.{type_tag}", point, "brieskorn",
                                           STATUS_PASS if match else STATUS_FAIL,
                                           data=str(data), triple=str(match) if match else None))
    return entries


def _graph_units(catalog: Catalog, opts: SweepOptions) -> Tuple[List[CheckEntry], List[Tuple[Any, ...]]]:
    entries: List[CheckEntry] = []
    units = []
    variants = [opts.variant] if opts.variant else sorted(int(v) for v in catalog.table(GRAPH_TABLE).variants)
    for variant in variants:
        for m in _values("m", opts.ranges):
            for desc in graph_sphere_solve(variant, m, opts.pq_bound, catalog):
                entries.append(CheckEntry.make(f"GS{variant}", {"P": desc.P, "Q": desc.Q, "m": m}, "diophantine",
                                               STATUS_PASS, value=desc.condition_value(catalog)))
                entries.append(graph_ambient(desc, catalog))
                if desc.degenerate:
                    continue
                for l in _values("l", opts.ranges):
                    units.append(("graph", variant, desc.P, desc.Q, m, l, opts.bound, opts.max_length))
    return entries, units


# ==================== 驱动 ====================

def run_sweep(opts: SweepOptions, catalog: Optional[Catalog] = None) -> List[CheckEntry]:
    """
    运行一张表的全部检查，返回按 (行, 参数, 检查) 排序的条目
    """
    catalog = catalog or load_catalog()
    entries: List[CheckEntry] = []
    units: List[Tuple[Any, ...]] = []

    if opts.table == "s":
        entries.extend(_seifert_entries(opts))
    elif opts.table == "graph":
        graph_entries, units = _graph_units(catalog, opts)
        entries.extend(graph_entries)
    else:
        table = TABLE_KEYS[opts.table]
        units = _record_units(catalog, table, opts.ranges, opts)
        if opts.table == "1":
            entries.extend(_berge_entries(catalog, opts))
        elif opts.table == "3":
            entries.extend(_square_entries(catalog, opts))
        elif opts.table in ("4", "5", "6"):
            entries.extend(_specialization_entries(catalog, table, opts))

    entries.extend(_run_units(units, opts.workers))
    return sorted(entries, key=lambda e: e.sort_key())


def summarize(entries: Iterable[CheckEntry]) -> Dict[str, int]:
    counts = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_INFO: 0}
    for entry in entries:
        counts[entry.status] += 1
    counts["total"] = sum(counts.values())
    return counts


def build_report(opts: SweepOptions, entries: Sequence[CheckEntry], catalog: Catalog) -> Dict[str, Any]:
    """报告正文不含时间戳，同样的输入得到相同的 JSON"""
    meta = opts.meta()
    meta["catalog_version"] = catalog.version
    return {
        "meta": meta,
        "summary": summarize(entries),
        "entries": [entry.to_json() for entry in entries],
    }


def report_to_csv(report: Mapping[str, Any]) -> str:
    """每个 (行, 参数点, 检查) 一行；参数写成 k=v;k=v，见证写成紧凑 JSON"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["row", "params", "check", "status", "witness"])
    for entry in report["entries"]:
        params = ";".join(f"{k}={v}" for k, v in sorted(entry["params"].items()))
        witness = json.dumps(entry["witness"], ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        writer.writerow([entry["row"], params, entry["check"], entry["status"], witness])
    return buffer.getvalue()
