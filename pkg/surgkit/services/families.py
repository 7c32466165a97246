"""
手术族模块
按目录实例化 (p,k) 记录、拼装各类型的手术连分数，以及逐条记录和跨表的一致性校验
"""

from dataclasses import dataclass, field
from fractions import Fraction as _Q
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .catalog import Catalog, CatalogRow, Specialization, compile_template, expand_template, load_catalog
from .core import FamilyError, LensError, PillowError, SurgkitError
from .exact import ContinuedFraction, Fraction, cf_eval, cf_expand, format_cf, gcd_ext, parse_cf
from .formula import compiled, symbolic_equal
from .lens import LensSpace, dual_sign, homeo, lens_normalize, mod_inverse, normalize_dual_class, surgery_param
from .pillow import B_PATTERNS, b_search, classify_tags, matches_pattern, p_sequence
from .seifert import BrieskornTriple, brieskorn_data, is_homology_sphere

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_INFO = "info"


# ==================== 记录与报告条目 ====================

@dataclass
class FamilyRecord:
    """
    目录一行在一个参数点上的实例

    ambient 为 None 表示 S^3；k_raw 保留公式的原始值以便核对
    """

    table: str
    type_tag: str
    row_id: str
    params: Dict[str, int]
    p: int
    k: int
    k_raw: int
    gprime: Optional[int] = None
    ambient: Optional[Any] = None
    cf: Optional[ContinuedFraction] = None
    cf_source: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "table": self.table,
            "type": self.type_tag,
            "row": self.row_id,
            "params": dict(self.params),
            "p": self.p,
            "k": self.k,
            "k_raw": self.k_raw,
            "gprime": self.gprime,
            "ambient": self.ambient.to_json() if self.ambient is not None else "S3",
            "cf": format_cf(self.cf) if self.cf is not None else None,
            "cf_source": self.cf_source,
        }


@dataclass(frozen=True)
class CheckEntry:
    row: str
    params: Tuple[Tuple[str, int], ...]
    check: str
    status: str
    witness: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def make(cls, row: str, params: Mapping[str, int], check: str, status: str, **witness: Any) -> "CheckEntry":
        return cls(row, tuple(sorted(params.items())), check, status, witness)

    def sort_key(self) -> Tuple[Any, ...]:
        return (self.row, self.params, self.check)

    def to_json(self) -> Dict[str, Any]:
        return {
            "row": self.row,
            "params": dict(self.params),
            "check": self.check,
            "status": self.status,
            "witness": self.witness,
        }


# ==================== 实例化 ====================

def _values_for(row: CatalogRow, params: Mapping[str, int]) -> Dict[str, int]:
    values = {k: int(v) for k, v in params.items()}
    # 零星行（如 K）不含 ℓ，表条件里的 ℓ ≠ 0 用占位值满足
    if row.sporadic:
        values.setdefault("l", 1)
    return values


def family_pk(
    table: str,
    type_tag: str,
    params: Mapping[str, int],
    catalog: Optional[Catalog] = None
) -> FamilyRecord:
    """
    按目录公式求出一行在给定参数下的 (p,k) 记录

    参数:
        table: 表名，如 T2 / T4 / P
        type_tag: 类型标签，如 A1 / H1 / K
        params: 参数取值，ℓ 用 l，± 用 sigma

    返回:
        FamilyRecord，k 已按 𝒦 约定映到 (0,p)

    异常:
        FamilyError: 参数不满足表条件、p <= 1 或 gcd(p,k) != 1
        CatalogError: 表或类型不存在
    """
    catalog = catalog or load_catalog()
    cat_table = catalog.table(table)
    row = cat_table.row(type_tag)
    values = _values_for(row, params)

    failed = cat_table.failed_condition(values)
    if failed:
        raise FamilyError(f"{row.row_id} 参数 {dict(params)} 不满足条件 {failed}")

    p = row.p.integer(values)
    if p < 2:
        raise FamilyError(f"{row.row_id} 在 {dict(params)} 处 p = {p} <= 1")
    k_raw = row.k.integer(values)
    if gcd_ext(p, k_raw)[0] != 1:
        raise FamilyError(f"{row.row_id} 在 {dict(params)} 处 gcd({p}, {k_raw}) != 1")
    try:
        k = normalize_dual_class(p, k_raw)
    except LensError as e:
        raise FamilyError(str(e))

    triple = row.ambient(values)
    ambient = brieskorn_data(*sorted(triple)) if triple else None

    return FamilyRecord(
        table=table,
        type_tag=type_tag,
        row_id=row.row_id,
        params={k_: v for k_, v in values.items() if k_ in params or not row.sporadic},
        p=p,
        k=k,
        k_raw=k_raw,
        gprime=row.gprime.integer(values) if row.gprime is not None else None,
        ambient=ambient,
        cf=row.build_aseq(values),
        cf_source=row.cf_source,
    )


# ==================== 手术连分数拼装 ====================

Slot = Union[int, str, Fraction, _Q, Sequence[int]]


def _slot_cf(params: Mapping[str, Any], name: str, allow_empty: bool = False) -> List[int]:
    """嵌入的有理数槽位：整数、"p/q"、"[a1,...]"、Fraction 或整数列表"""
    if name not in params:
        raise FamilyError(f"缺少连分数槽位 {name}")
    value = params[name]
    if isinstance(value, Fraction):
        cf = cf_expand(value)
    elif isinstance(value, _Q):
        cf = cf_expand(Fraction.from_rational(value))
    elif isinstance(value, bool):
        raise FamilyError(f"槽位 {name} 不接受布尔值")
    elif isinstance(value, int):
        cf = [value]
    elif isinstance(value, str):
        text = value.strip()
        cf = parse_cf(text) if text.startswith("[") else cf_expand(Fraction.parse(text))
    else:
        try:
            cf = [int(a) for a in value]
        except (TypeError, ValueError):
            raise FamilyError(f"槽位 {name} 不是连分数: {value!r}")
    if not cf and not allow_empty:
        raise FamilyError(f"槽位 {name} 的连分数为空")
    return cf


def _slot_int(params: Mapping[str, Any], name: str) -> int:
    if name not in params:
        raise FamilyError(f"缺少整数参数 {name}")
    value = params[name]
    if isinstance(value, bool) or not isinstance(value, int):
        raise FamilyError(f"参数 {name} 必须是整数，收到 {value!r}")
    return value


def _assemble_a(l: int, params: Mapping[str, Any]) -> List[int]:
    rev = _slot_cf(params, "beta")[::-1]
    rev[-1] -= 1
    return rev + [l + 1, _slot_int(params, "a") + 2, -l]


def _assemble_b(l: int, params: Mapping[str, Any]) -> List[int]:
    beta = _slot_cf(params, "beta")
    gamma = _slot_cf(params, "gamma")
    return beta[::-1] + [l, _slot_int(params, "a"), 2, -l + 1] + gamma


def _assemble_c1d1(l: int, params: Mapping[str, Any]) -> List[int]:
    m = _slot_int(params, "m")
    return _slot_cf(params, "gamma")[::-1] + [l, -m - 1, _slot_int(params, "b"), -l]


def _assemble_c2d2(l: int, params: Mapping[str, Any]) -> List[int]:
    m = _slot_int(params, "m")
    return _slot_cf(params, "gamma")[::-1] + [l + 1, _slot_int(params, "a"), -m - 1, -l - 1]


def _assemble_e(l: int, params: Mapping[str, Any]) -> List[int]:
    # 印刷式 [2,ℓ+1,a,-m,b-ℓ] 中的 b-ℓ 应读作两项 b, -ℓ
    return [2, l + 1, _slot_int(params, "a"), -_slot_int(params, "m"), _slot_int(params, "b"), -l]


def _assemble_fgh(l: int, params: Mapping[str, Any]) -> List[int]:
    a = _slot_int(params, "a")
    b = _slot_int(params, "b")
    return _slot_cf(params, "gamma")[::-1] + [2, l + 1, a + 1, b + 1, -l]


def _assemble_i(l: int, params: Mapping[str, Any]) -> List[int]:
    # 变形后的形式 [..,ℓ+1,2,c+1,2,1-ℓ,..]；字面形式 [..,ℓ+1,-2,c,-2,-ℓ,..] 给不出表中的 p
    c = _slot_int(params, "c")
    return _slot_cf(params, "alpha")[::-1] + [l + 1, 2, c + 1, 2, 1 - l] + _slot_cf(params, "beta")


def _assemble_j(l: int, params: Mapping[str, Any]) -> List[int]:
    return _slot_cf(params, "alpha")[::-1] + [l + 1, 3, 3, -l] + _slot_cf(params, "beta")


def _assemble_k(l: int, params: Mapping[str, Any]) -> List[int]:
    # 印刷的 [∓n,6,3,3,3,2] 不给出 p = 225n ± 34，这里用 [∓n,7,2,-2,-3,-3]
    rev = _slot_cf(params, "alpha")[::-1]
    rev[-1] += 1
    return rev + [2, -2, -3, -3]


def _assemble_graph(l: int, params: Mapping[str, Any]) -> List[int]:
    m = _slot_int(params, "m")
    alpha = _slot_cf(params, "alpha", allow_empty=True)
    return alpha[::-1] + [l + 1, 2, -m, _slot_int(params, "c"), -l]


SURGERY_CF_RULES: Dict[str, Callable[[int, Mapping[str, Any]], List[int]]] = {
    "A": _assemble_a,
    "B": _assemble_b,
    "C1D1": _assemble_c1d1,
    "C2D2": _assemble_c2d2,
    "E": _assemble_e,
    "FGH": _assemble_fgh,
    "I": _assemble_i,
    "J": _assemble_j,
    "K": _assemble_k,
    "GS": _assemble_graph,
}

# 不含 ℓ 的类型
_NO_LENGTH_PARAM = {"K"}


def surgery_cf(type_tag: str, params: Mapping[str, Any], allow_zero_l: bool = False) -> ContinuedFraction:
    """
    按类型拼装手术连分数，嵌入槽位按公式的（可能反转的）顺序展开

    参数:
        type_tag: A / B / C1D1 / C2D2 / E / FGH / I / J / K / GS
        params: l 与该类型的槽位（beta/gamma/alpha 为有理数或连分数，a/b/c/m 为整数）
        allow_zero_l: 命题内部换元后的 ℓ（如 J 型的 -ℓ-1）可以为 0

    返回:
        整数序列

    异常:
        FamilyError: 未知类型、槽位缺失或格式错误、未允许时 ℓ = 0
    """
    if type_tag not in SURGERY_CF_RULES:
        raise FamilyError(f"未知的手术类型 {type_tag}，可选 {sorted(SURGERY_CF_RULES)}")
    l = 0
    if type_tag not in _NO_LENGTH_PARAM:
        l = _slot_int(params, "l")
        if l == 0 and not allow_zero_l:
            raise FamilyError("ℓ 必须为非零整数")
    try:
        return SURGERY_CF_RULES[type_tag](l, params)
    except SurgkitError as e:
        raise FamilyError(f"{type_tag} 型连分数拼装失败: {e}")


def proposition_params(row: CatalogRow, values: Mapping[str, int]) -> Tuple[str, Dict[str, Any]]:
    """把目录行的命题槽位按参数实例化，返回 (类型, 槽位)"""
    if not row.proposition:
        raise FamilyError(f"{row.row_id} 没有命题槽位")
    kind = row.proposition["kind"]
    slots: Dict[str, Any] = {}
    for name, raw in row.proposition.items():
        if name == "kind":
            continue
        if isinstance(raw, list):
            slots[name] = expand_template(compile_template(raw, row.row_id), values)
        else:
            slots[name] = compiled(str(raw)).integer(values)
    slots.setdefault("l", values.get("l", 1))
    return kind, slots


# ==================== 单条记录校验 ====================

def _lens_of(cf: Sequence[int]) -> Tuple[Fraction, Optional[LensSpace]]:
    value = cf_eval(cf)
    if value.is_infinite() or value.num == 0:
        return value, None
    return value, lens_normalize(value.num, value.den)


def _expected_sign(rec: FamilyRecord) -> Optional[int]:
    return rec.ambient.sign if isinstance(rec.ambient, BrieskornTriple) else None


def _b_pattern_entry(
    rec: FamilyRecord,
    row: Optional[CatalogRow],
    value: Fraction,
    bound: int,
    max_length: int
) -> CheckEntry:
    """
    在 ±k_raw 两个目标上搜索 b 序列，和目录或指纹表里的模式比对

    允许整体取负和两端补 0；目录行一个都不命中记 fail，无目录行的记录只记 info
    """
    cf = rec.cf
    if len(cf) > max_length:
        return CheckEntry.make(rec.row_id, rec.params, "b_pattern", STATUS_INFO,
                               skipped=f"a 序列长度 {len(cf)} 超过上限 {max_length}")
    p_signed = abs(value.num)
    q_signed = value.den if value.num > 0 else -value.den
    try:
        pseq = p_sequence(p_signed, q_signed, cf)
    except PillowError as e:
        return CheckEntry.make(rec.row_id, rec.params, "b_pattern", STATUS_FAIL, error=str(e))

    found = set()
    for target in (rec.k_raw, -rec.k_raw):
        for solution in b_search(pseq, target, bound):
            found.add(solution.b)
    found_sorted = sorted(found)
    tags = sorted({tag for b in found_sorted for tag in classify_tags(b)})

    if row is not None and not row.b_fingerprint:
        return CheckEntry.make(rec.row_id, rec.params, "b_pattern", STATUS_INFO,
                               skipped="该行的 b 序列随参数变化，没有固定指纹",
                               solutions=len(found_sorted), tags=tags)
    if row is not None and row.b_pattern is not None:
        expected = [row.b_pattern]
    else:
        family = row.family if row is not None else None
        expected = list(B_PATTERNS.get(family or "", []))
    hit = [list(b) for b in found_sorted if any(matches_pattern(b, pat) for pat in expected)]

    if hit:
        status = STATUS_PASS
    else:
        status = STATUS_FAIL if row is not None and expected else STATUS_INFO
    witness: Dict[str, Any] = {
        "expected": [list(pat) for pat in expected],
        "matched": hit,
        "solutions": len(found_sorted),
        "tags": tags,
    }
    if row is not None and row.b_pattern_printed is not None:
        witness["printed"] = list(row.b_pattern_printed)
    return CheckEntry.make(rec.row_id, rec.params, "b_pattern", status, **witness)


def verify_record(
    rec: FamilyRecord,
    row: Optional[CatalogRow] = None,
    bound: int = 1,
    max_length: int = 12
) -> List[CheckEntry]:
    """
    一条记录的全部检查，失败只写入条目不抛异常

    检查项: gcd / kset / kmin / k2 / cf_order / q_column / dual / b_pattern / proposition / reference / ambient / berge
    """
    from .berge import berge_classify

    entries: List[CheckEntry] = []

    def add(check: str, status: str, **witness: Any) -> None:
        entries.append(CheckEntry.make(rec.row_id, rec.params, check, status, **witness))

    values = dict(rec.params)
    coprime = rec.p >= 2 and gcd_ext(rec.p, rec.k)[0] == 1
    add("gcd", STATUS_PASS if coprime else STATUS_FAIL, p=rec.p, k=rec.k, k_raw=rec.k_raw)
    if not coprime:
        return entries

    param = surgery_param(rec.p, rec.k)
    closed = rec.k in param.kset and all(
        (-x) % rec.p in param.kset and mod_inverse(x, rec.p) in param.kset for x in param.kset
    )
    add("kset", STATUS_PASS if closed else STATUS_FAIL, kset=param.kset)
    # 表中的 k 不一定是 𝒦 的最小代表
    add("kmin", STATUS_PASS if param.kmin == rec.k else STATUS_INFO, kset=param.kset, kmin=param.kmin, k=rec.k)

    if row is not None and row.k2 is not None:
        k2_raw = row.k2.integer(values)
        ok = (rec.k * k2_raw) % rec.p in (1, rec.p - 1) and k2_raw % rec.p in param.kset
        add("k2", STATUS_PASS if ok else STATUS_FAIL, k2=k2_raw, product_mod_p=(rec.k * k2_raw) % rec.p, kset=param.kset)

    expected_sign = _expected_sign(rec)

    if rec.cf is not None:
        value, lens = _lens_of(rec.cf)
        order_ok = lens is not None and lens.p == rec.p
        add("cf_order", STATUS_PASS if order_ok else STATUS_FAIL,
            cf=format_cf(rec.cf), value=str(value), p=rec.p, cf_source=rec.cf_source)

        if row is not None and row.q is not None:
            q_col = row.q.integer(values)
            add("q_column", STATUS_PASS if value == Fraction.of(rec.p, q_col) else STATUS_FAIL,
                value=str(value), q=q_col)

        if order_ok:
            sign = dual_sign(rec.p, lens.q, rec.k)
            if expected_sign is None:
                ok = sign != 0
            else:
                ok = sign == expected_sign
            k_sq = (rec.k * rec.k) % rec.p
            add("dual", STATUS_PASS if ok else STATUS_FAIL,
                q=lens.q, flipped=lens.flipped, k_squared=k_sq, k_squared_inv=mod_inverse(k_sq, rec.p),
                sign=sign, expected_sign=expected_sign)
            entries.append(_b_pattern_entry(rec, row, value, bound, max_length))

            if row is not None and row.reference_lens and values.get("l") == row.reference_lens.get("l"):
                ref = LensSpace(row.reference_lens["p"], row.reference_lens["q"])
                add("reference", STATUS_PASS if homeo(lens, ref, oriented=False) else STATUS_FAIL,
                    lens=str(lens), reference=str(ref))
    else:
        # 没有连分数时只能用 q = k^2 自检，结论是同义反复
        add("dual", STATUS_INFO, q=(rec.k * rec.k) % rec.p, tautological=True)

    if row is not None and row.proposition:
        try:
            kind, slots = proposition_params(row, values)
            assembled = surgery_cf(kind, slots, allow_zero_l=True)
            _, lens = _lens_of(assembled)
            ok = lens is not None and lens.p == rec.p
            add("proposition", STATUS_PASS if ok else STATUS_FAIL, kind=kind, cf=format_cf(assembled),
                p=lens.p if lens else None, identical=rec.cf is not None and list(assembled) == list(rec.cf))
        except SurgkitError as e:
            add("proposition", STATUS_FAIL, error=str(e))

    if isinstance(rec.ambient, BrieskornTriple):
        add("ambient", STATUS_PASS if is_homology_sphere(rec.ambient.data) else STATUS_FAIL,
            triple=str(rec.ambient), seifert=str(rec.ambient.data), sign=rec.ambient.sign)
    elif rec.ambient is None:
        add("ambient", STATUS_PASS, triple="S3")

    if row is not None and row.berge:
        tags = sorted(berge_classify(rec.p, rec.k))
        add("berge", STATUS_PASS if row.berge in tags else STATUS_FAIL, expected=row.berge, tags=tags)

    return entries


# ==================== 跨表校验 ====================

def square_identity(type_tag: str, l: int, catalog: Optional[Catalog] = None) -> bool:
    """
    (p_T2 + p_T3)/2 是否恰好等于 T3 的平方列

    type_tag 取 T3 的标签，T2 一侧按 square_pair 配对（I2 与 I3 互换）
    """
    catalog = catalog or load_catalog()
    row3 = catalog.row("T3", type_tag)
    if row3.square is None or row3.square_pair is None:
        raise FamilyError(f"T3 {type_tag} 没有平方列")
    row2 = catalog.row("T2", row3.square_pair)
    values = {"l": l}
    total = row2.p.integer(values) + row3.p.integer(values)
    return total == 2 * row3.square.integer(values)


def specialize_symbolic(spec: Specialization, catalog: Optional[Catalog] = None) -> List[CheckEntry]:
    """源表固定参数后，p 和 k 作为多项式与目标行逐项相等"""
    catalog = catalog or load_catalog()
    entries = []
    for src_type, tgt_type in sorted(spec.types.items()):
        src = catalog.row(spec.source, src_type)
        tgt = catalog.row(spec.target, tgt_type)
        row_id = f"{spec.source}->{spec.target}.{src_type}"
        for name, left, right in (("p", src.p, tgt.p), ("k", src.k, tgt.k)):
            lhs = left.specialize(spec.fixed)
            rhs = right.specialize({})
            ok = symbolic_equal(lhs, rhs)
            entries.append(CheckEntry.make(row_id, spec.fixed, f"specialize_symbolic_{name}",
                                           STATUS_PASS if ok else STATUS_FAIL,
                                           source=str(lhs), target=str(rhs), target_type=tgt_type))
    return entries


def specialize_check(
    spec: Specialization,
    grid: Iterable[Mapping[str, int]],
    catalog: Optional[Catalog] = None
) -> List[CheckEntry]:
    """
    逐参数点比对源表特化与目标行的 (p,k)

    参数:
        spec: 目录里的特化关系
        grid: 目标表的参数点（源表固定的参数由 spec.fixed 补上）

    返回:
        每个 (类型, 参数点) 一条；两边有一边不满足表条件时记 info，其余实例化错误记 fail
    """
    catalog = catalog or load_catalog()
    entries = []
    points = [dict(point) for point in grid]
    for src_type, tgt_type in sorted(spec.types.items()):
        row_id = f"{spec.source}->{spec.target}.{src_type}"
        sporadic = catalog.row(spec.source, src_type).sporadic
        seen = set()
        for point in points:
            if sporadic:
                point = {k: v for k, v in point.items() if k != "l"}
            key = tuple(sorted(point.items()))
            if key in seen:
                continue
            seen.add(key)
            try:
                src_values = _values_for(catalog.row(spec.source, src_type), {**point, **spec.fixed})
                tgt_values = _values_for(catalog.row(spec.target, tgt_type), point)
                excluded = (catalog.table(spec.source).failed_condition(src_values)
                            or catalog.table(spec.target).failed_condition(tgt_values))
                if excluded:
                    entries.append(CheckEntry.make(row_id, point, "specialize", STATUS_INFO, skipped=excluded))
                    continue
                src = family_pk(spec.source, src_type, {**point, **spec.fixed}, catalog)
                tgt = family_pk(spec.target, tgt_type, point, catalog)
            except FamilyError as e:
                entries.append(CheckEntry.make(row_id, point, "specialize", STATUS_FAIL, error=str(e)))
                continue
            ok = (src.p, src.k_raw) == (tgt.p, tgt.k_raw)
            entries.append(CheckEntry.make(row_id, point, "specialize", STATUS_PASS if ok else STATUS_FAIL,
                                           source=[src.p, src.k_raw], target=[tgt.p, tgt.k_raw],
                                           target_type=tgt_type))
    return entries
