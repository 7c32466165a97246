"""
图流形同调球模块
两类丢番图条件下 (P,Q,m) 的求解、对应手术连分数的拼装与对偶类认证
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import sympy as sym
from sympy.ntheory import sqrt_mod

from .catalog import Catalog, load_catalog
from .core import CatalogError, FamilyError, PillowError
from .exact import Fraction, cf_eval, continuants, format_cf, gcd_ext
from .families import STATUS_FAIL, STATUS_INFO, STATUS_PASS, CheckEntry, surgery_cf
from .formula import SYMBOLS, Formula, compiled
from .lens import lens_normalize, mod_inverse, surgery_param
from .pillow import b_search, p_sequence

GRAPH_TABLE = "GS"


def _variant_spec(variant: int, catalog: Optional[Catalog] = None) -> Dict[str, Any]:
    catalog = catalog or load_catalog()
    variants = catalog.table(GRAPH_TABLE).variants
    key = str(variant)
    if key not in variants:
        raise FamilyError(f"未知的图流形类型 {variant}，可选 {sorted(variants)}")
    return variants[key]


def _condition(variant: int, catalog: Optional[Catalog] = None) -> Formula:
    return compiled(str(_variant_spec(variant, catalog)["condition"]))


@dataclass(frozen=True)
class GraphSphereDescriptor:
    """
    满足丢番图条件的 (P,Q,m)

    异常:
        FamilyError: 类型未知、P/Q 不互素或条件值不是 ±1
    """

    variant: int
    P: int
    Q: int
    m: int

    def __post_init__(self):
        if gcd_ext(self.P, self.Q)[0] != 1:
            raise FamilyError(f"P={self.P}, Q={self.Q} 不互素")
        value = self.condition_value()
        if value not in (1, -1):
            raise FamilyError(f"类型 {self.variant} 在 P={self.P}, Q={self.Q}, m={self.m} 处条件值为 {value}，不是 ±1")

    def condition_value(self, catalog: Optional[Catalog] = None) -> int:
        return _condition(self.variant, catalog).integer({"P": self.P, "Q": self.Q, "m": self.m})

    @property
    def degenerate(self) -> bool:
        # m = 1 时腿 m/(m-1) 为无穷
        return self.m == 1

    def to_json(self) -> Dict[str, Any]:
        return {"variant": self.variant, "P": self.P, "Q": self.Q, "m": self.m}

    def __str__(self) -> str:
        return f"GS{self.variant}(P={self.P}, Q={self.Q}, m={self.m})"


# ==================== 求解 ====================

def _linear_in_q(condition: Formula) -> Tuple[Formula, Formula]:
    """把条件拆成 const(P,m) + coef(m)·Q"""
    q = SYMBOLS["Q"]
    if sym.degree(condition.expr, q) > 1:
        raise CatalogError(f"条件 {condition.text!r} 关于 Q 不是一次的")
    coef = sym.expand(sym.diff(condition.expr, q))
    const = sym.expand(condition.expr.xreplace({q: 0}))
    return Formula(str(const)), Formula(str(coef))


def graph_sphere_solve(
    variant: int,
    m: int,
    bound: int,
    catalog: Optional[Catalog] = None
) -> List[GraphSphereDescriptor]:
    """
    |P|,|Q| <= bound 内全部满足条件的互素 (P,Q)

    条件关于 Q 是一次的：对每个 P 直接解出 Q，不逐点枚举

    参数:
        variant: 1 或 2
        m: 整数参数
        bound: P、Q 的绝对值上界，>= 1

    返回:
        按 (P,Q) 排序的描述列表
    """
    if bound < 1:
        raise FamilyError(f"bound 必须 >= 1，收到 {bound}")
    const, coef = _linear_in_q(_condition(variant, catalog))
    found = set()
    for P in range(-bound, bound + 1):
        values = {"P": P, "m": m}
        c0 = const.integer(values)
        c1 = coef.integer(values)
        for target in (1, -1):
            if c1 == 0:
                if c0 == target:
                    candidates = range(-bound, bound + 1)
                else:
                    continue
            else:
                if (target - c0) % c1:
                    continue
                candidates = [(target - c0) // c1]
            for Q in candidates:
                if abs(Q) <= bound and gcd_ext(P, Q)[0] == 1:
                    found.add((P, Q))
    return [GraphSphereDescriptor(variant, P, Q, m) for P, Q in sorted(found)]


# ==================== 铅管图 ====================

def _node_terms(weight: int, legs: List[Tuple[int, int]]) -> Tuple[int, int]:
    """单个节点的 (N, S)：N 为各腿分子之积，S = N·(e - Σ d_i/n_i)"""
    total = 1
    for n, _ in legs:
        total *= n
    s = weight * total
    for i, (_, d) in enumerate(legs):
        others = 1
        for j, (n, _) in enumerate(legs):
            if j != i:
                others *= n
        s -= d * others
    return total, s


def plumbing_determinant(desc: GraphSphereDescriptor, catalog: Optional[Catalog] = None) -> int:
    """
    G({A,B},{P/Q, m/(m-1)};0,0) 的行列式，两个节点权重为 0

    腿 n/d 贡献 d/n；结果为 ±1 时是同调球
    """
    spec = _variant_spec(desc.variant, catalog)
    first = [(int(a), 1) for a in spec["legs"]]
    second = [(desc.P, desc.Q), (desc.m, desc.m - 1)]
    n1, s1 = _node_terms(0, first)
    n2, s2 = _node_terms(0, second)
    return s1 * s2 - n1 * n2


def graph_ambient(desc: GraphSphereDescriptor, catalog: Optional[Catalog] = None) -> CheckEntry:
    """行列式独立于目录条件重算一遍，须为 ±1 且与条件值相同"""
    params = desc.to_json()
    del params["variant"]
    row_id = f"GS{desc.variant}"
    if desc.degenerate:
        return CheckEntry.make(row_id, params, "ambient", STATUS_INFO, skipped="m = 1 时 m/(m-1) 无定义")
    det = plumbing_determinant(desc, catalog)
    condition = desc.condition_value(catalog)
    ok = det in (1, -1) and det == condition
    return CheckEntry.make(row_id, params, "ambient", STATUS_PASS if ok else STATUS_FAIL,
                           determinant=det, condition=condition)


# ==================== 连分数与认证 ====================

def graph_alpha(desc: GraphSphereDescriptor) -> Fraction:
    """腿 P/Q 以 (P+Q)/Q 进入连分数，和 CD 型的 (c1+c2)/c2 一样"""
    return Fraction.of(desc.P + desc.Q, desc.Q)


def graph_cf(desc: GraphSphereDescriptor, l: int, catalog: Optional[Catalog] = None) -> List[int]:
    """[α_n..α_1, ℓ+1, 2, -m, c, -ℓ]，α 为 (P+Q)/Q 的展开"""
    spec = _variant_spec(desc.variant, catalog)
    return surgery_cf("GS", {
        "alpha": graph_alpha(desc),
        "m": desc.m,
        "c": int(spec["c"]),
        "l": l,
    })


def graph_order(desc: GraphSphereDescriptor, l: int, catalog: Optional[Catalog] = None) -> int:
    """
    不展开 α 直接算 |H_1|

    拼接 [α反序] + T 的连项为 N(α)·N(T) - N(α去首项)·N(T去首项)，
    而 α 的这两个连项就是 (P+Q)/Q 约化后的分子分母
    """
    spec = _variant_spec(desc.variant, catalog)
    tail = [l + 1, 2, -desc.m, int(spec["c"]), -l]
    alpha = graph_alpha(desc)
    n_tail = continuants(tail)
    return abs(alpha.num * n_tail[0] - alpha.den * n_tail[1])


def dual_candidates(p: int, q: int) -> List[int]:
    """
    (0,p) 中满足 k^2 ≡ ±q^{±1} (mod p) 的全部 k

    为空说明这个透镜空间没有对偶类
    """
    q_inv = mod_inverse(q, p)
    roots = set()
    for r in {q % p, (-q) % p, q_inv, (-q_inv) % p}:
        for k in sqrt_mod(r, p, all_roots=True) or []:
            k = int(k)
            if 0 < k < p and gcd_ext(k, p)[0] == 1:
                roots.add(k)
    return sorted(roots)


def graph_certify(
    desc: GraphSphereDescriptor,
    l: int,
    bound: int = 1,
    max_length: int = 12,
    catalog: Optional[Catalog] = None
) -> List[CheckEntry]:
    """
    拼装连分数并逐项检查: cf_order / dual / b_certify

    对偶类不存在时记失败并给出 q 作为见证
    """
    row_id = f"GS{desc.variant}"
    params = {"P": desc.P, "Q": desc.Q, "m": desc.m, "l": l}
    entries: List[CheckEntry] = []

    def add(check: str, status: str, **witness: Any) -> None:
        entries.append(CheckEntry.make(row_id, params, check, status, **witness))

    if desc.degenerate:
        add("cf_order", STATUS_INFO, skipped="m = 1 时 m/(m-1) 无定义")
        return entries
    try:
        cf = graph_cf(desc, l, catalog)
    except FamilyError as e:
        add("cf_order", STATUS_INFO, skipped=str(e))
        return entries

    value = cf_eval(cf)
    if value.is_infinite() or abs(value.num) < 2:
        add("cf_order", STATUS_INFO, cf=format_cf(cf), value=str(value), skipped="|H_1| < 2")
        return entries
    lens = lens_normalize(value.num, value.den)
    order = graph_order(desc, l, catalog)
    add("cf_order", STATUS_PASS if lens.p == order else STATUS_FAIL,
        cf=format_cf(cf), value=str(value), p=lens.p, order=order)

    ks = dual_candidates(lens.p, lens.q)
    if not ks:
        add("dual", STATUS_FAIL, p=lens.p, q=lens.q, flipped=lens.flipped)
        return entries
    k = ks[0]
    add("dual", STATUS_PASS, p=lens.p, q=lens.q, k=k, kset=surgery_param(lens.p, k).kset)

    if len(cf) > max_length:
        add("b_certify", STATUS_INFO, skipped=f"a 序列长度 {len(cf)} 超过上限 {max_length}")
        return entries
    q_signed = value.den if value.num > 0 else -value.den
    try:
        pseq = p_sequence(abs(value.num), q_signed, cf)
    except PillowError as e:
        add("b_certify", STATUS_FAIL, error=str(e))
        return entries
    for kappa in ks:
        for target in (kappa, -kappa):
            solutions = b_search(pseq, target, bound)
            if solutions:
                add("b_certify", STATUS_PASS, k=kappa, target=target, b=list(solutions[0].b))
                return entries
    add("b_certify", STATUS_INFO, candidates=ks, bound=bound)
    return entries
