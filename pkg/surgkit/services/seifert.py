"""
Seifert 数据模块
Seifert 数据、同调球判定、Brieskorn 球数据构造、定向反转，以及 Seifert 数据表的族
"""

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction as _Q
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .core import SeifertError
from .exact import Fraction, gcd_ext
from .formula import Formula
from .lens import mod_inverse

Fiber = Tuple[int, int]

_FIBER_TEXT = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_DATA_TEXT = re.compile(r"^\s*S\(\s*(-?\d+)\s*((?:,\s*\(\s*-?\d+\s*,\s*-?\d+\s*\)\s*)*)\)\s*$")


@dataclass(frozen=True)
class SeifertData:
    """S(e,(a1,b1),...)，按给定值原样保存"""

    e: int
    fibers: Tuple[Fiber, ...] = ()

    def __post_init__(self):
        for a, b in self.fibers:
            if a == 0:
                raise SeifertError(f"纤维重数不能为 0: ({a},{b})")
            if gcd_ext(a, b)[0] != 1:
                raise SeifertError(f"纤维 ({a},{b}) 不互素")

    @classmethod
    def parse(cls, text: str) -> "SeifertData":
        """解析 "S(1,(2,1),(3,1),(5,1))" """
        match = _DATA_TEXT.match(text)
        if not match:
            raise SeifertError(f"Seifert 数据格式错误: {text!r}")
        fibers = tuple((int(a), int(b)) for a, b in _FIBER_TEXT.findall(match.group(2)))
        return cls(int(match.group(1)), fibers)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(abs(a) for a, _ in self.fibers)

    def __str__(self) -> str:
        parts = [str(self.e)] + [f"({a},{b})" for a, b in self.fibers]
        return "S(" + ",".join(parts) + ")"

    def to_json(self) -> Dict[str, Any]:
        return {"e": self.e, "fibers": [list(f) for f in self.fibers]}


@dataclass(frozen=True)
class BrieskornTriple:
    a1: int
    a2: int
    a3: int
    data: SeifertData
    sign: int

    @property
    def triple(self) -> Tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    def __str__(self) -> str:
        return f"Σ({self.a1},{self.a2},{self.a3})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "triple": list(self.triple),
            "data": str(self.data),
            "defect": str(defect(self.data)),
            "sign": self.sign,
        }


# ==================== 基本运算 ====================

def _defect_rational(data: SeifertData) -> _Q:
    return _Q(data.e) - sum((_Q(b, a) for a, b in data.fibers), _Q(0))


def defect(data: SeifertData) -> Fraction:
    """e - Σ b_i/a_i（精确）"""
    return Fraction.from_rational(_defect_rational(data))


def _pairwise_coprime(values: Sequence[int]) -> bool:
    return all(gcd_ext(x, y)[0] == 1 for x, y in itertools.combinations(values, 2))


def is_homology_sphere(data: SeifertData) -> bool:
    """
    同调球判定：重数两两互素，且 defect = ±1/∏|a_i|
    """
    mults = data.multiplicities
    if not _pairwise_coprime(mults):
        return False
    product = 1
    for a in mults:
        product *= a
    return abs(_defect_rational(data)) == _Q(1, product)


def normal_form(data: SeifertData) -> SeifertData:
    """
    规范形：a_i > 0、0 < b_i < a_i，b 的整数平移吸收进 e；b_i ≡ 0 的纤维（a=1）去掉
    """
    e = data.e
    fibers: List[Fiber] = []
    for a, b in data.fibers:
        if a < 0:
            a, b = -a, -b
        reduced = b % a
        e -= (b - reduced) // a
        if reduced == 0:
            continue
        fibers.append((a, reduced))
    return SeifertData(e, tuple(fibers))


def reverse_orientation(data: SeifertData) -> SeifertData:
    """e 与各 b_i 取负后取规范形；defect 变号"""
    flipped = SeifertData(-data.e, tuple((a, -b) for a, b in data.fibers))
    return normal_form(flipped)


def same_up_to_orientation(x: SeifertData, y: SeifertData) -> bool:
    """规范形相同（纤维顺序无关），或与反转定向后的规范形相同"""
    def key(d: SeifertData) -> Tuple[int, Tuple[Fiber, ...]]:
        return d.e, tuple(sorted(d.fibers))
    nx, ny = normal_form(x), normal_form(y)
    return key(nx) == key(ny) or key(reverse_orientation(nx)) == key(ny)


# ==================== Brieskorn 球 ====================

def brieskorn_data(a1: int, a2: int, a3: int) -> BrieskornTriple:
    """
    构造 Σ(a1,a2,a3) 的 Seifert 数据 S(1,(a1,b1),(a2,b2),(a3,b3))，0 < b_i < a_i

    defect = δ/N (N = a1a2a3)，b_i ≡ -δ (N/a_i)^{-1} (mod a_i)；
    两个 δ 中恰有一个给出 e = 1。δ = -1（如 Σ(2,3,5)）记为标准定向 sign=+1

    异常:
        SeifertError: 不两两互素或重数 < 2
    """
    triple = (a1, a2, a3)
    if any(a < 2 for a in triple):
        raise SeifertError(f"Brieskorn 重数必须 >= 2: {triple}")
    if not _pairwise_coprime(triple):
        raise SeifertError(f"{triple} 不两两互素")
    total = a1 * a2 * a3
    for delta in (-1, 1):
        fibers = []
        for a in triple:
            cofactor = total // a
            fibers.append((a, (-delta * mod_inverse(cofactor, a)) % a))
        weighted = sum(b * (total // a) for a, b in fibers) + delta
        if weighted % total:
            raise SeifertError(f"{triple} 的纤维数据不闭合")
        if weighted // total == 1:
            data = SeifertData(1, tuple(fibers))
            if _defect_rational(data) != _Q(delta, total):
                raise SeifertError(f"{triple} 的 e 值与 δ/a1a2a3 不符")
            return BrieskornTriple(a1, a2, a3, data, -delta)
    raise SeifertError(f"{triple} 没有 e=1 的规范形")


def brieskorn_family(s: int, n: int, sign: int) -> BrieskornTriple:
    """Σ(2, 2s+1, 2(2s+1)n ± 1)"""
    if s < 1 or n < 1 or sign not in (1, -1):
        raise SeifertError(f"需要 s,n >= 1 且 sign = ±1，收到 s={s}, n={n}, sign={sign}")
    return brieskorn_data(2, 2 * s + 1, 2 * (2 * s + 1) * n + sign)


def brute_force_normal_forms(a1: int, a2: int, a3: int, e_bound: int = 3) -> List[SeifertData]:
    """
    独立的暴力搜索：所有 |e| <= e_bound、0 < b_i < a_i 且 defect = ±1/(a1a2a3) 的数据
    """
    total = _Q(1, a1 * a2 * a3)
    found = []
    for e in range(-e_bound, e_bound + 1):
        for b1 in range(1, a1):
            for b2 in range(1, a2):
                for b3 in range(1, a3):
                    value = _Q(e) - _Q(b1, a1) - _Q(b2, a2) - _Q(b3, a3)
                    if abs(value) == total:
                        found.append(SeifertData(e, ((a1, b1), (a2, b2), (a3, b3))))
    return found


# ==================== Seifert 数据表 ====================
# 每行: 固定纤维（公式）、通配纤维数、参数与条件；* 由调用方给出 (a,b)

SEIFERT_TABLE_RULES: Dict[str, Dict[str, Any]] = {
    "A": {
        "fibers": [("2", "1"), ("2*s+1", "1")],
        "wildcards": 1,
        "params": ["s"],
        "conditions": ["s > 0"],
    },
    "B": {
        "fibers": [("2*a-1", "a")],
        "wildcards": 2,
        "params": ["a"],
        "conditions": ["a != 0"],
    },
    "CD": {
        "fibers": [("m", "m-1"), ("beta", "1")],
        "wildcards": 1,
        "params": ["m", "beta"],
        "conditions": ["m != 1", "beta > 0"],
    },
    "E": {
        "fibers": [("2*m-1", "m-1"), ("alpha", "1"), ("beta", "1")],
        "wildcards": 0,
        "params": ["m", "alpha", "beta"],
        "conditions": ["m != 1", "alpha > 0", "beta > 0"],
    },
    "FGH": {
        "fibers": [("a", "1"), ("b", "1")],
        "wildcards": 1,
        "params": ["a", "b"],
        "conditions": ["a > 0", "b > 0"],
    },
    "I": {
        "fibers": [("c", "1")],
        "wildcards": 2,
        "params": ["c"],
        "conditions": ["c > 0"],
    },
    "J": {
        "fibers": [("2", "1")],
        "wildcards": 2,
        "params": [],
        "conditions": [],
    },
    "K": {
        "fibers": [("3", "1"), ("m", "m-1")],
        "wildcards": 1,
        "params": ["m"],
        "conditions": ["m != 1"],
    },
}

_COMPILED_RULES: Dict[str, Dict[str, Any]] = {}


def _rule(type_tag: str) -> Dict[str, Any]:
    if type_tag not in SEIFERT_TABLE_RULES:
        raise SeifertError(f"未知的 Seifert 表类型: {type_tag}，可选 {sorted(SEIFERT_TABLE_RULES)}")
    if type_tag not in _COMPILED_RULES:
        raw = SEIFERT_TABLE_RULES[type_tag]
        _COMPILED_RULES[type_tag] = {
            "fibers": [(Formula(a), Formula(b)) for a, b in raw["fibers"]],
            "wildcards": raw["wildcards"],
            "params": list(raw["params"]),
            "conditions": [(text, _condition(text)) for text in raw["conditions"]],
        }
    return _COMPILED_RULES[type_tag]


def _condition(text: str):
    left, op, right = re.match(r"^\s*(\w+)\s*(>|!=)\s*(-?\d+)\s*$", text).groups()
    bound = int(right)
    if op == ">":
        return lambda values: values[left] > bound
    return lambda values: values[left] != bound


def table6_data(
    type_tag: str,
    params: Mapping[str, int],
    wildcards: Sequence[Fiber] = ()
) -> SeifertData:
    """
    按 Seifert 数据表填充一行

    参数:
        type_tag: A / B / CD / E / FGH / I / J / K
        params: 行参数
        wildcards: 通配 * 位置的 (a,b)，个数须与行一致

    返回:
        SeifertData（e = 1，固定纤维在前）

    异常:
        SeifertError: 条件不满足、通配个数不符或出现 |a| < 2 的退化纤维
    """
    rule = _rule(type_tag)
    missing = [p for p in rule["params"] if p not in params]
    if missing:
        raise SeifertError(f"{type_tag} 行缺少参数 {missing}")
    for text, check in rule["conditions"]:
        if not check(params):
            raise SeifertError(f"{type_tag} 行条件不满足: {text}")
    if len(wildcards) != rule["wildcards"]:
        raise SeifertError(f"{type_tag} 行需要 {rule['wildcards']} 个通配纤维，收到 {len(wildcards)}")
    fibers = [(fa.integer(params), fb.integer(params)) for fa, fb in rule["fibers"]]
    fibers.extend((int(a), int(b)) for a, b in wildcards)
    for a, b in fibers:
        if abs(a) < 2:
            raise SeifertError(f"{type_tag} 行出现退化纤维 ({a},{b})")
    return SeifertData(1, tuple(fibers))


def table6_instances(
    type_tag: str,
    param_grid: Mapping[str, Sequence[int]],
    max_multiplicity: int
) -> Iterator[Tuple[Dict[str, int], Tuple[Fiber, ...], SeifertData]]:
    """
    枚举一行的实例：参数取网格，通配纤维取 2 <= a <= max_multiplicity、0 < b < a
    只产出满足条件且重数两两互素的实例
    """
    rule = _rule(type_tag)
    names = rule["params"]
    pool = [(a, b) for a in range(2, max_multiplicity + 1) for b in range(1, a) if gcd_ext(a, b)[0] == 1]
    for combo in itertools.product(*[param_grid[name] for name in names]):
        params = dict(zip(names, combo))
        for wild in itertools.combinations_with_replacement(pool, rule["wildcards"]):
            try:
                data = table6_data(type_tag, params, wild)
            except SeifertError:
                continue
            if _pairwise_coprime(data.multiplicities):
                yield params, tuple(wild), data


def brieskorn_match(data: SeifertData) -> Optional[BrieskornTriple]:
    """三纤维同调球与 brieskorn_data(重数) 一致（允许反定向）时返回该三元组"""
    if len(data.fibers) != 3 or not is_homology_sphere(data):
        return None
    a1, a2, a3 = sorted(data.multiplicities)
    triple = brieskorn_data(a1, a2, a3)
    return triple if same_up_to_orientation(data, triple.data) else None
