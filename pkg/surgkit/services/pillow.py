"""
枕形方法算术模块
p/b/h 序列、有界 b 搜索、按 b 序列指纹分类，以及逐步解扭追踪
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .core import PillowError
from .exact import Fraction, cf_eval, continuants, gcd_ext


# ==================== b 序列指纹表 ====================
# 印刷版的 CDE 指纹 (0,-1,0,0,1) 在 Σ(2,3,5) 的任何 ℓ 都不出现；
# C/D 实际给出 (0,-1,0,0,-1)，E 的 a 序列长度为 6，给出 (0,-1,0,0,0,-1)
# 族级指纹不覆盖的行（其他环境里的 B/E/J）在目录里写逐行的 b_pattern

B_PATTERNS: Dict[str, List[Tuple[int, ...]]] = {
    "A": [(0, -1, 0, 1)],
    "B": [(0, -1, 0, 1, 0)],
    "CDE": [(0, -1, 0, 0, 1), (0, -1, 0, 0, -1), (0, -1, 0, 0, 0, -1)],
    "FGH": [(0, 0, 1, 0, 0, -1)],
    "IJ": [(0, 0, 1, 0, -1, 0, 0)],
    "K": [(0, -1, 0, -1, 1)],
}

ACTION_KNOT = "untwist-knot"
ACTION_PILLOWCASE = "untwist-pillowcase"


@dataclass(frozen=True)
class PSequence:
    values: Tuple[int, ...]

    @property
    def length(self) -> int:
        """a 序列长度 n（values 有 n+1 项）"""
        return len(self.values) - 1

    def __getitem__(self, i: int) -> int:
        """按 1 起始下标取 p_i"""
        return self.values[i - 1]


@dataclass(frozen=True)
class BHSolution:
    b: Tuple[int, ...]
    h: Tuple[int, ...]

    def to_json(self) -> Dict[str, Any]:
        return {"b": list(self.b), "h": list(self.h)}


@dataclass(frozen=True)
class TraceStep:
    index: int
    slope_num: int
    slope_den: int
    slope_sign: str
    marked_point: int
    divisor: int
    action: str
    next_num: int
    next_den: int
    next_sign: str

    def to_json(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "slope_num": self.slope_num,
            "slope_den": self.slope_den,
            "slope_sign": self.slope_sign,
            "marked_point": self.marked_point,
            "divisor": self.divisor,
            "action": self.action,
            "next_num": self.next_num,
            "next_den": self.next_den,
            "next_sign": self.next_sign,
        }

    def __str__(self) -> str:
        text = (
            f"step {self.index}: slope {self.slope_num}/{self.slope_den} ({self.slope_sign}) "
            f"h={self.marked_point} divisor={self.divisor} action={self.action}"
        )
        if self.action == ACTION_PILLOWCASE:
            text += f" -> {self.next_num}/{self.next_den} ({self.next_sign})"
        return text


# ==================== p 序列 ====================

def p_sequence(p: int, q: int, aseq: Sequence[int]) -> PSequence:
    """
    由 a 序列生成 p 序列 (p_1..p_{n+1})，p_1 = p, p_2 = q, |p_{n+1}| = 1

    异常:
        PillowError: a 序列的值不是 p/q，或 gcd(p,q) != 1
    """
    if gcd_ext(p, q)[0] != 1:
        raise PillowError(f"gcd({p}, {q}) != 1")
    if not aseq:
        raise PillowError("a 序列为空")
    tails = continuants(aseq)
    if (tails[0], tails[1]) == (p, q):
        values = tails
    elif (tails[0], tails[1]) == (-p, -q):
        values = [-v for v in tails]
    else:
        raise PillowError(f"a 序列的值为 {cf_eval(aseq)}，不等于 {p}/{q}")
    if abs(values[-1]) != 1:
        raise PillowError(f"p 序列末项为 {values[-1]}，不是 ±1")
    return PSequence(tuple(values))


def _weights(pseq: PSequence) -> List[int]:
    # w_i = (-1)^{i-1} p_{i+1}
    return [pseq[i + 1] if i % 2 == 1 else -pseq[i + 1] for i in range(1, pseq.length + 1)]


def b_identity(pseq: PSequence, b: Sequence[int]) -> int:
    """Σ b_i (-1)^{i-1} p_{i+1}"""
    return sum(bi * wi for bi, wi in zip(b, _weights(pseq)))


def h_from_b(pseq: PSequence, k: int, b: Sequence[int]) -> Tuple[int, ...]:
    """h_1 = k, h_{i+1} = b_i p_{i+1} - h_i"""
    h = [k]
    for i, bi in enumerate(b, start=1):
        h.append(bi * pseq[i + 1] - h[-1])
    return tuple(h)


# ==================== b/h 序列 ====================

def b_search(pseq: PSequence, k: int, bound: int = 1) -> List[BHSolution]:
    """
    全部满足 |b_i| <= bound 且 Σ b_i(-1)^{i-1}p_{i+1} = k 的 b 序列

    分支定界遍历同一个候选盒子，结果与穷举一致，按字典序排列

    参数:
        pseq: p 序列
        k: 目标整数（允许任意符号，分类时用 ±k）
        bound: |b_i| 上界

    返回:
        BHSolution 列表，可能为空
    """
    if bound < 1:
        raise PillowError(f"bound 必须 >= 1，收到 {bound}")
    weights = _weights(pseq)
    n = len(weights)
    # reach[i]: 从第 i 位起剩余位置能贡献的最大绝对值
    reach = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        reach[i] = reach[i + 1] + bound * abs(weights[i])

    found: List[Tuple[int, ...]] = []
    prefix: List[int] = []

    def descend(i: int, remaining: int) -> None:
        if abs(remaining) > reach[i]:
            return
        if i == n:
            if remaining == 0:
                found.append(tuple(prefix))
            return
        for bi in range(-bound, bound + 1):
            prefix.append(bi)
            descend(i + 1, remaining - bi * weights[i])
            prefix.pop()

    descend(0, k)
    solutions = []
    for b in found:
        h = h_from_b(pseq, k, b)
        if b_identity(pseq, b) != k or h[-1] != 0:
            raise PillowError(f"b={list(b)} 不满足恒等式")
        solutions.append(BHSolution(b=b, h=h))
    return solutions


def h_canonical(pseq: PSequence, k: int) -> BHSolution:
    """
    除法规范化的确定解：每步取 0 <= h_{i+1} < |p_{i+1}|

    中间项 p_{i+1} = 0 时 h_{i+1} = -h_i 与 b_i 无关，取 b_i = 0

    异常:
        PillowError: k 与 p_1 不互素或 k 模 p_1 为 0
    """
    p = pseq[1]
    if k % p == 0 or gcd_ext(k, p)[0] != 1:
        raise PillowError(f"k={k} 对 p={p} 退化")
    h = [k]
    b = []
    for i in range(1, pseq.length + 1):
        divisor = pseq[i + 1]
        if divisor == 0:
            b.append(0)
            h.append(-h[-1])
            continue
        nxt = (-h[-1]) % abs(divisor)
        b.append((h[-1] + nxt) // divisor)
        h.append(nxt)
    solution = BHSolution(b=tuple(b), h=tuple(h))
    if b_identity(pseq, solution.b) != k or solution.h[-1] != 0:
        raise PillowError(f"规范化得到的 b={list(solution.b)} 不满足恒等式")
    return solution


def pattern_core(pattern: Sequence[int]) -> Tuple[int, ...]:
    """去掉指纹开头的 0"""
    pattern = tuple(pattern)
    start = 0
    while start < len(pattern) and pattern[start] == 0:
        start += 1
    return pattern[start:]


def matches_pattern(b: Sequence[int], pattern: Sequence[int]) -> bool:
    """
    b 是否等于 ±指纹核心两侧补 0

    前缀拼接（如 -σn、重复的 2）只在 b 的两端添 0，不改变核心
    """
    b = tuple(b)
    core = pattern_core(pattern)
    if not core:
        return False
    neg = tuple(-x for x in core)
    width = len(core)
    for start in range(len(b) - width + 1):
        if any(b[:start]) or any(b[start + width:]):
            continue
        segment = b[start:start + width]
        if segment == core or segment == neg:
            return True
    return False


def classify_type(b: Sequence[int]) -> Optional[str]:
    """
    按指纹表匹配 b 或 -b（定向反转时整体取负），长度对不上时按两端补 0 匹配

    返回:
        族标签；b 与 -b 命中不同行时返回 "X/Y"；都不命中返回 None
    """
    tags = classify_tags(b)
    return "/".join(tags) if tags else None


def classify_tags(b: Sequence[int]) -> List[str]:
    b = tuple(b)
    neg = tuple(-x for x in b)
    exact = [tag for tag, patterns in B_PATTERNS.items() if b in patterns or neg in patterns]
    if exact:
        return exact
    # 长度对不上时按核心匹配；CDE 印刷指纹与 FGH 核心相同，可能两个都命中
    return [tag for tag, patterns in B_PATTERNS.items() if any(matches_pattern(b, pat) for pat in patterns)]


# ==================== 枕形追踪 ====================

def _slope_sign(num: int, den: int) -> str:
    if den == 0:
        return "∞"
    if num == 0:
        return "0"
    return "+" if (num > 0) == (den > 0) else "-"


def pillowcase_trace(
    p: int,
    q: int,
    k: int,
    aseq: Sequence[int],
    b: Optional[Sequence[int]] = None
) -> List[TraceStep]:
    """
    交替解扭 K' 与枕形，直到斜率为 0 或 ∞

    每个 i 先输出一步 untwist-knot（标记点 h_i，除数 b_i），
    再输出一步 untwist-pillowcase（标记点 h_{i+1}，除数 a_i，斜率 p_i/p_{i+1} -> p_{i+1}/p_{i+2}）

    参数:
        b: 指定的 b 序列；缺省时取 h_canonical 的解

    异常:
        PillowError: a 序列与 (p,q) 不符、k 退化或 b 序列不满足恒等式
    """
    if not 0 < k < p:
        raise PillowError(f"要求 0 < k < p，收到 k={k}, p={p}")
    pseq = p_sequence(p, q, aseq)
    if b is None:
        solution = h_canonical(pseq, k)
    else:
        if len(b) != pseq.length or b_identity(pseq, b) != k:
            raise PillowError(f"b 序列 {list(b)} 不满足 Σ b_i(-1)^(i-1) p_(i+1) = {k}")
        solution = BHSolution(b=tuple(b), h=h_from_b(pseq, k, b))

    values = list(pseq.values) + [0]
    steps: List[TraceStep] = []
    for i in range(1, pseq.length + 1):
        num, den = values[i - 1], values[i]
        after_num, after_den = values[i], values[i + 1]
        steps.append(TraceStep(
            index=len(steps) + 1,
            slope_num=num,
            slope_den=den,
            slope_sign=_slope_sign(num, den),
            marked_point=solution.h[i - 1],
            divisor=solution.b[i - 1],
            action=ACTION_KNOT,
            next_num=num,
            next_den=den,
            next_sign=_slope_sign(num, den),
        ))
        steps.append(TraceStep(
            index=len(steps) + 1,
            slope_num=num,
            slope_den=den,
            slope_sign=_slope_sign(num, den),
            marked_point=solution.h[i],
            divisor=aseq[i - 1],
            action=ACTION_PILLOWCASE,
            next_num=after_num,
            next_den=after_den,
            next_sign=_slope_sign(after_num, after_den),
        ))
    return steps


def trace_endpoint(steps: Sequence[TraceStep]) -> Fraction:
    """追踪结束时的斜率"""
    last = steps[-1]
    return Fraction.of(last.next_num, last.next_den)
