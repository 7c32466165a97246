"""
精确算术模块
整数扩展欧几里得、精确分数以及负号约定连分数 [a1,...,an] = a1 - 1/(a2 - 1/(...)) 的求值与展开
"""

import re
from dataclasses import dataclass
from fractions import Fraction as _Q
from typing import List, Sequence, Tuple

from .core import CFError

ContinuedFraction = List[int]

_CF_TEXT = re.compile(r"^\s*\[\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\]\s*$")


# ==================== 精确分数 ====================

@dataclass(frozen=True)
class Fraction:
    """
    约化后的有理数，允许无穷 (den=0, num=±1)

    构造请使用 Fraction.of(num, den)，直接实例化不做约化
    """

    num: int
    den: int

    @classmethod
    def of(cls, num: int, den: int = 1) -> "Fraction":
        if den == 0:
            if num == 0:
                raise CFError("0/0 不是合法分数")
            return cls(1 if num > 0 else -1, 0)
        if den < 0:
            num, den = -num, -den
        g = gcd_ext(num, den)[0]
        return cls(num // g, den // g)

    @classmethod
    def infinity(cls) -> "Fraction":
        return cls(1, 0)

    @classmethod
    def from_rational(cls, value: _Q) -> "Fraction":
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> "Fraction":
        """解析 "p/q"、"p" 或 "inf" """
        s = text.strip()
        if s in ("inf", "+inf", "∞"):
            return cls.infinity()
        if s == "-inf":
            return cls(-1, 0)
        try:
            if "/" in s:
                num_s, den_s = s.split("/", 1)
                return cls.of(int(num_s), int(den_s))
            return cls.of(int(s), 1)
        except ValueError:
            raise CFError(f"无法解析分数: {text!r}")

    def is_infinite(self) -> bool:
        return self.den == 0

    def to_rational(self) -> _Q:
        if self.is_infinite():
            raise CFError("无穷没有有理数表示")
        return _Q(self.num, self.den)

    def __neg__(self) -> "Fraction":
        return Fraction(-self.num, self.den)

    def __str__(self) -> str:
        if self.is_infinite():
            return "inf" if self.num > 0 else "-inf"
        return f"{self.num}/{self.den}"

    def to_json(self) -> str:
        return str(self)


# ==================== 整数工具 ====================

def gcd_ext(a: int, b: int) -> Tuple[int, int, int]:
    """
    扩展欧几里得算法

    返回:
        (g, x, y)，g = gcd(|a|,|b|) >= 0 且 a*x + b*y = g；gcd(0,0) = 0
    """
    old_r, r = abs(a), abs(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    x = old_s if a >= 0 else -old_s
    y = old_t if b >= 0 else -old_t
    return old_r, x, y


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ==================== 连分数 ====================

def continuants(cf: Sequence[int]) -> List[int]:
    """
    尾部连项 N_1..N_{n+1}

    N_{n+1} = 1, N_{n+2} = 0, N_i = a_i*N_{i+1} - N_{i+2}
    (N_1, N_2) 即矩阵乘积第一列（未约化、保留符号）
    """
    n = len(cf)
    values = [0] * (n + 2)
    values[n] = 1
    values[n + 1] = 0
    for i in range(n - 1, -1, -1):
        values[i] = cf[i] * values[i + 1] - values[i + 2]
    return values[: n + 1]


def cf_matrix(cf: Sequence[int]) -> Tuple[int, int, int, int]:
    """从左到右累乘 ((a,-1),(1,0))，返回 (m00, m01, m10, m11)"""
    m00, m01, m10, m11 = 1, 0, 0, 1
    for a in cf:
        m00, m01, m10, m11 = m00 * a + m01, -m00, m10 * a + m11, -m10
    return m00, m01, m10, m11


def cf_eval(cf: Sequence[int]) -> Fraction:
    """
    负号约定连分数求值（矩阵形式，中间出现 0 也不会除零）

    参数:
        cf: 整数序列，可为空

    返回:
        Fraction，空序列返回无穷
    """
    m00, _, m10, _ = cf_matrix(cf)
    return Fraction.of(m00, m10)


def cf_eval_recursive(cf: Sequence[int]) -> _Q:
    """从右到左逐层求值；中途除零时抛 ZeroDivisionError"""
    if not cf:
        raise ZeroDivisionError("空连分数的值为无穷")
    value = _Q(cf[-1])
    for a in reversed(cf[:-1]):
        value = a - 1 / value
    return value


def cf_expand_canonical(x: Fraction) -> ContinuedFraction:
    """
    规范展开：所有项 >= 2 的唯一负号约定展开

    参数:
        x: 约化分数 p/q，要求 p > q >= 1

    返回:
        连分数，cf_eval(结果) == x

    异常:
        CFError: x <= 1、无穷或未约化
    """
    if x.is_infinite():
        raise CFError("无穷没有有限展开")
    p, q = x.num, x.den
    if q <= 0 or gcd_ext(p, q)[0] != 1:
        raise CFError(f"输入未约化: {p}/{q}")
    if p <= q:
        raise CFError(f"规范展开要求 p > q >= 1，收到 {p}/{q}")
    return cf_expand(x)


def cf_expand(x: Fraction) -> ContinuedFraction:
    """
    任意有限有理数的上取整展开：首项任意整数，其余项 >= 2

    拼接 P/Q、a1/a2 之类的有理数槽位时使用
    """
    if x.is_infinite():
        return []
    p, q = x.num, x.den
    result: ContinuedFraction = []
    while q != 0:
        a = _ceil_div(p, q)
        result.append(a)
        p, q = q, a * q - p
    return result


# ---文本格式---

def parse_cf(text: str) -> ContinuedFraction:
    """
    解析 "[2,2,7,-1]" 形式的连分数

    异常:
        CFError: 格式错误
    """
    if not _CF_TEXT.match(text):
        raise CFError(f"连分数格式错误: {text!r}，应为 \"[a1,a2,...]\"")
    body = text.strip()[1:-1].strip()
    if not body:
        return []
    return [int(part) for part in body.split(",")]


def format_cf(cf: Sequence[int]) -> str:
    return "[" + ",".join(str(a) for a in cf) + "]"
