"""
Berge 型分类模块
按 Berge 列表逐行判定 (p,k)，并按每行的参数化生成校验用实例
"""

from typing import List, Optional, Set, Tuple

import sympy as sym
from sympy import divisors

from .core import LensError
from .exact import gcd_ext
from .lens import surgery_param

BERGE_TAGS = ("I", "II", "III", "IV", "V", "VII/VIII", "IX", "X")

# IX / X 的二次族: tag -> (p 的系数 (a,b,c), k = u*ℓ + v)
BERGE_QUADRATIC_RULES = {
    "IX": {"p": (22, 9, 1), "k": (11, 2)},
    "X": {"p": (22, 13, 2), "k": (11, 3)},
}


SIGNS = (1, -1)


# ==================== 单行判定 ====================

def _match_i_ii(p: int, kappa: int) -> Set[str]:
    """p = iκ ± 1，gcd(i,κ) = 1 为 I，= 2 为 II"""
    tags = set()
    for eps in SIGNS:
        if (p - eps) % kappa:
            continue
        i = (p - eps) // kappa
        if i < 1:
            continue
        g = gcd_ext(i, kappa)[0]
        if g == 1:
            tags.add("I")
        elif g == 2:
            tags.add("II")
    return tags


def _congruent(p: int, residue: int, modulus: int) -> bool:
    return (p - residue) % modulus == 0


def _match_iii_iv_v(p: int, kappa: int) -> Set[str]:
    """
    III: p ≡ ±(2κ∓1)d (mod κ²)，d | κ±1 且 (κ±1)/d 为奇数
    IV:  p ≡ ±(κ∓1)d (mod κ²)，d | 2κ±1
    V:   p ≡ ±(κ∓1)d (mod κ²)，d | κ±1 且 d 为奇数
    """
    tags = set()
    square = kappa * kappa
    for eps in SIGNS:
        near = kappa + eps
        if near >= 1:
            for d in divisors(near):
                for tau in SIGNS:
                    if (near // d) % 2 == 1 and _congruent(p, tau * (2 * kappa - eps) * d, square):
                        tags.add("III")
                    if d % 2 == 1 and _congruent(p, tau * (kappa - eps) * d, square):
                        tags.add("V")
        for d in divisors(2 * kappa + eps):
            for tau in SIGNS:
                if _congruent(p, tau * (kappa - eps) * d, square):
                    tags.add("IV")
    return tags


def _match_vii_viii(p: int, kappa: int) -> Set[str]:
    """κ² ± κ ± 1 ≡ 0 (mod p)"""
    for a in SIGNS:
        for b in SIGNS:
            if (kappa * kappa + a * kappa + b) % p == 0:
                return {"VII/VIII"}
    return set()


def _match_quadratic(p: int, kappa: int) -> Set[str]:
    """存在整数 ℓ 使 p、k 与二次族完全一致（k 取 ±κ）"""
    tags = set()
    for tag, rule in BERGE_QUADRATIC_RULES.items():
        a, b, c = rule["p"]
        u, v = rule["k"]
        for k_raw in (kappa, -kappa):
            if (k_raw - v) % u:
                continue
            l = (k_raw - v) // u
            if l != 0 and a * l * l + b * l + c == p:
                tags.add(tag)
    return tags


def berge_classify(p: int, k: int) -> Set[str]:
    """
    对 𝒦(p,k) 的每个代表逐行测试 Berge 列表，返回全部命中的标签

    参数:
        p: 斜率，p >= 2
        k: 对偶类，0 < k < p 且 gcd(p,k) = 1

    返回:
        标签集合，可能为空

    异常:
        LensError: 前置条件不满足
    """
    if not 0 < k < p:
        raise LensError(f"要求 0 < k < p，收到 k={k}, p={p}")
    kset = surgery_param(p, k).kset
    tags: Set[str] = set()
    for kappa in kset:
        tags |= _match_i_ii(p, kappa)
        tags |= _match_iii_iv_v(p, kappa)
        tags |= _match_vii_viii(p, kappa)
        tags |= _match_quadratic(p, kappa)
    return tags


# ==================== 实例生成 ====================

def _keep(p: int, k: int) -> bool:
    return p > k >= 1 and gcd_ext(p, k)[0] == 1


def berge_instances(kmin: int, kmax: int) -> List[Tuple[str, int, int]]:
    """
    按 I-V 与 VII/VIII 各行的参数化生成 (标签, p, k)，k 取 [kmin, kmax]

    同余型取 p 的最小正代表及其加一个 κ² 的代表，只保留 p > k 且互素的实例
    """
    found: Set[Tuple[str, int, int]] = set()
    for k in range(max(kmin, 2), kmax + 1):
        square = k * k
        for eps in SIGNS:
            for i in range(1, kmax + 1):
                p = i * k + eps
                g = gcd_ext(i, k)[0]
                if g in (1, 2) and _keep(p, k):
                    found.add(("I" if g == 1 else "II", p, k))

            near = k + eps
            congruences = []
            for d in divisors(near):
                if (near // d) % 2 == 1:
                    congruences.append(("III", (2 * k - eps) * d))
                if d % 2 == 1:
                    congruences.append(("V", (k - eps) * d))
            for d in divisors(2 * k + eps):
                congruences.append(("IV", (k - eps) * d))
            for tag, base in congruences:
                for tau in SIGNS:
                    residue = (tau * base) % square
                    for p in (residue, residue + square):
                        if _keep(p, k):
                            found.add((tag, p, k))

            for b in SIGNS:
                for p in divisors(square + eps * k + b):
                    if _keep(p, k):
                        found.add(("VII/VIII", p, k))
    return sorted(found, key=lambda item: (BERGE_TAGS.index(item[0]), item[2], item[1]))


# ==================== 符号恒等式 ====================

def quadratic_dual_identity(p_expr, k_expr, variable) -> Optional[Tuple[int, int, int]]:
    """
    找 (a,b,c) 使 k^2 + a·k + b = c·p 作为多项式恒成立，a,b ∈ {±1}

    VII/VIII 族的 (p,k) 满足这一恒等式，因此对每个 ℓ 都属于该类
    """
    for a in SIGNS:
        for b in SIGNS:
            quotient, remainder = sym.div(sym.expand(k_expr ** 2 + a * k_expr + b), p_expr, variable)
            if remainder == 0 and quotient.is_Integer:
                return a, b, int(quotient)
    return None
