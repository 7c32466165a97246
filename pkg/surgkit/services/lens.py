"""
透镜空间模块
L(p,q) 的规范化与同胚判定、手术参数 (p,k) 的 K 集合 / k2 / c，以及对偶类检查
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from .core import LensError
from .exact import gcd_ext


@dataclass(frozen=True)
class LensSpace:
    """规范化后的 L(p,q)，0 <= q < p；flipped 表示输入的阶为负、已整体取反"""

    p: int
    q: int
    flipped: bool = False

    def __str__(self) -> str:
        return f"L({self.p},{self.q})"

    def to_json(self) -> Dict[str, Any]:
        return {"p": self.p, "q": self.q, "flipped": self.flipped}


@dataclass(frozen=True)
class SurgeryParam:
    p: int
    k: int
    kset: List[int] = field(default_factory=list)
    kmin: int = 0
    k2: int = 0
    frakc: int = 0

    @property
    def k_squared(self) -> int:
        return (self.k * self.k) % self.p

    def to_json(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "k": self.k,
            "kset": list(self.kset),
            "kmin": self.kmin,
            "k2": self.k2,
            "frakc": self.frakc,
            "k_squared": self.k_squared,
        }


# ==================== 模运算 ====================

def mod_inverse(a: int, p: int) -> int:
    """
    模逆元

    参数:
        a: 整数
        p: 模数，p >= 2

    返回:
        [1, p-1] 中的 a^{-1}

    异常:
        LensError: gcd(a,p) != 1
    """
    if p < 2:
        raise LensError(f"模数必须 >= 2，收到 {p}")
    g, x, _ = gcd_ext(a, p)
    if g != 1:
        raise LensError(f"{a} 与 {p} 不互素 (gcd={g})")
    return x % p


def lens_normalize(p_raw: int, q_raw: int) -> LensSpace:
    """
    规范化 (p_raw, q_raw) 为 L(p,q)

    p_raw < 0 时两项同时取反并记 flipped=True；|p_raw| = 1 得到 L(1,0)

    异常:
        LensError: p_raw = 0，或 gcd(p_raw, q_raw) != 1
    """
    if p_raw == 0:
        raise LensError("p = 0 给出 S^1×S^2，不是透镜空间")
    if gcd_ext(p_raw, q_raw)[0] != 1:
        raise LensError(f"({p_raw}, {q_raw}) 不互素")
    flipped = p_raw < 0
    if flipped:
        p_raw, q_raw = -p_raw, -q_raw
    return LensSpace(p_raw, q_raw % p_raw, flipped)


def lens_orbit(p: int, q: int, oriented: bool = True) -> List[int]:
    """q 在同胚意义下的全部代表元 {q, q^{-1}}（非定向时再加上取负）"""
    if p == 1:
        return [0]
    q = q % p
    inv = mod_inverse(q, p)
    members = {q, inv}
    if not oriented:
        members |= {(-q) % p, (-inv) % p}
    return sorted(members)


def homeo(a: LensSpace, b: LensSpace, oriented: bool = True) -> bool:
    """
    透镜空间同胚判定

    定向: p 相同且 q_B ≡ q_A 或 q_A^{-1}；非定向再允许 -q_A, -q_A^{-1}
    """
    if a.p != b.p:
        return False
    return b.q % b.p in lens_orbit(a.p, a.q, oriented)


# ==================== 手术参数 ====================

def surgery_param(p: int, k: int) -> SurgeryParam:
    """
    计算手术参数 (p,k) 的 K 集合、最小代表 kmin、k2 和 c

    参数:
        p: 斜率，p >= 2
        k: 对偶类，gcd(p,k) = 1（保留输入值）

    返回:
        SurgeryParam

    异常:
        LensError: p < 2 或不互素
    """
    if p < 2:
        raise LensError(f"手术参数要求 p >= 2，收到 {p}")
    if gcd_ext(p, k)[0] != 1:
        raise LensError(f"gcd({p}, {k}) != 1")
    inv = mod_inverse(k, p)
    kset = sorted({k % p, (-k) % p, inv, (-inv) % p})
    k2 = kset[1] if len(kset) > 1 else kset[0]
    numerator = (k - 1) * (k + 1 - p)
    if numerator % 2:
        raise LensError(f"p={p}, k={k} 给出的 c 不是整数")
    return SurgeryParam(p=p, k=k, kset=kset, kmin=kset[0], k2=k2, frakc=numerator // 2)


def normalize_dual_class(p: int, k_raw: int) -> int:
    """把表格里的原始 k（可能为负或超过 p）映到 (0,p)：先取绝对值再约化"""
    k = abs(k_raw) % p
    if k == 0:
        raise LensError(f"k={k_raw} 在模 {p} 下退化为 0")
    return k


# ==================== 对偶类检查 ====================

def dual_sign(p: int, q: int, k: int) -> int:
    """
    对偶类的符号

    返回:
        +1: q ≡ k^2 或 (k^2)^{-1}
        -1: q ≡ -k^2 或 -(k^2)^{-1}
        0: 都不成立
    """
    if p < 2:
        raise LensError(f"对偶类检查要求 p >= 2，收到 {p}")
    if gcd_ext(p, q)[0] != 1 or gcd_ext(p, k)[0] != 1:
        raise LensError(f"({p}, {q}, {k}) 不互素")
    q = q % p
    k_sq = (k * k) % p
    k_sq_inv = mod_inverse(k_sq, p)
    if q in (k_sq, k_sq_inv):
        return 1
    if q in ((-k_sq) % p, (-k_sq_inv) % p):
        return -1
    return 0


def dual_check(p: int, q: int, k: int, oriented: bool = True) -> bool:
    """q ≡ k^2 或 (k^2)^{-1} (mod p)；oriented=False 时允许取负"""
    sign = dual_sign(p, q, k)
    if oriented:
        return sign == 1
    return sign != 0
