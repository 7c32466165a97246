"""
目录公式编译模块
把目录里的 sympy 表达式字符串编译成可精确求值的多项式
"""

from fractions import Fraction as _Q
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple, Union

import sympy as sym

from .core import CatalogError, FamilyError

# 目录里允许出现的参数名
PARAM_NAMES = ("l", "n", "s", "sigma", "m", "a", "b", "c", "alpha", "beta", "k", "P", "Q")

SYMBOLS: Dict[str, sym.Symbol] = {name: sym.Symbol(name) for name in PARAM_NAMES}

Number = Union[int, _Q]


class Formula:
    """
    编译后的目录公式

    多项式走预先展开的整数系数表（统一乘公分母），只做整数运算；
    顶层为 c·|多项式| 时同样编译，其余非多项式部分退回 sympy 代入
    """

    def __init__(self, text: str, substitutions: Optional[Mapping[str, "Formula"]] = None):
        self.text = str(text)
        try:
            expr = sym.sympify(self.text, locals=dict(SYMBOLS))
        except (sym.SympifyError, SyntaxError, TypeError) as e:
            raise CatalogError(f"无法解析公式 {self.text!r}: {e}")
        if substitutions:
            expr = expr.xreplace({SYMBOLS[name]: f.expr for name, f in substitutions.items()})
        self.expr = sym.expand(expr)
        self.params: Tuple[str, ...] = tuple(sorted(str(s) for s in self.expr.free_symbols))
        unknown = [p for p in self.params if p not in SYMBOLS]
        if unknown:
            raise CatalogError(f"公式 {self.text!r} 含未知参数 {unknown}")
        self._den = 1
        self._scale: Optional[_Q] = None
        self._terms = self._compile()

    def _compile(self) -> Optional[List[Tuple[Tuple[int, ...], int]]]:
        expr = self.expr
        # sympy 会把 Abs(2*l) 写成 2*Abs(l)
        scale, rest = expr.as_coeff_Mul()
        if isinstance(rest, sym.Abs) and scale.is_Rational:
            self._scale = _Q(int(scale.p), int(scale.q))
            expr = sym.expand(rest.args[0])
        if expr.is_Rational:
            value = sym.Rational(expr)
            self._den = int(value.q)
            return [((), int(value.p))]
        gens = [SYMBOLS[p] for p in self.params]
        try:
            poly = sym.Poly(expr, *gens, domain=sym.QQ)
        except Exception:
            self._scale = None
            return None
        terms = [(tuple(int(e) for e in monom), sym.Rational(coeff)) for monom, coeff in poly.terms()]
        self._den = int(sym.ilcm(*[int(c.q) for _, c in terms])) if len(terms) > 1 else int(terms[0][1].q)
        return [(monom, int(c * self._den)) for monom, c in terms]

    def __call__(self, values: Mapping[str, int]) -> Number:
        missing = [p for p in self.params if p not in values]
        if missing:
            raise FamilyError(f"公式 {self.text!r} 缺少参数 {missing}")
        if self._terms is None:
            result = self.expr.xreplace({SYMBOLS[p]: sym.Integer(values[p]) for p in self.params})
            if not result.is_Rational:
                raise FamilyError(f"公式 {self.text!r} 在 {dict(values)} 处不是有理数")
            total = _Q(int(result.p), int(result.q))
        else:
            args = [values[p] for p in self.params]
            acc = 0
            for monom, coeff in self._terms:
                term = coeff
                for v, e in zip(args, monom):
                    if e:
                        term *= v ** e
                acc += term
            total = _Q(acc, self._den)
            if self._scale is not None:
                total = abs(total) * self._scale
        return int(total) if total.denominator == 1 else total

    def integer(self, values: Mapping[str, int]) -> int:
        """求值并断言为整数"""
        result = self(values)
        if not isinstance(result, int):
            raise FamilyError(f"公式 {self.text!r} 在 {dict(values)} 处不是整数: {result}")
        return result

    def specialize(self, fixed: Mapping[str, int]) -> sym.Expr:
        """固定部分参数后的符号表达式"""
        return sym.expand(self.expr.xreplace({SYMBOLS[k]: sym.Integer(v) for k, v in fixed.items() if k in SYMBOLS}))

    def __repr__(self) -> str:
        return f"Formula({self.text!r})"


@lru_cache(maxsize=None)
def compiled(text: str) -> Formula:
    """按文本缓存的无代换公式，逐条记录实例化命题槽位时复用"""
    return Formula(text)


def symbolic_equal(left: sym.Expr, right: sym.Expr) -> bool:
    return sym.expand(left - right) == 0
