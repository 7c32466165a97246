"""
族目录模块
把目录 JSON 编译成带 Formula 的行对象：p/k/q/k2/g'/平方列、a 序列模板、命题槽位、环境三元组
"""

import operator
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sym
from sympy.logic.boolalg import Boolean

from .core import CatalogError, FamilyError
from .formula import SYMBOLS, Formula, compiled


@dataclass(frozen=True)
class Repeat:
    """模板里的重复项，例如 s-1 个 2"""

    value: Formula
    times: Formula


TemplateItem = Union[Formula, Repeat]


def compile_template(items: Sequence[Any], where: str) -> List[TemplateItem]:
    items_out: List[TemplateItem] = []
    for item in items:
        if isinstance(item, dict):
            if set(item) != {"repeat", "times"}:
                raise CatalogError(f"{where}: 重复项只能包含 repeat/times，收到 {sorted(item)}")
            items_out.append(Repeat(compiled(str(item["repeat"])), compiled(str(item["times"]))))
        elif isinstance(item, (str, int)):
            items_out.append(compiled(str(item)))
        else:
            raise CatalogError(f"{where}: 无法识别的模板项 {item!r}")
    return items_out


def expand_template(template: Sequence[TemplateItem], values: Mapping[str, int]) -> List[int]:
    """
    按参数展开整数序列

    异常:
        FamilyError: 重复次数为负或某项不是整数
    """
    result: List[int] = []
    for item in template:
        if isinstance(item, Repeat):
            times = item.times.integer(values)
            if times < 0:
                raise FamilyError(f"重复次数 {item.times.text} = {times} < 0")
            result.extend([item.value.integer(values)] * times)
        else:
            result.append(item.integer(values))
    return result


_RELATIONS = {
    sym.Eq: operator.eq,
    sym.Ne: operator.ne,
    sym.Ge: operator.ge,
    sym.Gt: operator.gt,
    sym.Le: operator.le,
    sym.Lt: operator.lt,
}


class Condition:
    """目录里的参数条件，用 sympy 关系式表达（Ne/Eq/>=）；两边都能编译时不走 sympy 代入"""

    def __init__(self, text: str):
        self.text = text
        try:
            self.expr = sym.sympify(text, locals=dict(SYMBOLS))
        except (sym.SympifyError, SyntaxError, TypeError) as e:
            raise CatalogError(f"无法解析条件 {text!r}: {e}")
        if self.expr in (sym.true, sym.false) or not isinstance(self.expr, Boolean):
            raise CatalogError(f"条件 {text!r} 不是关于参数的关系式")
        self.params = tuple(sorted(str(s) for s in self.expr.free_symbols))
        self._compare = _RELATIONS.get(type(self.expr))
        self._sides: Optional[Tuple[Formula, Formula]] = None
        if self._compare is not None:
            self._sides = (compiled(str(self.expr.lhs)), compiled(str(self.expr.rhs)))

    def holds(self, values: Mapping[str, int]) -> bool:
        missing = [p for p in self.params if p not in values]
        if missing:
            raise FamilyError(f"条件 {self.text!r} 缺少参数 {missing}")
        if self._sides is not None:
            lhs, rhs = self._sides
            return self._compare(lhs(values), rhs(values))
        result = self.expr.xreplace({SYMBOLS[p]: sym.Integer(values[p]) for p in self.params})
        return bool(result)


@dataclass
class CatalogRow:
    table: str
    row_id: str
    type_tag: str
    family: Optional[str]
    p: Formula
    k: Formula
    q: Optional[Formula] = None
    k2: Optional[Formula] = None
    gprime: Optional[Formula] = None
    square: Optional[Formula] = None
    square_pair: Optional[str] = None
    aseq: Optional[List[TemplateItem]] = None
    b_pattern: Optional[Tuple[int, ...]] = None
    b_pattern_printed: Optional[Tuple[int, ...]] = None
    b_fingerprint: bool = True
    cf_source: Optional[str] = None
    proposition: Optional[Dict[str, Any]] = None
    ambient_triple: Optional[Tuple[Formula, ...]] = None
    sporadic: bool = False
    berge: Optional[str] = None
    note: Optional[str] = None
    reference_lens: Optional[Dict[str, int]] = None

    def build_aseq(self, values: Mapping[str, int]) -> Optional[List[int]]:
        if self.aseq is None:
            return None
        return expand_template(self.aseq, values)

    def ambient(self, values: Mapping[str, int]) -> Optional[Tuple[int, int, int]]:
        if self.ambient_triple is None:
            return None
        return tuple(f.integer(values) for f in self.ambient_triple)


@dataclass
class CatalogTable:
    name: str
    title: str
    params: Tuple[str, ...]
    conditions: List[Condition]
    rows: List[CatalogRow] = field(default_factory=list)
    variants: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def row(self, type_tag: str) -> CatalogRow:
        for row in self.rows:
            if row.type_tag == type_tag:
                return row
        raise CatalogError(f"表 {self.name} 没有类型 {type_tag}，可选 {[r.type_tag for r in self.rows]}")

    def failed_condition(self, values: Mapping[str, int]) -> Optional[str]:
        """返回第一条不满足的条件文本；全部满足返回 None"""
        for condition in self.conditions:
            if not condition.holds(values):
                return condition.text
        return None


@dataclass(frozen=True)
class Specialization:
    source: str
    target: str
    fixed: Dict[str, int]
    types: Dict[str, str]


class Catalog:
    """不可变的已编译目录"""

    def __init__(self, data: Mapping[str, Any], path: Optional[str] = None):
        self.path = path
        self.version = str(data.get("__config_version", "1.0.0"))
        self.tables: Dict[str, CatalogTable] = {}
        for name, raw in data.get("tables", {}).items():
            self.tables[name] = self._compile_table(name, raw)
        self.specializations = [
            Specialization(
                source=item["source"],
                target=item["target"],
                fixed={k: int(v) for k, v in item["fixed"].items()},
                types=dict(item["types"]),
            )
            for item in data.get("specializations", [])
        ]

    def table(self, name: str) -> CatalogTable:
        if name not in self.tables:
            raise CatalogError(f"目录中没有表 {name}，可选 {sorted(self.tables)}")
        return self.tables[name]

    def row(self, table: str, type_tag: str) -> CatalogRow:
        return self.table(table).row(type_tag)

    @staticmethod
    def _compile_table(name: str, raw: Mapping[str, Any]) -> CatalogTable:
        table_triple = raw.get("ambient_triple")
        table = CatalogTable(
            name=name,
            title=raw.get("title", name),
            params=tuple(raw.get("params", [])),
            conditions=[Condition(text) for text in raw.get("conditions", [])],
            variants=dict(raw.get("variants", {})),
        )
        seen = set()
        for item in raw.get("rows", []):
            row = Catalog._compile_row(name, item, table_triple)
            if row.type_tag in seen:
                raise CatalogError(f"表 {name} 中类型 {row.type_tag} 重复")
            seen.add(row.type_tag)
            table.rows.append(row)
        return table

    @staticmethod
    def _compile_row(table: str, item: Mapping[str, Any], table_triple: Optional[Sequence[str]]) -> CatalogRow:
        row_id = item.get("id", f"{table}.{item.get('type')}")
        try:
            k = Formula(item["k_poly"])
            subs = {"k": k}
            triple = item.get("ambient_triple", table_triple)

            def optional(key: str) -> Optional[Formula]:
                return Formula(item[key], subs) if item.get(key) is not None else None

            def pattern(key: str) -> Optional[Tuple[int, ...]]:
                return tuple(int(x) for x in item[key]) if item.get(key) is not None else None

            return CatalogRow(
                table=table,
                row_id=row_id,
                type_tag=item["type"],
                family=item.get("family"),
                p=Formula(item["p_poly"], subs),
                k=k,
                q=optional("q_poly"),
                k2=optional("k2_poly"),
                gprime=optional("gprime_poly"),
                square=optional("square_poly"),
                square_pair=item.get("square_pair"),
                aseq=compile_template(item["aseq_template"], row_id) if item.get("aseq_template") else None,
                b_pattern=pattern("b_pattern"),
                b_pattern_printed=pattern("b_pattern_printed"),
                b_fingerprint=bool(item.get("b_fingerprint", True)),
                cf_source=item.get("cf_source"),
                proposition=dict(item["proposition"]) if item.get("proposition") else None,
                ambient_triple=tuple(Formula(t) for t in triple) if triple else None,
                sporadic=bool(item.get("sporadic", False)),
                berge=item.get("berge"),
                note=item.get("note"),
                reference_lens=item.get("reference_lens"),
            )
        except KeyError as e:
            raise CatalogError(f"目录行 {row_id} 缺少字段 {e}")


# ---加载---
_LOADED: Dict[str, Catalog] = {}


def load_catalog(path: Optional[str] = None) -> Catalog:
    """
    读取并编译目录；同一路径只编译一次

    参数:
        path: 目录文件；缺省依次取 SURGKIT_CATALOG 与包内置目录
    """
    from ..config_manager import config_manager

    resolved = config_manager.resolve_catalog_path(path)
    if resolved not in _LOADED:
        _LOADED[resolved] = Catalog(config_manager.load_catalog(resolved), resolved)
    return _LOADED[resolved]
