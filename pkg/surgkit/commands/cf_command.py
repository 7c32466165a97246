import argparse
from typing import Any, Dict

from ..services.core import CFError
from ..services.exact import Fraction, cf_eval, cf_expand, format_cf, gcd_ext, parse_cf
from ..utils.common import TASK_CF
from .base import BaseCommand


class ContinuedFractionCommand(BaseCommand):
    """
    连分数子命令
    cf eval "[a1,...]" 求值，cf expand p q 做上取整展开
    """

    NAME = "cf"
    HELP = "连分数求值与展开"
    TASK = TASK_CF

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        actions = parser.add_subparsers(dest="cf_action", required=True)
        eval_parser = actions.add_parser("eval", help="求 [a1,...,an] 的值")
        eval_parser.add_argument("cf", help='连分数，如 "[1,-4]"')
        expand_parser = actions.add_parser("expand", help="展开 p/q")
        expand_parser.add_argument("p", type=int)
        expand_parser.add_argument("q", type=int)

    def target(self, args: argparse.Namespace) -> str:
        if args.cf_action == "eval":
            return args.cf
        return f"{args.p}/{args.q}"

    def execute(self, args: argparse.Namespace) -> Dict[str, Any]:
        if args.cf_action == "eval":
            cf = parse_cf(args.cf)
            return {"action": "eval", "cf": format_cf(cf), "value": str(cf_eval(cf))}

        p, q = args.p, args.q
        if q == 0:
            raise CFError("q 不能为 0")
        if gcd_ext(p, q)[0] != 1:
            raise CFError(f"gcd({p}, {q}) != 1")
        cf = cf_expand(Fraction.of(p, q))
        return {"action": "expand", "cf": format_cf(cf), "value": str(Fraction.of(p, q))}

    def render_text(self, data: Dict[str, Any]) -> str:
        return data["value"] if data.get("action") == "eval" else data["cf"]


# 子命令映射，由 cli 汇总注册
COMMAND_CLASS_MAPPINGS = {
    "cf": ContinuedFractionCommand,
}

# 子命令显示名称映射
COMMAND_DISPLAY_NAME_MAPPINGS = {
    "cf": "✨连分数",
}
