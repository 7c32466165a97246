import argparse
from typing import Any, Dict

from ..services.lens import SurgeryParam, surgery_param
from ..utils.common import TASK_PARAM
from .base import BaseCommand


class SurgeryParamCommand(BaseCommand):
    """param p k: 输出 K 集合、kmin、k2、c 与 k^2 mod p"""

    NAME = "param"
    HELP = "手术参数 (p,k) 的 K 集合与 k2"
    TASK = TASK_PARAM

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("p", type=int, help="斜率 p >= 2")
        parser.add_argument("k", type=int, help="对偶类，与 p 互素")

    def target(self, args: argparse.Namespace) -> str:
        return f"({args.p},{args.k})"

    def execute(self, args: argparse.Namespace) -> SurgeryParam:
        return surgery_param(args.p, args.k)

    def to_json(self, data: SurgeryParam) -> Dict[str, Any]:
        return data.to_json()

    def render_text(self, data: SurgeryParam) -> str:
        lines = [
            f"p: {data.p}",
            f"k: {data.k}",
            f"kset: {{{', '.join(str(k) for k in data.kset)}}}",
            f"kmin: {data.kmin}",
            f"k2: {data.k2}",
            f"frakc: {data.frakc}",
            f"k^2 mod p: {data.k_squared}",
        ]
        return "\n".join(lines)


# 子命令映射，由 cli 汇总注册
COMMAND_CLASS_MAPPINGS = {
    "param": SurgeryParamCommand,
}

# 子命令显示名称映射
COMMAND_DISPLAY_NAME_MAPPINGS = {
    "param": "✨手术参数",
}
