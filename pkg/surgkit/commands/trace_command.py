import argparse
from typing import Any, Dict, List

from ..services.exact import format_cf, parse_cf
from ..services.pillow import pillowcase_trace, trace_endpoint
from ..utils.common import TASK_TRACE
from .base import BaseCommand


class PillowcaseTraceCommand(BaseCommand):
    """
    trace p q k --aseq "[...]"
    逐步打印解扭过程；--b 指定 b 序列，缺省取标准解
    """

    NAME = "trace"
    HELP = "枕形解扭追踪"
    TASK = TASK_TRACE

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("p", type=int)
        parser.add_argument("q", type=int)
        parser.add_argument("k", type=int)
        parser.add_argument("--aseq", required=True, help='a 序列，如 "[2,2,7,-1]"')
        parser.add_argument("--b", dest="bseq", default=None, help='b 序列，如 "[0,-1,0,1]"')

    def target(self, args: argparse.Namespace) -> str:
        return f"({args.p},{args.q},{args.k}) {args.aseq}"

    def execute(self, args: argparse.Namespace) -> Dict[str, Any]:
        aseq = parse_cf(args.aseq)
        bseq = parse_cf(args.bseq) if args.bseq else None
        steps = pillowcase_trace(args.p, args.q, args.k, aseq, bseq)
        return {
            "aseq": format_cf(aseq),
            "steps": steps,
            "endpoint": str(trace_endpoint(steps)),
        }

    def to_json(self, data: Dict[str, Any]) -> Dict[str, Any]:
        return {**data, "steps": [step.to_json() for step in data["steps"]]}

    def render_text(self, data: Dict[str, Any]) -> str:
        lines: List[str] = [str(step) for step in data["steps"]]
        lines.append(f"endpoint: {data['endpoint']}")
        return "\n".join(lines)

    def counts(self, data: Dict[str, Any]) -> Dict[str, int]:
        return {"步数": len(data["steps"])}


# 子命令映射，由 cli 汇总注册
COMMAND_CLASS_MAPPINGS = {
    "trace": PillowcaseTraceCommand,
}

# 子命令显示名称映射
COMMAND_DISPLAY_NAME_MAPPINGS = {
    "trace": "✨枕形追踪",
}
