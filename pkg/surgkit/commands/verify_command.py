import argparse
import json
from typing import Any, Dict, List

from ..config_manager import dump_json
from ..services.catalog import load_catalog
from ..services.families import STATUS_FAIL
from ..services.sweep import VERIFY_TABLES, build_options, build_report, report_to_csv, run_sweep
from ..utils.common import TASK_VERIFY, log_warn
from .base import BaseCommand

# 命令行范围参数 -> 网格参数名
RANGE_FLAGS = {
    "lrange": "l",
    "nrange": "n",
    "srange": "s",
    "mrange": "m",
    "krange": "k",
    "prange": "param",
}


class VerifyCommand(BaseCommand):
    """
    verify --table T
    按目录重算整张表并逐项检查；有任何失败条目时退出码为 1
    """

    NAME = "verify"
    HELP = "校验目录中的一张表"
    TASK = TASK_VERIFY

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--table", required=True, choices=VERIFY_TABLES)
        for flag, name in RANGE_FLAGS.items():
            parser.add_argument(f"--{flag}", nargs=2, type=int, metavar=("A", "B"), default=None,
                                help=f"{name} 的闭区间，覆盖配置默认值")
        parser.add_argument("--variant", type=int, choices=(1, 2), default=None, help="图流形类型，缺省两类都跑")
        parser.add_argument("--bound", type=int, default=None, help="b 搜索的 |b_i| 上界")
        parser.add_argument("--pq-bound", dest="pq_bound", type=int, default=None, help="图流形 |P|,|Q| 上界")
        parser.add_argument("--workers", type=int, default=None, help="并行进程数")
        parser.add_argument("--out", default=None, help="报告 JSON 文件")
        parser.add_argument("--csv", default=None, help="报告 CSV 文件")

    def target(self, args: argparse.Namespace) -> str:
        return f"表 {args.table}"

    def execute(self, args: argparse.Namespace) -> Dict[str, Any]:
        overrides = {
            name: tuple(getattr(args, flag))
            for flag, name in RANGE_FLAGS.items()
            if getattr(args, flag) is not None
        }
        opts = build_options(
            args.table,
            overrides=overrides,
            bound=args.bound,
            workers=args.workers,
            variant=args.variant,
            pq_bound=args.pq_bound,
        )
        catalog = load_catalog()
        entries = run_sweep(opts, catalog)
        report = build_report(opts, entries, catalog)

        if args.out and not self.write_file(args.out, dump_json(report) + "\n"):
            log_warn(f"报告未写入 {args.out}")
        if args.csv and not self.write_file(args.csv, report_to_csv(report)):
            log_warn(f"CSV 未写入 {args.csv}")
        return report

    def exit_code(self, data: Dict[str, Any]) -> int:
        return self.EXIT_FAILED if data["summary"][STATUS_FAIL] else self.EXIT_OK

    def counts(self, data: Dict[str, Any]) -> Dict[str, int]:
        summary = data["summary"]
        return {"通过": summary["pass"], "失败": summary["fail"], "信息": summary["info"]}

    def render_text(self, data: Dict[str, Any]) -> str:
        summary = data["summary"]
        lines: List[str] = [
            f"table {data['meta']['table']} (catalog {data['meta']['catalog_version']})",
            f"pass {summary['pass']}  fail {summary['fail']}  info {summary['info']}  total {summary['total']}",
        ]
        for entry in data["entries"]:
            if entry["status"] == STATUS_FAIL:
                params = ",".join(f"{k}={v}" for k, v in sorted(entry["params"].items()))
                lines.append(f"FAIL {entry['row']} [{params}] {entry['check']} {json.dumps(entry['witness'], ensure_ascii=False, sort_keys=True)}")
        return "\n".join(lines)


# 子命令映射，由 cli 汇总注册
COMMAND_CLASS_MAPPINGS = {
    "verify": VerifyCommand,
}

# 子命令显示名称映射
COMMAND_DISPLAY_NAME_MAPPINGS = {
    "verify": "✨表格校验",
}
