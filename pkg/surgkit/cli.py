"""
命令行入口
由子命令映射生成 argparse 解析器；退出码 0 通过 / 1 校验失败 / 2 用法或输入错误
"""

import argparse
import os
import sys
from typing import List, Optional

from .commands import COMMAND_CLASS_MAPPINGS, COMMAND_DISPLAY_NAME_MAPPINGS
from .utils.common import set_quiet


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="以 JSON 输出结果")
    common.add_argument("--quiet", action="store_true", help="关闭 stderr 生命周期日志")
    common.add_argument("--catalog", default=None, help="目录文件，缺省取 SURGKIT_CATALOG 或内置目录")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surgkit", description="透镜空间手术族的精确计算与表格校验")
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command_cls in COMMAND_CLASS_MAPPINGS.items():
        sub = subparsers.add_parser(
            name,
            parents=[common],
            help=f"{COMMAND_DISPLAY_NAME_MAPPINGS.get(name, name)} {command_cls.HELP}",
        )
        command_cls.add_arguments(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误为 2，--help 为 0
        return e.code if isinstance(e.code, int) else 2

    if args.quiet:
        set_quiet(True)
    if args.catalog:
        # 写回环境变量，并行子进程按同一路径加载
        os.environ["SURGKIT_CATALOG"] = os.path.abspath(args.catalog)

    command = COMMAND_CLASS_MAPPINGS[args.command]()
    return command.run(args)


if __name__ == "__main__":
    sys.exit(main())
