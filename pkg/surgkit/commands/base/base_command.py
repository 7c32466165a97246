"""
子命令抽象基类
提供所有子命令的通用能力: 参数注册、统一的结果字典、生命周期日志和退出码
"""

import argparse
import json
import time
from typing import Any, Dict

from ...config_manager import config_manager, dump_json
from ...services.core import BaseService
from ...utils.common import (
    PREFIX as LOG_PREFIX, SOURCE_CLI, _emit, generate_run_id, log_complete, log_error, log_prepare,
)


class BaseCommand:
    """
    所有子命令的抽象基类

    子类覆盖 NAME / HELP / TASK，实现 add_arguments、execute 和 render_text；
    execute 直接抛异常，由 run 统一转成结果字典和退出码
    """

    # 子类应该覆盖这些常量
    NAME = ""
    HELP = ""
    TASK = ""
    LOG_PREFIX = LOG_PREFIX

    EXIT_OK = 0
    EXIT_FAILED = 1
    EXIT_USAGE = 2

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        raise NotImplementedError

    def execute(self, args: argparse.Namespace) -> Any:
        raise NotImplementedError

    def render_text(self, data: Any) -> str:
        return str(data)

    def target(self, args: argparse.Namespace) -> str:
        """日志里的对象描述"""
        return self.NAME

    def exit_code(self, data: Any) -> int:
        return self.EXIT_OK

    def counts(self, data: Any) -> Dict[str, int]:
        return {}

    # ---输出---
    def emit(self, data: Any, as_json: bool) -> None:
        if as_json:
            print(dump_json(self.to_json(data)))
        else:
            print(self.render_text(data))

    def to_json(self, data: Any) -> Any:
        return data

    def write_file(self, path: str, text: str) -> bool:
        """原子写入；失败只告警，不改变退出码"""
        return config_manager._atomic_write_text(path, text)

    def run(self, args: argparse.Namespace) -> int:
        """
        执行子命令

        返回:
            0 成功 / 1 校验失败 / 2 输入或用法错误（内部异常同样记 2）
        """
        run_id = generate_run_id(self.NAME)
        target = self.target(args)
        start = time.perf_counter()
        log_prepare(self.TASK, run_id, SOURCE_CLI, target)

        result = BaseService.call(self.TASK, self.execute, args)
        if not result["success"]:
            log_error(self.TASK, run_id, result["error"], SOURCE_CLI)
            if getattr(args, "json", False):
                print(json.dumps({"success": False, "error": result["error"]}, ensure_ascii=False, sort_keys=True))
            return self.EXIT_USAGE

        data = result["data"]
        self.emit(data, getattr(args, "json", False))
        code = self.exit_code(data)
        elapsed_ms = int((time.perf_counter() - start) * 1000)
        log_complete(self.TASK, run_id, target, self.counts(data), elapsed_ms, SOURCE_CLI)
        if code != self.EXIT_OK:
            _emit(f"{self.LOG_PREFIX} 退出码 {code}")
        return code
