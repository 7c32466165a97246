"""
工具函数模块
整合日志前缀、生命周期日志、错误格式化等通用工具
"""

import io
import os
import sys
import time
from typing import Any, Dict, Optional

# 修复 Windows 终端编码问题
# 解决 GBK 编码导致的 emoji 和特殊字符输出错误
if sys.platform == 'win32' and sys.stdout.encoding != 'utf-8':
    try:
        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', errors='replace')
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8', errors='replace')
    except Exception:
        pass  # 静默失败，保持原有编码


# ==================== 统一日志前缀常量 ====================
# 所有模块从此处导入，确保日志格式一致

PREFIX = "✨"
ERROR_PREFIX = "✨-❌"
PROCESS_PREFIX = "✨"
WARN_PREFIX = "✨-⚠️"


# ==================== 任务类型常量 ====================
TASK_CF = "连分数"
TASK_PARAM = "手术参数"
TASK_VERIFY = "表格校验"
TASK_TRACE = "枕形追踪"


# ==================== 运行来源常量 ====================
SOURCE_CLI = "命令行-"
SOURCE_API = "接口-"


# ---日志输出开关---
# 日志一律写到 stderr，stdout 只留给命令结果

def is_quiet() -> bool:
    """SURGKIT_QUIET=1 时关闭生命周期日志（错误日志不受影响）"""
    return os.environ.get("SURGKIT_QUIET", "").strip() not in ("", "0", "false", "False")


def set_quiet(quiet: bool) -> None:
    """命令行 --quiet 的实现，写回环境变量以便子进程继承"""
    if quiet:
        os.environ["SURGKIT_QUIET"] = "1"
    else:
        os.environ.pop("SURGKIT_QUIET", None)


def _emit(line: str) -> None:
    print(line, file=sys.stderr, flush=True)


# ==================== 统一日志消息函数 ====================

def log_prepare(
    task_type: str,
    run_id: str,
    source: str,
    target: str,
    extra: Optional[Dict[str, Any]] = None
) -> None:
    """
    输出统一格式的准备日志

    格式: ✨ 🟡 {来源}{任务}准备 | 对象:{target} | ID:{id} | key:value ...
    """
    if is_quiet():
        return

    parts = [f"{PREFIX} 🟡 {source}{task_type}准备"]
    parts.append(f"对象:{target}")
    parts.append(f"ID:{run_id}")

    if extra:
        for key, value in extra.items():
            parts.append(f"{key}:{value}")

    _emit(f"{parts[0]} | {' | '.join(parts[1:])}")


def log_complete(
    task_type: str,
    run_id: str,
    target: str,
    counts: Optional[Dict[str, int]],
    elapsed_ms: int,
    source: str = None
) -> None:
    """
    输出统一格式的完成日志

    格式: ✨ ✅ {来源}{任务}完成 | 对象:{target} | ID:{id} | 通过:{n} | ... | 耗时:{time}
    """
    if is_quiet():
        return

    source_str = source if source else ""
    parts = [f"{PREFIX} ✅ {source_str}{task_type}完成"]
    parts.append(f"对象:{target}")
    parts.append(f"ID:{run_id}")
    for key, value in (counts or {}).items():
        parts.append(f"{key}:{value}")
    parts.append(f"耗时:{format_elapsed_time(elapsed_ms)}")

    _emit(f"{parts[0]} | {' | '.join(parts[1:])}")


def log_error(
    task_type: str,
    run_id: Optional[str],
    error_msg: str,
    source: str = None
) -> None:
    """
    输出统一格式的错误日志（不受 quiet 控制）
    """
    source_str = source if source else ""
    _emit(f"{PREFIX} ❌ {source_str}{task_type}失败 | ID:{run_id} | 错误:{error_msg}")


def log_warn(msg: str) -> None:
    if is_quiet():
        return
    _emit(f"{WARN_PREFIX} {msg}")


def generate_run_id(run_type: str, target: Optional[str] = None) -> str:
    """
    生成统一格式的运行ID
    格式: 运行类型_对象(可选)_四位时间戳
    示例: verify_T2_3456

    ID 只出现在 stderr 日志里，不会写进报告
    """
    timestamp = str(int(time.time()))[-4:]
    parts = [run_type]
    if target:
        parts.append(str(target))
    parts.append(timestamp)
    return "_".join(parts)


def format_elapsed_time(elapsed_ms: int) -> str:
    """
    格式化耗时显示

    参数:
        elapsed_ms: 毫秒数

    返回:
        格式化后的时间字符串（如 "6.5s"）
    """
    return f"{elapsed_ms/1000:.1f}s"


def format_error(e: Exception, task_display_name: str) -> str:
    """
    格式化异常信息

    参数:
        e: 异常对象
        task_display_name: 任务显示名称

    返回:
        str: 格式化后的错误信息
    """
    from ..services.core import SurgkitError

    if isinstance(e, SurgkitError):
        return f"{task_display_name} 输入错误: {str(e)}"
    return f"{task_display_name} 内部异常: ({type(e).__name__}) {str(e)}"
