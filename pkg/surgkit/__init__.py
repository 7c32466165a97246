import os
import re

from .commands import COMMAND_CLASS_MAPPINGS, COMMAND_DISPLAY_NAME_MAPPINGS


def get_version():
    """
    从pyproject.toml文件中读取版本号；安装后的包没有该文件，改读包元数据

    Returns:
        str: 版本号字符串

    Raises:
        ValueError: 当无法找到版本号时抛出
    """
    toml_path = os.path.join(os.path.dirname(os.path.dirname(__file__)), "pyproject.toml")
    if os.path.exists(toml_path):
        with open(toml_path, "r", encoding='utf-8') as f:
            version_match = re.search(r'^version\s*=\s*"([^"]+)"', f.read(), re.MULTILINE)
            if version_match:
                return version_match.group(1)
    try:
        from importlib.metadata import version
        return version("surgkit")
    except Exception:
        raise ValueError("未在pyproject.toml或包元数据中找到版本号")


# 初始化版本号
VERSION = get_version()

__all__ = ['COMMAND_CLASS_MAPPINGS', 'COMMAND_DISPLAY_NAME_MAPPINGS', 'VERSION', 'get_version']
