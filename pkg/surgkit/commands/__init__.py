"""
子命令包
各模块导出 COMMAND_CLASS_MAPPINGS / COMMAND_DISPLAY_NAME_MAPPINGS，在这里汇总
"""

from .cf_command import COMMAND_CLASS_MAPPINGS as CF_COMMAND_CLASS_MAPPINGS
from .cf_command import COMMAND_DISPLAY_NAME_MAPPINGS as CF_COMMAND_DISPLAY_NAME_MAPPINGS
from .param_command import COMMAND_CLASS_MAPPINGS as PARAM_COMMAND_CLASS_MAPPINGS
from .param_command import COMMAND_DISPLAY_NAME_MAPPINGS as PARAM_COMMAND_DISPLAY_NAME_MAPPINGS
from .trace_command import COMMAND_CLASS_MAPPINGS as TRACE_COMMAND_CLASS_MAPPINGS
from .trace_command import COMMAND_DISPLAY_NAME_MAPPINGS as TRACE_COMMAND_DISPLAY_NAME_MAPPINGS
from .verify_command import COMMAND_CLASS_MAPPINGS as VERIFY_COMMAND_CLASS_MAPPINGS
from .verify_command import COMMAND_DISPLAY_NAME_MAPPINGS as VERIFY_COMMAND_DISPLAY_NAME_MAPPINGS

COMMAND_CLASS_MAPPINGS = {
    **CF_COMMAND_CLASS_MAPPINGS,
    **PARAM_COMMAND_CLASS_MAPPINGS,
    **VERIFY_COMMAND_CLASS_MAPPINGS,
    **TRACE_COMMAND_CLASS_MAPPINGS,
}

COMMAND_DISPLAY_NAME_MAPPINGS = {
    **CF_COMMAND_DISPLAY_NAME_MAPPINGS,
    **PARAM_COMMAND_DISPLAY_NAME_MAPPINGS,
    **VERIFY_COMMAND_DISPLAY_NAME_MAPPINGS,
    **TRACE_COMMAND_DISPLAY_NAME_MAPPINGS,
}

__all__ = ["COMMAND_CLASS_MAPPINGS", "COMMAND_DISPLAY_NAME_MAPPINGS"]
