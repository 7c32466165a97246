"""
核心基础设施模块
提供统一的异常层级和服务结果格式
"""

from typing import Any, Dict


# ==================== 异常层级 ====================

class SurgkitError(ValueError):
    """所有输入/前置条件错误的基类，命令层映射为退出码 2"""


class CFError(SurgkitError):
    """连分数文本格式错误或展开输入不合法"""


class LensError(SurgkitError):
    """透镜空间参数错误（p=0、不互素等）"""


class PillowError(SurgkitError):
    """a 序列与 (p,q) 不一致，或 k 退化"""


class SeifertError(SurgkitError):
    """Seifert 数据非法或不满足表格条件"""


class CatalogError(SurgkitError):
    """目录文件缺失、格式错误、版本过旧，或表/类型不存在"""


class FamilyError(SurgkitError):
    """参数不满足族的条件，或 p <= 1"""


# ==================== 服务基类 ====================

class BaseService:
    """
    服务抽象基类
    计算内核直接抛异常，由服务层包装成统一的结果字典
    """

    @staticmethod
    def success(data: Any) -> Dict[str, Any]:
        return {"success": True, "data": data}

    @staticmethod
    def handle_error(error: Exception, task: str) -> Dict[str, Any]:
        """
        统一错误处理

        参数:
            error: 异常对象
            task: 任务显示名称

        返回:
            Dict: 错误响应 {"success": False, "error": msg, "usage": bool}
        """
        from ..utils.common import format_error
        return {
            "success": False,
            "error": format_error(error, task),
            "usage": isinstance(error, SurgkitError),
        }

    @classmethod
    def call(cls, task: str, func, *args, **kwargs) -> Dict[str, Any]:
        """调用内核函数，异常转为错误字典"""
        try:
            return cls.success(func(*args, **kwargs))
        except Exception as e:
            return cls.handle_error(e, task)
