"""
子命令基类模块
提供所有子命令的通用基础能力
"""

from .base_command import BaseCommand

__all__ = [
    'BaseCommand'
]
