import copy
import json
import os
import shutil
import tempfile
from typing import Any, Dict, Optional

from .services.core import CatalogError
from .utils.common import PREFIX, WARN_PREFIX, _emit, is_quiet


class ConfigManager:
    def __init__(self):
        # 包目录
        self.dir_path = os.path.dirname(os.path.abspath(__file__))

        # ---模板目录（包内置）---
        self.templates_dir = os.path.join(self.dir_path, "config")
        self.catalog_path = os.path.join(self.templates_dir, "catalog.json")

        # ---加载默认配置（从模板文件）---
        self.default_config = self._load_template("config", {
            "min_catalog_version": "1.0.0",
            "verify": {"bound": 1, "max_search_length": 12, "workers": 1, "ranges": {}},
        })

        # 已加载的目录，按绝对路径缓存
        self._catalogs: Dict[str, Dict[str, Any]] = {}

    # --- 统一日志输出 ---
    def _log(self, msg: str):
        """统一控制台日志前缀"""
        if not is_quiet():
            _emit(f"{PREFIX} {msg}")

    # ---模板加载---
    def _load_template(self, template_name: str, fallback: dict = None) -> dict:
        """
        从模板文件加载默认配置

        参数:
            template_name: 模板名称（不含扩展名和_template后缀）
            fallback: 加载失败时的回退默认值

        返回:
            配置字典（包含 __config_version 用于版本管理）
        """
        template_path = os.path.join(self.templates_dir, f"{template_name}_template.json")
        try:
            with open(template_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except Exception as e:
            self._log(f"加载模板 {template_name} 失败: {str(e)}，使用回退值")
            if fallback is None:
                fallback = {}
            if "__config_version" not in fallback:
                fallback = {"__config_version": "1.0.0", **fallback}
            return fallback

    def _get_config_version(self, config: dict) -> str:
        """__config_version 优先，其次 version，都没有视为 1.0"""
        if "__config_version" in config:
            return config["__config_version"]
        return config.get("version", "1.0")

    def _compare_versions(self, v1: str, v2: str) -> int:
        """
        比较两个版本号

        返回:
            1: v1 > v2
            0: v1 == v2
            -1: v1 < v2
        """
        def parse(v):
            return [int(x) for x in str(v).split('.')]
        p1, p2 = parse(v1), parse(v2)
        # 补齐长度
        max_len = max(len(p1), len(p2))
        p1.extend([0] * (max_len - len(p1)))
        p2.extend([0] * (max_len - len(p2)))
        for a, b in zip(p1, p2):
            if a > b:
                return 1
            if a < b:
                return -1
        return 0

    # ---运行配置---
    def load_config(self) -> dict:
        """
        默认配置，叠加 SURGKIT_CONFIG 指向的用户文件（只覆盖出现的键）
        用户文件读取失败时回退默认值
        """
        config = copy.deepcopy(self.default_config)
        user_path = os.environ.get("SURGKIT_CONFIG")
        if not user_path:
            return config
        try:
            with open(user_path, "r", encoding="utf-8") as f:
                user_config = json.load(f)
        except Exception as e:
            _emit(f"{WARN_PREFIX} 加载配置文件失败: {str(e)}，使用默认配置")
            return config
        return _deep_merge(config, user_config)

    def verify_settings(self) -> dict:
        return self.load_config().get("verify", {})

    # ---目录加载---
    def resolve_catalog_path(self, path: Optional[str] = None) -> str:
        """目录路径优先级: 显式参数 > SURGKIT_CATALOG > 包内置"""
        return os.path.abspath(path or os.environ.get("SURGKIT_CATALOG") or self.catalog_path)

    def load_catalog(self, path: Optional[str] = None) -> Dict[str, Any]:
        """
        读取目录 JSON 并检查版本

        异常:
            CatalogError: 文件不存在、JSON 无效或版本低于 min_catalog_version
        """
        resolved = self.resolve_catalog_path(path)
        if resolved in self._catalogs:
            return self._catalogs[resolved]
        try:
            with open(resolved, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise CatalogError(f"目录文件不存在: {resolved}")
        except json.JSONDecodeError as e:
            raise CatalogError(f"目录文件不是合法 JSON [{os.path.basename(resolved)}]: {e}")

        version = self._get_config_version(data)
        minimum = self.load_config().get("min_catalog_version", "1.0.0")
        if self._compare_versions(version, minimum) < 0:
            raise CatalogError(f"目录版本 {version} 低于要求的 {minimum}")
        if "tables" not in data:
            raise CatalogError(f"目录缺少 tables 字段: {resolved}")

        self._catalogs[resolved] = data
        return data

    # ---原子写入---
    def _atomic_write_text(self, file_path: str, text: str) -> bool:
        """
        原子性写入文本文件：写临时文件后整体替换，失败时旧文件保持不变

        返回:
            bool: 保存成功返回 True，失败返回 False
        """
        temp_fd = None
        temp_path = None
        target_dir = os.path.dirname(os.path.abspath(file_path))

        try:
            os.makedirs(target_dir, exist_ok=True)
            # 在同一目录下创建临时文件（确保在同一文件系统，rename 才是原子的）
            temp_fd, temp_path = tempfile.mkstemp(dir=target_dir, suffix='.tmp', prefix='.tmp_')

            with os.fdopen(temp_fd, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
                temp_fd = None

            shutil.move(temp_path, file_path)
            temp_path = None
            return True

        except Exception as e:
            _emit(f"{WARN_PREFIX} 原子性写入失败 [{os.path.basename(file_path)}]: {str(e)}")
            return False

        finally:
            if temp_fd is not None:
                try:
                    os.close(temp_fd)
                except OSError:
                    pass
            if temp_path is not None and os.path.exists(temp_path):
                try:
                    os.unlink(temp_path)
                except OSError:
                    pass

    def _atomic_write_json(self, file_path: str, data: dict) -> bool:
        """键排序、无时间戳，同样的输入得到逐字节相同的文件"""
        return self._atomic_write_text(file_path, dump_json(data) + "\n")


def dump_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True)


def _deep_merge(base: dict, override: dict) -> dict:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = _deep_merge(base[key], value)
        else:
            base[key] = value
    return base


# 创建全局配置管理器实例
config_manager = ConfigManager()
