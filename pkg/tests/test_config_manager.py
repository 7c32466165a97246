import json

import pytest

from surgkit.config_manager import ConfigManager, dump_json
from surgkit.services.core import CatalogError


@pytest.fixture
def manager():
    return ConfigManager()


def test_compare_versions(manager):
    assert manager._compare_versions("1.0.0", "1.0") == 0
    assert manager._compare_versions("1.2.0", "1.10.0") == -1
    assert manager._compare_versions("2.0", "1.9.9") == 1


def test_default_settings(manager):
    settings = manager.verify_settings()
    assert settings["bound"] == 1
    assert settings["ranges"]["2"]["l"] == [-100, 100]


def test_user_config_overrides_only_given_keys(manager, tmp_path, monkeypatch):
    path = tmp_path / "user.json"
    path.write_text(json.dumps({"verify": {"bound": 3, "ranges": {"2": {"l": [-5, 5]}}}}), encoding="utf-8")
    monkeypatch.setenv("SURGKIT_CONFIG", str(path))
    settings = manager.verify_settings()
    assert settings["bound"] == 3
    assert settings["workers"] == 1
    assert settings["ranges"]["2"]["l"] == [-5, 5]
    assert settings["ranges"]["3"]["l"] == [-100, 100]
    # 默认值不被污染
    assert manager.default_config["verify"]["bound"] == 1


def test_unreadable_user_config_falls_back(manager, tmp_path, monkeypatch):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    monkeypatch.setenv("SURGKIT_CONFIG", str(path))
    assert manager.verify_settings()["bound"] == 1


@pytest.mark.parametrize("content", [
    "{not json",
    json.dumps({"__config_version": "0.9.0", "tables": {}}),
    json.dumps({"__config_version": "1.0.0"}),
])
def test_bad_catalogs_rejected(manager, tmp_path, content):
    path = tmp_path / "catalog.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(CatalogError):
        manager.load_catalog(str(path))


def test_missing_catalog_rejected(manager, tmp_path):
    with pytest.raises(CatalogError):
        manager.load_catalog(str(tmp_path / "nope.json"))


def test_catalog_path_from_environment(manager, tmp_path, monkeypatch):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps({"__config_version": "1.0.0", "tables": {}}), encoding="utf-8")
    monkeypatch.setenv("SURGKIT_CATALOG", str(path))
    assert manager.resolve_catalog_path() == str(path)
    assert manager.load_catalog() == {"__config_version": "1.0.0", "tables": {}}


def test_atomic_json_write_is_deterministic(manager, tmp_path):
    target = tmp_path / "out" / "report.json"
    data = {"b": 1, "a": [1, 2], "c": "ℓ"}
    assert manager._atomic_write_json(str(target), data)
    first = target.read_bytes()
    assert manager._atomic_write_json(str(target), dict(reversed(list(data.items()))))
    assert target.read_bytes() == first
    assert first.decode("utf-8") == dump_json(data) + "\n"
    assert [p.name for p in target.parent.iterdir()] == ["report.json"]


def test_atomic_write_failure_keeps_old_file(manager, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")
    assert not manager._atomic_write_text(str(blocker / "child.txt"), "data")
    assert blocker.read_text(encoding="utf-8") == "x"
