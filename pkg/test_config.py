#!/usr/bin/env python
"""
测试配置验证、持久化与 RunConfig 合并逻辑
"""

import dataclasses
import sys
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.config import (
    DEFAULT_SETTINGS,
    ConfigManager,
    RunConfig,
    validate_float_range_setting,
    validate_positive_int_setting,
    validate_tolerance,
)
from stretch_cli.config import settings as settings_module
from stretch_cli.utils.parsers import parse_fraction_vector, parse_int_list


@pytest.fixture
def store(tmp_path, monkeypatch):
    path = tmp_path / "cli_settings.json"
    monkeypatch.setattr(settings_module, "SETTINGS_STORE_PATH", path)
    return path


def test_validate_tolerance():
    assert validate_tolerance(1e-9) == 1e-9
    assert validate_tolerance(1e-2) == 1e-2
    assert validate_tolerance(0.5, 1e-12) == 1e-12
    assert validate_tolerance(0, 1e-12) == 1e-12
    assert validate_tolerance("invalid", 1e-12) == 1e-12


def test_validate_int_and_float_ranges():
    assert validate_positive_int_setting(10, 5) == 10
    assert validate_positive_int_setting(-5, 5) == 5
    assert validate_positive_int_setting(100, 5, maximum=50) == 5
    assert validate_float_range_setting(2.5, 1.0, minimum=0, maximum=10) == 2.5
    assert validate_float_range_setting("x", 1.0) == 1.0


def test_missing_store_gives_defaults(store):
    manager = ConfigManager()
    assert manager.get_all() == DEFAULT_SETTINGS
    assert manager.get_tolerance() == 1e-12
    assert manager.get_nmax_cap() == 400


def test_corrupt_store_is_ignored(store):
    store.write_text("{broken", encoding="utf-8")
    assert settings_module.load_cli_settings() == {}


def test_set_validates_and_persists(store):
    manager = ConfigManager()
    assert not manager.set("tolerance", 0.5)
    assert manager.get_tolerance() == 1e-12
    assert manager.set("nmax_cap", 100)
    assert store.exists()
    assert ConfigManager().get_nmax_cap() == 100


def test_update_is_all_or_nothing(store):
    manager = ConfigManager()
    assert not manager.update({"seed": 3, "bisection_cap": -1})
    assert manager.get_seed() == DEFAULT_SETTINGS["seed"]
    assert manager.update({"seed": 3, "cli_theme": "ember"})
    assert manager.get_seed() == 3
    assert manager.get_theme() == "ember"


def test_reset_to_defaults(store):
    manager = ConfigManager()
    manager.set("seed", 9)
    assert manager.reset_to_defaults()
    assert ConfigManager().get_seed() == DEFAULT_SETTINGS["seed"]


def test_deferred_set_marks_dirty_until_saved(store):
    manager = ConfigManager()
    assert not manager.is_dirty()
    assert manager.set("seed", 11, persist=False)
    assert manager.is_dirty()
    assert not store.exists()
    assert manager.save()
    assert not manager.is_dirty()
    assert ConfigManager().get_seed() == 11


def test_run_config_prefers_flags(store):
    manager = ConfigManager()
    config = manager.build_run_config("stretch", tol=1e-6, nmax=20, seed=5, output=Path("out.json"))
    assert config.subcommand == "stretch"
    assert config.tol == 1e-6
    assert config.nmax == 20
    assert config.seed == 5
    assert config.output == Path("out.json")
    assert config.cone_dimension_cap == 20


def test_run_config_rejects_out_of_range_flags(store):
    config = ConfigManager().build_run_config("track", tol=0.5, nmax=1000)
    assert config.tol == 1e-12
    assert config.nmax == 40


def test_run_config_is_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        RunConfig().tol = 1.0  # type: ignore[misc]


def test_parsers():
    assert parse_int_list("1, 2,3") == [1, 2, 3]
    assert parse_int_list("1,a") is None
    assert [str(x) for x in parse_fraction_vector("1/2,0,3")] == ["1/2", "0", "3"]
    assert parse_fraction_vector("1/0") is None
