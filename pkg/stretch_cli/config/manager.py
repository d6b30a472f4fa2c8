"""配置管理器

提供统一的配置管理接口，以及把 CLI 参数与持久化配置合并成 RunConfig 的入口。
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from .settings import (
    DEFAULT_SETTINGS,
    load_cli_settings,
    save_cli_settings,
    update_setting,
)
from .validators import (
    validate_float_range_setting,
    validate_positive_int_setting,
    validate_tolerance,
)


@dataclass(frozen=True)
class RunConfig:
    """一次 CLI 运行的生效参数"""

    subcommand: str = ""
    tol: float = 1e-12
    interval_width: float = 1e-14
    power_iteration_cap: int = 100_000
    bisection_cap: int = 400
    nmax: int = 40
    nmax_cap: int = 400
    seed: int = 20240518
    cone_dimension_cap: int = 20
    convexity_tolerance: float = 1e-6
    homogeneity_tolerance: float = 1e-9
    output: Optional[Path] = None
    debug_opposite_side: bool = False


class ConfigManager:
    """配置管理器类

    提供统一的配置访问和修改接口。
    """

    def __init__(self):
        """初始化配置管理器"""
        self._settings: Dict[str, Any] = {}
        self._dirty = False
        self.reload()

    def reload(self) -> None:
        """重新加载配置"""
        loaded = load_cli_settings()
        self._settings = {**DEFAULT_SETTINGS, **loaded}
        self._dirty = False

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值"""
        return self._settings.get(key, default)

    def set(self, key: str, value: Any, *, persist: bool = True, validate: bool = True) -> bool:
        """设置配置值

        Args:
            key: 配置键
            value: 配置值
            persist: 是否立即持久化
            validate: 是否验证值

        Returns:
            是否成功设置
        """
        if validate and not self._validate_value(key, value):
            return False

        old_value = self._settings.get(key)
        self._settings[key] = value
        self._dirty = True

        if persist:
            try:
                update_setting(self._settings, key, value)
                self._dirty = False
            except OSError:
                # 回滚
                if old_value is not None:
                    self._settings[key] = old_value
                else:
                    self._settings.pop(key, None)
                return False
        return True

    def update(self, updates: Dict[str, Any], *, persist: bool = True) -> bool:
        """批量更新配置，任一项验证失败则整体放弃"""
        if not all(self._validate_value(key, value) for key, value in updates.items()):
            return False
        previous = dict(self._settings)
        self._settings.update(updates)
        self._dirty = True
        if persist:
            try:
                save_cli_settings(self._settings)
                self._dirty = False
            except OSError:
                self._settings = previous
                return False
        return True

    def save(self) -> bool:
        """保存配置到文件"""
        if not self._dirty:
            return True
        try:
            save_cli_settings(self._settings)
            self._dirty = False
            return True
        except OSError:
            return False

    def is_dirty(self) -> bool:
        """检查配置是否有未保存的更改"""
        return self._dirty

    def get_all(self) -> Dict[str, Any]:
        """获取所有配置"""
        return dict(self._settings)

    def reset_to_defaults(self, *, persist: bool = True) -> bool:
        """重置为默认配置"""
        self._settings = dict(DEFAULT_SETTINGS)
        if not persist:
            self._dirty = True
            return True
        try:
            save_cli_settings(self._settings)
            self._dirty = False
            return True
        except OSError:
            return False

    def _validate_value(self, key: str, value: Any) -> bool:
        """按键名选择验证器；验证器回退到哨兵值即视为非法"""
        sentinel = object()
        if key in ("tolerance", "interval_width"):
            return validate_tolerance(value, sentinel) is not sentinel  # type: ignore[arg-type]
        if key.endswith("_cap") or key in ("nmax_default", "seed"):
            minimum = 0 if key == "seed" else 1
            return (
                validate_positive_int_setting(value, sentinel, minimum=minimum)  # type: ignore[arg-type]
                is not sentinel
            )
        if key.endswith("_tolerance") or key == "plot_line_width":
            return (
                validate_float_range_setting(value, sentinel, minimum=0.0)  # type: ignore[arg-type]
                is not sentinel
            )
        return True

    # 便捷方法
    def get_theme(self) -> str:
        """获取当前主题"""
        return self.get("cli_theme", DEFAULT_SETTINGS["cli_theme"])

    def get_tolerance(self) -> float:
        """获取 Perron 求解容差"""
        return validate_tolerance(self.get("tolerance"), DEFAULT_SETTINGS["tolerance"])

    def get_nmax_cap(self) -> int:
        """获取精确计数的 n 上限"""
        return validate_positive_int_setting(self.get("nmax_cap"), DEFAULT_SETTINGS["nmax_cap"])

    def get_cone_dimension_cap(self) -> int:
        """获取双重描述法的维数上限"""
        return validate_positive_int_setting(
            self.get("cone_dimension_cap"), DEFAULT_SETTINGS["cone_dimension_cap"]
        )

    def get_seed(self) -> int:
        """获取随机套件种子"""
        return validate_positive_int_setting(self.get("seed"), DEFAULT_SETTINGS["seed"], minimum=0)

    def build_run_config(
        self,
        subcommand: str = "",
        *,
        tol: Any = None,
        nmax: Any = None,
        seed: Any = None,
        output: Optional[Path] = None,
        debug_opposite_side: bool = False,
    ) -> RunConfig:
        """合并 CLI 覆盖值（优先）与持久化配置，生成 RunConfig"""
        nmax_cap = self.get_nmax_cap()
        default_nmax = validate_positive_int_setting(
            self.get("nmax_default"), DEFAULT_SETTINGS["nmax_default"], maximum=nmax_cap
        )
        return RunConfig(
            subcommand=subcommand,
            tol=validate_tolerance(tol, self.get_tolerance()) if tol is not None else self.get_tolerance(),
            interval_width=validate_tolerance(
                self.get("interval_width"), DEFAULT_SETTINGS["interval_width"]
            ),
            power_iteration_cap=validate_positive_int_setting(
                self.get("power_iteration_cap"), DEFAULT_SETTINGS["power_iteration_cap"]
            ),
            bisection_cap=validate_positive_int_setting(
                self.get("bisection_cap"), DEFAULT_SETTINGS["bisection_cap"]
            ),
            nmax=(
                validate_positive_int_setting(nmax, default_nmax, maximum=nmax_cap)
                if nmax is not None
                else default_nmax
            ),
            nmax_cap=nmax_cap,
            seed=(
                validate_positive_int_setting(seed, self.get_seed(), minimum=0)
                if seed is not None
                else self.get_seed()
            ),
            cone_dimension_cap=self.get_cone_dimension_cap(),
            convexity_tolerance=validate_float_range_setting(
                self.get("convexity_tolerance"), DEFAULT_SETTINGS["convexity_tolerance"], minimum=0.0
            ),
            homogeneity_tolerance=validate_float_range_setting(
                self.get("homogeneity_tolerance"),
                DEFAULT_SETTINGS["homogeneity_tolerance"],
                minimum=0.0,
            ),
            output=output,
            debug_opposite_side=debug_opposite_side,
        )


# 全局配置管理器实例
config_manager = ConfigManager()
