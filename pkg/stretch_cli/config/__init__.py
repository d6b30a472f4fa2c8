"""配置管理模块

包含设置管理、验证和统一配置管理器。
"""

from .manager import (
    ConfigManager,
    RunConfig,
    config_manager,
)
from .settings import (
    DEFAULT_SETTINGS,
    SETTINGS_STORE_PATH,
    load_cli_settings,
    save_cli_settings,
    update_setting,
)
from .validators import (
    validate_float_range_setting,
    validate_positive_int_setting,
    validate_tolerance,
)

__all__ = [
    # Config manager
    "ConfigManager",
    "RunConfig",
    "config_manager",
    # Settings management
    "DEFAULT_SETTINGS",
    "SETTINGS_STORE_PATH",
    "load_cli_settings",
    "save_cli_settings",
    "update_setting",
    # Validators
    "validate_float_range_setting",
    "validate_positive_int_setting",
    "validate_tolerance",
]
