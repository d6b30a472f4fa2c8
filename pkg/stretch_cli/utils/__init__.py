"""工具函数模块

包含颜色、显示、解析、格式化与事件追踪等通用工具。
"""

from .colors import (
    apply_theme,
    colorize,
    edge_color_style,
    get_available_themes,
    get_current_theme,
    is_color_enabled,
    set_color_enabled,
    verdict_style,
)
from .debug import (
    get_trace_path,
    is_trace_enabled,
    log_event,
    set_trace_enabled,
)
from .display import (
    display_width,
    pad_display,
    strip_ansi,
)
from .formatters import (
    format_fraction,
    format_growth,
    format_vector,
    format_verdict,
    render_table,
)
from .parsers import (
    parse_fraction,
    parse_fraction_vector,
    parse_int_list,
)

__all__ = [
    # Color utilities
    "apply_theme",
    "colorize",
    "edge_color_style",
    "get_available_themes",
    "get_current_theme",
    "is_color_enabled",
    "set_color_enabled",
    "verdict_style",
    # Trace utilities
    "get_trace_path",
    "is_trace_enabled",
    "log_event",
    "set_trace_enabled",
    # Display utilities
    "display_width",
    "pad_display",
    "strip_ansi",
    # Formatters
    "format_fraction",
    "format_growth",
    "format_vector",
    "format_verdict",
    "render_table",
    # Parsers
    "parse_fraction",
    "parse_fraction_vector",
    "parse_int_list",
]
