"""终端显示宽度工具

表格对齐时需要忽略 ANSI 颜色码；wcwidth 可选，缺失时按 Unicode 东亚宽度估算。
"""

from __future__ import annotations

import functools
import re
import unicodedata

try:
    from wcwidth import wcswidth as _wcswidth
except ImportError:  # pragma: no cover - 可选依赖
    _wcswidth = None

_ANSI_PATTERN = re.compile(r"\x1b\[[0-9;]*m")


@functools.lru_cache(maxsize=2048)
def strip_ansi(text: str) -> str:
    """移除 ANSI 转义序列

    >>> strip_ansi("\\x1b[32mPASS\\x1b[0m")
    'PASS'
    """
    return _ANSI_PATTERN.sub("", text)


def _unicode_width(text: str) -> int:
    width = 0
    for char in text:
        if unicodedata.combining(char):
            continue
        width += 2 if unicodedata.east_asian_width(char) in {"F", "W"} else 1
    return width


@functools.lru_cache(maxsize=1024)
def display_width(text: str) -> int:
    """终端显示列数

    >>> display_width("λ = 2.618")
    9
    >>> display_width("拉伸")
    4
    """
    cleaned = strip_ansi(text)
    if _wcswidth is not None:
        width = _wcswidth(cleaned)
        if width >= 0:
            return width
    return _unicode_width(cleaned)


def pad_display(text: str, width: int, align: str = "left") -> str:
    """按显示宽度补齐空格，align 取 left / right / center"""
    delta = max(0, width - display_width(text))
    if align == "right":
        return " " * delta + text
    if align == "center":
        left = delta // 2
        return " " * left + text + " " * (delta - left)
    return text + " " * delta
