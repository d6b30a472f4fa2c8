"""调试工具模块

提供流水线事件追踪（STRETCH_TRACE=1 时写入文本文件）。
"""

from __future__ import annotations

import os
import time
from pathlib import Path

# 追踪配置
_TRACE_ENABLED = os.getenv("STRETCH_TRACE") == "1"
_TRACE_PATH = Path(os.getenv("STRETCH_TRACE_PATH") or Path.home() / ".stretch_lens_trace.txt")


def log_event(label: str, payload: object) -> None:
    """记录一条流水线事件

    Args:
        label: 事件标签，例如 "parse"、"growth"
        payload: 事件内容，会被转成单行文本
    """
    if not _TRACE_ENABLED:
        return

    try:
        escaped = str(payload).encode("unicode_escape", errors="backslashreplace").decode("ascii")
        with _TRACE_PATH.open("a", encoding="utf-8") as handle:
            handle.write(f"{time.time():.6f} {label}: {escaped}\n")
    except OSError:
        pass


def set_trace_enabled(enabled: bool, path: Path | None = None) -> None:
    """在运行时开关追踪"""
    global _TRACE_ENABLED, _TRACE_PATH
    _TRACE_ENABLED = enabled
    if path is not None:
        _TRACE_PATH = Path(path)


def is_trace_enabled() -> bool:
    """检查追踪是否启用"""
    return _TRACE_ENABLED


def get_trace_path() -> Path:
    """获取追踪文件路径"""
    return _TRACE_PATH
