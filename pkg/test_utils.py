#!/usr/bin/env python
"""
测试终端工具：配色主题、显示宽度、表格对齐与事件追踪
"""

import sys
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.utils import colors, debug
from stretch_cli.utils.display import display_width, pad_display, strip_ansi
from stretch_cli.utils.formatters import format_growth, format_verdict, render_table


@pytest.fixture
def restore_colors():
    enabled, theme = colors.is_color_enabled(), colors.get_current_theme()
    yield
    colors.set_color_enabled(enabled)
    colors.apply_theme(theme)


def test_apply_theme(restore_colors):
    assert colors.apply_theme("ember")
    assert colors.get_current_theme() == "ember"
    assert not colors.apply_theme("no-such-theme")
    assert colors.get_current_theme() == "ember"
    assert set(colors.get_available_themes()) == {"aurora", "ember", "evergreen"}


def test_color_switch(restore_colors):
    colors.set_color_enabled(False)
    assert not colors.is_color_enabled()
    assert colors.colorize("PASS", "value_positive") == "PASS"
    colors.set_color_enabled(True)
    assert colors.is_color_enabled()
    painted = colors.colorize("PASS", "value_positive")
    assert painted != "PASS"
    assert strip_ansi(painted) == "PASS"


def test_display_width_ignores_color_codes(restore_colors):
    colors.set_color_enabled(True)
    assert display_width(colors.colorize("拉伸", "heading")) == 4
    assert pad_display("λ", 3, "right") == "  λ"
    assert pad_display("ab", 4, "center") == " ab "


def test_render_table_aligns_wide_cells(restore_colors):
    colors.set_color_enabled(False)
    table = render_table(
        [("name", "名称", "left"), ("lam", "λ", "right")],
        [{"name": "figure-eight", "lam": "2.618"}, {"name": "黄金", "lam": "1.618"}],
    )
    lines = table.splitlines()
    assert len(lines) == 4
    assert len({display_width(line) for line in lines}) == 1
    assert render_table([("name", "名称", "left")], []) == ""


def test_verdict_and_growth_text():
    assert format_verdict(True, enable_color=False) == "PASS"
    assert format_verdict(False, enable_color=False) == "FAIL"
    assert format_growth(None) == "-"
    assert format_growth(1.0, digits=3) == "λ = 1.000  (log λ = 0.000)"


def test_trace_writes_one_line_per_event(tmp_path):
    enabled, path = debug.is_trace_enabled(), debug.get_trace_path()
    trace = tmp_path / "trace.txt"
    try:
        debug.set_trace_enabled(True, trace)
        assert debug.get_trace_path() == trace
        debug.log_event("growth", "λ = 3")
        debug.log_event("cut", [0, 1])
    finally:
        debug.set_trace_enabled(enabled, path)
    lines = trace.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert lines[0].split(" ", 1)[1] == "growth: \\u03bb = 3"
    assert lines[1].endswith("cut: [0, 1]")


def test_trace_disabled_writes_nothing(tmp_path):
    enabled, path = debug.is_trace_enabled(), debug.get_trace_path()
    trace = tmp_path / "trace.txt"
    try:
        debug.set_trace_enabled(False, trace)
        debug.log_event("parse", "figure-eight")
    finally:
        debug.set_trace_enabled(enabled, path)
    assert not trace.exists()
