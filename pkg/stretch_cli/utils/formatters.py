"""通用格式化工具

数值、向量、判定结果与对齐表格的文本形式，供报告与 CLI 复用。
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .colors import colorize, verdict_style
from .display import display_width, pad_display


def format_fraction(value: Any) -> str:
    """整数原样输出，分数写成 p/q，浮点保留 10 位有效数字

    >>> format_fraction(Fraction(3, 4))
    '3/4'
    >>> format_fraction(Fraction(6, 3))
    '2'
    """
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def format_vector(values: Iterable[Any]) -> str:
    """
    >>> format_vector([1, Fraction(1, 2), 0])
    '(1, 1/2, 0)'
    """
    return "(" + ", ".join(format_fraction(v) for v in values) + ")"


def format_growth(lam: Optional[float], *, digits: int = 10) -> str:
    if lam is None:
        return "-"
    return f"λ = {lam:.{digits}f}  (log λ = {math.log(lam):.{digits}f})"


def format_verdict(passed: bool, *, enable_color: bool = True) -> str:
    text = "PASS" if passed else "FAIL"
    return colorize(text, verdict_style(passed)) if enable_color else text


def render_table(columns: Sequence[tuple[str, str, str]], rows: Sequence[dict[str, Any]]) -> str:
    """columns 为 (key, header, align)；行内 ``style_<key>`` 指定单元格颜色"""
    if not rows:
        return ""
    widths = {
        key: max([display_width(header), *(display_width(str(row.get(key, ""))) for row in rows)])
        for key, header, _ in columns
    }

    def cell(key: str, text: str, align: str, style: Optional[str] = None) -> str:
        padded = pad_display(str(text), widths[key], align)
        return colorize(padded, style) if style else padded

    header = " | ".join(cell(key, title, align, "heading") for key, title, align in columns)
    divider = colorize("-+-".join("-" * widths[key] for key, _, _ in columns), "divider")
    body = [
        " | ".join(cell(key, row.get(key, ""), align, row.get(f"style_{key}")) for key, _, align in columns)
        for row in rows
    ]
    return "\n".join([header, divider, *body])
