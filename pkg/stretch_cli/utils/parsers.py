"""解析相关工具函数

处理命令行里逗号分隔的整数、浮点数与有理数向量。
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

_FRACTION_PATTERN = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_int_list(value: str | None) -> Optional[list[int]]:
    """解析逗号分隔的整数列表

    Examples:
        >>> parse_int_list("1, 2,3")
        [1, 2, 3]
        >>> parse_int_list("1,x") is None
        True
    """
    if value is None:
        return None
    tokens = [token.strip() for token in value.split(",") if token.strip()]
    try:
        return [int(token) for token in tokens]
    except ValueError:
        return None


def parse_fraction(token: str) -> Optional[Fraction]:
    """解析单个有理数 "p" 或 "p/q"

    Examples:
        >>> parse_fraction("3/4")
        Fraction(3, 4)
        >>> parse_fraction("1/0") is None
        True
    """
    match = _FRACTION_PATTERN.match(token)
    if not match:
        return None
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def parse_fraction_vector(value: str | None) -> Optional[list[Fraction]]:
    """解析逗号分隔的有理数向量

    Examples:
        >>> parse_fraction_vector("1/2,0,3")
        [Fraction(1, 2), Fraction(0, 1), Fraction(3, 1)]
        >>> parse_fraction_vector("1,,a") is None
        True
    """
    if value is None:
        return None
    tokens = [token for token in value.split(",")]
    parsed = [parse_fraction(token) for token in tokens]
    if not parsed or any(item is None for item in parsed):
        return None
    return parsed  # type: ignore[return-value]
