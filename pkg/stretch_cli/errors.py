"""异常定义

所有领域错误都继承自 StretchLensError，并携带 CLI 退出码：
1 为 I/O，2 为输入/校验/领域错误，3 为数值不收敛。
"""

from __future__ import annotations

from typing import Sequence


class StretchLensError(Exception):
    """Base class for every error raised by the stretch_cli pipeline."""

    exit_code = 2


class InputFormatError(StretchLensError, ValueError):
    """文档格式错误：缺字段、悬空粘合、粘合不是对合等。"""


class DomainError(StretchLensError, ValueError):
    """输入合法但不满足运算前提（非 veering、非 carried、维度不符、超出上限等）。"""


class ZeroWeightCycleError(DomainError):
    """加权增长率要求每个有向圈权重为正；这里附带一个权重为 0 的圈作为见证。"""

    def __init__(self, message: str, cycle: Sequence[int] = ()) -> None:
        super().__init__(message)
        self.cycle = list(cycle)


class EmptyCoreError(DomainError):
    """动力核为空时增长率无定义。"""


class ConstructionError(StretchLensError, RuntimeError):
    """扇区追踪或 Φ 两种描述对账失败。"""


class NonConvergenceError(StretchLensError, ArithmeticError):
    """二分或幂迭代在上限内未收敛。"""

    exit_code = 3
