"""
图表相关业务逻辑
"""
from __future__ import annotations

from pathlib import Path
from typing import Callable, Optional

import pandas as pd

from ..utils.colors import colorize


def ensure_plotly(colorize_func: Callable[..., str] = colorize):
    try:
        import plotly.graph_objects as go  # type: ignore
    except Exception:
        print(
            colorize_func(
                "缺少 plotly，无法生成交互式图表。请运行 `pip install plotly` 后重试。",
                "warning",
            )
        )
        return None
    return go


def plot_entropy_segment(
    frame: pd.DataFrame,
    output_dir: Path,
    filename: str,
    *,
    title: str = "ent along a segment",
    plot_template: str = "plotly_white",
    line_width: float = 2.2,
    colorize_func: Callable[..., str] = colorize,
) -> Optional[Path]:
    """ent(t) 折线图，外加端点弦（凸性检查的参照线）"""
    usable = frame.dropna(subset=["t", "ent"]).sort_values("t")
    if usable.empty:
        print(colorize_func("没有可绘制的熵采样点。", "warning"))
        return None
    go = ensure_plotly(colorize_func)
    if go is None:
        return None

    figure = go.Figure()
    figure.add_trace(
        go.Scatter(
            x=usable["t"],
            y=usable["ent"],
            mode="lines+markers",
            name="ent",
            line={"width": line_width},
            hovertext=usable["xi"],
        )
    )
    first, last = usable.iloc[0], usable.iloc[-1]
    figure.add_trace(
        go.Scatter(
            x=[first["t"], last["t"]],
            y=[first["ent"], last["ent"]],
            mode="lines",
            name="chord",
            line={"width": max(1.0, line_width / 2), "dash": "dash"},
        )
    )
    figure.update_layout(
        title=title,
        xaxis_title="t",
        yaxis_title="log λ",
        hovermode="x unified",
        template=plot_template,
    )

    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / filename
    figure.write_html(str(path), include_plotlyjs="cdn")
    return path
