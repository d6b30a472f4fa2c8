"""报告生成模块

所有子命令把结果整理成同一种 state 字典，再渲染成文本、Markdown 或 JSON：

    {
        "title": str,
        "subject": str,                 # 输入名称或路径
        "verdict": bool | None,         # None 表示该命令没有通过/失败的概念
        "sections": [{"heading": str, "items": [[label, value], ...],
                      "columns": [(key, header, align), ...], "rows": [dict, ...]}],
        "warnings": [str, ...],
        "payload": dict,                # JSON 输出的内容
    }
"""

from __future__ import annotations

import json
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from ..utils.colors import colorize
from ..utils.formatters import format_verdict, render_table


def new_state(title: str, subject: str = "", *, verdict: Optional[bool] = None) -> Dict[str, Any]:
    return {"title": title, "subject": subject, "verdict": verdict, "sections": [], "warnings": [], "payload": {}}


def add_section(
    state: Dict[str, Any],
    heading: str,
    items: Iterable[tuple[str, Any]] = (),
    *,
    columns: Optional[List[tuple[str, str, str]]] = None,
    rows: Optional[List[Dict[str, Any]]] = None,
) -> Dict[str, Any]:
    section: Dict[str, Any] = {"heading": heading, "items": [[label, value] for label, value in items]}
    if columns and rows is not None:
        section["columns"] = columns
        section["rows"] = rows
    state["sections"].append(section)
    return section


def render_text_report(state: Dict[str, Any], *, enable_color: bool = True) -> str:
    """渲染文本格式报告"""
    lines = []
    title = f"=== {state.get('title', '报告')} ==="
    lines.append(colorize(title, "title") if enable_color else title)
    if state.get("subject"):
        lines.append(f"输入: {state['subject']}")
    if state.get("verdict") is not None:
        lines.append(f"结论: {format_verdict(bool(state['verdict']), enable_color=enable_color)}")
    lines.append("")

    for section in state.get("sections", []):
        heading = f"=== {section['heading']} ==="
        lines.append(colorize(heading, "heading") if enable_color else heading)
        width = max((len(str(label)) for label, _ in section.get("items", [])), default=0)
        for label, value in section.get("items", []):
            lines.append(f"{str(label).ljust(width)} : {value}")
        if section.get("rows"):
            lines.append(render_table(section["columns"], section["rows"]))
        lines.append("")

    if state.get("warnings"):
        heading = "=== 警告 ==="
        lines.append(colorize(heading, "warning") if enable_color else heading)
        for warning in state["warnings"]:
            lines.append(f"  • {warning}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def _markdown_table(columns: List[tuple[str, str, str]], rows: List[Dict[str, Any]]) -> List[str]:
    align_marks = {"left": ":---", "right": "---:", "center": ":---:"}
    out = [
        "| " + " | ".join(header for _, header, _ in columns) + " |",
        "| " + " | ".join(align_marks.get(align, "---") for _, _, align in columns) + " |",
    ]
    for row in rows:
        out.append("| " + " | ".join(str(row.get(key, "")) for key, _, _ in columns) + " |")
    return out


def render_markdown_report(state: Dict[str, Any]) -> str:
    """渲染 Markdown 格式报告"""
    lines = [f"# {state.get('title', '报告')}", ""]
    if state.get("subject"):
        lines.append(f"- **输入**: `{state['subject']}`")
    if state.get("verdict") is not None:
        lines.append(f"- **结论**: {'PASS' if state['verdict'] else 'FAIL'}")
    lines.append("")
    for section in state.get("sections", []):
        lines.append(f"## {section['heading']}")
        lines.append("")
        for label, value in section.get("items", []):
            lines.append(f"- **{label}**: {value}")
        if section.get("rows"):
            lines.append("")
            lines.extend(_markdown_table(section["columns"], section["rows"]))
        lines.append("")
    if state.get("warnings"):
        lines.append("## 警告")
        lines.append("")
        lines.extend(f"- {warning}" for warning in state["warnings"])
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def json_default(value: Any) -> Any:
    """numpy 标量转成 Python 数值"""
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def render_json_report(state: Dict[str, Any]) -> str:
    """JSON 输出只包含 payload，键排序保证逐字节稳定"""
    payload = dict(state.get("payload", {}))
    if state.get("verdict") is not None:
        payload.setdefault("ok", bool(state["verdict"]))
    if state.get("warnings"):
        payload.setdefault("warnings", list(state["warnings"]))
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True, default=json_default) + "\n"


RENDERERS = {
    "text": render_text_report,
    "markdown": render_markdown_report,
    "json": render_json_report,
}


def render_report(state: Dict[str, Any], fmt: str = "text", *, enable_color: bool = True) -> str:
    if fmt == "text":
        return render_text_report(state, enable_color=enable_color)
    try:
        return RENDERERS[fmt](state)
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}") from None
