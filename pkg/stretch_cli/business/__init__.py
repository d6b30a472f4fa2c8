"""业务逻辑模块

报告渲染、表格导出、图表与验收套件。
"""

from .charts import (
    ensure_plotly,
    plot_entropy_segment,
)
from .reports import (
    add_section,
    json_default,
    new_state,
    render_json_report,
    render_markdown_report,
    render_report,
    render_text_report,
)
from .suite import (
    CRITERIA,
    SuiteCheck,
    SuiteReport,
    run_suite,
)
from .tables import (
    entropy_frame,
    frame_to_csv_text,
    suite_frame,
    write_csv,
    write_jsonl,
)

__all__ = [
    # Charts
    "ensure_plotly",
    "plot_entropy_segment",
    # Reports
    "add_section",
    "json_default",
    "new_state",
    "render_json_report",
    "render_markdown_report",
    "render_report",
    "render_text_report",
    # Suite
    "CRITERIA",
    "SuiteCheck",
    "SuiteReport",
    "run_suite",
    # Tables
    "entropy_frame",
    "frame_to_csv_text",
    "suite_frame",
    "write_csv",
    "write_jsonl",
]
