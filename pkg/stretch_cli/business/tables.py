"""表格导出

熵采样与套件结果用 pandas DataFrame 承载，导出为 CSV（gnuplot 可直接读取）或 JSON Lines。
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from ..cones import EntropySample, format_rational_vector

ENTROPY_COLUMNS = ["t", "xi", "lambda", "ent", "status"]


def entropy_frame(samples: Iterable[EntropySample]) -> pd.DataFrame:
    records = [
        {
            "t": None if s.t is None else float(s.t),
            "xi": format_rational_vector(s.xi),
            "lambda": s.lam,
            "ent": s.ent,
            "status": s.status,
        }
        for s in samples
    ]
    return pd.DataFrame.from_records(records, columns=ENTROPY_COLUMNS)


def suite_frame(checks: Sequence) -> pd.DataFrame:
    return pd.DataFrame(
        [{"criterion": c.name, "passed": c.passed, "seconds": round(c.seconds, 4), "detail": c.detail} for c in checks],
        columns=["criterion", "passed", "seconds", "detail"],
    )


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.12g")
    return path


def write_jsonl(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_json(path, orient="records", lines=True, force_ascii=False)
    return path


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.12g")
