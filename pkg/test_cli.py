#!/usr/bin/env python
"""
测试命令行入口：退出码、JSON 输出与各子命令的关键数值
"""

import json
import math
import sys
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.cli import main

SQUARE_GOLDEN = (3 + math.sqrt(5)) / 2
GOLDEN = (1 + math.sqrt(5)) / 2


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_validate_figure_eight(capsys):
    code, payload = run_json(capsys, "validate", "fixture:figure-eight")
    assert code == 0
    assert payload["ok"] is True
    assert set(payload["coloring"]["colors"].values()) <= {"red", "blue"}


def test_validate_rejects_bad_angles(capsys):
    assert main(["validate", "fixture:figure-eight-bad-angles", "--no-color"]) == 2


def test_missing_file_is_an_io_error(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.json")]) == 1
    assert "I/O" in capsys.readouterr().err


def test_malformed_json_is_an_input_error(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert main(["validate", str(broken)]) == 2


def test_flowgraph_output_is_stable(tmp_path, capsys):
    first, second = tmp_path / "phi1.json", tmp_path / "phi2.json"
    assert main(["flowgraph", "fixture:figure-eight", "--out", str(first), "--no-color"]) == 0
    assert main(["flowgraph", "fixture:figure-eight", "--out", str(second), "--no-color"]) == 0
    document = json.loads(first.read_text(encoding="utf-8"))
    assert len(document["vertices"]) == 2
    assert len(document["edges"]) == 6
    assert first.read_bytes() == second.read_bytes()


def test_flowgraph_from_file_input(tmp_path, capsys):
    """fixture 导出成文件后读回，结果一致"""
    from stretch_cli.fixtures import fixture_document

    source = tmp_path / "figure8.json"
    source.write_text(json.dumps(fixture_document("figure-eight")), encoding="utf-8")
    code, from_file = run_json(capsys, "flowgraph", str(source))
    assert code == 0
    code, from_fixture = run_json(capsys, "flowgraph", "fixture:figure-eight")
    from_file.pop("name", None)
    from_fixture.pop("name", None)
    assert from_file == from_fixture


def test_stretch_fiber_class(capsys):
    code, payload = run_json(capsys, "stretch", "fixture:figure-eight", "--xi", "1,1,0,0")
    assert code == 0
    assert payload["lambda"] == pytest.approx(SQUARE_GOLDEN, abs=1e-7)
    assert payload["log_lambda"] == pytest.approx(math.log(SQUARE_GOLDEN), abs=1e-7)


def test_stretch_rational_class_is_scaled(capsys):
    code, payload = run_json(capsys, "stretch", "fixture:figure-eight", "--xi", "1/2,1/2,0,0")
    assert code == 0
    assert payload["scale"] == 2
    assert payload["lambda"] == pytest.approx(SQUARE_GOLDEN ** 2, abs=1e-6)


def test_stretch_unit_mode(capsys):
    code, payload = run_json(capsys, "stretch", "fixture:figure-eight")
    assert code == 0
    assert payload["mode"] == "unit"
    assert payload["lambda"] == pytest.approx(3.0, abs=1e-9)


def test_stretch_golden_flow_graph(capsys):
    code, payload = run_json(capsys, "stretch", "fixture:golden", "--xi", "1")
    assert code == 0
    assert payload["lambda"] == pytest.approx(GOLDEN, abs=1e-7)


def test_stretch_zero_class_has_zero_weight_cycle(capsys):
    assert main(["stretch", "fixture:figure-eight", "--xi", "0,0,0,0"]) == 2
    assert "0" in capsys.readouterr().err


def test_stretch_wrong_length(capsys):
    assert main(["stretch", "fixture:figure-eight", "--xi", "1,1"]) == 2


def test_stretch_two_components(capsys):
    code, payload = run_json(
        capsys, "stretch", "fixture:two-component", "--eta", "0,0,0,0,1,1", "--xi", "1,1,1,1,1,1"
    )
    assert code == 0
    assert payload["component"] == 1
    assert payload["lambda"] == pytest.approx(math.sqrt(3), abs=1e-7)
    assert len(payload["components"]) == 2


def test_stretch_opposite_side_check(capsys):
    code, payload = run_json(
        capsys, "stretch", "fixture:figure-eight", "--xi", "1,1,0,0", "--debug-opposite-side"
    )
    assert code == 0
    assert payload["pairing_check"]["mismatched"] == []
    assert payload["pairing_check"]["cycles"] > 0


def test_entropy_degenerate_segment(tmp_path, capsys):
    out = tmp_path / "ent.csv"
    code = main(
        ["entropy", "fixture:figure-eight", "--xi", "1,1,0,0", "--xi2", "1,1,0,0", "--out", str(out), "--no-color"]
    )
    assert code == 0
    assert out.exists()
    assert len(out.read_text(encoding="utf-8").strip().splitlines()) == 10


def test_entropy_homogeneity(capsys):
    code, payload = run_json(capsys, "entropy", "fixture:figure-eight", "--xi", "1,1,0,0", "--scale", "3")
    assert code == 0
    assert payload["ok"] is True


def test_entropy_needs_a_class(capsys):
    assert main(["entropy", "fixture:figure-eight"]) == 2


def test_track_intersection_slope(capsys):
    code, payload = run_json(capsys, "track", "fixture:punctured-torus", "--c", "1,1", "--d", "1,1")
    assert code == 0
    assert payload["gf"]["lambda"] == pytest.approx(SQUARE_GOLDEN, abs=1e-9)
    assert payload["intersection"]["values"][0] == "5"
    assert abs(payload["intersection"]["slope"] - math.log(SQUARE_GOLDEN)) <= 0.01


def test_track_identity_is_a_translation(capsys):
    code, payload = run_json(capsys, "track", "fixture:identity")
    assert code == 0
    assert payload["gf"]["translation"] is True
    assert payload["gf"]["lambda"] == 1.0


def test_track_rejects_wrong_curve_length(capsys):
    assert main(["track", "fixture:punctured-torus", "--c", "1,1,1"]) == 2


def test_suite_subset(tmp_path, capsys):
    out = tmp_path / "suite.json"
    code = main(["suite", "--only", "1,5", "--out", str(out), "--no-color"])
    document = json.loads(out.read_text(encoding="utf-8"))
    assert [c["name"] for c in document["checks"]] == ["1. perron-exactness", "5. pipeline-cross-validation"]
    assert code == (0 if document["passed"] else 2)
    assert document["passed"]


def test_unknown_fixture(capsys):
    assert main(["validate", "fixture:no-such-thing"]) == 2


DATA_FIXTURES = Path(__file__).parent / "data" / "fixtures"


@pytest.mark.parametrize("name", ["figure-eight", "punctured-torus", "two-component"])
def test_data_fixtures_match_builtins(name):
    from stretch_cli.fixtures import fixture_document

    on_disk = json.loads((DATA_FIXTURES / f"{name}.json").read_text(encoding="utf-8"))
    assert on_disk == fixture_document(name)


def test_stretch_from_data_fixture(capsys):
    code, payload = run_json(capsys, "stretch", str(DATA_FIXTURES / "figure-eight.json"), "--xi", "1,1,0,0")
    assert code == 0
    assert payload["lambda"] == pytest.approx(SQUARE_GOLDEN, abs=1e-7)


def test_track_from_data_fixture(capsys):
    code, payload = run_json(capsys, "track", str(DATA_FIXTURES / "punctured-torus.json"), "--best")
    assert code == 0
    assert abs(payload["intersection"]["slope"] - math.log(SQUARE_GOLDEN)) <= 0.02


def test_entropy_jsonl_output(tmp_path, capsys):
    out = tmp_path / "ent.jsonl"
    code = main(["entropy", "fixture:figure-eight", "--xi", "1,1,0,0", "--xi2", "1,1,2,2", "--out", str(out), "--no-color"])
    assert code == 0
    rows = [json.loads(line) for line in out.read_text(encoding="utf-8").strip().splitlines()]
    assert len(rows) == 9
    assert set(rows[0]) == {"t", "xi", "lambda", "ent", "status"}
    at_start = next(r for r in rows if r["t"] == 1.0)
    assert at_start["ent"] == pytest.approx(math.log(SQUARE_GOLDEN), abs=1e-7)


def test_suite_json_format(capsys):
    code, payload = run_json(capsys, "suite", "--only", "1,5")
    assert code == 0
    assert payload["ok"] is True
    assert [c["passed"] for c in payload["checks"]] == [True, True]


def test_unexpected_error_exits_with_one(monkeypatch, capsys):
    from stretch_cli import cli

    def broken(args, config):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.HANDLERS, "validate", broken)
    assert main(["validate", "fixture:figure-eight", "--no-color"]) == 1
    assert "boom" in capsys.readouterr().err


def test_validate_taut_but_not_veering(capsys):
    """taut 但不 veering：退出码 2，JSON 里没有着色"""
    code, payload = run_json(capsys, "validate", "fixture:flip-unflip-RL")
    assert code == 2
    assert payload["ok"] is False
    assert payload["validation"]["ok"] is True
    assert "coloring" not in payload
    assert any("not veering" in w for w in payload["warnings"])


def test_entropy_random_mode(capsys):
    """随机线段由 --seed 决定，同一种子输出逐字节相同"""
    argv = ["entropy", "fixture:figure-eight", "--random", "--seed", "7", "--format", "json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert payload["ok"] is True
    assert payload["mode"] == "random"
    assert payload["seed"] == 7


def test_hand_built_component_prints_dash(capsys):
    """手工流图没有四面体编号，分支表里显示 -"""
    assert main(["stretch", "fixture:golden", "--xi", "1", "--no-color"]) == 0
    out = capsys.readouterr().out
    assert "(-1)" not in out
    assert "ok" in out
