from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .branched_surface import (
    FaceClass,
    FlowGraph,
    branch_equations,
    enumerate_cycles,
    flow_graph,
    flow_graph_from_dict,
    flow_graph_to_dict,
    pairing,
)
from .business import (
    add_section,
    entropy_frame,
    frame_to_csv_text,
    json_default,
    new_state,
    plot_entropy_segment,
    render_report,
    run_suite,
    suite_frame,
    write_csv,
    write_jsonl,
)
from .cones import (
    EntropyField,
    carried_cone,
    convexity_probe,
    entropy_field,
    format_rational_vector,
    homogeneity_probe,
)
from .config import RunConfig, config_manager
from .dynamics import (
    UNIT,
    SolverOptions,
    cut,
    from_flow_graph,
    growth_rate,
    stretch_by_component,
)
from .errors import (
    DomainError,
    EmptyCoreError,
    InputFormatError,
    StretchLensError,
    ZeroWeightCycleError,
)
from .fixtures import FIXTURE_PREFIX, available_fixtures, fixture_document
from .train_track import (
    FoldingCycle,
    best_intersection_growth,
    cycle_from_dict,
    gf_growth,
    intersection_growth,
    transition_graph,
)
from .triangulation import (
    VeeringTriangulation,
    all_edge_links,
    infer_colors,
    triangulation_from_dict,
    validate_taut,
)
from .utils.colors import (
    apply_theme,
    colorize,
    edge_color_style,
    get_available_themes,
    set_color_enabled,
)
from .utils.debug import log_event
from .utils.formatters import format_fraction, format_growth, format_vector
from .utils.parsers import parse_fraction_vector, parse_int_list

APP_NAME = "Stretch Lens"
LAUNCHER_COMMAND = "./stretch_lens.sh"
RANDOM_SEGMENTS = 20


# ---------------------------------------------------------------------------
# parser


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    numeric = parser.add_argument_group("数值参数")
    numeric.add_argument("--tol", type=float, help="Perron 求解与二分的收敛容差 (0, 1e-2]。")
    numeric.add_argument("--nmax", type=int, help="精确计数/交数增长的最大步数 n_max。")
    numeric.add_argument("--seed", type=int, help="随机套件与随机线段的种子。")

    output = parser.add_argument_group("输出")
    output.add_argument("--out", help="结果写入的文件路径（JSON/CSV）。")
    output.add_argument(
        "--format",
        choices=["text", "json", "markdown"],
        default="text",
        help="终端报告格式。",
    )
    color_group = output.add_mutually_exclusive_group()
    color_group.add_argument("--color", dest="color", action="store_true", help="强制启用彩色输出。")
    color_group.add_argument("--no-color", dest="no_color", action="store_true", help="禁用彩色输出。")
    output.add_argument("--theme", choices=get_available_themes(), help="终端配色主题。")


def build_parser() -> argparse.ArgumentParser:
    class RichHelpFormatter(
        argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter
    ):
        pass

    parser = argparse.ArgumentParser(
        prog="stretch_cli",
        description=(
            f"{APP_NAME}: stretch factors of flows through veering triangulations, train-track folding "
            "and entropy on rational cones.\n"
            f"输入既可以是 JSON 文件路径，也可以是内置样例 `{FIXTURE_PREFIX}NAME`。"
        ),
        formatter_class=RichHelpFormatter,
        epilog=(
            "示例:\n"
            f"  {LAUNCHER_COMMAND} validate {FIXTURE_PREFIX}figure-eight\n"
            f"  {LAUNCHER_COMMAND} stretch {FIXTURE_PREFIX}figure-eight --xi 1,1,0,0\n"
            f"  {LAUNCHER_COMMAND} track {FIXTURE_PREFIX}punctured-torus --c 1,1 --d 1,1\n"
            f"  {LAUNCHER_COMMAND} suite --seed 7\n"
            f"内置样例: {', '.join(available_fixtures())}"
        ),
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    validate = subparsers.add_parser(
        "validate", help="校验 taut 结构并推断 veering 着色。", formatter_class=RichHelpFormatter
    )
    validate.add_argument("input", help="三角剖分 JSON 或 fixture:NAME。")
    _add_common_arguments(validate)

    flowgraph_cmd = subparsers.add_parser(
        "flowgraph", help="构造 flow graph Φ 并输出 JSON。", formatter_class=RichHelpFormatter
    )
    flowgraph_cmd.add_argument("input", help="三角剖分 JSON 或 fixture:NAME。")
    _add_common_arguments(flowgraph_cmd)

    stretch = subparsers.add_parser(
        "stretch", help="沿 η 切开后按 ξ 计算伸缩因子 λ。", formatter_class=RichHelpFormatter
    )
    stretch.add_argument("input", help="三角剖分或 flow graph JSON，或 fixture:NAME。")
    stretch_group = stretch.add_argument_group("上同调类")
    stretch_group.add_argument("--eta", help="切割类 η，逗号分隔的有理数（默认 0）。")
    stretch_group.add_argument("--xi", help="权重类 ξ，逗号分隔的有理数；省略时按长度计数。")
    stretch_group.add_argument("--component", type=int, help="只报告指定切割分支。")
    stretch_group.add_argument(
        "--debug-opposite-side",
        action="store_true",
        help="用对侧穿越词重新计算配对，检查配对良定义。",
    )
    _add_common_arguments(stretch)

    entropy = subparsers.add_parser(
        "entropy", help="在线段上采样 ent 并做凸性/齐次性探针。", formatter_class=RichHelpFormatter
    )
    entropy.add_argument("input", help="三角剖分或带 dual_edges 的 flow graph JSON，或 fixture:NAME。")
    entropy_group = entropy.add_argument_group("采样")
    entropy_group.add_argument("--eta", help="切割类 η（默认 0）。")
    entropy_group.add_argument("--component", type=int, default=0, help="切割分支编号。")
    entropy_group.add_argument("--xi", help="线段起点 ξ。")
    entropy_group.add_argument("--xi2", help="线段终点 ξ'（默认与 ξ 相同）。")
    entropy_group.add_argument("--k", type=int, default=9, help="线段采样点数。")
    entropy_group.add_argument("--scale", type=int, help="齐次性模式：检查 k·ent(kξ) = ent(ξ)，k = 1..SCALE。")
    entropy_group.add_argument(
        "--random", action="store_true", help="随机模式：在承载锥内抽取随机线段做凸性检查。"
    )
    entropy_group.add_argument("--plot", action="store_true", help="生成 ent 折线图 (plotly HTML)。")
    _add_common_arguments(entropy)

    track = subparsers.add_parser(
        "track", help="折叠循环的转移图 G_f、λ 与交数增长。", formatter_class=RichHelpFormatter
    )
    track.add_argument("input", help="折叠循环 JSON 或 fixture:NAME。")
    track_group = track.add_argument_group("曲线")
    track_group.add_argument("--c", help="承载曲线的分支权重，逗号分隔整数。")
    track_group.add_argument("--d", help="横截曲线的分支权重（默认全 1）。")
    track_group.add_argument(
        "--best", action="store_true", help="在预设的 (c, d) 集合上取交数增长斜率最大者。"
    )
    _add_common_arguments(track)

    suite = subparsers.add_parser(
        "suite", help="运行完整验收套件，逐条输出结论。", formatter_class=RichHelpFormatter
    )
    suite.add_argument("--only", help="只运行指定编号的判据，例如 1,4,5。")
    _add_common_arguments(suite)

    return parser


# ---------------------------------------------------------------------------
# input helpers


def _load_document(source: str) -> tuple[dict[str, Any], str]:
    """Resolve ``fixture:NAME`` or read a JSON file; OSError propagates for exit code 1."""
    if source.startswith(FIXTURE_PREFIX):
        return fixture_document(source), source
    path = Path(source).expanduser()
    text = path.read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(document, dict):
        raise InputFormatError(f"{path}: top level must be a JSON object")
    log_event("parse", str(path))
    return document, str(path)


def _load_triangulation(source: str) -> tuple[VeeringTriangulation, str]:
    document, name = _load_document(source)
    if "tets" not in document:
        raise InputFormatError(f"{name} is not a triangulation document (missing 'tets')")
    return triangulation_from_dict(document, name=Path(name).stem), name


def _load_graph(source: str) -> tuple[FlowGraph, Optional[VeeringTriangulation], str]:
    """Triangulations are turned into Φ; flow graph documents are used as given."""
    document, name = _load_document(source)
    if "tets" in document:
        triangulation = triangulation_from_dict(document, name=Path(name).stem)
        return flow_graph(triangulation), triangulation, name
    if "edges" in document and "vertices" in document:
        return flow_graph_from_dict(document), None, name
    raise InputFormatError(f"{name} is neither a triangulation nor a flow graph document")


def _load_cycle(source: str) -> tuple[FoldingCycle, str]:
    document, name = _load_document(source)
    if "track" not in document:
        raise InputFormatError(f"{name} is not a folding cycle document (missing 'track')")
    return cycle_from_dict(document), name


def _class_vector(raw: Optional[str], size: int, label: str, *, default_zero: bool = False) -> Optional[list[Fraction]]:
    if raw is None:
        return [Fraction(0)] * size if default_zero else None
    values = parse_fraction_vector(raw)
    if values is None:
        raise InputFormatError(f"{label} must be comma separated rationals, got {raw!r}")
    if len(values) != size:
        raise DomainError(f"{label} has {len(values)} coordinates, expected {size}")
    return values


def _int_vector(raw: Optional[str], size: int, label: str) -> Optional[list[int]]:
    if raw is None:
        return None
    values = parse_int_list(raw)
    if values is None:
        raise InputFormatError(f"{label} must be comma separated integers, got {raw!r}")
    if len(values) != size:
        raise DomainError(f"{label} has {len(values)} entries, expected {size}")
    return values


def _integral_scale(values: Sequence[Fraction]) -> tuple[int, list[int]]:
    """Smallest D with D * values integral, and the scaled vector."""
    scale = math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
    return scale, [int(Fraction(v) * scale) for v in values]


def _check_equations(triangulation: Optional[VeeringTriangulation], values: Sequence[Fraction], label: str) -> None:
    if triangulation is None:
        return
    if not FaceClass(tuple(values)).satisfies(branch_equations(triangulation)):
        raise DomainError(f"{label} = {format_rational_vector(values)} violates the branch equations")


# ---------------------------------------------------------------------------
# output helpers


def _configure_terminal(args: argparse.Namespace) -> None:
    if getattr(args, "no_color", False) or args.format != "text":
        set_color_enabled(False)
    elif getattr(args, "color", False):
        set_color_enabled(True)
    else:
        set_color_enabled(sys.stdout.isatty())
    apply_theme(args.theme or config_manager.get_theme())


def _run_config(args: argparse.Namespace) -> RunConfig:
    return config_manager.build_run_config(
        args.command,
        tol=args.tol,
        nmax=args.nmax,
        seed=args.seed,
        output=Path(args.out).expanduser() if args.out else None,
        debug_opposite_side=getattr(args, "debug_opposite_side", False),
    )


def _dump_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True, default=json_default) + "\n"


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _emit(state: dict[str, Any], args: argparse.Namespace) -> None:
    sys.stdout.write(render_report(state, args.format, enable_color=args.format == "text"))


def _notice(message: str, style: str = "info") -> None:
    print(colorize(message, style), file=sys.stderr)


def _rational_list(values: Sequence[Any]) -> list[str]:
    return [format_fraction(v) for v in values]


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    triangulation, name = _load_triangulation(args.input)
    report = validate_taut(triangulation)
    state = new_state("Taut / veering 校验", name, verdict=report.ok)
    add_section(
        state,
        "概要",
        [
            ("四面体", triangulation.num_tets),
            ("边类", triangulation.num_edges),
            ("面类", triangulation.num_faces),
        ],
    )
    payload: dict[str, Any] = {"input": name, "validation": report.to_dict()}
    state["warnings"].extend(report.failures())

    if report.ok:
        try:
            coloring = infer_colors(triangulation)
        except DomainError as exc:
            state["verdict"] = False
            state["warnings"].append(str(exc))
        else:
            payload["coloring"] = coloring.to_dict()
            links = all_edge_links(triangulation)
            rows = [
                {
                    "edge": link.edge,
                    "color": coloring.colors[link.edge],
                    "style_color": edge_color_style(coloring.colors[link.edge]),
                    "degree": len(link),
                    "side_a": len(link.side_a),
                    "side_b": len(link.side_b),
                }
                for link in links
            ]
            add_section(
                state,
                "着色与边链接",
                [("手性", coloring.handedness), ("来源", "推断" if coloring.inferred else "输入")],
                columns=[
                    ("edge", "边", "right"),
                    ("color", "颜色", "left"),
                    ("degree", "度数", "right"),
                    ("side_a", "A 侧", "right"),
                    ("side_b", "B 侧", "right"),
                ],
                rows=rows,
            )

    state["payload"] = payload
    if config.output:
        _write_text(config.output, _dump_json(payload))
    _emit(state, args)
    return 0 if state["verdict"] else 2


def cmd_flowgraph(args: argparse.Namespace, config: RunConfig) -> int:
    triangulation, name = _load_triangulation(args.input)
    infer_colors(triangulation)
    graph = flow_graph(triangulation)
    document = flow_graph_to_dict(graph)
    text = _dump_json(document)
    if config.output:
        _write_text(config.output, text)
        if args.format == "text":
            _notice(f"已写入 flow graph: {config.output}", "value_positive")
    if args.format == "json":
        sys.stdout.write(text)
        return 0

    state = new_state("Flow graph Φ", name)
    add_section(
        state,
        "概要",
        [("顶点（边类）", graph.num_vertices), ("有向边", len(graph.edges)), ("面类", graph.num_faces)],
        columns=[
            ("index", "#", "right"),
            ("src", "起点", "right"),
            ("dst", "终点", "right"),
            ("tet", "四面体", "right"),
            ("kind", "类型", "left"),
            ("crossings", "穿越面", "left"),
        ],
        rows=[
            {
                "index": i,
                "src": edge.src,
                "dst": edge.dst,
                "tet": edge.tet,
                "kind": edge.kind,
                "crossings": format_vector(edge.faces()),
            }
            for i, edge in enumerate(graph.edges)
        ],
    )
    state["payload"] = document
    _emit(state, args)
    return 0


def _pairing_check(
    graph: FlowGraph, values: Sequence[Fraction], matrix: Optional[np.ndarray], max_length: int = 6
) -> tuple[int, list[tuple[int, ...]]]:
    checked, mismatched = 0, []
    for cycle in enumerate_cycles(graph, max_length):
        checked += 1
        canonical = pairing(graph, cycle, values, matrix=matrix)
        opposite = pairing(graph, cycle, values, matrix=matrix, opposite_side=True)
        if canonical != opposite:
            mismatched.append(cycle)
    return checked, mismatched


def cmd_stretch(args: argparse.Namespace, config: RunConfig) -> int:
    graph, triangulation, name = _load_graph(args.input)
    if triangulation is not None:
        infer_colors(triangulation)
    matrix = branch_equations(triangulation) if triangulation is not None else None
    eta = _class_vector(args.eta, graph.num_faces, "η", default_zero=True)
    assert eta is not None
    _check_equations(triangulation, eta, "η")
    options = SolverOptions.from_run_config(config)
    state = new_state("伸缩因子", name)
    payload: dict[str, Any] = {"input": name, "eta": _rational_list(eta)}

    xi = _class_vector(args.xi, graph.num_faces, "ξ")
    if xi is None:
        # unit weights: growth of cycles by length in the cut core
        result = growth_rate(from_flow_graph(cut(graph, eta, matrix=matrix)), UNIT, options)
        payload.update({"mode": UNIT, "lambda": result.lam, "log_lambda": result.entropy, "growth": result.to_dict()})
        add_section(state, "按长度计数", [("增长率", format_growth(result.lam)), ("核边数", result.core_edges)])
        if result.bounded:
            state["warnings"].append("圈计数有界：没有指数增长")
    else:
        _check_equations(triangulation, xi, "ξ")
        if any(v < 0 for v in xi):
            raise DomainError(f"ξ = {format_rational_vector(xi)} is not carried (negative weight)")
        scale, integral = _integral_scale(xi)
        summary = stretch_by_component(graph, eta, integral, options)
        rows = []
        for index, component in enumerate(summary.components):
            result = summary.results.get(index)
            rows.append(
                {
                    "component": index,
                    "tets": format_vector(sorted(component)) if component else "-",
                    "lambda": "-" if result is None else f"{result.lam ** scale:.10f}",
                    "log_lambda": "-" if result is None else f"{scale * result.entropy:.10f}",
                    "status": "empty-core" if result is None else "ok",
                }
            )
        if args.component is not None:
            if not 0 <= args.component < len(summary.components):
                raise DomainError(f"component id {args.component} out of range 0..{len(summary.components) - 1}")
            chosen = summary.results.get(args.component)
            if chosen is None:
                raise EmptyCoreError(f"component {args.component} has an empty dynamical core")
            selected = (args.component, chosen)
        else:
            selected = summary.best
            if selected is None:
                raise EmptyCoreError("every cut component has an empty dynamical core")
        index, result = selected
        lam, log_lam = result.lam ** scale, scale * result.entropy
        payload.update(
            {
                "mode": "weighted",
                "xi": _rational_list(xi),
                "scale": scale,
                "component": index,
                "lambda": lam,
                "log_lambda": log_lam,
                "growth": result.to_dict(),
                "components": [
                    {key: row[key] for key in ("component", "lambda", "log_lambda", "status")} for row in rows
                ],
            }
        )
        add_section(
            state,
            "按 ξ 加权",
            [("ξ", format_vector(xi)), ("分支", index), ("增长率", format_growth(lam)), ("t*", f"{result.t_star:.12f}")],
            columns=[
                ("component", "分支", "right"),
                ("tets", "四面体", "left"),
                ("lambda", "λ", "right"),
                ("log_lambda", "log λ", "right"),
                ("status", "状态", "left"),
            ],
            rows=rows,
        )

        if config.debug_opposite_side:
            checked, mismatched = _pairing_check(graph, xi, matrix)
            payload["pairing_check"] = {"cycles": checked, "mismatched": [list(c) for c in mismatched]}
            add_section(state, "配对良定义（对侧穿越词）", [("检查的圈", checked), ("不一致", len(mismatched))])
            state["verdict"] = not mismatched
            state["warnings"].extend(f"圈 {list(c)} 两侧配对不同" for c in mismatched[:10])

    state["payload"] = payload
    if config.output:
        _write_text(config.output, _dump_json(payload))
    _emit(state, args)
    return 0 if state["verdict"] in (None, True) else 2


def _random_cone_points(
    rng: np.random.Generator, triangulation: Optional[VeeringTriangulation], size: int, config: RunConfig
) -> Iterable[tuple[Fraction, ...]]:
    """Positive integer combinations of the carried cone's rays, or positive vectors without one."""
    rays = carried_cone(triangulation, cap=config.cone_dimension_cap).rays if triangulation is not None else ()
    while True:
        if rays:
            coefficients = rng.integers(1, 6, size=len(rays))
            yield tuple(Fraction(sum(int(c) * ray[i] for c, ray in zip(coefficients, rays))) for i in range(size))
        else:
            yield tuple(Fraction(int(x)) for x in rng.integers(1, 4, size=size))


def cmd_entropy(args: argparse.Namespace, config: RunConfig) -> int:
    graph, triangulation, name = _load_graph(args.input)
    eta = _class_vector(args.eta, graph.num_faces, "η", default_zero=True)
    assert eta is not None
    _check_equations(triangulation, eta, "η")
    options = SolverOptions.from_run_config(config)
    field_: EntropyField = entropy_field(graph, eta, args.component, triangulation=triangulation, options=options)
    state = new_state("熵函数 ent", name)
    payload: dict[str, Any] = {"input": name, "eta": _rational_list(eta), "component": args.component}

    if args.random:
        rng = np.random.default_rng(config.seed)
        points = _random_cone_points(rng, triangulation, graph.num_faces, config)
        probes = [
            convexity_probe(field_, next(points), next(points), args.k, tol=config.convexity_tolerance)
            for _ in range(RANDOM_SEGMENTS)
        ]
        rows = [
            {
                "segment": i,
                "start": format_rational_vector(p.samples[0].xi),
                "end": format_rational_vector(p.samples[-1].xi),
                "violation": f"{p.max_violation:.3e}",
                "verdict": "PASS" if p.passed else "FAIL",
                "style_verdict": "value_positive" if p.passed else "value_negative",
            }
            for i, p in enumerate(probes)
        ]
        passed = all(p.passed for p in probes)
        worst = max(p.max_violation for p in probes)
        samples = [s for p in probes for s in p.samples]
        add_section(
            state,
            "随机线段凸性",
            [("线段数", len(probes)), ("每段采样", args.k), ("最大违背", f"{worst:.3e}"), ("容差", config.convexity_tolerance)],
            columns=[
                ("segment", "#", "right"),
                ("start", "起点", "left"),
                ("end", "终点", "left"),
                ("violation", "违背", "right"),
                ("verdict", "结论", "left"),
            ],
            rows=rows,
        )
        payload.update({"mode": "random", "seed": config.seed, "probes": [p.to_dict() for p in probes]})
        plotted = probes[0].samples
    else:
        xi = _class_vector(args.xi, graph.num_faces, "ξ")
        if xi is None:
            raise InputFormatError("entropy needs --xi (or --random)")
        _check_equations(triangulation, xi, "ξ")
        if args.scale is not None:
            probe = homogeneity_probe(field_, xi, range(1, args.scale + 1), tol=config.homogeneity_tolerance)
            heading = "齐次性 k·ent(kξ) − ent(ξ)"
        else:
            end = _class_vector(args.xi2, graph.num_faces, "ξ'") or xi
            _check_equations(triangulation, end, "ξ'")
            probe = convexity_probe(field_, xi, end, args.k, tol=config.convexity_tolerance)
            heading = "线段凸性 ent − 弦"
        passed, samples, plotted = probe.passed, probe.samples, probe.samples
        add_section(
            state,
            heading,
            [("ξ", format_vector(xi)), ("最大偏差", f"{probe.max_violation:.3e}"), ("容差", probe.tolerance)],
            columns=[("key", "k / t", "right"), ("deviation", "偏差", "right")],
            rows=[{"key": format_fraction(k), "deviation": f"{v:.3e}"} for k, v in probe.details],
        )
        payload.update({"mode": probe.name, "probe": probe.to_dict()})

    frame = entropy_frame(samples)
    payload["samples"] = [s.to_dict() for s in samples]
    state["verdict"] = passed
    state["payload"] = payload
    if config.output:
        if config.output.suffix == ".jsonl":
            write_jsonl(frame, config.output)
        else:
            write_csv(frame, config.output)
    if args.plot:
        target_dir = config.output.parent if config.output else Path("results")
        chart = plot_entropy_segment(
            entropy_frame(plotted),
            target_dir,
            "entropy_segment.html",
            plot_template=str(config_manager.get("plot_template", "plotly_white")),
            line_width=float(config_manager.get("plot_line_width", 2.2)),
        )
        if chart is not None:
            _notice(f"已生成图表: {chart}", "value_positive")
    _emit(state, args)
    if args.format == "text" and not config.output:
        sys.stdout.write(frame_to_csv_text(frame))
    return 0 if passed else 2


def cmd_track(args: argparse.Namespace, config: RunConfig) -> int:
    cycle, name = _load_cycle(args.input)
    options = SolverOptions.from_run_config(config)
    graph = transition_graph(cycle)
    growth = gf_growth(graph, options)
    size = len(graph.labels)
    state = new_state("折叠循环 G_f", name)
    matrix = [[int(x) for x in row] for row in graph.matrix.tolist()]
    add_section(
        state,
        "转移图",
        [
            ("分支", format_vector(graph.labels)),
            ("折叠次数", len(cycle.moves)),
            ("非简单束", graph.non_simple_bundles),
            ("增长率", format_growth(growth.lam)),
            ("平移型", "是" if growth.translation else "否"),
            ("回归分支", format_vector(growth.component) if growth.component else "-"),
        ],
    )
    if growth.translation:
        state["warnings"].append("空核或圈计数有界：按平移处理，λ = 1")
    payload: dict[str, Any] = {
        "input": name,
        "labels": list(graph.labels),
        "matrix": matrix,
        "gf": growth.to_dict(),
    }

    inter = None
    if args.best:
        inter = best_intersection_growth(cycle, config.nmax, cap=config.nmax_cap)
    elif args.c is not None:
        c = _int_vector(args.c, size, "c")
        d = _int_vector(args.d, size, "d") or [1] * size
        assert c is not None
        inter = intersection_growth(cycle, c, d, config.nmax, cap=config.nmax_cap, graph=graph)
    if inter is not None:
        gap = inter.slope - math.log(growth.lam)
        add_section(
            state,
            "交数增长",
            [
                ("c", format_vector(inter.c)),
                ("d", format_vector(inter.d)),
                ("n_max", config.nmax),
                ("斜率", f"{inter.slope:.10f}"),
                ("log λ", f"{math.log(growth.lam):.10f}"),
                ("差", f"{gap:+.3e}"),
            ],
        )
        payload["intersection"] = inter.to_dict()
        payload["intersection"]["gap"] = gap

    state["payload"] = payload
    if config.output:
        _write_text(config.output, _dump_json(payload))
    _emit(state, args)
    return 0


def cmd_suite(args: argparse.Namespace, config: RunConfig) -> int:
    only = None
    if args.only:
        parsed = parse_int_list(args.only)
        if parsed is None:
            raise InputFormatError(f"--only must be comma separated criterion numbers, got {args.only!r}")
        only = set(parsed)
    report = run_suite(config, only=only)
    state = new_state("验收套件", f"seed={report.seed}", verdict=report.passed)
    add_section(
        state,
        "判据",
        columns=[
            ("verdict", "结论", "left"),
            ("criterion", "判据", "left"),
            ("seconds", "秒", "right"),
            ("detail", "说明", "left"),
        ],
        rows=[
            {
                "verdict": "PASS" if check.passed else "FAIL",
                "style_verdict": "value_positive" if check.passed else "value_negative",
                "criterion": check.name,
                "seconds": f"{check.seconds:.2f}",
                "detail": check.detail,
            }
            for check in report.checks
        ],
    )
    state["payload"] = {
        "seed": report.seed,
        "passed": report.passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
    }
    if config.output:
        if config.output.suffix == ".csv":
            write_csv(suite_frame(report.checks), config.output)
        else:
            _write_text(config.output, _dump_json(state["payload"]))
    _emit(state, args)
    return 0 if report.passed else 2


HANDLERS = {
    "validate": cmd_validate,
    "flowgraph": cmd_flowgraph,
    "stretch": cmd_stretch,
    "entropy": cmd_entropy,
    "track": cmd_track,
    "suite": cmd_suite,
}


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    _configure_terminal(args)

    try:
        config = _run_config(args)
        return HANDLERS[args.command](args, config)
    except ZeroWeightCycleError as exc:
        _notice(f"错误: {exc}", "danger")
        if exc.cycle:
            _notice(f"权重为 0 的圈（Φ 边序号）: {exc.cycle}", "warning")
        return exc.exit_code
    except StretchLensError as exc:
        _notice(f"错误: {exc}", "danger")
        return exc.exit_code
    except OSError as exc:
        _notice(f"I/O 错误: {exc}", "danger")
        return 1
    except Exception as exc:  # noqa: BLE001
        _notice(f"内部错误: {type(exc).__name__}: {exc}", "danger")
        log_event("error", repr(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
