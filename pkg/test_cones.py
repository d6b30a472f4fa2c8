#!/usr/bin/env python
"""
测试有理锥的双重描述、像锥，以及熵函数的齐次性、凸性与连续性探针
"""

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from stretch_cli.branched_surface import flow_graph
from stretch_cli.cones import (
    BOUNDARY,
    EMPTY_CORE,
    INTERIOR,
    OUTSIDE,
    ZERO_WEIGHT_CYCLE,
    EntropyField,
    RestrictionMap,
    carried_cone,
    compose_maps,
    cone_from_dict,
    cone_from_inequalities,
    cone_from_rays,
    cone_to_dict,
    continuity_probe,
    convexity_probe,
    entropy_field,
    entropy_sample,
    homogeneity_probe,
    image_cone,
    membership,
    parse_rational,
    primitive,
    rank,
    restriction_map_from_dict,
    same_cone,
    segment_points,
    verify_double_description,
)
from stretch_cli.dynamics import WeightedDigraph
from stretch_cli.errors import DomainError, InputFormatError
from stretch_cli.fixtures import cone_fixture, figure_eight, golden_loops, projection_to_line

GOLDEN = (1 + math.sqrt(5)) / 2
SQUARE_GOLDEN = (3 + math.sqrt(5)) / 2


def as_ints(vectors):
    return {tuple(int(x) for x in v) for v in vectors}


def test_primitive_and_rank():
    assert primitive((Fraction(2, 3), Fraction(4, 3))) == (1, 2)
    assert primitive((0, 0)) == (0, 0)
    assert rank([(1, 0, 1), (0, 1, 1), (1, 1, 2)]) == 2


def test_carried_cone_of_figure_eight():
    cone = carried_cone(figure_eight())
    assert as_ints(cone.rays) == {(0, 0, 1, 1), (1, 1, 0, 0)}
    assert cone.pointed
    assert cone.dimension == 2
    assert not cone.full_dimensional


def test_carried_cone_membership():
    cone = carried_cone(figure_eight())
    assert membership(cone, (1, 1, 1, 1)) == INTERIOR
    assert membership(cone, (1, 1, 0, 0)) == BOUNDARY
    assert membership(cone, (1, 0, 0, 0)) == OUTSIDE
    assert membership(cone, (-1, -1, 0, 0)) == OUTSIDE


def test_carried_cone_respects_dimension_cap():
    with pytest.raises(DomainError):
        carried_cone(figure_eight(), cap=3)


def test_pyramid_cone():
    cone = cone_fixture("pyramid-cone")
    assert len(cone.rays) == 4
    assert len(cone.ineqs) == 4
    assert cone.full_dimensional
    assert membership(cone, (0, 0, 1)) == INTERIOR
    assert membership(cone, (1, 0, 1)) == BOUNDARY
    assert membership(cone, (2, 0, 1)) == OUTSIDE


def test_half_plane_has_lineality():
    cone = cone_fixture("half-plane-cone")
    assert not cone.pointed
    assert as_ints(cone.rays) == {(0, 1)}
    assert as_ints(cone.lineality) in ({(1, 0)}, {(-1, 0)})
    assert membership(cone, (5, 0)) == BOUNDARY
    assert membership(cone, (-3, 2)) == INTERIOR


@pytest.mark.parametrize("name", ["planar-cone", "pyramid-cone", "half-plane-cone"])
def test_double_description_agrees(name):
    report = verify_double_description(cone_fixture(name))
    assert report.ok, report.problems


def test_rays_and_inequalities_describe_the_same_cone():
    from_rays = cone_from_rays(2, [(1, 0), (1, 1), (2, 1)])
    from_ineqs = cone_from_inequalities(2, [(0, 1), (1, -1)])
    assert as_ints(from_rays.rays) == {(1, 0), (1, 1)}
    assert same_cone(from_rays, from_ineqs)


def test_wrong_generator_length():
    with pytest.raises(DomainError):
        cone_from_rays(3, [(1, 0)])


def test_projection_of_planar_cone():
    line = image_cone(cone_fixture("planar-cone"), projection_to_line())
    assert line.rays == ((Fraction(1),),)
    assert line.metadata["adjacent_to_boundary"] is True


def test_image_cones_compose():
    first = RestrictionMap.from_rows([[1, 0, 0], [0, 1, 1]])
    second = RestrictionMap.from_rows([[1, 1], [0, 1]])
    pyramid = cone_fixture("pyramid-cone")
    stepwise = image_cone(image_cone(pyramid, first), second)
    direct = image_cone(pyramid, compose_maps(first, second))
    assert same_cone(stepwise, direct)


def test_restriction_map_kernel_is_checked():
    with pytest.raises(DomainError):
        RestrictionMap.from_rows([[1, 0]], kernel_dimension=0)


def test_cone_document_round_trip():
    cone = cone_fixture("pyramid-cone")
    document = cone_to_dict(cone)
    assert document["flags"]["pointed"] is True
    assert same_cone(cone_from_dict(document), cone)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational([1, 3]) == Fraction(1, 3)
    with pytest.raises(InputFormatError):
        parse_rational(0.5)


# ---------------------------------------------------------------------------
# entropy


@pytest.fixture
def golden_field():
    return EntropyField.from_digraph(golden_loops())


@pytest.fixture
def figure_field():
    triangulation = figure_eight()
    return entropy_field(flow_graph(triangulation), [0, 0, 0, 0], 0, triangulation=triangulation)


def test_golden_entropy(golden_field):
    sample = golden_field.sample((1, 2))
    assert sample.ok
    assert sample.lam == pytest.approx(GOLDEN, abs=1e-9)
    assert sample.ent == pytest.approx(math.log(GOLDEN), abs=1e-9)


def test_rational_class_is_scaled(golden_field):
    half = golden_field.sample((Fraction(1, 2), 1))
    assert half.ent == pytest.approx(2 * math.log(GOLDEN), abs=1e-9)


def test_zero_and_negative_classes(golden_field):
    assert golden_field.sample((0, 1)).status == ZERO_WEIGHT_CYCLE
    with pytest.raises(DomainError):
        golden_field.sample((-1, 2))
    with pytest.raises(DomainError):
        golden_field.sample((1, 2, 3))


def test_empty_field():
    field_ = EntropyField.from_digraph(WeightedDigraph((0,), ()))
    sample = field_.sample(())
    assert sample.status == EMPTY_CORE
    assert sample.ent == 0.0


def test_figure_eight_fiber_entropy(figure_field):
    sample = figure_field.sample((1, 1, 0, 0))
    assert sample.lam == pytest.approx(SQUARE_GOLDEN, abs=1e-8)
    doubled = figure_field.sample((2, 2, 0, 0))
    assert doubled.ent == pytest.approx(sample.ent / 2, abs=1e-9)


def test_homogeneity_probe(golden_field, figure_field):
    assert homogeneity_probe(golden_field, (1, 2)).passed
    report = homogeneity_probe(figure_field, (1, 1, 1, 1))
    assert report.passed
    assert report.max_violation <= 1e-9
    assert [k for k, _ in report.details] == [1, 2, 3, 4, 5]


def test_convexity_probe(golden_field, figure_field):
    assert convexity_probe(golden_field, (1, 2), (3, 1)).passed
    report = convexity_probe(figure_field, (1, 1, 0, 0), (1, 1, 2, 2), 9)
    assert report.passed
    assert len(report.samples) == 9


def test_degenerate_segment(golden_field):
    report = convexity_probe(golden_field, (1, 2), (1, 2), 5)
    assert report.passed
    assert len({s.ent for s in report.samples}) == 1
    assert report.max_violation <= 1e-12


def test_convexity_probe_rejects_bad_samples(golden_field):
    with pytest.raises(DomainError):
        convexity_probe(golden_field, (1, 2), (0, 1), 3)


def test_continuity_probe(golden_field, figure_field):
    assert continuity_probe(golden_field, (1, 2)).passed
    rays = list(carried_cone(figure_eight()).rays)
    assert continuity_probe(figure_field, (1, 1, 1, 1), Fraction(1, 1000), rays).passed


def test_segment_points():
    points = segment_points((1, 0), (0, 1), 3)
    assert [t for t, _ in points] == [0, Fraction(1, 2), 1]
    assert points[1][1] == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(DomainError):
        segment_points((1, 0), (0, 1), 1)


def test_restriction_map_document():
    restriction = restriction_map_from_dict({"matrix": [["1/2", 0]], "kernel_dimension": 1})
    assert (restriction.source_dim, restriction.target_dim) == (2, 1)
    assert restriction.apply((2, 5)) == (1,)
    assert restriction_map_from_dict([[1, 0], [0, 1]]).target_dim == 2
    with pytest.raises(InputFormatError):
        restriction_map_from_dict({"kernel_dimension": 0})


def test_entropy_sample_checks_branch_equations():
    """采样点先过分支方程，再求 ent"""
    triangulation = figure_eight()
    phi = flow_graph(triangulation)
    samples = entropy_sample(phi, [0, 0, 0, 0], 0, [(1, 1, 0, 0), (2, 2, 0, 0)], triangulation=triangulation)
    assert samples[0].lam == pytest.approx(SQUARE_GOLDEN, abs=1e-8)
    assert samples[1].ent == pytest.approx(samples[0].ent / 2, abs=1e-9)
    with pytest.raises(DomainError):
        entropy_sample(phi, [0, 0, 0, 0], 0, [(1, 0, 0, 0)], triangulation=triangulation)
