"""Graph data model: construction, validation, boundary, files, families."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from steklov import (
    attach_boundary,
    boundary_degree,
    build_graph,
    induced_interior_graph,
    make_example,
    parse_graph_file,
    serialize_graph,
    volume,
    weighted_degree,
)
from steklov.errors import (
    BoundaryNotIndependent,
    Disconnected,
    DuplicateEdge,
    DuplicateVertex,
    EmptyBoundary,
    EmptyInterior,
    InvalidDimensionParam,
    InvalidFamilyParams,
    NonPositiveValue,
    NotInteriorVertex,
    ParseError,
    SelfLoop,
    UnknownVertex,
)
from steklov.graphs import INF, CurvatureParams

from oracles import random_boundary_graph

INF_ = INF


def unit_path(n, boundary=None):
    g = build_graph(
        [(str(i), 1) for i in range(1, n + 1)],
        [(str(i), str(i + 1), 1) for i in range(1, n)],
    )
    return g if boundary is None else attach_boundary(g, boundary)


def test_build_p3():
    g = unit_path(3)
    assert g.vertices == ("1", "2", "3")
    assert g.weight("1", "2") == 1.0
    assert g.weight("1", "3") == 0.0
    assert g.edge_list() == (("1", "2", 1.0), ("2", "3", 1.0))


def test_single_vertex_is_connected():
    g = build_graph([("a", 2.0)], [])
    assert g.num_vertices == 1
    assert g.edge_list() == ()


def test_build_validation_errors():
    with pytest.raises(DuplicateVertex) as e:
        build_graph([("1", 1), ("1", 1)], [])
    assert e.value.vertex == "1"
    with pytest.raises(SelfLoop):
        build_graph([("1", 1), ("2", 1)], [("1", "1", 1)])
    with pytest.raises(DuplicateEdge):
        build_graph([("1", 1), ("2", 1)], [("1", "2", 1), ("1", "2", 2)])
    with pytest.raises(DuplicateEdge):
        build_graph([("1", 1), ("2", 1)], [("1", "2", 1), ("2", "1", 2)])
    with pytest.raises(NonPositiveValue):
        build_graph([("1", -1)], [])
    with pytest.raises(NonPositiveValue):
        build_graph([("1", 1), ("2", 1)], [("1", "2", 0.0)])
    with pytest.raises(NonPositiveValue):
        build_graph([("1", math.inf)], [])
    with pytest.raises(UnknownVertex):
        build_graph([("1", 1), ("2", 1)], [("1", "9", 1)])
    with pytest.raises(Disconnected) as e:
        build_graph([("1", 1), ("2", 1), ("3", 1)], [("1", "2", 1)])
    assert e.value.unreachable == ("3",)


def test_attach_boundary_p3():
    bg = unit_path(3, {"1", "3"})
    assert bg.boundary == ("1", "3")
    assert bg.interior == ("2",)


def test_attach_boundary_c4():
    c4 = make_example("unit_square")
    assert c4.interior == ("2", "4")
    g = c4.graph
    with pytest.raises(BoundaryNotIndependent) as e:
        attach_boundary(g, {"1", "2"})
    assert set(e.value.pair) == {"1", "2"}


def test_attach_boundary_errors():
    g = unit_path(3)
    with pytest.raises(EmptyBoundary):
        attach_boundary(g, set())
    with pytest.raises(EmptyInterior):
        attach_boundary(g, {"1", "3", "2"})
    with pytest.raises(UnknownVertex):
        attach_boundary(g, {"7"})


def test_weighted_degree():
    g = unit_path(3)
    assert weighted_degree(g, "2") == pytest.approx(2.0)
    assert weighted_degree(g, "1") == pytest.approx(1.0)
    with pytest.raises(UnknownVertex):
        weighted_degree(g, "9")


def test_weighted_degree_weighted_path():
    # direct-summation cross-check of Deg at the interior vertex
    bg = make_example("weighted_path3", n=3, K=2 / 3, m=1)
    g = bg.graph
    by_hand = (g.weight("1", "x") + g.weight("2", "x")) / g.measure("x")
    assert by_hand == pytest.approx(5 / 3, rel=1e-12)
    assert weighted_degree(g, "x") == pytest.approx(5 / 3, rel=1e-12)


def test_boundary_degree():
    assert boundary_degree(unit_path(3, {"1", "3"}), "2") == pytest.approx(2.0)
    assert boundary_degree(make_example("unit_square"), "2") == pytest.approx(2.0)
    p5 = unit_path(5, {"1", "5"})
    assert boundary_degree(p5, "3") == 0.0
    with pytest.raises(NotInteriorVertex):
        boundary_degree(p5, "1")


def test_volume():
    g = unit_path(3)
    assert volume(g, set()) == 0.0
    assert volume(g, {"1", "2", "3"}) == pytest.approx(3.0)
    bg = make_example("weighted_path3", n=3, K=2 / 3, m=1)
    n, m = 3.0, 1.0
    assert volume(bg.graph, bg.interior) == pytest.approx(2 * m * n / (n + 2), rel=1e-12)


def test_induced_interior_graph():
    c4 = make_example("unit_square")
    ig = induced_interior_graph(c4)
    assert ig.vertices == ("2", "4")
    assert ig.edge_list() == ()
    assert ig.relaxed

    diag = make_example("unit_square_diag")
    ig = induced_interior_graph(diag)
    assert ig.edge_list() == (("2", "4", 1.0),)

    p3 = unit_path(3, {"1", "3"})
    assert induced_interior_graph(p3).vertices == ("2",)


def test_make_example_weighted_path3():
    bg = make_example("weighted_path3", n=3, K=2 / 3, m=1)
    g = bg.graph
    assert g.weight("1", "x") == pytest.approx(1.0, rel=1e-12)
    assert g.weight("2", "x") == pytest.approx(1.0, rel=1e-12)
    assert g.measure("x") == pytest.approx(6 / 5, rel=1e-12)


def test_make_example_weighted_square():
    bg = make_example("weighted_square", K=2, m=1)
    g = bg.graph
    for b in ("1", "2"):
        for x in ("x", "y"):
            assert g.weight(b, x) == pytest.approx(1.0)
    assert np.all(g.measures == 1.0)


def test_make_example_weighted_path3_infinite_dimension():
    bg = make_example("weighted_path3", n=INF_, K=1, m=1)
    assert bg.graph.weight("1", "x") == pytest.approx(1.0)
    assert bg.graph.measure("x") == pytest.approx(2.0)


def test_make_example_rejects_bad_params():
    with pytest.raises(InvalidFamilyParams):
        make_example("no_such_family")
    with pytest.raises(InvalidFamilyParams):
        make_example("weighted_path3", n=1.0, K=1, m=1)
    with pytest.raises(InvalidFamilyParams):
        make_example("weighted_path3", n=3, K=-1, m=1)
    with pytest.raises(InvalidFamilyParams):
        make_example("weighted_path3", n=3, K=1, m=1, extra=2)
    with pytest.raises(InvalidFamilyParams):
        make_example("weighted_square", K=1)
    with pytest.raises(InvalidFamilyParams):
        make_example("complete_interior", interior_size=0, n=4, K=1, m=1)


def test_make_example_complete_interior_degrees():
    bg = make_example("complete_interior", interior_size=3, n=4, K=1, m=1, lam=2)
    g = bg.graph
    deg_target = 4 * 1 / 3
    degb_target = 6 * 1 / 3
    for b in bg.boundary:
        assert weighted_degree(g, b) == pytest.approx(deg_target, rel=1e-12)
    for x in bg.interior:
        assert boundary_degree(bg, x) == pytest.approx(degb_target, rel=1e-12)
    assert induced_interior_graph(bg).weights.max() == pytest.approx(2.0)


def test_curvature_params():
    p = CurvatureParams(K=0.5, n=2)
    assert p.lichnerowicz_bound == pytest.approx(1.0)
    assert CurvatureParams(K=2, n=INF_).lichnerowicz_bound == pytest.approx(2.0)
    with pytest.raises(InvalidDimensionParam):
        CurvatureParams(K=1, n=1)
    with pytest.raises(InvalidDimensionParam):
        CurvatureParams(K=1, n=0.5)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

P3_FILE = """
{"vertices": [{"id": "1", "m": 1.0}, {"id": "2", "m": 1.0}, {"id": "3", "m": 1.0}],
 "edges": [{"u": "1", "v": "2", "w": 1.0}, {"u": "2", "v": "3", "w": 1.0}],
 "boundary": ["1", "3"]}
"""


def test_parse_graph_file():
    bg = parse_graph_file(P3_FILE)
    assert bg == unit_path(3, {"1", "3"})


def test_parse_round_trip():
    bg = unit_path(3, {"1", "3"})
    assert parse_graph_file(serialize_graph(bg)) == bg


def test_parse_errors():
    with pytest.raises(NonPositiveValue):
        parse_graph_file(P3_FILE.replace('"m": 1.0}, {"id": "2"', '"m": -1}, {"id": "2"'))
    with pytest.raises(ParseError):
        parse_graph_file('{"vertices": [], "edges": []}')  # boundary missing
    with pytest.raises(ParseError):
        parse_graph_file(P3_FILE.replace('"boundary"', '"frontier"'))
    with pytest.raises(ParseError):
        parse_graph_file(P3_FILE[:-3])  # truncated json
    with pytest.raises(ParseError):
        parse_graph_file(P3_FILE.replace('"w": 1.0', '"w": true'))
    with pytest.raises(ParseError):
        parse_graph_file(P3_FILE.replace('"id": "1"', '"id": 1'))
    with pytest.raises(ParseError):
        parse_graph_file(P3_FILE.replace('["1", "3"]', '["1", "1"]'))
    with pytest.raises(ParseError):
        parse_graph_file('[1, 2]')


# hypothesis strategy for small valid boundary graphs with string ids

finite_weights = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def boundary_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    ids = [f"v{i}" for i in range(n)]
    measures = [draw(finite_weights) for _ in range(n)]
    parents = [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    edges = {(parents[i - 1], i): draw(finite_weights) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and draw(st.booleans()):
                edges[(i, j)] = draw(finite_weights)
    g = build_graph(
        [(ids[i], measures[i]) for i in range(n)],
        [(ids[i], ids[j], w) for (i, j), w in edges.items()],
    )
    start = draw(st.integers(min_value=0, max_value=n - 1))
    boundary = [start]
    for i in range(n):
        if i == start or len(boundary) >= n - 1:
            continue
        if all(g.weights[i, j] == 0.0 for j in boundary) and draw(st.booleans()):
            boundary.append(i)
    return attach_boundary(g, {ids[i] for i in boundary})


@given(boundary_graphs())
def test_round_trip_property(bg):
    assert parse_graph_file(serialize_graph(bg)) == bg


@given(boundary_graphs(), st.integers(min_value=0, max_value=2**16))
def test_volume_additivity(bg, mask):
    g = bg.graph
    picked = {v for i, v in enumerate(g.vertices) if (mask >> i) & 1}
    rest = set(g.vertices) - picked
    total = volume(g, picked) + volume(g, rest)
    assert total == pytest.approx(volume(g, g.vertices), rel=1e-12)


def test_boundary_edge_mass_identity():
    # sum over interior of Deg_b * m equals sum over boundary of Deg * m,
    # and both equal twice ... the direct boundary-edge weight sum.
    rng = np.random.default_rng(7)
    for _ in range(25):
        bg = random_boundary_graph(rng)
        g = bg.graph
        interior_side = sum(boundary_degree(bg, x) * g.measure(x) for x in bg.interior)
        boundary_side = sum(weighted_degree(g, b) * g.measure(b) for b in bg.boundary)
        direct = sum(
            w for u, v, w in g.edge_list()
            if (u in set(bg.boundary)) != (v in set(bg.boundary))
        )
        assert interior_side == pytest.approx(direct, rel=1e-12)
        assert boundary_side == pytest.approx(direct, rel=1e-12)


def test_graphs_are_immutable():
    g = unit_path(3)
    with pytest.raises(ValueError):
        g.weights[0, 1] = 5.0
    with pytest.raises(ValueError):
        g.measures[0] = 5.0
