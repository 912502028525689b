"""Weighted graphs with boundary: data model, validation, files, example families.

A weighted graph is a finite simple connected graph together with a positive
vertex measure m and positive symmetric edge weights w. A boundary graph adds
an independent boundary set B whose every vertex touches the interior
Omega = V \\ B. Both types are immutable after construction and safe to share.

Vertex ids are opaque (any hashable; strings in the file format) and are
mapped to dense indices in declaration order, so spectra and reports are
deterministic.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BoundaryNotIndependent,
    BoundaryVertexIsolatedFromInterior,
    Disconnected,
    DuplicateEdge,
    DuplicateVertex,
    EmptyBoundary,
    EmptyInterior,
    InvalidDimensionParam,
    InvalidFamilyParams,
    InvalidParams,
    NonPositiveValue,
    ParseError,
    SelfLoop,
    UnknownVertex,
)

INF = math.inf


def is_infinite(n):
    return n == INF


def validate_dimension(n):
    """Accept the dimension parameter n from (1, inf]; reject everything else."""
    if n == INF:
        return INF
    try:
        n = float(n)
    except (TypeError, ValueError):
        raise InvalidDimensionParam(n) from None
    if math.isnan(n) or n <= 1.0:
        raise InvalidDimensionParam(n)
    return n


@dataclass(frozen=True)
class CurvatureParams:
    """A (K, n) pair for the curvature-dimension condition; n may be inf."""

    K: float
    n: float

    def __post_init__(self):
        object.__setattr__(self, "K", float(self.K))
        object.__setattr__(self, "n", validate_dimension(self.n))

    @property
    def lichnerowicz_bound(self):
        return self.K if is_infinite(self.n) else self.n * self.K / (self.n - 1.0)


def _check_positive(kind, element, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise NonPositiveValue(kind, element, value) from None
    if not math.isfinite(value) or value <= 0.0:
        raise NonPositiveValue(kind, element, value)
    return value


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted graph.

    vertices : tuple of vertex ids, declaration order
    measures : m, aligned with `vertices`
    weights  : symmetric matrix, zero diagonal, zero for non-adjacent pairs
    relaxed  : True for interior-induced graphs, which may be disconnected
    """

    vertices: tuple
    measures: np.ndarray
    weights: np.ndarray
    relaxed: bool = False
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.measures, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "measures", m)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        m.setflags(write=False)
        w.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.relaxed == other.relaxed
            and np.array_equal(self.measures, other.measures)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    @property
    def num_vertices(self):
        return len(self.vertices)

    def index(self, v):
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def has_vertex(self, v):
        return v in self._index

    def measure(self, v):
        return float(self.measures[self.index(v)])

    def weight(self, u, v):
        return float(self.weights[self.index(u), self.index(v)])

    def neighbor_indices(self, i):
        return np.flatnonzero(self.weights[i] > 0.0)

    def neighbors(self, v):
        return tuple(self.vertices[j] for j in self.neighbor_indices(self.index(v)))

    def edge_list(self):
        """Edges as (u, v, w) with u before v in vertex order."""
        iu, iv = np.nonzero(np.triu(self.weights))
        return tuple(
            (self.vertices[i], self.vertices[j], float(self.weights[i, j]))
            for i, j in zip(iu.tolist(), iv.tolist())
        )

    def laplacian_matrix(self):
        """Symmetric form matrix L = D - W (so the operator is -M^{-1} L)."""
        return np.diag(self.weights.sum(axis=1)) - self.weights

    def delta_operator(self):
        """Matrix of the Laplacian operator: (Delta u) = A u with A = M^{-1}(W - D)."""
        return -self.laplacian_matrix() / self.measures[:, None]

    def hop_distances(self, i):
        """Combinatorial (hop) distances from vertex index i; inf if unreachable."""
        n = self.num_vertices
        dist = np.full(n, INF)
        dist[i] = 0
        frontier = [i]
        d = 0
        adj = self.weights > 0.0
        while frontier:
            d += 1
            nxt = []
            for j in frontier:
                for k in np.flatnonzero(adj[j]):
                    if dist[k] == INF:
                        dist[k] = d
                        nxt.append(int(k))
            frontier = nxt
        return dist

    def ball_indices(self, i, radius):
        """Indices of the closed ball of the given hop radius around index i."""
        return np.flatnonzero(self.hop_distances(i) <= radius)

    def components(self):
        """Connected components as tuples of vertex ids, in vertex order."""
        seen = np.zeros(self.num_vertices, dtype=bool)
        comps = []
        for i in range(self.num_vertices):
            if seen[i]:
                continue
            reach = np.isfinite(self.hop_distances(i))
            seen |= reach
            comps.append(tuple(self.vertices[j] for j in np.flatnonzero(reach)))
        return tuple(comps)

    def rescaled_weights(self, lam):
        """Same graph with every edge weight multiplied by lam > 0."""
        if not (math.isfinite(lam) and lam > 0):
            raise InvalidParams(f"weight scale must be finite positive, got {lam!r}")
        return WeightedGraph(self.vertices, self.measures, lam * self.weights, relaxed=self.relaxed)


@dataclass(frozen=True, eq=False)
class BoundaryGraph:
    """A weighted graph together with a validated boundary/interior partition."""

    graph: WeightedGraph
    boundary: tuple
    interior: tuple

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "interior", tuple(self.interior))

    def __eq__(self, other):
        if not isinstance(other, BoundaryGraph):
            return NotImplemented
        return self.graph == other.graph and self.boundary == other.boundary

    __hash__ = None

    @property
    def boundary_indices(self):
        return np.array([self.graph.index(v) for v in self.boundary], dtype=int)

    @property
    def interior_indices(self):
        return np.array([self.graph.index(v) for v in self.interior], dtype=int)

    def is_boundary(self, v):
        return v in set(self.boundary)


def build_graph(vertex_specs, edge_specs, relaxed=False):
    """Build a validated WeightedGraph.

    vertex_specs : iterable of (id, measure)
    edge_specs   : iterable of (id, id, weight)

    Raises DuplicateVertex, SelfLoop, DuplicateEdge, NonPositiveValue,
    UnknownVertex, or Disconnected, each naming the offending element.
    Connectivity is not enforced when relaxed=True.
    """
    vertices = []
    measures = []
    index = {}
    for vid, m in vertex_specs:
        if vid in index:
            raise DuplicateVertex(vid)
        index[vid] = len(vertices)
        vertices.append(vid)
        measures.append(_check_positive("measure", vid, m))
    if not vertices:
        raise InvalidParams("a graph needs at least one vertex")

    n = len(vertices)
    weights = np.zeros((n, n))
    for u, v, w in edge_specs:
        if u not in index:
            raise UnknownVertex(u)
        if v not in index:
            raise UnknownVertex(v)
        if u == v:
            raise SelfLoop(u)
        i, j = index[u], index[v]
        if weights[i, j] != 0.0:
            raise DuplicateEdge(u, v)
        w = _check_positive("weight", (u, v), w)
        weights[i, j] = w
        weights[j, i] = w

    g = WeightedGraph(tuple(vertices), np.array(measures), weights, relaxed=relaxed)
    if not relaxed:
        reachable = np.isfinite(g.hop_distances(0))
        if not reachable.all():
            raise Disconnected(g.vertices[i] for i in np.flatnonzero(~reachable))
    return g


def attach_boundary(g, boundary):
    """Partition g into boundary B and interior Omega = V \\ B, validating both.

    B must be a nonempty independent set with a nonempty complement, and every
    boundary vertex must have at least one interior neighbor.
    """
    b_set = set(boundary)
    for v in b_set:
        g.index(v)  # raises UnknownVertex
    if not b_set:
        raise EmptyBoundary()
    b = tuple(v for v in g.vertices if v in b_set)
    omega = tuple(v for v in g.vertices if v not in b_set)
    if not omega:
        raise EmptyInterior()
    b_idx = [g.index(v) for v in b]
    for a_pos, i in enumerate(b_idx):
        for j in b_idx[a_pos + 1:]:
            if g.weights[i, j] > 0.0:
                raise BoundaryNotIndependent(g.vertices[i], g.vertices[j])
    omega_idx = set(g.index(v) for v in omega)
    for i in b_idx:
        if not any(int(j) in omega_idx for j in g.neighbor_indices(i)):
            raise BoundaryVertexIsolatedFromInterior(g.vertices[i])
    return BoundaryGraph(g, b, omega)


def weighted_degree(g, x):
    """Deg(x) = (1/m_x) * sum_y w_xy."""
    i = g.index(x)
    return float(g.weights[i].sum() / g.measures[i])


def boundary_degree(bg, x):
    """Deg_b(x) = (1/m_x) * sum over boundary neighbors y of w_xy; x interior."""
    from .errors import NotInteriorVertex

    if bg.is_boundary(x) or not bg.graph.has_vertex(x):
        raise NotInteriorVertex(x)
    g = bg.graph
    i = g.index(x)
    return float(g.weights[i, bg.boundary_indices].sum() / g.measures[i])


def volume(g, s):
    """V_S = sum of vertex measures over s."""
    return float(sum(g.measures[g.index(v)] for v in s))


def induced_interior_graph(bg):
    """The interior-induced graph, inheriting m and the interior edge weights.

    The result is relaxed: it may be disconnected or edgeless, which is fine
    for the structural checks that consume it.
    """
    idx = bg.interior_indices
    return WeightedGraph(
        bg.interior,
        bg.graph.measures[idx],
        bg.graph.weights[np.ix_(idx, idx)],
        relaxed=True,
    )


# ---------------------------------------------------------------------------
# example families
# ---------------------------------------------------------------------------

class ExampleFamily(str, Enum):
    UNIT_PATH3 = "unit_path3"
    UNIT_SQUARE = "unit_square"
    UNIT_SQUARE_DIAG = "unit_square_diag"
    WEIGHTED_PATH3 = "weighted_path3"
    WEIGHTED_SQUARE = "weighted_square"
    COMPLETE_INTERIOR = "complete_interior"


def _family_positive(family, name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidFamilyParams(family, f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value) or value <= 0:
        raise InvalidFamilyParams(family, f"{name} must be finite positive, got {value!r}")
    return value


def _family_dimension(family, n):
    try:
        return validate_dimension(n)
    except InvalidDimensionParam:
        raise InvalidFamilyParams(family, f"dimension n must be > 1 or inf, got {n!r}") from None


def join_equality_boundary(interior, n, K, m):
    """Join a two-vertex boundary to an interior graph in the equality pattern.

    The interior measures are rescaled so the interior volume is 2mn/(n+2),
    boundary vertices "1" and "2" get measure m and are joined to every
    interior vertex x with weight w_x = m_x (n+2) K / (2(n-1)), which makes
    the two boundary degrees nK/(n-1) and every interior boundary-degree
    (n+2)K/(n-1). Boundary ids are chosen fresh if the interior already uses
    "1" or "2".
    """
    n = validate_dimension(n)
    if not (math.isfinite(K) and K > 0):
        raise InvalidParams(f"K must be finite positive, got {K!r}")
    if not (math.isfinite(m) and m > 0):
        raise InvalidParams(f"m must be finite positive, got {m!r}")

    if is_infinite(n):
        target_volume = 2.0 * m
        w_factor = K / 2.0  # (n+2)K / (2(n-1)) as n -> inf
    else:
        target_volume = 2.0 * m * n / (n + 2.0)
        w_factor = (n + 2.0) * K / (2.0 * (n - 1.0))

    scale = target_volume / float(interior.measures.sum())
    interior_measures = scale * interior.measures
    boundary_weights = w_factor * interior_measures

    taken = set(interior.vertices)
    b1, b2 = "1", "2"
    while b1 in taken or b2 in taken:
        b1, b2 = "b" + b1, "b" + b2

    vertex_specs = [(b1, m), (b2, m)]
    vertex_specs += [(v, interior_measures[i]) for i, v in enumerate(interior.vertices)]
    edge_specs = []
    for i, v in enumerate(interior.vertices):
        edge_specs.append((b1, v, boundary_weights[i]))
        edge_specs.append((b2, v, boundary_weights[i]))
    edge_specs += interior.edge_list()
    return attach_boundary(build_graph(vertex_specs, edge_specs), {b1, b2})


def make_example(family, **params):
    """Construct one of the named example families as a BoundaryGraph.

    Families: unit_path3; unit_square; unit_square_diag;
    weighted_path3(n, K, m); weighted_square(K, m);
    complete_interior(interior_size, n, K, m, lam).
    """
    try:
        family = ExampleFamily(family)
    except ValueError:
        raise InvalidFamilyParams(family, "unknown family") from None

    def reject_extra(allowed):
        extra = set(params) - set(allowed)
        if extra:
            raise InvalidFamilyParams(family.value, f"unexpected parameters {sorted(extra)}")

    if family is ExampleFamily.UNIT_PATH3:
        reject_extra(())
        g = build_graph([("1", 1), ("2", 1), ("3", 1)], [("1", "2", 1), ("2", "3", 1)])
        return attach_boundary(g, {"1", "3"})

    if family is ExampleFamily.UNIT_SQUARE or family is ExampleFamily.UNIT_SQUARE_DIAG:
        reject_extra(())
        edges = [("1", "2", 1), ("2", "3", 1), ("3", "4", 1), ("4", "1", 1)]
        if family is ExampleFamily.UNIT_SQUARE_DIAG:
            edges.append(("2", "4", 1))
        g = build_graph([(str(i), 1) for i in range(1, 5)], edges)
        return attach_boundary(g, {"1", "3"})

    if family is ExampleFamily.WEIGHTED_PATH3:
        reject_extra(("n", "K", "m"))
        try:
            n, K, m = params["n"], params["K"], params["m"]
        except KeyError as e:
            raise InvalidFamilyParams(family.value, f"missing parameter {e.args[0]}") from None
        n = _family_dimension(family.value, n)
        K = _family_positive(family.value, "K", K)
        m = _family_positive(family.value, "m", m)
        w = m * K if is_infinite(n) else m * n * K / (n - 1.0)
        m_x = 2.0 * m if is_infinite(n) else 2.0 * n * m / (n + 2.0)
        g = build_graph(
            [("1", m), ("2", m), ("x", m_x)],
            [("1", "x", w), ("2", "x", w)],
        )
        return attach_boundary(g, {"1", "2"})

    if family is ExampleFamily.WEIGHTED_SQUARE:
        reject_extra(("K", "m"))
        try:
            K, m = params["K"], params["m"]
        except KeyError as e:
            raise InvalidFamilyParams(family.value, f"missing parameter {e.args[0]}") from None
        K = _family_positive(family.value, "K", K)
        m = _family_positive(family.value, "m", m)
        w = m * K / 2.0
        g = build_graph(
            [("1", m), ("2", m), ("x", m), ("y", m)],
            [("1", "x", w), ("2", "x", w), ("1", "y", w), ("2", "y", w)],
        )
        return attach_boundary(g, {"1", "2"})

    if family is ExampleFamily.COMPLETE_INTERIOR:
        reject_extra(("interior_size", "n", "K", "m", "lam"))
        try:
            size = params["interior_size"]
            n, K, m = params["n"], params["K"], params["m"]
        except KeyError as e:
            raise InvalidFamilyParams(family.value, f"missing parameter {e.args[0]}") from None
        lam = params.get("lam", 1.0)
        if not isinstance(size, int) or size < 1:
            raise InvalidFamilyParams(family.value, f"interior_size must be a positive int, got {size!r}")
        n = _family_dimension(family.value, n)
        K = _family_positive(family.value, "K", K)
        m = _family_positive(family.value, "m", m)
        lam = _family_positive(family.value, "lam", lam)
        ids = [f"x{i}" for i in range(1, size + 1)]
        interior = build_graph(
            [(v, 1.0) for v in ids],
            [(ids[i], ids[j], lam) for i in range(size) for j in range(i + 1, size)],
            relaxed=(size == 1),
        )
        return join_equality_boundary(interior, n, K, m)

    raise InvalidFamilyParams(family, "unknown family")  # pragma: no cover


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

_TOP_KEYS = ("vertices", "edges", "boundary")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(None, f"{where} must be a number, got {value!r}")
    return float(value)


def parse_graph_file(text):
    """Parse the toolkit's graph file format into a BoundaryGraph.

    Format (JSON):
      {"vertices": [{"id": "1", "m": 1.0}, ...],
       "edges":    [{"u": "1", "v": "2", "w": 1.0}, ...],
       "boundary": ["1", "3"]}
    Unknown keys are rejected. Build and boundary validation errors propagate.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.msg) from None

    if not isinstance(doc, dict):
        raise ParseError(None, "top level must be an object")
    extra = set(doc) - set(_TOP_KEYS)
    if extra:
        raise ParseError(None, f"unknown keys {sorted(extra)}")
    for key in _TOP_KEYS:
        if key not in doc:
            raise ParseError(None, f"missing key {key!r}")
        if not isinstance(doc[key], list):
            raise ParseError(None, f"{key!r} must be an array")

    vertex_specs = []
    for k, entry in enumerate(doc["vertices"]):
        if not isinstance(entry, dict) or set(entry) != {"id", "m"}:
            raise ParseError(None, f"vertices[{k}] must be an object with keys id, m")
        if not isinstance(entry["id"], str):
            raise ParseError(None, f"vertices[{k}].id must be a string")
        vertex_specs.append((entry["id"], _number(entry["m"], f"vertices[{k}].m")))

    edge_specs = []
    for k, entry in enumerate(doc["edges"]):
        if not isinstance(entry, dict) or set(entry) != {"u", "v", "w"}:
            raise ParseError(None, f"edges[{k}] must be an object with keys u, v, w")
        if not isinstance(entry["u"], str) or not isinstance(entry["v"], str):
            raise ParseError(None, f"edges[{k}] endpoints must be strings")
        edge_specs.append((entry["u"], entry["v"], _number(entry["w"], f"edges[{k}].w")))

    boundary = doc["boundary"]
    for k, v in enumerate(boundary):
        if not isinstance(v, str):
            raise ParseError(None, f"boundary[{k}] must be a string")
    if len(set(boundary)) != len(boundary):
        raise ParseError(None, "boundary has duplicate entries")

    return attach_boundary(build_graph(vertex_specs, edge_specs), set(boundary))


def serialize_graph(bg):
    """Serialize a BoundaryGraph to the graph file format (inverse of parse)."""
    from .jsonio import format_json

    g = bg.graph
    doc = {
        "vertices": [{"id": str(v), "m": g.measures[i]} for i, v in enumerate(g.vertices)],
        "edges": [{"u": str(u), "v": str(v), "w": w} for u, v, w in g.edge_list()],
        "boundary": [str(v) for v in bg.boundary],
    }
    return format_json(doc) + "\n"
