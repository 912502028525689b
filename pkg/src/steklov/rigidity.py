"""Equality analysis for the Steklov Lichnerowicz bound sigma_2 >= nK/(n-1).

On a boundary graph satisfying CD(K, n) with K > 0 and n > 1, equality holds
exactly when five structural conditions do:

  (1) |B| = 2 and every interior vertex is adjacent to both boundary vertices;
  (2) the two boundary measures agree (= m) and the two boundary edge weights
      at each interior vertex agree (= w_x);
  (3) both boundary degrees equal nK/(n-1);
  (4) every interior boundary-degree equals (n+2)K/(n-1);
  (5) either n = 2 and |Omega| = 1, or n > 2 and a quadratic form built from
      the interior-induced operators is PSD at every interior vertex on
      {f : f(x) = 0}.

This module decides the conditions, assembles the condition-(5) form,
classifies the rigid graphs (unit weight, edgeless interior, normalized
weight), runs the structural ball-scan diagnostics, and constructs equality
graphs over complete interiors by searching for a large enough interior
weight scale.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .curvature import PSD_TOL, cd_check, curvature_at
from .errors import (
    InteriorCurvatureNotPositive,
    InteriorNotComplete,
    InvalidParams,
    FeasibilitySearchFailed,
    NotInteriorVertex,
    PreconditionViolated,
    WrongHypothesis,
    WrongWeightClass,
)
from .graphs import (
    INF,
    CurvatureParams,
    boundary_degree,
    induced_interior_graph,
    is_infinite,
    join_equality_boundary,
    validate_dimension,
    weighted_degree,
)
from .operators import VertexFunction, _gamma2_matrix, _gamma_matrix, interior_edges
from .spectra import steklov_eigenfunction_diagnostics, steklov_spectrum

CONDITION_TOL = 1e-9
EQUALITY_TOL = 1e-8
LAMBDA_MAX = 1e8


def _close(a, b, tol=CONDITION_TOL):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


class RigidityClass(Enum):
    UNIT_PATH3 = "unit_path3"
    UNIT_SQUARE = "unit_square"
    UNIT_SQUARE_DIAG = "unit_square_diag"
    WEIGHTED_PATH3 = "weighted_path3"
    WEIGHTED_SQUARE = "weighted_square"
    GENERAL_EQUALITY = "general_equality"
    NOT_RIGID = "not_rigid"


@dataclass(frozen=True)
class Classification:
    label: RigidityClass
    params: dict

    @property
    def matched(self):
        return self.label is not RigidityClass.NOT_RIGID


NOT_RIGID = Classification(RigidityClass.NOT_RIGID, {})


@dataclass(frozen=True)
class ConditionCheck:
    index: int
    passed: bool
    detail: str


def _validate_params(K, n):
    n = validate_dimension(n)
    K = float(K)
    if not (math.isfinite(K) and K > 0):
        raise InvalidParams(f"rigidity analysis needs K > 0, got {K!r}")
    return K, n


def degree_targets(K, n):
    """The boundary degree nK/(n-1) and interior boundary-degree (n+2)K/(n-1)."""
    if is_infinite(n):
        return K, K
    return n * K / (n - 1.0), (n + 2.0) * K / (n - 1.0)


def infer_equality_params(bg):
    """Back out (K, n) from the degree pattern of a candidate equality graph.

    Uses Deg(boundary) = nK/(n-1) and Deg_b = (n+2)K/(n-1); returns None when
    the two degrees do not correspond to any K > 0, n > 1.
    """
    deg = weighted_degree(bg.graph, bg.boundary[0])
    degb = boundary_degree(bg, bg.interior[0])
    if _close(deg, degb):
        return CurvatureParams(K=deg, n=INF)
    ratio = degb / deg
    if not 1.0 < ratio < 3.0:
        return None
    n = 2.0 / (ratio - 1.0)
    return CurvatureParams(K=deg * (n - 1.0) / n, n=n)


@dataclass(frozen=True)
class NecessaryConditions:
    checks: tuple  # four ConditionCheck entries
    boundary_measure: float | None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def check_necessary_conditions(bg, K, n):
    """Conditions (1)-(4), each with an explanatory witness on failure."""
    K, n = _validate_params(K, n)
    g = bg.graph
    deg_target, degb_target = degree_targets(K, n)
    checks = []

    if len(bg.boundary) != 2:
        checks.append(ConditionCheck(1, False, f"|B| = {len(bg.boundary)}, need 2"))
    else:
        b1, b2 = bg.boundary
        missing = [
            x for x in bg.interior
            if g.weight(b1, x) == 0.0 or g.weight(b2, x) == 0.0
        ]
        if missing:
            checks.append(ConditionCheck(
                1, False, f"interior vertex {missing[0]!r} not adjacent to both boundary vertices"))
        else:
            checks.append(ConditionCheck(1, True, "|B| = 2, interior fully joined"))

    if len(bg.boundary) != 2:
        skipped = "requires |B| = 2"
        checks += [ConditionCheck(i, False, skipped) for i in (2, 3, 4)]
        return NecessaryConditions(tuple(checks), None)

    b1, b2 = bg.boundary
    m1, m2 = g.measure(b1), g.measure(b2)
    if not _close(m1, m2):
        checks.append(ConditionCheck(2, False, f"m({b1!r}) = {m1:g} != m({b2!r}) = {m2:g}"))
    else:
        bad = [x for x in bg.interior if not _close(g.weight(b1, x), g.weight(b2, x))]
        if bad:
            x = bad[0]
            checks.append(ConditionCheck(
                2, False,
                f"w({b1!r},{x!r}) = {g.weight(b1, x):g} != w({b2!r},{x!r}) = {g.weight(b2, x):g}"))
        else:
            checks.append(ConditionCheck(2, True, "boundary measures and edge weights symmetric"))

    degs = (weighted_degree(g, b1), weighted_degree(g, b2))
    if all(_close(d, deg_target) for d in degs):
        checks.append(ConditionCheck(3, True, f"Deg(boundary) = {deg_target:g}"))
    else:
        checks.append(ConditionCheck(
            3, False,
            f"Deg({b1!r}) = {degs[0]:g}, Deg({b2!r}) = {degs[1]:g}, target {deg_target:g}"))

    bad = [x for x in bg.interior if not _close(boundary_degree(bg, x), degb_target)]
    if bad:
        x = bad[0]
        checks.append(ConditionCheck(
            4, False, f"Deg_b({x!r}) = {boundary_degree(bg, x):g}, target {degb_target:g}"))
    else:
        checks.append(ConditionCheck(4, True, f"Deg_b(interior) = {degb_target:g}"))

    return NecessaryConditions(tuple(checks), (m1 + m2) / 2.0)


@dataclass(frozen=True)
class InteriorFormAssembly:
    """The condition-(5) quadratic form at an interior vertex, f(x) = 0 pinned."""

    vertex: object
    index_map: tuple  # Omega minus the pinned vertex, in vertex order
    matrix: np.ndarray
    n: float
    K: float
    m: float

    def evaluate(self, f):
        vec = f.on(self.index_map) if isinstance(f, VertexFunction) else np.asarray(f, float)
        return float(vec @ self.matrix @ vec)


def assemble_interior_form(bg, K, n, x):
    """Assemble the interior rigidity form at x over R^Omega with f(x) = 0.

    For finite n > 2 the form is

        Gamma2_O(f,f)(x) - (Delta_O f)^2(x)/(n-2) + 3K/(n-1) Gamma_O(f,f)(x)
        + (n+2)^2 K^2 / (8 m (n-1)^2) <f,f>_O
        - (n+2) K / ((n-1)(n-2) m) <f,1>_O Delta_O f(x)
        - n (n+2)^2 K^2 / (8 (n-2)(n-1)^2 m^2) <f,1>_O^2

    and for n = inf it degenerates to
    Gamma2_O + K^2/(8m) <f,f>_O - K^2/(8m^2) <f,1>_O^2. All interior
    operators act on the interior-induced graph. Requires conditions (1)-(4).
    """
    K, n = _validate_params(K, n)
    if not is_infinite(n) and n <= 2.0:
        raise PreconditionViolated(f"the interior form is defined for n > 2 or n = inf, got n = {n:g}")
    nec = check_necessary_conditions(bg, K, n)
    if not nec.passed:
        failed = [c for c in nec.checks if not c.passed][0]
        raise PreconditionViolated(f"condition ({failed.index}) fails: {failed.detail}")
    if x not in set(bg.interior):
        raise NotInteriorVertex(x)

    m = nec.boundary_measure
    ig = induced_interior_graph(bg)
    i = ig.index(x)
    g2 = _gamma2_matrix(ig, i)
    gx = _gamma_matrix(ig, i)
    ell = ig.delta_operator()[i]
    mu = ig.measures

    if is_infinite(n):
        a1 = a2 = a4 = 0.0
        a3 = K * K / (8.0 * m)
        a5 = K * K / (8.0 * m * m)
    else:
        a1 = 1.0 / (n - 2.0)
        a2 = 3.0 * K / (n - 1.0)
        a3 = (n + 2.0) ** 2 * K * K / (8.0 * m * (n - 1.0) ** 2)
        a4 = (n + 2.0) * K / ((n - 1.0) * (n - 2.0) * m)
        a5 = n * (n + 2.0) ** 2 * K * K / (8.0 * (n - 2.0) * (n - 1.0) ** 2 * m * m)

    q = (
        g2
        - a1 * np.outer(ell, ell)
        + a2 * gx
        + a3 * np.diag(mu)
        - a4 * 0.5 * (np.outer(mu, ell) + np.outer(ell, mu))
        - a5 * np.outer(mu, mu)
    )
    keep = [j for j in range(ig.num_vertices) if j != i]
    q = q[np.ix_(keep, keep)]
    return InteriorFormAssembly(
        vertex=x,
        index_map=tuple(ig.vertices[j] for j in keep),
        matrix=(q + q.T) / 2.0,
        n=n,
        K=K,
        m=m,
    )


@dataclass(frozen=True)
class InteriorFormCheck:
    vertex: object
    passed: bool
    lambda_min: float | None
    witness: VertexFunction | None


@dataclass(frozen=True)
class InteriorInequalityReport:
    passed: bool
    branch: str
    detail: str
    vertex_checks: tuple


def check_interior_inequality(bg, K, n):
    """Condition (5) of the equality characterization.

    n = 2 asks |Omega| = 1; 1 < n < 2 is reported false outright (no equality
    graphs exist there, the curvature condition already fails at interior
    vertices); for n > 2 and n = inf the assembled interior form must be PSD
    at every interior vertex.
    """
    K, n = _validate_params(K, n)
    nec = check_necessary_conditions(bg, K, n)
    if not nec.passed:
        failed = [c for c in nec.checks if not c.passed][0]
        raise PreconditionViolated(f"condition ({failed.index}) fails: {failed.detail}")

    if n == 2.0:
        ok = len(bg.interior) == 1
        return InteriorInequalityReport(
            ok, "n=2", f"|Omega| = {len(bg.interior)}, need 1 when n = 2", ())
    if n < 2.0:
        return InteriorInequalityReport(
            False, "1<n<2",
            "no equality graphs exist for 1 < n < 2 (the curvature condition "
            "fails at interior vertices)", ())

    checks = []
    for x in bg.interior:
        form = assemble_interior_form(bg, K, n, x)
        if form.matrix.size == 0:
            checks.append(InteriorFormCheck(x, True, None, None))
            continue
        evals, evecs = np.linalg.eigh(form.matrix)
        lam = float(evals[0])
        ok = lam >= -PSD_TOL * (1.0 + float(np.abs(evals).max()))
        witness = None
        if not ok:
            domain = (x,) + form.index_map
            witness = VertexFunction(domain, np.concatenate([[0.0], evecs[:, 0]]))
        checks.append(InteriorFormCheck(x, ok, lam, witness))
    passed = all(c.passed for c in checks)
    return InteriorInequalityReport(
        passed, "psd", "interior form PSD at every interior vertex" if passed
        else "interior form not PSD", tuple(checks))


# ---------------------------------------------------------------------------
# structural diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BallScanReport:
    pair: tuple | None
    connected: bool
    diameter: float  # inf when disconnected

    @property
    def found(self):
        return self.pair is not None


def disjoint_ball_scan(interior):
    """Look for two interior vertices whose radius-2 balls are disjoint.

    Works on the interior-induced graph; two balls are disjoint exactly when
    the hop distance of their centers exceeds 4 (infinite for different
    components). Also reports connectivity and diameter, which the structure
    theorem constrains for equality graphs.
    """
    nv = interior.num_vertices
    dist = np.array([interior.hop_distances(i) for i in range(nv)])
    connected = bool(np.isfinite(dist).all())
    diameter = float(dist.max()) if nv else 0.0
    pair = None
    for i in range(nv):
        for j in range(i + 1, nv):
            if dist[i, j] > 4:
                pair = (interior.vertices[i], interior.vertices[j])
                break
        if pair:
            break
    return BallScanReport(pair, connected, diameter)


@dataclass(frozen=True)
class TwoBallResiduals:
    residuals: dict  # (x, z) with hop distance 2 -> residual
    max_abs: float


def two_ball_identity_check(bg, u):
    """Residuals of the distance-2 averaging identity for u.

    For every pair x, z at hop distance 2 the identity

        (u(x) + u(z)) / 2 = sum_y u(y) w_xy w_yz / m_y  /  sum_y w_xy w_yz / m_y

    holds for the second Steklov eigenfunction's harmonic extension on
    equality graphs; the residual table quantifies how far u is from that.
    """
    from .errors import DomainMismatch

    g = bg.graph
    if set(u.domain) != set(g.vertices):
        raise DomainMismatch(g.vertices, u.domain)
    vals = u.on(g.vertices)
    residuals = {}
    max_abs = 0.0
    for i in range(g.num_vertices):
        dist = g.hop_distances(i)
        for j in range(i + 1, g.num_vertices):
            if dist[j] != 2:
                continue
            coeff = g.weights[i] * g.weights[j] / g.measures
            denom = coeff.sum()
            lhs = (vals[i] + vals[j]) / 2.0
            rhs = float(coeff @ vals) / denom
            r = lhs - rhs
            residuals[(g.vertices[i], g.vertices[j])] = r
            max_abs = max(max_abs, abs(r))
    return TwoBallResiduals(residuals, max_abs)


# ---------------------------------------------------------------------------
# the full rigidity decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RigidityReport:
    K: float
    n: float
    cd_holds: bool
    sigma2: float | None
    bound: float
    slack: float | None
    bound_equality: bool
    conditions: tuple  # five ConditionCheck entries
    interior_report: InteriorInequalityReport | None
    classification: Classification
    diagnostics: dict

    @property
    def all_conditions_hold(self):
        return all(c.passed for c in self.conditions)

    @property
    def is_rigid(self):
        return self.cd_holds and self.bound_equality and self.all_conditions_hold

    @property
    def consistent(self):
        """The equality characterization, which must hold whenever CD does."""
        if not self.cd_holds:
            return True
        return self.bound_equality == self.all_conditions_hold


def _is_unit_weight(g):
    return bool(np.all(g.measures == 1.0) and np.all((g.weights == 0.0) | (g.weights == 1.0)))


def check_rigidity(bg, K, n):
    """Decide equality in sigma_2 >= nK/(n-1) and classify the graph.

    Runs the global curvature check, the Steklov spectrum, conditions (1)-(5),
    eigenfunction and ball-scan diagnostics, and attaches a classification
    label when equality holds.
    """
    K, n = _validate_params(K, n)
    g = bg.graph
    cd_report = cd_check(g, K, n)
    bound = degree_targets(K, n)[0]

    sigma2 = None
    slack = None
    diagnostics = {}
    if len(bg.boundary) >= 2:
        spectrum = steklov_spectrum(bg)
        sigma2 = float(spectrum.values[1])
        slack = sigma2 - bound
        eig = steklov_eigenfunction_diagnostics(bg, spectrum)
        two_ball = two_ball_identity_check(bg, eig.extension)
        diagnostics.update(
            sigma2_interior_norm=eig.interior_norm,
            sigma2_rayleigh_quotient=eig.rayleigh_quotient,
            mu2=eig.mu2,
            mu2_residual=eig.mu2_residual,
            two_ball_max_residual=two_ball.max_abs,
        )
    else:
        diagnostics["sigma2_missing"] = "boundary has fewer than 2 vertices"
    bound_equality = sigma2 is not None and abs(sigma2 - bound) <= EQUALITY_TOL * bound

    scan = disjoint_ball_scan(induced_interior_graph(bg))
    diagnostics.update(
        interior_connected=scan.connected,
        interior_diameter=scan.diameter,
        disjoint_ball_pair=scan.pair,
    )

    nec = check_necessary_conditions(bg, K, n)
    interior_report = None
    if nec.passed:
        interior_report = check_interior_inequality(bg, K, n)
        cond5 = ConditionCheck(5, interior_report.passed, interior_report.detail)
    else:
        cond5 = ConditionCheck(5, False, "not evaluated: a condition among (1)-(4) failed")
    conditions = nec.checks + (cond5,)

    all_hold = all(c.passed for c in conditions)
    if bound_equality and all_hold and cd_report.holds:
        if _is_unit_weight(g):
            classification = classify_unit_weight(bg)
        elif not interior_edges(bg):
            classification = classify_partial(bg, K, n)
        else:
            classification = Classification(RigidityClass.GENERAL_EQUALITY, {"K": K, "n": n})
        if not classification.matched:
            classification = Classification(RigidityClass.GENERAL_EQUALITY, {"K": K, "n": n})
    else:
        classification = NOT_RIGID

    return RigidityReport(
        K=K,
        n=n,
        cd_holds=cd_report.holds,
        sigma2=sigma2,
        bound=bound,
        slack=slack,
        bound_equality=bound_equality,
        conditions=conditions,
        interior_report=interior_report,
        classification=classification,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------

def _matches_template(bg, template_edges, template_boundary):
    """Brute-force isomorphism with boundary placement, for <= 4 vertices."""
    g = bg.graph
    nv = g.num_vertices
    adj = g.weights > 0.0
    edge_set = {frozenset(e) for e in template_edges}
    b_set = set(template_boundary)
    boundary = set(bg.boundary)
    for perm in itertools.permutations(range(1, nv + 1)):
        if {perm[g.index(v)] for v in boundary} != b_set:
            continue
        ok = all(
            (frozenset((perm[i], perm[j])) in edge_set) == bool(adj[i, j])
            for i in range(nv) for j in range(i + 1, nv)
        )
        if ok:
            return True
    return False


_UNIT_TEMPLATES = (
    (RigidityClass.UNIT_PATH3, 3, ((1, 2), (2, 3)), (1, 3), {"K": 0.5, "n": 2.0}),
    (RigidityClass.UNIT_SQUARE, 4, ((1, 2), (2, 3), (3, 4), (4, 1)), (1, 3), {"K": 2.0, "n": INF}),
    (RigidityClass.UNIT_SQUARE_DIAG, 4, ((1, 2), (2, 3), (3, 4), (4, 1), (2, 4)), (1, 3),
     {"K": 2.0, "n": INF}),
)


def classify_unit_weight(bg):
    """Match a unit-weight boundary graph against the three rigid shapes.

    The shapes are the 3-path with its endpoints as boundary (K = 1/2, n = 2)
    and the square with or without one diagonal, boundary at two opposite
    corners (K = 2, n = inf). Everything else is not rigid.
    """
    if not _is_unit_weight(bg.graph):
        raise WrongWeightClass("graph is not unit-weighted (need m = 1 and w = 1 everywhere)")
    nv = bg.graph.num_vertices
    for label, size, edges, boundary, params in _UNIT_TEMPLATES:
        if nv == size and _matches_template(bg, edges, boundary):
            return Classification(label, dict(params))
    return NOT_RIGID


def classify_partial(bg, K, n):
    """Classify equality graphs whose interior carries no edges.

    Matches the weighted 3-path (any n > 1: boundary edge weights mnK/(n-1),
    interior measure 2nm/(n+2)) or the weighted square (n = inf only: all
    measures m, boundary edge weights mK/2), extracting m from the boundary
    measures.
    """
    K, n = _validate_params(K, n)
    if interior_edges(bg):
        raise WrongHypothesis("interior-induced graph has edges")
    g = bg.graph
    if len(bg.boundary) != 2:
        return NOT_RIGID
    b1, b2 = bg.boundary
    m1, m2 = g.measure(b1), g.measure(b2)
    if not _close(m1, m2):
        return NOT_RIGID
    m = (m1 + m2) / 2.0

    if len(bg.interior) == 1:
        x = bg.interior[0]
        w_target = m * K if is_infinite(n) else m * n * K / (n - 1.0)
        mx_target = 2.0 * m if is_infinite(n) else 2.0 * n * m / (n + 2.0)
        w1, w2 = g.weight(b1, x), g.weight(b2, x)
        if all(_close(w, w_target) for w in (w1, w2)) and _close(g.measure(x), mx_target):
            return Classification(RigidityClass.WEIGHTED_PATH3, {"n": n, "K": K, "m": m})
        return NOT_RIGID

    if len(bg.interior) == 2 and is_infinite(n):
        w_target = m * K / 2.0
        ok = all(_close(g.measure(x), m) for x in bg.interior) and all(
            _close(g.weight(b, x), w_target)
            for b in bg.boundary for x in bg.interior
        )
        if ok:
            return Classification(RigidityClass.WEIGHTED_SQUARE, {"n": INF, "K": K, "m": m})
    return NOT_RIGID


def classify_normalized(bg):
    """Classify equality graphs carrying the normalized weight Deg = 1.

    Normalized equality forces n = inf and K = 1, and the graph must then be
    one of the two edgeless-interior shapes with those parameters.
    """
    g = bg.graph
    off = [v for v in g.vertices if not _close(weighted_degree(g, v), 1.0)]
    if off:
        raise WrongWeightClass(
            f"graph is not normalized: Deg({off[0]!r}) = {weighted_degree(g, off[0]):g}")
    if interior_edges(bg):
        return NOT_RIGID
    return classify_partial(bg, 1.0, INF)


# ---------------------------------------------------------------------------
# construction of equality graphs over complete interiors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionResult:
    graph: object  # BoundaryGraph
    lam: float
    lam_threshold: float | None
    interior_report: InteriorInequalityReport


def construct_rigid_family(interior, n, K, m, lam=None):
    """Build an equality graph by joining B = {1, 2} to a complete interior.

    The interior must be complete and carry positive curvature at dimension
    n - 2 (so the boundary join can absorb the remaining terms). Interior
    measures are rescaled to the required interior volume 2mn/(n+2), boundary
    data is chosen to satisfy the four degree conditions, and the interior
    weights are scaled by lam. When lam is not given, the least feasible
    lam >= 1 is located by doubling plus bisection (to relative 1e-6) and the
    returned graph uses twice that threshold, safely inside the region.
    """
    n = validate_dimension(n)
    if is_infinite(n) or n <= 2.0:
        raise InvalidParams(f"the construction needs a finite dimension n > 2, got {n!r}")
    if not (math.isfinite(K) and K > 0):
        raise InvalidParams(f"K must be finite positive, got {K!r}")
    if not (math.isfinite(m) and m > 0):
        raise InvalidParams(f"m must be finite positive, got {m!r}")

    nv = interior.num_vertices
    for i in range(nv):
        for j in range(i + 1, nv):
            if interior.weights[i, j] == 0.0:
                raise InteriorNotComplete(interior.vertices[i], interior.vertices[j])

    if nv >= 2:
        if n - 2.0 <= 1.0:
            raise InteriorCurvatureNotPositive(
                f"cannot certify interior curvature at dimension n - 2 = {n - 2:g}; "
                "the curvature solver needs a dimension above 1")
        kappas = [curvature_at(interior, v, n - 2.0).kappa for v in interior.vertices]
        if min(kappas) <= 0.0:
            raise InteriorCurvatureNotPositive(
                f"interior curvature at dimension n - 2 = {n - 2:g} is "
                f"{min(kappas):g}, need a positive value")

    def build(scale):
        return join_equality_boundary(interior.rescaled_weights(scale), n, K, m)

    def feasible(scale):
        return check_interior_inequality(build(scale), K, n).passed

    if lam is not None:
        if not (math.isfinite(lam) and lam > 0):
            raise InvalidParams(f"lam must be finite positive, got {lam!r}")
        bg = build(lam)
        return ConstructionResult(bg, float(lam), None, check_interior_inequality(bg, K, n))

    if feasible(1.0):
        threshold = 1.0
    else:
        lo, hi = 1.0, 2.0
        while not feasible(hi):
            lo, hi = hi, hi * 2.0
            if hi > LAMBDA_MAX:
                raise FeasibilitySearchFailed(LAMBDA_MAX)
        while hi / lo > 1.0 + 1e-6:
            mid = math.sqrt(lo * hi)
            if feasible(mid):
                hi = mid
            else:
                lo = mid
        threshold = hi
    chosen = 2.0 * threshold
    bg = build(chosen)
    return ConstructionResult(bg, chosen, threshold, check_interior_inequality(bg, K, n))
