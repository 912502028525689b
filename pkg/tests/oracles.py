"""Independent oracles and random generators shared by the test modules.

Everything here recomputes quantities through a route different from the one
the library uses, so agreement is evidence rather than tautology:

  * dense matrix application for the Laplacian,
  * the product-rule identity for Gamma,
  * polarization of the scalar operators for local quadratic forms,
  * bisection on a directly assembled pencil for the curvature function,
  * extension-plus-normal-derivative composition for the DtN map,
  * the specialized interior/boundary formulas valid under the degree
    assumptions (A1)-(A4) for Gamma, Delta and Gamma2.
"""

import numpy as np

from steklov import (
    VertexFunction,
    boundary_degree,
    attach_boundary,
    build_graph,
    differential,
    gamma,
    gamma2,
    harmonic_extension,
    induced_interior_graph,
    inner_product_forms,
    inner_product_functions,
    interior_edges,
    laplacian,
    normal_derivative,
    weighted_degree,
)
from steklov.graphs import INF, is_infinite

# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def random_connected_graph(rng, n_min=2, n_max=8, unit=False, extra_edge_prob=0.45,
                           weight_range=(0.2, 3.0), measure_range=(0.2, 3.0)):
    """Random connected weighted graph: random tree plus extra edges."""
    n = int(rng.integers(n_min, n_max + 1))
    ids = [str(i) for i in range(1, n + 1)]

    def w():
        return 1.0 if unit else float(rng.uniform(*weight_range))

    edges = {}
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges[(j, i)] = w()
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra_edge_prob:
                edges[(i, j)] = w()
    measures = [1.0 if unit else float(rng.uniform(*measure_range)) for _ in range(n)]
    return build_graph(
        [(ids[i], measures[i]) for i in range(n)],
        [(ids[i], ids[j], wt) for (i, j), wt in edges.items()],
    )


def random_boundary_graph(rng, n_min=3, n_max=8, unit=False, extra_edge_prob=0.45,
                          weight_range=(0.2, 3.0), measure_range=(0.2, 3.0)):
    """Random boundary graph: random graph plus a random independent boundary."""
    g = random_connected_graph(rng, n_min, n_max, unit, extra_edge_prob,
                               weight_range, measure_range)
    n = g.num_vertices
    order = rng.permutation(n)
    boundary_idx = []
    for i in order:
        if len(boundary_idx) >= n - 1:
            break
        independent = all(g.weights[i, j] == 0.0 for j in boundary_idx)
        if independent and rng.random() < 0.6:
            boundary_idx.append(int(i))
    if not boundary_idx:
        boundary_idx = [int(order[0])]
    return attach_boundary(g, {g.vertices[i] for i in boundary_idx})


def random_join_boundary_graph(rng, boundary_size=None, interior_size=None,
                               weight_range=(0.5, 1.5), measure_range=(0.5, 1.5)):
    """Random boundary graph built boundary-first and densely joined.

    Every boundary vertex is joined to most interior vertices and the interior
    carries random extra edges; this is the regime where small graphs tend to
    have positive curvature, which the spectral-bound tests need.
    """
    nb = boundary_size or int(rng.integers(2, 4))
    ni = interior_size or int(rng.integers(1, 6))
    b_ids = [f"b{i}" for i in range(1, nb + 1)]
    o_ids = [f"x{i}" for i in range(1, ni + 1)]

    def w():
        return float(rng.uniform(*weight_range))

    edges = {}
    for x in o_ids:
        edges[(b_ids[int(rng.integers(0, nb))], x)] = w()
    for b in b_ids:
        if not any(u == b for u, _ in edges):
            edges[(b, o_ids[int(rng.integers(0, ni))])] = w()
        for x in o_ids:
            if (b, x) not in edges and rng.random() < 0.85:
                edges[(b, x)] = w()
    for i in range(ni):
        for j in range(i + 1, ni):
            if rng.random() < 0.5:
                edges[(o_ids[i], o_ids[j])] = w()
    specs = [(v, float(rng.uniform(*measure_range))) for v in b_ids + o_ids]
    g = build_graph(specs, [(u, v, wt) for (u, v), wt in edges.items()])
    return attach_boundary(g, set(b_ids))


def random_function(rng, domain, scale=1.0):
    return VertexFunction(tuple(domain), scale * rng.standard_normal(len(tuple(domain))))


def random_a1a4_graph(rng, n=None, K=None, m=None, interior_size=None, edge_prob=0.5):
    """Random graph satisfying the four degree assumptions (A1)-(A4).

    A random interior graph (any topology, possibly edgeless or disconnected)
    is joined to a two-vertex boundary with the measures and weights that the
    assumptions force.
    """
    from steklov import join_equality_boundary

    if n is None:
        n = float(rng.choice([2.5, 3.0, 4.0, 7.0, INF]))
    if K is None:
        K = float(rng.uniform(0.3, 2.0))
    if m is None:
        m = float(rng.uniform(0.5, 2.0))
    size = interior_size or int(rng.integers(1, 5))
    ids = [f"x{i}" for i in range(1, size + 1)]
    edges = []
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < edge_prob:
                edges.append((ids[i], ids[j], float(rng.uniform(0.2, 2.0))))
    interior = build_graph(
        [(v, float(rng.uniform(0.4, 2.0))) for v in ids], edges, relaxed=True
    )
    return join_equality_boundary(interior, n, K, m), K, n, m


# ---------------------------------------------------------------------------
# operator oracles
# ---------------------------------------------------------------------------


def laplacian_by_matrix(g, u):
    """Dense-matrix route: Delta u = M^{-1} (W - D) u."""
    w = g.weights
    mat = np.linalg.solve(np.diag(g.measures), w - np.diag(w.sum(axis=1)))
    return mat @ u.on(g.vertices)


def gamma_by_identity(g, u, v):
    """Product-rule route: Gamma(u, v) = (Delta(uv) - v Delta u - u Delta v) / 2."""
    uv = VertexFunction(g.vertices, u.on(g.vertices) * v.on(g.vertices))
    return 0.5 * (
        laplacian(g, uv).values
        - v.on(g.vertices) * laplacian(g, u).values
        - u.on(g.vertices) * laplacian(g, v).values
    )


def cd_scalar_value(g, x, K, n, f):
    """Gamma2 - (1/n)(Delta f)^2 - K Gamma at x, straight from the operators."""
    value = gamma2(g, f, f)[x] - K * gamma(g, f, f)[x]
    if not is_infinite(n):
        value -= laplacian(g, f)[x] ** 2 / n
    return value


def cd_matrix_by_polarization(g, x, K, n):
    """The pinned CD form over V minus {x}, built by polarizing the scalar."""
    rest = [v for v in g.vertices if v != x]
    k = len(rest)

    def scalar(vec):
        values = np.zeros(g.num_vertices)
        for pos, v in enumerate(rest):
            values[g.index(v)] = vec[pos]
        return cd_scalar_value(g, x, K, n, VertexFunction(g.vertices, values))

    diag = [scalar(np.eye(k)[i]) for i in range(k)]
    q = np.diag(diag)
    for i in range(k):
        for j in range(i + 1, k):
            both = scalar(np.eye(k)[i] + np.eye(k)[j])
            q[i, j] = q[j, i] = (both - diag[i] - diag[j]) / 2.0
    return q


def kappa_by_bisection(g, x, n, iterations=80):
    """Curvature via bisection on PSD-ness of the polarized CD form."""

    def psd(K):
        evals = np.linalg.eigvalsh(cd_matrix_by_polarization(g, x, K, n))
        return evals[0] >= -1e-11 * (1.0 + abs(evals).max())

    lo, hi = 0.0, 1.0
    if psd(lo):
        while psd(hi):
            lo, hi = hi, hi * 2.0
            if hi > 1e9:  # pragma: no cover
                raise AssertionError("runaway curvature bracket")
    else:
        lo, hi = -1.0, 0.0
        while not psd(lo):
            lo, hi = lo * 2.0, lo
            if lo < -1e9:  # pragma: no cover
                raise AssertionError("runaway curvature bracket")
    for _ in range(iterations):
        mid = (lo + hi) / 2.0
        if psd(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def dtn_by_composition(bg):
    """The DtN matrix, column by column: extend a basis vector, differentiate."""
    k = len(bg.boundary)
    out = np.zeros((k, k))
    for j in range(k):
        f = VertexFunction(bg.boundary, np.eye(k)[j])
        out[:, j] = normal_derivative(bg, harmonic_extension(bg, f)).on(bg.boundary)
    return out


# ---------------------------------------------------------------------------
# specialized formulas under the degree assumptions (A1)-(A4)
# ---------------------------------------------------------------------------


def a1a4_constants(bg):
    deg = weighted_degree(bg.graph, bg.boundary[0])
    degb = boundary_degree(bg, bg.interior[0])
    m = bg.graph.measure(bg.boundary[0])
    return deg, degb, m


def _interior_restriction(bg, f):
    return VertexFunction(bg.interior, f.on(bg.interior))


def lemma_gamma_interior(bg, f, g_, x):
    deg, degb, _ = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo, go = _interior_restriction(bg, f), _interior_restriction(bg, g_)
    b1, b2 = bg.boundary
    return (
        gamma(ig, fo, go)[x]
        + degb / 2.0 * f[x] * g_[x]
        - degb / 4.0 * (f[b1] + f[b2]) * g_[x]
        - degb / 4.0 * (g_[b1] + g_[b2]) * f[x]
        + degb / 4.0 * (f[b1] * g_[b1] + f[b2] * g_[b2])
    )


def lemma_gamma_boundary(bg, f, g_, which):
    deg, degb, m = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo, go = _interior_restriction(bg, f), _interior_restriction(bg, g_)
    ones = VertexFunction(bg.interior, np.ones(len(bg.interior)))
    b = bg.boundary[which]
    return (
        degb / (4.0 * m) * inner_product_functions(ig, fo, go)
        - degb / (4.0 * m) * f[b] * inner_product_functions(ig, go, ones)
        - degb / (4.0 * m) * g_[b] * inner_product_functions(ig, fo, ones)
        + deg / 2.0 * f[b] * g_[b]
    )


def lemma_delta_interior(bg, f, x):
    _, degb, _ = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo = _interior_restriction(bg, f)
    b1, b2 = bg.boundary
    return laplacian(ig, fo)[x] - degb * f[x] + degb / 2.0 * (f[b1] + f[b2])


def lemma_delta_boundary(bg, f, which):
    deg, degb, m = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo = _interior_restriction(bg, f)
    ones = VertexFunction(bg.interior, np.ones(len(bg.interior)))
    b = bg.boundary[which]
    return degb / (2.0 * m) * inner_product_functions(ig, fo, ones) - deg * f[b]


def lemma_gamma2_interior(bg, f, x):
    """Gamma2(f, f)(x) for interior x, assuming f(x) = 0."""
    deg, degb, m = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo = _interior_restriction(bg, f)
    ones = VertexFunction(bg.interior, np.ones(len(bg.interior)))
    b1, b2 = bg.boundary
    f1, f2 = f[b1], f[b2]
    ip_ff = inner_product_functions(ig, fo, fo)
    ip_f1 = inner_product_functions(ig, fo, ones)
    return (
        gamma2(ig, fo, fo)[x]
        + degb * gamma(ig, fo, fo)[x]
        + degb**2 / (8.0 * m) * ip_ff
        + degb / 8.0 * (3.0 * deg * f1**2 + 2.0 * degb * f1 * f2 + 3.0 * deg * f2**2)
        - degb**2 / (4.0 * m) * ip_f1 * (f1 + f2)
    )


def lemma_gamma2_boundary(bg, f, which):
    """Gamma2(f, f) at boundary vertex `which`, assuming f vanishes there."""
    deg, degb, m = a1a4_constants(bg)
    ig = induced_interior_graph(bg)
    fo = _interior_restriction(bg, f)
    ones = VertexFunction(bg.interior, np.ones(len(bg.interior)))
    other = f[bg.boundary[1 - which]]
    df = differential(bg.graph, f)
    energy_interior = inner_product_forms(bg.graph, df, df, s=interior_edges(bg))
    ip_ff = inner_product_functions(ig, fo, fo)
    ip_f1 = inner_product_functions(ig, fo, ones)
    return (
        degb / (2.0 * m) * energy_interior
        + degb * (3.0 * degb - deg) / (8.0 * m) * ip_ff
        + degb**2 / (8.0 * m * m) * ip_f1**2
        + degb * deg / 8.0 * other**2
        - degb**2 / (4.0 * m) * ip_f1 * other
    )


def interior_form_termwise(bg, K, n, x, f_interior):
    """The condition-(5) expression, term by term via the interior operators."""
    ig = induced_interior_graph(bg)
    m = bg.graph.measure(bg.boundary[0])
    ones = VertexFunction(bg.interior, np.ones(len(bg.interior)))
    ip_ff = inner_product_functions(ig, f_interior, f_interior)
    ip_f1 = inner_product_functions(ig, f_interior, ones)
    g2 = gamma2(ig, f_interior, f_interior)[x]
    if is_infinite(n):
        return g2 + K**2 / (8.0 * m) * ip_ff - K**2 / (8.0 * m * m) * ip_f1**2
    lap = laplacian(ig, f_interior)[x]
    gam = gamma(ig, f_interior, f_interior)[x]
    return (
        g2
        - lap**2 / (n - 2.0)
        + 3.0 * K / (n - 1.0) * gam
        + (n + 2.0) ** 2 * K**2 / (8.0 * m * (n - 1.0) ** 2) * ip_ff
        - (n + 2.0) * K / ((n - 1.0) * (n - 2.0) * m) * ip_f1 * lap
        - n * (n + 2.0) ** 2 * K**2 / (8.0 * (n - 2.0) * (n - 1.0) ** 2 * m * m) * ip_f1**2
    )


def assert_close(a, b, rel=1e-10, context=""):
    scale = max(abs(a), abs(b), 1.0)
    assert abs(a - b) <= rel * scale, f"{context}: {a!r} vs {b!r} (scale {scale:g})"
