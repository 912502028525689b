"""Discrete differential operators: Laplacian, differential, Gamma calculus.

The carre du champ Gamma and its iterate Gamma2 are the basic objects of the
curvature-dimension machinery:

    Delta u (x) = (1/m_x) sum_y (u(y) - u(x)) w_xy
    Gamma(u, v)(x) = (1/2 m_x) sum_y (u(x) - u(y)) (v(x) - v(y)) w_xy
    Gamma2(u, v) = (Delta Gamma(u, v) - Gamma(Delta u, v) - Gamma(u, Delta v)) / 2

Gamma is computed from the explicit sum (not from the product-rule identity,
which cancels catastrophically); the identity is kept as a test oracle.
Local quadratic-form assemblies express Gamma, Gamma2 and (Delta f)^2 at a
vertex as symmetric matrices in f, which is what the curvature solver needs.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatch


@dataclass(frozen=True, eq=False)
class VertexFunction:
    """A real-valued function on an explicit vertex set."""

    domain: tuple
    values: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        dom = tuple(self.domain)
        if vals.shape != (len(dom),):
            raise DomainMismatch(dom, range(vals.size))
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(dom)})
        vals.setflags(write=False)

    @classmethod
    def from_dict(cls, mapping):
        items = list(mapping.items())
        return cls(tuple(k for k, _ in items), np.array([v for _, v in items], dtype=float))

    def __getitem__(self, v):
        try:
            return float(self.values[self._index[v]])
        except KeyError:
            raise DomainMismatch(self.domain, (v,)) from None

    def on(self, domain):
        """Values reindexed onto `domain`, which must be a subset of ours."""
        try:
            idx = [self._index[v] for v in domain]
        except KeyError:
            raise DomainMismatch(domain, self.domain) from None
        return self.values[idx]

    def as_dict(self):
        return {v: float(self.values[i]) for i, v in enumerate(self.domain)}


def constant_function(domain, c=0.0):
    domain = tuple(domain)
    return VertexFunction(domain, np.full(len(domain), float(c)))


def _aligned(u, domain):
    """Values of u on exactly `domain` (any order); strict domain check."""
    if set(u.domain) != set(domain):
        raise DomainMismatch(domain, u.domain)
    return u.on(domain)


@dataclass(frozen=True, eq=False)
class OneForm:
    """A skew-symmetric function on ordered adjacent pairs, stored densely."""

    domain: tuple
    values: np.ndarray  # (N, N), skew-symmetric, zero off-edges

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)

    def value(self, x, y):
        dom = {v: i for i, v in enumerate(self.domain)}
        try:
            return float(self.values[dom[x], dom[y]])
        except KeyError:
            raise DomainMismatch(self.domain, (x, y)) from None


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """A symmetric form over an ordered local vertex index set."""

    index_map: tuple
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "index_map", tuple(self.index_map))
        object.__setattr__(self, "matrix", mat)
        mat.setflags(write=False)

    def evaluate(self, f):
        """f^T Q f for f a VertexFunction covering index_map (extra vertices ignored)."""
        vec = f.on(self.index_map) if isinstance(f, VertexFunction) else np.asarray(f, dtype=float)
        return float(vec @ self.matrix @ vec)


def laplacian(g, u):
    """Delta u, from the defining per-vertex sum."""
    vals = _aligned(u, g.vertices)
    out = (g.weights @ vals - g.weights.sum(axis=1) * vals) / g.measures
    return VertexFunction(g.vertices, out)


def differential(g, u):
    """du(x, y) = u(y) - u(x) on edges, zero elsewhere; skew-symmetric."""
    vals = _aligned(u, g.vertices)
    diff = vals[None, :] - vals[:, None]
    diff[g.weights == 0.0] = 0.0
    return OneForm(g.vertices, diff)


def inner_product_functions(g, u, v, s=None):
    """<u, v>_S = sum over x in S of u(x) v(x) m_x.

    u and v must share a domain inside V(g); S defaults to that domain.
    """
    if set(u.domain) != set(v.domain):
        raise DomainMismatch(u.domain, v.domain)
    if s is None:
        s = u.domain
    s = tuple(s)
    uv = u.on(s)
    vv = v.on(s)
    mv = np.array([g.measures[g.index(x)] for x in s])
    return float(np.sum(uv * vv * mv))


def inner_product_forms(g, alpha, beta, s=None):
    """<alpha, beta>_S = sum over edges {x,y} in S of alpha(x,y) beta(x,y) w_xy.

    S is an iterable of vertex pairs and defaults to all edges of g.
    """
    if tuple(alpha.domain) != tuple(g.vertices) or tuple(beta.domain) != tuple(g.vertices):
        raise DomainMismatch(g.vertices, alpha.domain)
    if s is None:
        return float(np.sum(alpha.values * beta.values * g.weights) / 2.0)
    total = 0.0
    for x, y in s:
        i, j = g.index(x), g.index(y)
        total += alpha.values[i, j] * beta.values[i, j] * g.weights[i, j]
    return float(total)


def interior_edges(bg):
    """Edge set E(Omega, Omega) as vertex pairs, for restricted form products."""
    inside = set(bg.interior)
    return tuple((u, v) for u, v, _ in bg.graph.edge_list() if u in inside and v in inside)


def gamma(g, u, v):
    """Gamma(u, v) via the explicit sum."""
    uv_ = _aligned(u, g.vertices)
    vv_ = _aligned(v, g.vertices)
    du = uv_[:, None] - uv_[None, :]
    dv = vv_[:, None] - vv_[None, :]
    out = np.sum(du * dv * g.weights, axis=1) / (2.0 * g.measures)
    return VertexFunction(g.vertices, out)


def gamma2(g, u, v):
    """Gamma2(u, v) = (Delta Gamma(u,v) - Gamma(Delta u, v) - Gamma(u, Delta v)) / 2."""
    guv = gamma(g, u, v)
    lu = laplacian(g, u)
    lv = laplacian(g, v)
    out = 0.5 * (laplacian(g, guv).values - gamma(g, lu, v).values - gamma(g, u, lv).values)
    return VertexFunction(g.vertices, out)


# ---------------------------------------------------------------------------
# local quadratic forms
# ---------------------------------------------------------------------------

def _gamma_matrix(g, i):
    """Full-size symmetric matrix Q with f^T Q f = Gamma(f, f)(vertex i)."""
    n = g.num_vertices
    q = np.zeros((n, n))
    for j in g.neighbor_indices(i):
        w = g.weights[i, j]
        q[i, i] += w
        q[j, j] += w
        q[i, j] -= w
        q[j, i] -= w
    return q / (2.0 * g.measures[i])


def _gamma2_matrix(g, i):
    """Full-size symmetric matrix Q with f^T Q f = Gamma2(f, f)(vertex i)."""
    dhat = g.delta_operator()
    gx = _gamma_matrix(g, i)
    acc = np.zeros_like(gx)
    for j in np.flatnonzero(dhat[i] != 0.0):
        acc += dhat[i, j] * _gamma_matrix(g, j)
    q = 0.5 * acc - 0.5 * (dhat.T @ gx + gx @ dhat)
    return (q + q.T) / 2.0


def gamma_form(g, x):
    """Gamma(f, f)(x) as a QuadraticForm over the closed 1-ball around x."""
    i = g.index(x)
    ball = g.ball_indices(i, 1)
    q = _gamma_matrix(g, i)[np.ix_(ball, ball)]
    return QuadraticForm(tuple(g.vertices[j] for j in ball), (q + q.T) / 2.0)


def gamma2_form(g, x):
    """Gamma2(f, f)(x) as a QuadraticForm over the closed 2-ball around x.

    Values of f outside the 2-ball cannot affect Gamma2(f, f)(x), so the
    restriction is lossless.
    """
    i = g.index(x)
    ball = g.ball_indices(i, 2)
    q = _gamma2_matrix(g, i)[np.ix_(ball, ball)]
    return QuadraticForm(tuple(g.vertices[j] for j in ball), (q + q.T) / 2.0)


def laplacian_square_form(g, x):
    """(Delta f)(x)^2 as a rank-one QuadraticForm over the closed 1-ball."""
    i = g.index(x)
    row = g.delta_operator()[i]
    ball = g.ball_indices(i, 1)
    q = np.outer(row[ball], row[ball])
    return QuadraticForm(tuple(g.vertices[j] for j in ball), (q + q.T) / 2.0)


def check_green_identity(bg, u, v):
    """Residual |<Delta u, v>_Omega + <du, dv> - <du/dn, v>_B|.

    Green's formula makes this zero in exact arithmetic for every u, v.
    """
    g = bg.graph
    lu = laplacian(g, u)
    lhs = inner_product_functions(g, lu, v, s=bg.interior)
    energy = inner_product_forms(g, differential(g, u), differential(g, v))
    normal = VertexFunction(bg.boundary, -lu.on(bg.boundary))
    boundary_term = inner_product_functions(
        g, normal, VertexFunction(bg.boundary, v.on(bg.boundary))
    )
    return abs(lhs + energy - boundary_term)
