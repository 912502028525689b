"""Harmonic extension, Dirichlet-to-Neumann map, Laplacian and Steklov spectra.

Both spectra are posed as generalized symmetric-definite eigenproblems and
solved densely (graphs here are desk-scale):

    Laplacian: L u = mu M u        with L = D - W, M = diag(m)
    Steklov:   S f = sigma M_B f   with S = L_BB - L_BO L_OO^{-1} L_OB

S is the boundary Schur complement of L; the Dirichlet-to-Neumann map is
Lambda = M_B^{-1} S, which agrees with composing harmonic extension and the
normal derivative du/dn = -(Delta u)|_B.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import DomainMismatch, InvalidParams, SingularInteriorSystem
from .operators import VertexFunction, differential, inner_product_forms, inner_product_functions, laplacian


class SpectrumKind(Enum):
    LAPLACIAN = "laplacian"
    STEKLOV = "steklov"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with matching eigenfunctions.

    Eigenfunctions are orthonormal in the measure-weighted inner product of
    their domain (V for the Laplacian, B for Steklov) and sign-fixed so the
    first significant coordinate in vertex order is positive.
    """

    kind: SpectrumKind
    values: np.ndarray
    functions: tuple

    def __post_init__(self):
        self.values.setflags(write=False)

    def multiplicity_groups(self, tol=1e-8):
        """Group indices of numerically equal eigenvalues."""
        groups = []
        for i, v in enumerate(self.values):
            if groups and abs(v - self.values[groups[-1][0]]) <= tol * (1.0 + abs(v)):
                groups[-1].append(i)
            else:
                groups.append([i])
        return tuple(tuple(grp) for grp in groups)


@dataclass(frozen=True)
class DtNOperator:
    """The Dirichlet-to-Neumann map, materialized as the pair (S, M_B)."""

    boundary_order: tuple
    schur_matrix: np.ndarray
    measures: np.ndarray

    def apply(self, f):
        vec = f.on(self.boundary_order)
        return VertexFunction(self.boundary_order, (self.schur_matrix @ vec) / self.measures)


def _sign_fix(vec):
    mags = np.abs(vec)
    top = mags.max()
    if top == 0.0:
        return vec
    lead = np.flatnonzero(mags > 1e-12 * top)[0]
    return -vec if vec[lead] < 0 else vec


def _interior_blocks(bg):
    g = bg.graph
    L = g.laplacian_matrix()
    bi = bg.boundary_indices
    oi = bg.interior_indices
    return L[np.ix_(bi, bi)], L[np.ix_(bi, oi)], L[np.ix_(oi, oi)]


def _stranded_interior_component(bg):
    """Interior component with no boundary edge, if any (diagnostic only)."""
    from .graphs import induced_interior_graph

    g = bg.graph
    bi = set(bg.boundary_indices.tolist())
    for comp in induced_interior_graph(bg).components():
        touches = any(
            int(j) in bi for v in comp for j in g.neighbor_indices(g.index(v))
        )
        if not touches:
            return comp
    return None


def harmonic_extension(bg, f):
    """Solve Delta u = 0 on the interior with u = f on the boundary."""
    if set(f.domain) != set(bg.boundary):
        raise DomainMismatch(bg.boundary, f.domain)
    g = bg.graph
    _, L_bo, L_oo = _interior_blocks(bg)
    fb = f.on(bg.boundary)
    try:
        u_omega = scipy.linalg.solve(L_oo, -L_bo.T @ fb, assume_a="pos")
    except (scipy.linalg.LinAlgError, ValueError):
        comp = _stranded_interior_component(bg)
        raise SingularInteriorSystem(comp if comp is not None else bg.interior) from None
    out = np.empty(g.num_vertices)
    out[bg.boundary_indices] = fb
    out[bg.interior_indices] = u_omega
    u = VertexFunction(g.vertices, out)
    residual = np.abs(laplacian(g, u).on(bg.interior)).max() if bg.interior else 0.0
    scale = max(1.0, float(np.abs(fb).max()))
    if residual > 1e-8 * scale:
        comp = _stranded_interior_component(bg)
        raise SingularInteriorSystem(comp if comp is not None else bg.interior)
    return u


def normal_derivative(bg, u):
    """du/dn = -(Delta u) at boundary vertices."""
    lu = laplacian(bg.graph, u)
    return VertexFunction(bg.boundary, -lu.on(bg.boundary))


def dtn_operator(bg):
    """Materialize the Dirichlet-to-Neumann map as DtNOperator."""
    L_bb, L_bo, L_oo = _interior_blocks(bg)
    try:
        interior_solve = scipy.linalg.solve(L_oo, L_bo.T, assume_a="pos")
    except (scipy.linalg.LinAlgError, ValueError):
        comp = _stranded_interior_component(bg)
        raise SingularInteriorSystem(comp if comp is not None else bg.interior) from None
    schur = L_bb - L_bo @ interior_solve
    schur = (schur + schur.T) / 2.0
    return DtNOperator(bg.boundary, schur, bg.graph.measures[bg.boundary_indices])


def _generalized_spectrum(a, m_diag, domain, kind):
    values, vectors = scipy.linalg.eigh(a, np.diag(m_diag))
    functions = tuple(
        VertexFunction(domain, _sign_fix(vectors[:, k])) for k in range(values.size)
    )
    return Spectrum(kind, values, functions)


def laplacian_spectrum(g):
    """Eigenvalues 0 = mu_1 < mu_2 <= ... of -Delta, with eigenfunctions on V."""
    return _generalized_spectrum(
        g.laplacian_matrix(), g.measures, g.vertices, SpectrumKind.LAPLACIAN
    )


def steklov_spectrum(bg):
    """Steklov eigenvalues 0 = sigma_1 < sigma_2 <= ... with eigenfunctions on B."""
    dtn = dtn_operator(bg)
    return _generalized_spectrum(
        dtn.schur_matrix, dtn.measures, bg.boundary, SpectrumKind.STEKLOV
    )


@dataclass(frozen=True)
class SteklovDiagnostics:
    """How the second Steklov eigenfunction's harmonic extension behaves on V."""

    sigma2: float
    extension: VertexFunction
    interior_norm: float
    rayleigh_quotient: float
    mu2: float
    mu2_residual: float


def steklov_eigenfunction_diagnostics(bg, spectrum):
    """Check the sigma_2 eigenfunction against the second Laplacian eigenvalue.

    On graphs attaining the Lichnerowicz bound the harmonic extension of the
    sigma_2 eigenfunction vanishes on the interior and is a mu_2
    eigenfunction; this reports the quantities that certify (or refute) that.
    """
    if spectrum.kind is not SpectrumKind.STEKLOV:
        raise InvalidParams("diagnostics need a Steklov spectrum")
    if spectrum.values.size < 2:
        raise InvalidParams("no second Steklov eigenvalue: boundary has fewer than 2 vertices")
    g = bg.graph
    sigma2 = float(spectrum.values[1])
    u = harmonic_extension(bg, spectrum.functions[1])
    interior_norm = inner_product_functions(g, u, u, s=bg.interior) ** 0.5
    du = differential(g, u)
    rayleigh = inner_product_forms(g, du, du) / inner_product_functions(g, u, u)
    lap = laplacian_spectrum(g)
    mu2 = float(lap.values[1])
    residual_vec = g.laplacian_matrix() @ u.values - mu2 * g.measures * u.values
    return SteklovDiagnostics(
        sigma2=sigma2,
        extension=u,
        interior_norm=float(interior_norm),
        rayleigh_quotient=float(rayleigh),
        mu2=mu2,
        mu2_residual=float(np.linalg.norm(residual_vec)),
    )
