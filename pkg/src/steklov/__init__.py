"""Curvature, Steklov spectra, and Lichnerowicz rigidity on weighted graphs.

The toolkit computes Bakry-Emery curvature and the Laplacian and Steklov
spectra of finite weighted graphs with boundary, verifies the bound
sigma_2 >= nK/(n-1) under the curvature-dimension condition CD(K, n), and
decides and constructs the graphs attaining equality.
"""

__version__ = "0.1.0"

from .curvature import (
    CDReport,
    CurvatureProfile,
    CurvatureResult,
    LichnerowiczReport,
    cd_check,
    curvature_at,
    curvature_profile,
    verify_lichnerowicz,
)
from .errors import SteklovError
from .graphs import (
    INF,
    BoundaryGraph,
    CurvatureParams,
    ExampleFamily,
    WeightedGraph,
    attach_boundary,
    boundary_degree,
    build_graph,
    induced_interior_graph,
    join_equality_boundary,
    make_example,
    parse_graph_file,
    serialize_graph,
    volume,
    weighted_degree,
)
from .operators import (
    OneForm,
    QuadraticForm,
    VertexFunction,
    check_green_identity,
    constant_function,
    differential,
    gamma,
    gamma2,
    gamma2_form,
    gamma_form,
    inner_product_forms,
    inner_product_functions,
    interior_edges,
    laplacian,
    laplacian_square_form,
)
from .rigidity import (
    Classification,
    RigidityClass,
    RigidityReport,
    assemble_interior_form,
    check_interior_inequality,
    check_necessary_conditions,
    check_rigidity,
    classify_normalized,
    classify_partial,
    classify_unit_weight,
    construct_rigid_family,
    disjoint_ball_scan,
    infer_equality_params,
    two_ball_identity_check,
)
from .spectra import (
    DtNOperator,
    Spectrum,
    SpectrumKind,
    SteklovDiagnostics,
    dtn_operator,
    harmonic_extension,
    laplacian_spectrum,
    normal_derivative,
    steklov_eigenfunction_diagnostics,
    steklov_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
