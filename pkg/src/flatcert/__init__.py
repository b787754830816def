"""flatcert: exact certification that the complete-quadrics graph family is flat.

Everything is exact rational arithmetic: a bigraded polynomial ring with
parameter variables, Buchberger Groebner bases with certificates, diagonal
Hilbert functions by two independent routes (standard-monomial counting and
a Groebner-free sparse rank oracle), polynomial interpolation with
stabilization detection, and the geometric constructions of the
degenerating-quadrics chart, its torus action, and the flatness certificate
comparing every fiber against the closed form chi_graph(n).
"""

from .polyring import (
    BiMonomial,
    BiPolynomial,
    ParseError,
    UniverseMismatchError,
    UnknownVariableError,
    VariableUniverse,
    monomials_of_bidegree,
    parse_polynomial,
    polynomial_text,
    proportionality_ratio,
    substitute,
)
from .groebner import (
    DEFAULT_ORDER,
    BuchbergerRun,
    DimensionUndefinedError,
    GroebnerCertificate,
    Ideal,
    MonomialOrderSpec,
    buchberger,
    ideal_dimension,
    initial_ideal,
    is_groebner_basis,
    leading_monomial,
    leading_term,
    normal_form,
    spolynomial,
)
from .hilbert import (
    METHOD_INITIAL,
    METHOD_RANK,
    HilbertFunctionTable,
    HilbertPolynomialQ,
    InterpolationError,
    NoStabilizationError,
    NonBihomogeneousError,
    bigraded_hilbert_function,
    binomial_basis_coordinates,
    chi_graph,
    diagonal_hilbert_function,
    interpolate_hilbert_polynomial,
    methods_agree,
    normalize_method,
    tabulate_diagonal,
    xi_formula,
)
from .quadfam import (
    ChartPoint,
    ConicReport,
    FiberCheck,
    FlatnessReport,
    NondegeneracyRequiredError,
    SymmetricMatrixQ,
    TorusElement,
    TorusReport,
    apply_corruption,
    closed_orbit_limit_check,
    component_primes,
    conic_global_equations_check,
    conic_matrix_identity_symbolic,
    diagonal_ideal,
    evaluate_family_at,
    family_ideal_J,
    family_universe,
    fiber_matrix,
    find_rational_point,
    flatness_certificate,
    gauss_graph_ideal,
    incidence_form,
    laksov_diagonal_matrices,
    minimal_primes_of_monomial_ideal,
    nonzerodivisor_check,
    primary_intersection_check,
    primed_coordinates,
    random_chart_point,
    random_conic_with_rational_point,
    random_torus_element,
    special_fiber_ideal,
    standard_chart_points,
    torus_action_check,
    xy_universe,
)
from .flagcut import (
    PlaneCurvePair,
    XiTrialsReport,
    codimension_check,
    gamma_curve_ideal,
    incidence_ideal,
    koszul_hilbert_polynomial,
    random_plane_curve,
    run_xi_trials,
    swap_pair,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
