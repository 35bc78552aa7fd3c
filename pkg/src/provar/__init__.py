"""Probability densities on algebraic varieties.

Polynomial densities normalized over boxes, Bernstein approximation,
point clouds on implicit varieties, covariance summaries, Vietoris-Rips
persistent homology over Z/2, and implicit polynomial fitting.
"""

from .errors import (
    DivergenceError,
    IntegrandError,
    NonFiniteResultError,
    NotNormalizableError,
    NumericalError,
    PolynomialFormatError,
    ProvarError,
    SamplingBudgetError,
    SeriesError,
    SimplexBudgetError,
    UnderdeterminedError,
    VarietyError,
)
from .fit import (
    FitResult,
    basis_size,
    fit_implicit,
    fit_to_json,
    monomial_basis,
    select_degree,
)
from .measure import (
    AnalyticDensity,
    Box,
    ProbabilisticPair,
    QuadratureSpec,
    ValidationReport,
    default_quadrature,
    gauss_legendre_nodes,
    integrate,
    normalize,
    pair_from_json,
    pair_to_json,
    validate_density,
)
from .poly import (
    MultiPoly,
    SeriesSpec,
    bernstein_approx,
    bernstein_values,
    format_poly,
    parse_poly,
    truncated_series,
)
from .stats import CovarianceReport, covariance, covariance_to_json
from .topology import (
    DEFAULT_SIMPLEX_BUDGET,
    PersistenceDiagram,
    RipsFiltration,
    betti_at,
    build_rips,
    compute_persistence,
    diagram_from_json,
    diagram_to_json,
    persistent_betti_summary,
)
from .variety import (
    ImplicitVariety,
    PointCloud,
    ThickenedDensity,
    builtin_variety,
    load_cloud,
    sample_parametric,
    sample_thickened,
    save_cloud,
)

__version__ = "0.1.0"
