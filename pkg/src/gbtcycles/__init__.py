"""gbtcycles: curvature-based limit-cycle analysis of planar polynomial systems."""

__version__ = "1.0.0"

from .algebra import (
    AlgebraError,
    BigRational,
    DomainError,
    PoleError,
    Polynomial,
    RationalFunction,
    exact_div,
    poly_gcd,
)
from .backend import available_backends, current_backend, set_backend
from .equilibria import (
    BoundaryContactError,
    DegenerateIndexError,
    Equilibrium,
    TopologyReport,
    classify,
    euler_characteristic,
    find_equilibria,
    poincare_index,
    winding_number,
)
from .oracle import (
    AgreementReport,
    CycleFinding,
    OracleResult,
    RadialReduction,
    Trajectory,
    compare,
    find_limit_cycles,
    first_return,
    integrate,
    radial_reduction,
    return_map,
)
from .riemann import (
    ChristoffelSet,
    DegenerateMetricError,
    MetricError,
    MetricTensor,
    RiemannTensor,
    ScalarCurvature,
    christoffel,
    curvature_pipeline,
    gauss_curvature_2d_numeric,
    gbt_metric,
    metric_inverse,
    riemann_tensor,
    scalar_curvature,
    scalar_curvature_2d_diagonal,
)
from .sysdsl import (
    LexError,
    ParseError,
    SemanticError,
    SystemFormatError,
    VectorField,
    parse_system,
    parse_system_path,
    specialize,
)
from .verdict import (
    GbtVerdict,
    HilbertTable,
    SingularLocus,
    bezout_bound,
    christopher_lloyd_bound,
    gbt_limit_cycle_verdict,
    growth_table,
    hilbert_number,
    singular_locus,
    symmetry_check,
)

__all__ = [
    "__version__",
    # algebra
    "AlgebraError",
    "BigRational",
    "DomainError",
    "PoleError",
    "Polynomial",
    "RationalFunction",
    "exact_div",
    "poly_gcd",
    # backend selection
    "available_backends",
    "current_backend",
    "set_backend",
    # system DSL
    "LexError",
    "ParseError",
    "SemanticError",
    "SystemFormatError",
    "VectorField",
    "parse_system",
    "parse_system_path",
    "specialize",
    # curvature pipeline
    "ChristoffelSet",
    "DegenerateMetricError",
    "MetricError",
    "MetricTensor",
    "RiemannTensor",
    "ScalarCurvature",
    "christoffel",
    "curvature_pipeline",
    "gauss_curvature_2d_numeric",
    "gbt_metric",
    "metric_inverse",
    "riemann_tensor",
    "scalar_curvature",
    "scalar_curvature_2d_diagonal",
    # equilibria and topology
    "BoundaryContactError",
    "DegenerateIndexError",
    "Equilibrium",
    "TopologyReport",
    "classify",
    "euler_characteristic",
    "find_equilibria",
    "poincare_index",
    "winding_number",
    # locus, verdict and tables
    "GbtVerdict",
    "HilbertTable",
    "SingularLocus",
    "bezout_bound",
    "christopher_lloyd_bound",
    "gbt_limit_cycle_verdict",
    "growth_table",
    "hilbert_number",
    "singular_locus",
    "symmetry_check",
    # numerical oracle
    "AgreementReport",
    "CycleFinding",
    "OracleResult",
    "RadialReduction",
    "Trajectory",
    "compare",
    "find_limit_cycles",
    "first_return",
    "integrate",
    "radial_reduction",
    "return_map",
]
