"""Heights of algebraic numbers: certified Mahler measures and Weil heights,
metric and strong (non-Archimedean) metric heights on abelian groups, exact
strong metric Mahler measures of surds, and factorization-search bounds."""

from .enclosure import RealEnclosure
from .errors import (
    DomainInputError,
    EmptySearchError,
    HeightAxiomError,
    InputSyntaxError,
    InvariantViolation,
    MetricMahlerError,
    NonSquarefreeError,
    PrecisionError,
)
from .exact import (
    ExactRational,
    IntPolynomial,
    canonicalize_poly,
    cyclotomic_polynomial,
    factorize,
    factorize_rational,
    parse_polynomial,
    parse_rational,
    print_polynomial,
    squarefree_decomposition,
    unfactorize,
)
from .groups import (
    DerivedHeights,
    HeightedGroup,
    ball_subgroup,
    classify_height,
    closed_ball_subgroup,
    derived_heights,
    framework_report,
    oracle_tables,
    parse_group_file,
    rho1_exact,
    rho_inf_exact,
    zero_set,
)
from .measure import (
    DEFAULT_TOL,
    dobrowolski_lower_bound,
    irreducibility_status,
    is_p_adic_unit,
    is_root_of_unity,
    largest_nonunit_prime,
    mahler_measure,
    weil_height,
)
from .quadfield import (
    QuadElement,
    parse_quad_element,
    qf_enumerate_min_height,
    qf_mahler_exact,
    qf_mahler_measure,
    qf_minimal_polynomial,
    qf_norm,
    qf_weil_height,
)
from .roots import RootBox, certified_roots
from .search import (
    BoundReport,
    FactorPool,
    build_quad_pool_values,
    hinf_root_split,
    parse_pool_file,
    search_m1_upper,
    search_minf_upper,
)
from .surd import (
    SurdCoset,
    SurdHeightValue,
    format_surd,
    parse_surd,
    surd_degree,
    surd_from_rational,
    surd_h_to_the_d,
    surd_inv,
    surd_m_infinity,
    surd_mul,
    surd_pow,
    surd_weil_height,
)

__version__ = "0.1.0"
