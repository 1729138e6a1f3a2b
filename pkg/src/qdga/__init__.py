"""Exact symbolic engine for graded differential calculi with N-nilpotent
differentials and braided tensor products.

Scalars live in cyclotomic fields with exact rational coordinates, algebra
elements are linear combinations of generator words normalized by rewrite
rules, and the differential satisfies d^N = 0 with the q-graded Leibniz
rule at a primitive N-th root of unity.  The package derives the line
calculi from first principles, exposes the plane constraint analysis, and
sweeps braided tensor products for admissible differentials.
"""

from .algebra import (
    FORM,
    FREE,
    VARIABLE,
    AlgebraError,
    Element,
    Generator,
    NonTerminatingError,
    OrderIndependenceReport,
    RewriteRule,
    RuleError,
    RuleSet,
    Universe,
    Wildcard,
    FUNC,
    FUNC_PRIME,
    check_order_independence,
    formal_derivative,
    make_rule,
    normalize,
    normalize_randomized,
)
from .calculi import (
    AnyonicVerdict,
    Calculus,
    CalculusError,
    DerivationError,
    DerivationStep,
    LineDerivation,
    PlaneConstraint,
    builtin_calculus,
    builtin_names,
    check_not_anyonic,
    classical_line_calculus,
    derive_line_relations,
    line_calculus,
    plane_constraints,
    plane_fragment,
)
from .cyclotomic import (
    CycNum,
    CyclotomicError,
    Poly,
    RootExponent,
    cyclotomic_polynomial,
    euler_totient,
    gaussian_binomial_poly,
    poly_at_root,
    primitive_exponents,
    q_binomial,
    q_factorial,
    q_factorial_poly,
    q_int,
    q_int_poly,
)
from .differential import (
    CheckReport,
    DifferentialError,
    DifferentialStructure,
    Failure,
    apply_d,
    apply_d_times,
    star,
    verify_iterated_leibniz,
    verify_leibniz,
    verify_nilpotency,
    verify_star_differential,
    verify_star_involution,
)
from .expressions import (
    DocumentError,
    ParseError,
    cyc_to_json,
    dump_calculus,
    element_to_json,
    load_calculus_file,
    load_calculus_text,
    parse,
    parse_element,
    parse_tensor,
    parse_text,
    poly_to_json,
    render_cyc,
    render_element,
    render_rule,
    render_tensor,
    tensor_to_json,
)
from .nogo import (
    BASIS_LABELS,
    DefectVector,
    GradeProfile,
    HomomorphismCheck,
    NogoError,
    NogoResult,
    TripleCertificate,
    column_survivors,
    homomorphism_forces_equal,
    leibniz_defect,
    leibniz_ways,
    solve_nogo,
    table_row_d_then_multiply,
    table_row_multiply_then_d,
)
from .sampling import (
    coefficient_pool,
    free_graded_context,
    free_graded_universe,
    random_coefficient,
    random_element,
    random_homogeneous_element,
    random_homogeneous_tensor_element,
    random_tensor_element,
    random_word,
)
from .tensor import (
    TensorContext,
    TensorElement,
    TensorError,
    candidate_d,
    embed_left,
    embed_right,
    flip_iso,
    verify_flip_homomorphism,
    verify_flip_roundtrip,
    verify_product_differential,
    verify_tensor_associativity,
    verify_tensor_unit,
)

__version__ = "0.1.0"
