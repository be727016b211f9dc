"""defifix: decide and construct existential parameter-free definability of
field elements, via arithmetic neighbourhoods and equation compilation."""

from .compiler import (
    RootlessPolynomial,
    combine_equations,
    compile_singleton,
    find_rootless,
    formula_to_neighbourhood,
    homogenize,
    neighbourhood_to_formula,
    term_to_json,
)
from .curve_lab import (
    ClosureRecipe,
    CurveData,
    abscissa_set,
    build_closure,
    coefficient_table,
    elementary_symmetric,
    symmetric_value_formula,
    verify_closure,
    w_set,
)
from .errors import (
    CapExceededError,
    DefifixError,
    EvaluationError,
    FieldMismatchError,
    FieldSpecError,
    FormulaSyntaxError,
    InfiniteFieldError,
    NormalizationError,
    NoSatisfiableDisjunctError,
    NotDefiningError,
    NotSingletonError,
    SchemaError,
)
from .fields import (
    RATIONALS,
    FieldDescriptor,
    FieldElement,
    arith,
    element_str,
    enumerate_elements,
    frobenius,
    make_field,
    parse_element,
)
from .formulas import (
    And,
    Equal,
    Exists,
    ForAll,
    Iff,
    Implies,
    Not,
    Or,
    PredicateApp,
    all_variables,
    conj,
    definable_set,
    desugar,
    disj,
    evaluate,
    free_variables,
    parse,
    parse_term,
    print_formula,
    substitute_terms,
)
from .neighbourhood import (
    ArithmeticMap,
    Decision,
    FactSet,
    Neighbourhood,
    certify_by_propagation,
    combine,
    enumerate_arithmetic_maps,
    facts,
    fixed_subfield,
    is_neighbourhood,
    nbhd_rational,
    neighbourhood,
)
from .normalize import (
    ConstraintSystem,
    NormalizedFormula,
    atomize,
    eliminate_negations,
    normalize,
    normalize_with_stats,
    normalized_definable_set,
    solve_system,
    to_dnf,
)
from .schemas import (
    SCHEMA_NAMES,
    SchemaParams,
    accum,
    emit,
    le7,
    lt6,
    pyth_M,
    robinson,
    succ,
    theorem2,
    theorem6_def,
    theorem7_def,
    theorem7_sentence,
)
from .terms import Term

__version__ = "0.1.0"

__all__ = [
    # errors
    "CapExceededError",
    "DefifixError",
    "EvaluationError",
    "FieldMismatchError",
    "FieldSpecError",
    "FormulaSyntaxError",
    "InfiniteFieldError",
    "NormalizationError",
    "NoSatisfiableDisjunctError",
    "NotDefiningError",
    "NotSingletonError",
    "SchemaError",
    # fields
    "RATIONALS",
    "FieldDescriptor",
    "FieldElement",
    "arith",
    "element_str",
    "enumerate_elements",
    "frobenius",
    "make_field",
    "parse_element",
    # terms
    "Term",
    # formulas
    "And",
    "Equal",
    "Exists",
    "ForAll",
    "Iff",
    "Implies",
    "Not",
    "Or",
    "PredicateApp",
    "all_variables",
    "conj",
    "definable_set",
    "desugar",
    "disj",
    "evaluate",
    "free_variables",
    "parse",
    "parse_term",
    "print_formula",
    "substitute_terms",
    # normalize
    "ConstraintSystem",
    "NormalizedFormula",
    "atomize",
    "eliminate_negations",
    "normalize",
    "normalize_with_stats",
    "normalized_definable_set",
    "solve_system",
    "to_dnf",
    # neighbourhood
    "ArithmeticMap",
    "Decision",
    "FactSet",
    "Neighbourhood",
    "certify_by_propagation",
    "combine",
    "enumerate_arithmetic_maps",
    "facts",
    "fixed_subfield",
    "is_neighbourhood",
    "nbhd_rational",
    "neighbourhood",
    # compiler
    "RootlessPolynomial",
    "combine_equations",
    "compile_singleton",
    "find_rootless",
    "formula_to_neighbourhood",
    "homogenize",
    "neighbourhood_to_formula",
    "term_to_json",
    # curve lab
    "ClosureRecipe",
    "CurveData",
    "abscissa_set",
    "build_closure",
    "coefficient_table",
    "elementary_symmetric",
    "symmetric_value_formula",
    "verify_closure",
    "w_set",
    # schemas
    "SCHEMA_NAMES",
    "SchemaParams",
    "accum",
    "emit",
    "le7",
    "lt6",
    "pyth_M",
    "robinson",
    "succ",
    "theorem2",
    "theorem6_def",
    "theorem7_def",
    "theorem7_sentence",
    "__version__",
]
