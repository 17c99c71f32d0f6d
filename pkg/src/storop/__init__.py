"""Storage operators for Church numerals.

Lambda-term core (terms, head reduction), second-order typing with
equational reasoning, formula translations, and a symbolic certifier for
the storage behaviour of the T operators.
"""

from storop.builtins import BUILTINS, parse, t_operator, tp_operator
from storop.formulas import (
    EquationSet,
    Formula,
    FormulaError,
    bot_transform,
    check_adequacy,
    forget_first_order,
    godel_star,
    n_bot_type,
    n_star_type,
    n_type,
    neg,
    parse_equations,
    parse_formula,
    polarity,
    print_formula,
)
from storop.prebuilt import (
    build_prebuilt,
    load_prebuilt,
    prebuilt_check_args,
    prebuilt_names,
)
from storop.reduction import (
    DEFAULT_FUEL,
    FUEL_EXHAUSTED,
    HEAD_NORMAL_FORM,
    NORMAL_FORM,
    ReductionOutcome,
    backend_name,
    beta_equiv,
    head_reduce,
    head_step,
    is_head_normal,
    is_normal,
    is_solvable,
    normal_step,
    normalize,
)
from storop.storage import (
    BehavioralResult,
    Certificate,
    PairReport,
    behavioral_check,
    certify,
    certify_range,
    pair_behavioral,
    theta_corpus,
)
from storop.terms import (
    Abs,
    App,
    ParseError,
    Term,
    Var,
    church,
    match_holes,
    numeral_of,
    parse_term,
    print_term,
    substitute,
    term_size,
)
from storop.typecheck import (
    FRAGMENTS,
    CheckReport,
    Context,
    Derivation,
    check_derivation,
    check_fperp,
    forget_derivation,
    lift_star_to_bot,
    read_derivation,
    write_derivation,
)

__version__ = "0.1.0"

__all__ = [
    "Abs",
    "App",
    "BUILTINS",
    "BehavioralResult",
    "Certificate",
    "CheckReport",
    "Context",
    "DEFAULT_FUEL",
    "Derivation",
    "EquationSet",
    "FRAGMENTS",
    "FUEL_EXHAUSTED",
    "Formula",
    "FormulaError",
    "HEAD_NORMAL_FORM",
    "NORMAL_FORM",
    "PairReport",
    "ParseError",
    "ReductionOutcome",
    "Term",
    "Var",
    "__version__",
    "backend_name",
    "behavioral_check",
    "beta_equiv",
    "bot_transform",
    "build_prebuilt",
    "certify",
    "certify_range",
    "check_adequacy",
    "check_derivation",
    "check_fperp",
    "church",
    "forget_derivation",
    "forget_first_order",
    "godel_star",
    "head_reduce",
    "head_step",
    "is_head_normal",
    "is_normal",
    "is_solvable",
    "lift_star_to_bot",
    "load_prebuilt",
    "match_holes",
    "n_bot_type",
    "n_star_type",
    "n_type",
    "neg",
    "normal_step",
    "normalize",
    "numeral_of",
    "pair_behavioral",
    "parse",
    "parse_equations",
    "parse_formula",
    "parse_term",
    "polarity",
    "prebuilt_check_args",
    "prebuilt_names",
    "print_formula",
    "print_term",
    "read_derivation",
    "substitute",
    "t_operator",
    "term_size",
    "theta_corpus",
    "tp_operator",
    "write_derivation",
]
