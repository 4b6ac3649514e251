"""First-order formulas executed as programs over pluggable algebras."""

from .formulas import And, Atom, Bottom, Eq, Exists, FreshSupply, Not, Or, Top, apply_formula
from .interpretations import (
    FiniteAlgebra,
    HerbrandAlgebra,
    IntegerAlgebra,
    Interpretation,
    UnsupportedOracle,
    atom_status,
    enumerate_domain,
    finite_interpretation,
    herbrand_interpretation,
    integer_interpretation,
    load_interpretation,
)
from .semantics import Evaluator, Outcome, eval_answers, evaluate_formula, solve_equation
from .substitution import EMPTY, ERROR, Answer, Subst, compose, drop, is_less_general, subst_equal
from .syntax import (
    ParseError,
    parse_formula,
    parse_subst,
    parse_term,
    print_formula,
    print_outcome,
    print_subst,
    print_term,
)
from .terms import App, MalformedInput, Signature, Val, Var, evaluate, jterm_equal, occurs, variables

__version__ = "0.1.0"
