"""Parsing and printing of terms, formulas, substitutions and outcomes."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folsem import (
    And,
    App,
    Atom,
    Eq,
    Exists,
    Not,
    Or,
    ParseError,
    Subst,
    Val,
    Var,
    herbrand_interpretation,
    integer_interpretation,
    parse_formula,
    parse_subst,
    parse_term,
    print_formula,
    print_outcome,
    print_subst,
    print_term,
)
from folsem.semantics import ERROR_OUTCOME, FAILURE
from folsem.syntax import OPEN_SIGNATURE, parse_outcome, render_tree, tokenize
from folsem.terms import evaluate

from conftest import (
    SYNTAX_SIG,
    random_herbrand_term,
    random_int_term,
    random_subst,
    random_syntax_formula,
    random_syntax_term,
)

INT = integer_interpretation()
HERB = herbrand_interpretation({"a": 0, "b": 0, "f": 1, "g": 1, "h": 2})

x, y, z = Var("x"), Var("y"), Var("z")


def F(text, sig=SYNTAX_SIG):
    return parse_formula(text, sig)


def T(text, sig=SYNTAX_SIG):
    return parse_term(text, sig)


class TestExamples:
    def test_integer_term(self):
        t = T("x + (((3+2)*4) - y)")
        three_plus_two = App("+", (App("3"), App("2")))
        assert t == App("+", (x, App("-", (App("*", (three_plus_two, App("4"))), y))))

    def test_herbrand_query(self):
        phi = F("f(x)=z & g(z)=g(f(x))", HERB.signature)
        assert isinstance(phi, And)
        assert isinstance(phi.left, Eq) and isinstance(phi.right, Eq)

    def test_exists(self):
        phi = F("exists x (z = f(x))")
        assert phi == Exists(x, Eq(z, App("f", (x,))))

    def test_subst(self):
        theta = parse_subst("{x/6-z, y/3}", INT.algebra)
        assert theta == Subst({x: App("-", (Val(6), z)), y: Val(3)})

    def test_print_empty(self):
        assert print_subst(Subst()) == "{}"

    def test_print_outcomes(self):
        assert print_outcome(ERROR_OUTCOME) == "error"
        assert print_outcome(FAILURE) == "fail"

    def test_unicode_aliases(self):
        assert F("¬p(x) ∧ q(x, y) ∨ ∃z r") == F("~p(x) & q(x, y) | exists z r")
        assert T("x · y − 1") == T("x * y - 1")


class TestPrecedence:
    """Disambiguation goldens."""

    def test_product_binds_tighter(self):
        assert T("1 + 2 * 3") == App("+", (App("1"), App("*", (App("2"), App("3")))))

    def test_minus_left_associative(self):
        assert T("x - y - z") == App("-", (App("-", (x, y)), z))

    def test_unary_minus_tightest(self):
        assert T("-x * y") == App("*", (App("neg", (x,)), y))

    def test_not_tightest(self):
        assert F("~p(x) & r") == And(Not(Atom("p", (x,))), Atom("r"))

    def test_and_over_or(self):
        assert F("r & r | p(x)") == Or(And(Atom("r"), Atom("r")), Atom("p", (x,)))

    def test_exists_extends_right(self):
        assert F("exists x p(x) & r") == Exists(x, And(Atom("p", (x,)), Atom("r")))
        assert F("(exists x p(x)) & r") == And(Exists(x, Atom("p", (x,))), Atom("r"))

    def test_exists_stops_at_group(self):
        phi = F("r | (exists x p(x) | r) & r")
        assert phi == Or(Atom("r"), And(Exists(x, Or(Atom("p", (x,)), Atom("r"))), Atom("r")))

    def test_parenthesized_formula_vs_term(self):
        assert F("(x + 1) = y") == Eq(App("+", (x, App("1"))), y)
        assert F("(x = 1)") == Eq(x, App("1"))

    def test_printer_parenthesizes(self):
        assert print_formula(F("(r | r) & r")) == "(r | r) & r"
        assert print_term(T("(x + y) * z")) == "(x + y) * z"
        assert print_term(T("x - (y - z)")) == "x - (y - z)"


class TestErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "_y1 = x",
            "x = ",
            "p(x",
            "x + = 1",
            "exists 3 (x = 1)",
            "q(x) & q(x, y, z)",
            "f(x, y) = z",
            "p = x",
            "x # y",
            "exists p (x = 1)",
        ],
    )
    def test_rejected_with_span(self, text):
        with pytest.raises(ParseError) as info:
            F(text)
        span = info.value.span
        assert span is not None
        assert 0 <= span.start <= span.end <= len(text.encode("utf-8"))

    def test_literal_needs_integers(self):
        with pytest.raises(ParseError):
            parse_term("x + 1", HERB.signature)

    def test_reserved_prefix_allowed_when_asked(self):
        assert parse_term("_y1", allow_fresh=True) == Var("y", 1)

    def test_duplicate_binding(self):
        with pytest.raises(ParseError):
            parse_subst("{x/1, x/2}", INT.algebra)

    def test_identity_binding(self):
        with pytest.raises(ParseError):
            parse_subst("{x/x}", INT.algebra)

    def test_spans_are_bytes(self):
        toks = tokenize("¬p")
        assert toks[0].span.end == 2 and toks[1].span.start == 2

    @settings(max_examples=500)
    @given(st.text(alphabet="xyzpqfg01()=&|~*+-,/{}_ ¬∃∧", max_size=25))
    def test_error_spans_in_bounds(self, text):
        try:
            parse_formula(text, OPEN_SIGNATURE)
        except ParseError as exc:
            assert exc.span is not None
            assert 0 <= exc.span.start <= exc.span.end <= len(text.encode("utf-8"))


class TestOutcomes:
    def test_round_trip(self):
        text = "{x/1}; {x/2, y/_y1 + 3}; error"
        out = parse_outcome(text, INT.algebra)
        assert print_outcome(out) == text
        assert out.error and len(out.answers) == 2


class TestTree:
    def test_render(self):
        assert render_tree(F("~(x = 1)")) == "Not\n  Eq\n    Var x\n    App 1"


class TestRoundTrip:
    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_terms(self, seed):
        t = random_syntax_term(random.Random(seed), 4)
        assert T(print_term(t)) == t

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_formulas(self, seed):
        phi = random_syntax_formula(random.Random(seed), 4)
        assert F(print_formula(phi)) == phi

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_integer_substitutions(self, seed):
        theta = random_subst(random.Random(seed), INT.algebra, random_int_term)
        assert parse_subst(print_subst(theta), INT.algebra) == theta

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_herbrand_substitutions(self, seed):
        theta = random_subst(random.Random(seed), HERB.algebra, random_herbrand_term)
        assert parse_subst(print_subst(theta), HERB.algebra) == theta

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_jterms(self, seed):
        t = evaluate(random_int_term(random.Random(seed), 4), INT.algebra)
        assert evaluate(T(print_term(t), INT.signature), INT.algebra) == t
