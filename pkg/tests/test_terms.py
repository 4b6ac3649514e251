"""Terms, signatures and J-evaluation."""

from __future__ import annotations

import operator
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folsem import (
    App,
    MalformedInput,
    Signature,
    Val,
    Var,
    evaluate,
    herbrand_interpretation,
    integer_interpretation,
    jterm_equal,
    occurs,
    variables,
)
from folsem.syntax import parse_term, print_term
from folsem.terms import is_ground

from conftest import HERBRAND_SIG, random_herbrand_term, random_int_term


def T(text, interp):
    return parse_term(text, interp.signature)


def _reify(t):
    """Herbrand values are ground terms; put them back into the tree."""
    if isinstance(t, Val):
        return _reify(t.payload)
    if isinstance(t, App):
        return App(t.symbol, tuple(_reify(a) for a in t.args))
    return t


def _direct_int(t):
    """Reference evaluator for ground integer terms."""
    if isinstance(t, Val):
        return t.payload
    if not t.args:
        return int(t.symbol)
    vals = [_direct_int(a) for a in t.args]
    if t.symbol == "neg":
        return -vals[0]
    return {"+": operator.add, "-": operator.sub, "*": operator.mul}[t.symbol](*vals)


def _collapse_maximal_ground(t, algebra):
    """Replace each maximal ground subterm by its value, computed independently."""
    if is_ground(t):
        return Val(_ground_value(t, algebra))
    if isinstance(t, App):
        return App(t.symbol, tuple(_collapse_maximal_ground(a, algebra) for a in t.args))
    return t


def _ground_value(t, algebra):
    if isinstance(t, Val):
        return t.payload
    return algebra.apply(t.symbol, tuple(_ground_value(a, algebra) for a in t.args))


class TestEvaluate:
    """Examples of J-evaluation."""

    def test_integer_example(self, int_interp):
        t = T("x + (((3+2)*4) - y)", int_interp)
        assert print_term(evaluate(t, int_interp.algebra)) == "x + (20 - y)"

    def test_integer_instance(self, int_interp):
        t = T("(6-z) + (((3+2)*4) - 3)", int_interp)
        assert print_term(evaluate(t, int_interp.algebra)) == "6 - z + 17"
        assert evaluate(t, int_interp.algebra) == App(
            "+", (App("-", (Val(6), Var("z"))), Val(17))
        )

    def test_herbrand_is_identity(self, herbrand):
        t = T("h(f(x), g(a))", herbrand)
        assert _reify(evaluate(t, herbrand.algebra)) == t

    def test_value_alone(self, int_interp):
        assert evaluate(Val(20), int_interp.algebra) == Val(20)

    def test_unknown_symbol_is_malformed(self, int_interp):
        with pytest.raises(MalformedInput):
            evaluate(App("f", (Var("x"),)), int_interp.algebra)

    def test_wrong_arity_is_malformed(self, herbrand):
        with pytest.raises(MalformedInput):
            evaluate(App("f", (Var("x"), Var("y"))), herbrand.algebra)

    def test_big_integers_do_not_overflow(self, int_interp):
        t = T("4294967296 * 4294967296 * 4294967296", int_interp)
        assert evaluate(t, int_interp.algebra) == Val(2**96)

    def test_unary_minus(self, int_interp):
        assert evaluate(T("-(2 - 5)", int_interp), int_interp.algebra) == Val(3)


class TestVariables:
    def test_examples(self, int_interp):
        assert variables(T("x + (20 - y)", int_interp)) == {Var("x"), Var("y")}
        assert variables(T("3 * 4", int_interp)) == set()
        assert variables(parse_term("f(x, g(x))")) == {Var("x")}

    def test_occurs(self):
        assert occurs(Var("x"), parse_term("f(x)"))
        assert not occurs(Var("x"), parse_term("f(y)"))
        assert not occurs(Var("x"), Val(20))


class TestJTermEqual:
    def test_identical(self, int_interp):
        a = evaluate(T("x + (20 - y)", int_interp), int_interp.algebra)
        b = evaluate(T("x + (20 - y)", int_interp), int_interp.algebra)
        assert jterm_equal(a, b, int_interp.algebra)

    def test_distinct_values(self, int_interp):
        assert not jterm_equal(Val(20), Val(17), int_interp.algebra)

    def test_no_algebraic_reasoning(self, int_interp):
        alg = int_interp.algebra
        a = evaluate(T("x + x", int_interp), alg)
        b = evaluate(T("2 * x", int_interp), alg)
        assert not jterm_equal(a, b, alg)


class TestSignature:
    def test_namespaces_disjoint(self):
        with pytest.raises(MalformedInput):
            Signature({"p": 1}, {"p": 1})

    def test_equality_not_declarable(self):
        with pytest.raises(MalformedInput):
            Signature({}, {"=": 2})

    def test_negative_arity(self):
        with pytest.raises(MalformedInput):
            Signature({"f": -1})


class TestProperties:
    """Evaluation laws on random terms."""

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_idempotent_int(self, seed):
        alg = integer_interpretation().algebra
        t = random_int_term(random.Random(seed), 4)
        once = evaluate(t, alg)
        assert evaluate(once, alg) == once

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_maximal_ground_subterms(self, seed):
        alg = integer_interpretation().algebra
        t = random_int_term(random.Random(seed), 4)
        assert evaluate(t, alg) == _collapse_maximal_ground(t, alg)

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_ground_gives_value(self, seed):
        alg = integer_interpretation().algebra
        t = random_int_term(random.Random(seed), 4, ground=True)
        v = evaluate(t, alg)
        assert isinstance(v, Val)
        assert v.payload == _direct_int(t)

    @settings(max_examples=300)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_herbrand_identity(self, seed):
        alg = herbrand_interpretation(HERBRAND_SIG).algebra
        t = random_herbrand_term(random.Random(seed), 4)
        out = evaluate(t, alg)
        assert _reify(out) == t
        assert print_term(out) == print_term(t)
