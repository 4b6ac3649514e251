"""Shared fixtures, random term builders and the acceptance summary hook."""

from __future__ import annotations

import random

import pytest

from folsem import (
    And,
    App,
    Atom,
    Bottom,
    Eq,
    Exists,
    Not,
    Or,
    Signature,
    Subst,
    Top,
    Val,
    Var,
    finite_interpretation,
    herbrand_interpretation,
    integer_interpretation,
)
from folsem.interpretations import INT_OPERATORS
from folsem.terms import evaluate

# Filled in by tests/test_acceptance.py; printed at the end of the session.
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])


@pytest.fixture
def int_interp():
    return integer_interpretation()


@pytest.fixture
def herbrand():
    return herbrand_interpretation({"a": 0, "b": 0, "f": 1, "g": 1, "h": 2})


@pytest.fixture
def ab_interp():
    """D = {a, b}, p_I = {(a)}."""
    return finite_interpretation(["a", "b"], relations={"p": (1, [("a",)])})


# -- random generalized terms -------------------------------------------------

VARS = ("x", "y", "z", "u", "v")


def random_int_term(rng: random.Random, depth: int, vs=VARS, ground=False):
    """A random generalized term over the integer signature."""
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if not ground and vs and roll < 0.45:
            return Var(rng.choice(vs))
        if roll < 0.6:
            return Val(rng.randint(-9, 9))
        return App(str(rng.randint(0, 30)))
    op = rng.choice(("+", "-", "*", "neg"))
    if op == "neg":
        return App("neg", (random_int_term(rng, depth - 1, vs, ground),))
    return App(op, (random_int_term(rng, depth - 1, vs, ground), random_int_term(rng, depth - 1, vs, ground)))


HERBRAND_SIG = {"a": 0, "b": 0, "f": 1, "g": 1, "h": 2}


def random_herbrand_term(rng: random.Random, depth: int, vs=VARS, ground=False):
    if depth <= 0 or rng.random() < 0.3:
        if not ground and vs and rng.random() < 0.5:
            return Var(rng.choice(vs))
        return App(rng.choice(("a", "b")))
    name = rng.choice(("f", "g", "h"))
    return App(name, tuple(random_herbrand_term(rng, depth - 1, vs, ground) for _ in range(HERBRAND_SIG[name])))


def random_finite_term(rng: random.Random, depth: int, vs=VARS):
    """Terms over the finite interpretation returned by ``small_finite``."""
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if vs and roll < 0.5:
            return Var(rng.choice(vs))
        if roll < 0.75:
            return Val(rng.choice(("a", "b", "c")))
        return App(rng.choice(("a", "c0")))
    name = rng.choice(("f", "g"))
    arity = {"f": 1, "g": 2}[name]
    return App(name, tuple(random_finite_term(rng, depth - 1, vs) for _ in range(arity)))


def small_finite():
    elems = ["a", "b", "c"]
    nxt = {"a": "b", "b": "c", "c": "a"}
    return finite_interpretation(
        elems,
        functions={
            "c0": (0, {(): "c"}),
            "f": (1, {(e,): nxt[e] for e in elems}),
            "g": (2, {(d, e): d if d == e else "a" for d in elems for e in elems}),
        },
        relations={"p": (1, [("a",)]), "r": (2, [("a", "b"), ("c", "c")])},
    )


def random_subst(rng: random.Random, algebra, make_term, vs=VARS, depth=2) -> Subst:
    """A random J-substitution (not necessarily idempotent)."""
    m = {}
    for name in rng.sample(list(vs), rng.randint(0, len(vs))):
        h = evaluate(make_term(rng, depth, vs), algebra)
        if h != Var(name):
            m[Var(name)] = h
    return Subst(m)


# -- outcome comparison up to renaming of generated variables -----------------

def _match_fresh(a, b, bij: dict, inv: dict) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        if not a.is_fresh or not b.is_fresh:
            return a == b
        if bij.setdefault(a, b) != b or inv.setdefault(b, a) != a:
            return False
        return True
    if isinstance(a, App) and isinstance(b, App):
        return (
            a.symbol == b.symbol
            and len(a.args) == len(b.args)
            and all(_match_fresh(x, y, bij, inv) for x, y in zip(a.args, b.args))
        )
    return a == b


def _match_subst(s, t, bij, inv) -> bool:
    if len(s) != len(t):
        return False
    for (x, h), (y, k) in zip(s.items(), t.items()):
        if not _match_fresh(x, y, bij, inv) or not _match_fresh(h, k, bij, inv):
            return False
    return True


def same_up_to_fresh_renaming(o1, o2) -> bool:
    """Outcomes agree after one bijective renaming of ``_``-variables."""
    if o1.error != o2.error or len(o1.answers) != len(o2.answers):
        return False
    bij: dict = {}
    inv: dict = {}
    return all(
        _match_subst(a.full, b.full, bij, inv) and _match_subst(a.delta, b.delta, bij, inv)
        for a, b in zip(o1.answers, o2.answers)
    )


# -- random syntax for round-trip tests ---------------------------------------

SYNTAX_SIG = Signature(
    {**INT_OPERATORS, "f": 1, "g": 2, "c": 0},
    {"p": 1, "q": 2, "r": 0},
    integer_literals=True,
)
SYNTAX_VARS = ("x", "y", "z", "x1", "y'", "long_name")


def random_syntax_term(rng: random.Random, depth: int):
    """A term built only from syntax (no domain values)."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.5:
            return Var(rng.choice(SYNTAX_VARS))
        if roll < 0.8:
            return App(str(rng.randint(0, 12)))
        return App("c")
    sym = rng.choice(("+", "-", "*", "neg", "f", "g"))
    arity = SYNTAX_SIG.function_arity(sym)
    return App(sym, tuple(random_syntax_term(rng, depth - 1) for _ in range(arity)))


def random_syntax_formula(rng: random.Random, depth: int):
    if depth <= 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.5:
            return Eq(random_syntax_term(rng, 3), random_syntax_term(rng, 3))
        if roll < 0.9:
            name = rng.choice(("p", "q", "r"))
            arity = SYNTAX_SIG.predicate_arity(name)
            return Atom(name, tuple(random_syntax_term(rng, 2) for _ in range(arity)))
        return rng.choice((Top(), Bottom()))
    kind = rng.choice(("and", "or", "not", "exists"))
    if kind == "and":
        return And(random_syntax_formula(rng, depth - 1), random_syntax_formula(rng, depth - 1))
    if kind == "or":
        return Or(random_syntax_formula(rng, depth - 1), random_syntax_formula(rng, depth - 1))
    if kind == "not":
        return Not(random_syntax_formula(rng, depth - 1))
    return Exists(Var(rng.choice(SYNTAX_VARS)), random_syntax_formula(rng, depth - 1))
