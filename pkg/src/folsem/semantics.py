"""Formulas as programs: set-valued evaluation with an error state.

``evaluate_formula(phi, theta, interp)`` maps an initial J-substitution to an
:class:`Outcome`, a finite set of J-substitutions possibly containing the
error state.  Conjunction is sequential composition, disjunction is
nondeterministic choice, the existential quantifier declares a local
variable and negation is negation as finite failure.

Each success also records its computed answer (``delta``), so that
``full == compose(theta, delta)`` without any after-the-fact matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .formulas import (
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Formula,
    FreshSupply,
    Not,
    Or,
    Top,
    all_formula_vars,
    apply_formula,
)
from .interpretations import AtomStatus, Interpretation, atom_status
from .substitution import EMPTY, Answer, Subst, apply_term, compose, subst_equal
from .terms import MalformedInput, Term, Var, evaluate, is_ground, jterm_equal, occurs

# Deliberately broken variants of the evaluator.  They exist so that the
# verification suites can be shown to catch real defects.
MUTATIONS = ("eq-case4-success", "neg-error-empty", "skip-drop")


@dataclass(frozen=True)
class Outcome:
    """Ordered, duplicate-free successes plus a flag for the error state."""

    answers: tuple = ()
    error: bool = False

    @property
    def substitutions(self) -> list:
        return [a.full for a in self.answers]

    @property
    def is_failure(self) -> bool:
        return not self.answers and not self.error

    def __contains__(self, theta) -> bool:
        return any(a.full == theta for a in self.answers)

    def __len__(self) -> int:
        return len(self.answers) + int(self.error)


class _Collector:
    def __init__(self):
        self.answers: list = []
        self.seen: set = set()
        self.error = False

    def add(self, answer: Answer) -> None:
        if answer.full not in self.seen:
            self.seen.add(answer.full)
            self.answers.append(answer)

    def add_outcome(self, out: Outcome) -> None:
        for a in out.answers:
            self.add(a)
        self.error = self.error or out.error

    def outcome(self) -> Outcome:
        return Outcome(tuple(self.answers), self.error)


def _single(theta: Subst, delta: Subst = EMPTY) -> Outcome:
    return Outcome((Answer(theta, delta),))


FAILURE = Outcome()
ERROR_OUTCOME = Outcome((), True)


class Evaluator:
    """Evaluates formulas over one interpretation.

    The fresh-variable supply is stateful, so an evaluator must not be shared
    between concurrent evaluations.
    """

    def __init__(
        self,
        interp: Interpretation,
        fresh: Optional[FreshSupply] = None,
        mutations: Iterable[str] = (),
    ):
        self.interp = interp
        self.algebra = interp.algebra
        self.fresh = fresh if fresh is not None else FreshSupply()
        self.mutations = frozenset(mutations)
        unknown = self.mutations - set(MUTATIONS)
        if unknown:
            raise ValueError(f"unknown mutations: {sorted(unknown)}")

    def solve_equation(self, s: Term, t: Term, theta: Subst) -> Outcome:
        alg = self.algebra
        st = apply_term(s, theta)
        tt = apply_term(t, theta)
        if isinstance(st, Var) and not occurs(st, tt):
            delta = Subst._trusted({st: evaluate(tt, alg)})
            return _single(compose(theta, delta, alg), delta)
        if isinstance(tt, Var) and not occurs(tt, st) and not isinstance(st, Var):
            delta = Subst._trusted({tt: evaluate(st, alg)})
            return _single(compose(theta, delta, alg), delta)
        if jterm_equal(evaluate(st, alg), evaluate(tt, alg), alg):
            return _single(theta)
        if is_ground(st) and is_ground(tt):
            if "eq-case4-success" in self.mutations:
                return _single(theta)
            return FAILURE
        return ERROR_OUTCOME

    def eval(self, phi: Formula, theta: Subst) -> Outcome:
        if isinstance(phi, Eq):
            return self.solve_equation(phi.lhs, phi.rhs, theta)

        if isinstance(phi, Atom):
            self.interp.check_predicate(phi.predicate, len(phi.args), phi.span)
            status = atom_status(phi.predicate, phi.args, theta, self.interp)
            if status is AtomStatus.TRUE:
                return _single(theta)
            if status is AtomStatus.FALSE:
                return FAILURE
            return ERROR_OUTCOME

        if isinstance(phi, And):
            first = self.eval(phi.left, theta)
            acc = _Collector()
            acc.error = first.error
            for a in first.answers:
                second = self.eval(phi.right, a.full)
                for b in second.answers:
                    acc.add(Answer(b.full, compose(a.delta, b.delta, self.algebra)))
                acc.error = acc.error or second.error
            return acc.outcome()

        if isinstance(phi, Or):
            acc = _Collector()
            acc.add_outcome(self.eval(phi.left, theta))
            acc.add_outcome(self.eval(phi.right, theta))
            return acc.outcome()

        if isinstance(phi, Not):
            sub = self.eval(phi.body, theta)
            if sub.is_failure:
                return _single(theta)
            if any(subst_equal(a.full, theta, self.algebra) for a in sub.answers):
                return FAILURE
            if "neg-error-empty" in self.mutations:
                return FAILURE
            return ERROR_OUTCOME

        if isinstance(phi, Exists):
            y = self.fresh()
            body = apply_formula(phi.body, {phi.var: y}, self.fresh)
            sub = self.eval(body, theta)
            if "skip-drop" in self.mutations:
                return sub
            acc = _Collector()
            for a in sub.answers:
                acc.add(Answer(a.full.without(y), a.delta.without(y)))
            acc.error = sub.error
            return acc.outcome()

        if isinstance(phi, Top):
            return _single(theta)
        if isinstance(phi, Bottom):
            return FAILURE
        raise MalformedInput(f"not a formula: {phi!r}")


def _supply_for(phi: Formula, theta: Subst, fresh: Optional[FreshSupply]) -> FreshSupply:
    if fresh is None:
        fresh = FreshSupply()
    fresh.reserve(all_formula_vars(phi))
    fresh.reserve(theta)
    fresh.reserve(theta.range_vars())
    return fresh


def evaluate_formula(
    phi: Formula,
    theta: Subst,
    interp: Interpretation,
    fresh: Optional[FreshSupply] = None,
    mutations: Iterable[str] = (),
) -> Outcome:
    """The meaning of ``phi`` applied to ``theta``."""
    ev = Evaluator(interp, _supply_for(phi, theta, fresh), mutations)
    return ev.eval(phi, theta)


def eval_answers(
    phi: Formula,
    theta: Subst,
    interp: Interpretation,
    fresh: Optional[FreshSupply] = None,
    mutations: Iterable[str] = (),
) -> tuple:
    """``(answers, error)`` where every answer carries its computed delta."""
    out = evaluate_formula(phi, theta, interp, fresh, mutations)
    return list(out.answers), out.error


def solve_equation(s: Term, t: Term, theta: Subst, interp: Interpretation) -> Outcome:
    return Evaluator(interp).solve_equation(s, t, theta)
