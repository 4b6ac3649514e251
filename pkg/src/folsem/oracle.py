"""Brute-force truth over finite interpretations and the soundness checks.

Truth is classical: ``truth(I, theta, phi)`` instantiates ``phi`` with
``theta`` and quantifies universally over the variables left free, checking
every valuation over the (finite) domain.  The checks compare this
declarative reading with what the evaluator computes.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .formulas import (
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Formula,
    Not,
    Or,
    Top,
    apply_formula,
    conjoin,
    disjoin,
    free_vars,
)
from .interpretations import (
    Interpretation,
    UnsupportedOracle,
    enumerate_domain,
    finite_interpretation,
    interpretation_from_document,
)
from .semantics import evaluate_formula
from .substitution import EMPTY, Subst, compose, is_less_general, subst_equal
from .syntax import parse_formula, parse_subst, print_formula, print_subst, print_term
from .terms import App, Term, Val, Var, evaluate

CHECKS = ("soundness-i", "soundness-ii", "note-i", "note-ii", "note-equality")


# -- classical truth -------------------------------------------------------

def _value(t: Term, env: dict, interp: Interpretation):
    if isinstance(t, Var):
        return env[t]
    if isinstance(t, Val):
        return t.payload
    return interp.algebra.apply(t.symbol, tuple(_value(a, env, interp) for a in t.args))


def _holds(phi: Formula, env: dict, interp: Interpretation, domain: list) -> bool:
    if isinstance(phi, Eq):
        return interp.algebra.values_equal(
            _value(phi.lhs, env, interp), _value(phi.rhs, env, interp)
        )
    if isinstance(phi, Atom):
        return interp.holds(phi.predicate, tuple(_value(a, env, interp) for a in phi.args))
    if isinstance(phi, And):
        return _holds(phi.left, env, interp, domain) and _holds(phi.right, env, interp, domain)
    if isinstance(phi, Or):
        return _holds(phi.left, env, interp, domain) or _holds(phi.right, env, interp, domain)
    if isinstance(phi, Not):
        return not _holds(phi.body, env, interp, domain)
    if isinstance(phi, Exists):
        saved = env.get(phi.var, _MISSING)
        try:
            for d in domain:
                env[phi.var] = d
                if _holds(phi.body, env, interp, domain):
                    return True
            return False
        finally:
            if saved is _MISSING:
                env.pop(phi.var, None)
            else:
                env[phi.var] = saved
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    raise TypeError(f"not a formula: {phi!r}")


_MISSING = object()


def _domain(interp: Interpretation) -> list:
    elems = enumerate_domain(interp)
    if elems is None:
        raise UnsupportedOracle(
            f"{interp!r} has no finite enumeration of its domain; truth is not computable"
        )
    return [v.payload for v in elems]


def valuations(interp: Interpretation, vs: Iterable[Var]):
    vs = sorted(vs, key=Var.sort_key)
    domain = _domain(interp)
    for combo in itertools.product(domain, repeat=len(vs)):
        yield dict(zip(vs, combo))


def holds_under(interp: Interpretation, phi: Formula, env: dict) -> bool:
    """Classical truth of ``phi`` under a valuation covering its free variables."""
    return _holds(phi, dict(env), interp, _domain(interp))


def find_counter_valuation(
    interp: Interpretation, vs: Iterable[Var], test: Callable[[dict], bool]
) -> Optional[dict]:
    for env in valuations(interp, vs):
        if not test(env):
            return env
    return None


def truth(interp: Interpretation, theta: Subst, phi: Formula) -> bool:
    """``I |=_theta phi``: every valuation of the free variables of ``phi theta``."""
    domain = _domain(interp)
    inst = apply_formula(phi, theta)
    return (
        find_counter_valuation(interp, free_vars(inst), lambda env: _holds(inst, env, interp, domain))
        is None
    )


def valid(interp: Interpretation, phi: Formula) -> bool:
    return truth(interp, EMPTY, phi)


def hat(eta: Subst) -> Formula:
    """The conjunction ``x1 = h1 & ... & xn = hn``; ``true`` for the empty one."""
    return conjoin(Eq(x, h) for x, h in sorted(eta.items(), key=lambda kv: kv[0].sort_key()))


def closed_hat(delta: Subst) -> Formula:
    """``hat(delta)`` under existential quantifiers for the generated range variables."""
    phi = hat(delta)
    fresh = sorted((v for v in delta.range_vars() if v.is_fresh), key=Var.sort_key)
    for v in reversed(fresh):
        phi = Exists(v, phi)
    return phi


# -- reports ---------------------------------------------------------------

@dataclass
class CheckReport:
    check: str
    status: str  # "pass", "fail" or "n/a"
    seed: Optional[int] = None
    instance: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "seed": self.seed,
            "instance": self.instance,
            "counterexample": self.counterexample,
        }


def _env_text(env: dict) -> dict:
    return {str(v): print_term(Val(d)) for v, d in env.items()}


def _report(check, ok, counterexample=None) -> CheckReport:
    return CheckReport(check, "pass" if ok else "fail", counterexample=None if ok else counterexample)


def check_soundness_i(interp, phi, theta, mutations=()) -> CheckReport:
    """Every computed success validates the formula; finite failure validates ``~phi``."""
    out = evaluate_formula(phi, theta, interp, mutations=mutations)
    for eta in out.substitutions:
        if not truth(interp, eta, phi):
            return _report("soundness-i", False, {"member": print_subst(eta)})
    if out.is_failure and not truth(interp, theta, Not(phi)):
        return _report("soundness-i", False, {"member": None, "reason": "failure but phi holds"})
    return _report("soundness-i", True)


def soundness_disjunction(answers) -> Formula:
    return disjoin(closed_hat(a.delta) for a in answers)


def check_soundness_ii(interp, phi, theta, mutations=()) -> CheckReport:
    """Without error, ``phi theta`` is equivalent to the disjunction of its answers."""
    out = evaluate_formula(phi, theta, interp, mutations=mutations)
    if out.error:
        return CheckReport("soundness-ii", "n/a")
    domain = _domain(interp)
    lhs = apply_formula(phi, theta)
    rhs = soundness_disjunction(out.answers)
    bad = find_counter_valuation(
        interp,
        free_vars(lhs) | free_vars(rhs),
        lambda env: _holds(lhs, env, interp, domain) == _holds(rhs, env, interp, domain),
    )
    if bad is None:
        return _report("soundness-ii", True)
    return _report(
        "soundness-ii",
        False,
        {
            "valuation": _env_text(bad),
            "query": print_formula(lhs),
            "answers": print_formula(rhs),
            "query_holds": _holds(lhs, bad, interp, domain),
        },
    )


def check_note_i(interp, phi, theta, mutations=()) -> CheckReport:
    """Every success is an instance of the initial substitution via its delta."""
    out = evaluate_formula(phi, theta, interp, mutations=mutations)
    alg = interp.algebra
    for a in out.answers:
        if not is_less_general(a.full, theta, alg):
            return _report("note-i", False, {"member": print_subst(a.full)})
        if not subst_equal(compose(theta, a.delta, alg), a.full, alg):
            return _report(
                "note-i", False, {"member": print_subst(a.full), "delta": print_subst(a.delta)}
            )
    return _report("note-i", True)


def check_note_ii(interp, phi, theta, mutations=()) -> CheckReport:
    """A ground query can only succeed with the initial substitution."""
    if free_vars(apply_formula(phi, theta)):
        return CheckReport("note-ii", "n/a")
    out = evaluate_formula(phi, theta, interp, mutations=mutations)
    for eta in out.substitutions:
        if not subst_equal(eta, theta, interp.algebra):
            return _report("note-ii", False, {"member": print_subst(eta)})
    return _report("note-ii", True)


def check_note_equality(interp, phi, theta, hat_fn=hat) -> CheckReport:
    """``I |=_theta phi`` iff ``hat(theta) -> phi`` is valid.

    ``hat_fn`` can be replaced to test that the check detects a wrong encoding.
    """
    domain = _domain(interp)
    left = truth(interp, theta, phi)
    antecedent = hat_fn(theta)
    bad = find_counter_valuation(
        interp,
        free_vars(antecedent) | free_vars(phi),
        lambda env: not _holds(antecedent, env, interp, domain) or _holds(phi, env, interp, domain),
    )
    right = bad is None
    if left == right:
        return _report("note-equality", True)
    return _report(
        "note-equality",
        False,
        {"truth": left, "implication": right, "valuation": None if bad is None else _env_text(bad)},
    )


def check_corollary(interp, phi, mutations=()) -> CheckReport:
    """Finite failure from the empty substitution makes ``~phi`` valid."""
    out = evaluate_formula(phi, EMPTY, interp, mutations=mutations)
    if not out.is_failure:
        return CheckReport("corollary", "n/a")
    return _report("corollary", valid(interp, Not(phi)), {"formula": print_formula(phi)})


CHECK_FUNCTIONS = {
    "soundness-i": check_soundness_i,
    "soundness-ii": check_soundness_ii,
    "note-i": check_note_i,
    "note-ii": check_note_ii,
    "note-equality": lambda interp, phi, theta, mutations=(): check_note_equality(interp, phi, theta),
}


# -- random instances -------------------------------------------------------

@dataclass(frozen=True)
class GenParams:
    """Size limits for generated instances."""

    domain_size: int = 4
    depth: int = 5
    functions: int = 2
    function_arity: int = 2
    predicates: int = 3
    predicate_arity: int = 2
    term_depth: int = 2
    subst_depth: int = 2
    variables: tuple = ("x", "y", "z", "u")


@dataclass
class Instance:
    interp: Interpretation
    formula: Formula
    theta: Subst
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "interpretation": self.interp.to_document(),
            "formula": print_formula(self.formula),
            "theta": print_subst(self.theta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        interp = interpretation_from_document(d["interpretation"])
        return cls(
            interp,
            parse_formula(d["formula"], interp.signature),
            parse_subst(d["theta"], interp.algebra),
            d.get("seed"),
        )


def gen_interpretation(rng: random.Random, params: GenParams) -> Interpretation:
    n = rng.randint(1, max(1, params.domain_size))
    elements = ["a", "b", "c", "d", "e", "h", "k", "m"][:n]
    if n > 8:
        elements = [f"e{i}" for i in range(n)]
    functions = {}
    for name in ["f", "g", "s", "t"][: rng.randint(0, params.functions)]:
        arity = rng.randint(0, params.function_arity)
        table = {args: rng.choice(elements) for args in itertools.product(elements, repeat=arity)}
        functions[name] = (arity, table)
    relations = {}
    for name in ["p", "q", "r", "w"][: rng.randint(0, params.predicates)]:
        arity = rng.randint(0, params.predicate_arity)
        tuples = [t for t in itertools.product(elements, repeat=arity) if rng.random() < 0.5]
        relations[name] = (arity, tuples)
    return finite_interpretation(elements, functions, relations)


def _symbols(interp: Interpretation):
    sig = interp.signature
    consts = sorted(n for n, a in sig.functions.items() if a == 0)
    funcs = sorted((n, a) for n, a in sig.functions.items() if a > 0)
    preds = sorted(sig.predicates.items())
    return consts, funcs, preds


def gen_term(rng, interp, vs, depth: int) -> Term:
    consts, funcs, _ = _symbols(interp)
    if depth > 0 and funcs and rng.random() < 0.4:
        name, arity = rng.choice(funcs)
        return App(name, tuple(gen_term(rng, interp, vs, depth - 1) for _ in range(arity)))
    if vs and (not consts or rng.random() < 0.65):
        return Var(rng.choice(vs))
    if consts:
        return App(rng.choice(consts))
    name, arity = rng.choice(funcs)
    return App(name, tuple(gen_term(rng, interp, vs, depth - 1) for _ in range(arity)))


def gen_formula(rng, interp, params: GenParams, depth: int) -> Formula:
    vs = list(params.variables)
    _, _, preds = _symbols(interp)
    if depth <= 0 or rng.random() < 0.25:
        if preds and rng.random() < 0.4:
            name, arity = rng.choice(preds)
            return Atom(name, tuple(gen_term(rng, interp, vs, params.term_depth) for _ in range(arity)))
        return Eq(gen_term(rng, interp, vs, params.term_depth), gen_term(rng, interp, vs, params.term_depth))
    kind = rng.choice(("and", "and", "or", "not", "exists", "exists"))
    if kind == "and":
        return And(gen_formula(rng, interp, params, depth - 1), gen_formula(rng, interp, params, depth - 1))
    if kind == "or":
        return Or(gen_formula(rng, interp, params, depth - 1), gen_formula(rng, interp, params, depth - 1))
    if kind == "not":
        return Not(gen_formula(rng, interp, params, depth - 1))
    return Exists(Var(rng.choice(vs)), gen_formula(rng, interp, params, depth - 1))


def gen_subst(rng, interp, params: GenParams) -> Subst:
    """An idempotent J-substitution: range variables never occur in the domain."""
    vs = list(params.variables)
    k = rng.randint(0, min(3, len(vs)))
    dom = rng.sample(vs, k)
    rest = [v for v in vs if v not in dom]
    m = {}
    for name in sorted(dom):
        h = evaluate(gen_term(rng, interp, rest, params.subst_depth), interp.algebra)
        if h != Var(name):
            m[Var(name)] = h
    return Subst(m)


def gen_instance(seed: int, params: GenParams = GenParams(), interp: Optional[Interpretation] = None) -> Instance:
    """Reproducible random (interpretation, formula, substitution) triple."""
    rng = random.Random(seed)
    if interp is None:
        interp = gen_interpretation(rng, params)
    phi = gen_formula(rng, interp, params, params.depth)
    theta = gen_subst(rng, interp, params)
    return Instance(interp, phi, theta, seed)


# -- suites ------------------------------------------------------------------

@dataclass
class SuiteResult:
    seed: int
    count: int
    reports: list

    def summary(self) -> dict:
        out = {c: {"pass": 0, "fail": 0, "n/a": 0} for c in CHECKS}
        for r in self.reports:
            out.setdefault(r.check, {"pass": 0, "fail": 0, "n/a": 0})[r.status] += 1
        return out

    @property
    def failures(self) -> list:
        return [r for r in self.reports if r.status == "fail"]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "summary": self.summary(),
            "failures": [r.to_dict() for r in self.failures],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def check_instance(inst: Instance, checks=CHECKS, mutations=()) -> list:
    reports = []
    for name in checks:
        r = CHECK_FUNCTIONS[name](inst.interp, inst.formula, inst.theta, mutations=mutations)
        r.seed = inst.seed
        if r.status == "fail":
            r.instance = inst.to_dict()
        reports.append(r)
    return reports


def _run_range(args) -> list:
    start, stop, params, doc, checks, mutations = args
    interp = interpretation_from_document(doc) if doc is not None else None
    out = []
    for s in range(start, stop):
        out.extend(check_instance(gen_instance(s, params, interp), checks, mutations))
    return out


def run_suite(
    count: int,
    seed: int,
    interp: Optional[Interpretation] = None,
    params: GenParams = GenParams(),
    checks=CHECKS,
    mutations=(),
    jobs: int = 1,
) -> SuiteResult:
    """Run the checks on instances ``seed, seed+1, ..., seed+count-1``.

    With ``jobs > 1`` seed ranges are sharded over worker processes; reports
    are merged in seed order, so the result does not depend on ``jobs``.
    """
    if interp is not None:
        _domain(interp)
    doc = interp.to_document() if interp is not None else None
    checks = tuple(checks)
    mutations = tuple(sorted(mutations))
    if jobs <= 1 or count < 2:
        return SuiteResult(seed, count, _run_range((seed, seed + count, params, doc, checks, mutations)))
    step = -(-count // jobs)
    shards = [
        (s, min(s + step, seed + count), params, doc, checks, mutations)
        for s in range(seed, seed + count, step)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_run_range, shards))
    return SuiteResult(seed, count, [r for part in parts for r in part])
