"""J-substitutions: application, composition, DROP and generality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .terms import (
    Algebra,
    App,
    MalformedInput,
    Term,
    Val,
    Var,
    all_vars,
    evaluate,
    jterm_equal,
)


class Subst(Mapping):
    """Finite mapping from variables to J-terms, never binding ``x`` to ``x``.

    Immutable and hashable.  Iteration follows the printed variable name so
    that output is stable.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[Var, Term] | None = None):
        m = {}
        for x, t in dict(bindings or {}).items():
            if not isinstance(x, Var):
                raise MalformedInput(f"cannot bind non-variable {x!r}")
            if t == x:
                raise MalformedInput(f"binding {x}/{x} is not allowed")
            m[x] = t
        self._map = dict(sorted(m.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = None

    @classmethod
    def _trusted(cls, m: dict) -> "Subst":
        s = cls.__new__(cls)
        s._map = dict(sorted(m.items(), key=lambda kv: kv[0].sort_key()))
        s._hash = None
        return s

    def __getitem__(self, x: Var) -> Term:
        return self._map[x]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Subst):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{x}/{t!r}" for x, t in self._map.items())
        return f"Subst({{{inner}}})"

    def lookup(self, x: Var) -> Term:
        return self._map.get(x, x)

    def range_vars(self) -> set:
        return all_vars(self._map.values())

    def without(self, x: Var) -> "Subst":
        if x not in self._map:
            return self
        m = dict(self._map)
        del m[x]
        return Subst._trusted(m)


EMPTY = Subst()


class _Error:
    """The distinguished error state."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "error"


ERROR = _Error()


@dataclass(frozen=True)
class Answer:
    """A success ``full`` together with the computed answer ``delta``.

    ``full`` equals the initial substitution composed with ``delta``.
    """

    full: Subst
    delta: Subst


def apply_term(t: Term, theta: Mapping[Var, Term]) -> Term:
    """Simultaneously replace every bound variable of ``t``; no evaluation."""
    if isinstance(t, Var):
        return theta.get(t, t)
    if isinstance(t, App):
        if not t.args:
            return t
        return App(t.symbol, tuple(apply_term(a, theta) for a in t.args), t.span)
    return t


def compose(theta: Subst, eta: Subst, algebra: Algebra) -> Subst:
    """The J-substitution mapping each ``x`` to ``[(x theta) eta]``."""
    if not eta:
        return theta
    m = {}
    for x, t in theta.items():
        h = evaluate(apply_term(t, eta), algebra)
        if h != x:
            m[x] = h
    for x, t in eta.items():
        if x not in theta:
            m[x] = t
    return Subst._trusted(m)


def drop(x: Var, e):
    """Remove ``x`` from the domain of a substitution; error stays error."""
    if e is ERROR:
        return e
    return e.without(x)


def subst_equal(a: Subst, b: Subst, algebra: Algebra) -> bool:
    if a.keys() != b.keys():
        return False
    return all(jterm_equal(a[x], b[x], algebra) for x in a)


def _match(pattern: Term, target: Term, binding: dict, algebra: Algebra) -> bool:
    # Only variable leaves of the pattern are instantiated.  An application
    # facing a value may collapse after instantiation; that is left to the
    # final composition check.
    if isinstance(pattern, Var):
        if pattern in binding:
            return jterm_equal(binding[pattern], target, algebra)
        binding[pattern] = target
        return True
    if isinstance(pattern, Val):
        return isinstance(target, Val) and algebra.values_equal(pattern.payload, target.payload)
    if isinstance(target, Val):
        return True
    if not isinstance(target, App) or target.symbol != pattern.symbol:
        return False
    if len(target.args) != len(pattern.args):
        return False
    return all(_match(p, q, binding, algebra) for p, q in zip(pattern.args, target.args))


def factor(eta: Subst, theta: Subst, algebra: Algebra) -> Optional[Subst]:
    """Find ``gamma`` with ``compose(theta, gamma) == eta`` by matching, or None.

    Matching recovers every variable that occurs outside collapsed positions,
    which covers all idempotent ``theta``.  The candidate is always verified
    by composition, so a returned ``gamma`` is correct.
    """
    binding: dict = {}
    for x in sorted(set(theta) | set(eta), key=Var.sort_key):
        if not _match(theta.lookup(x), eta.lookup(x), binding, algebra):
            return None
    gamma = Subst._trusted({v: t for v, t in binding.items() if t != v})
    if subst_equal(compose(theta, gamma, algebra), eta, algebra):
        return gamma
    return None


def is_less_general(eta: Subst, theta: Subst, algebra: Algebra) -> bool:
    """True iff ``eta = theta gamma`` for some J-substitution ``gamma``."""
    return factor(eta, theta, algebra) is not None
