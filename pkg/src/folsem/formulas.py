"""Formula syntax trees, free variables, and substitution into formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .substitution import apply_term
from .terms import SourceSpan, Term, Var, all_vars, iter_vars, rename_vars


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Not:
    body: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


# The empty conjunction and the empty disjunction.  They are not part of the
# programming core; they appear when substitutions are turned into formulas.
@dataclass(frozen=True)
class Top:
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bottom:
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


Formula = Union[Eq, Atom, And, Or, Not, Exists, Top, Bottom]


def conjoin(parts: Iterable["Formula"]) -> "Formula":
    """Right-nested conjunction; the empty conjunction is :class:`Top`."""
    parts = list(parts)
    if not parts:
        return Top()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disjoin(parts: Iterable["Formula"]) -> "Formula":
    """Right-nested disjunction; the empty disjunction is :class:`Bottom`."""
    parts = list(parts)
    if not parts:
        return Bottom()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def free_vars(phi: Formula) -> set:
    if isinstance(phi, Eq):
        return all_vars((phi.lhs, phi.rhs))
    if isinstance(phi, Atom):
        return all_vars(phi.args)
    if isinstance(phi, (And, Or)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, Exists):
        return free_vars(phi.body) - {phi.var}
    return set()


def all_formula_vars(phi: Formula) -> set:
    """Free and bound variables."""
    if isinstance(phi, Exists):
        return all_formula_vars(phi.body) | {phi.var}
    if isinstance(phi, (And, Or)):
        return all_formula_vars(phi.left) | all_formula_vars(phi.right)
    if isinstance(phi, Not):
        return all_formula_vars(phi.body)
    return free_vars(phi)


def is_ground_formula(phi: Formula) -> bool:
    return not free_vars(phi)


class FreshSupply:
    """Generates ``_y1, _y2, ...`` skipping every variable in ``avoid``."""

    def __init__(self, base: str = "y", start: int = 1, avoid: Iterable[Var] = ()):
        self.base = base
        self.counter = start
        self.avoid = set(avoid)

    def __call__(self) -> Var:
        while True:
            v = Var(self.base, self.counter)
            self.counter += 1
            if v not in self.avoid:
                self.avoid.add(v)
                return v

    def reserve(self, vs: Iterable[Var]) -> None:
        self.avoid.update(vs)


def apply_formula(
    phi: Formula, theta: Mapping[Var, Term], fresh: Optional[FreshSupply] = None
) -> Formula:
    """Apply ``theta`` to the free occurrences in ``phi``, avoiding capture.

    A bound variable that would capture a variable of some inserted term is
    renamed to a fresh one first.
    """
    if fresh is None:
        fresh = FreshSupply(avoid=all_formula_vars(phi))
        fresh.reserve(theta)
        fresh.reserve(all_vars(theta.values()))
    return _apply(phi, dict(theta), fresh)


def _apply(phi: Formula, theta: dict, fresh: FreshSupply) -> Formula:
    if not theta:
        return phi
    if isinstance(phi, Eq):
        return Eq(apply_term(phi.lhs, theta), apply_term(phi.rhs, theta), phi.span)
    if isinstance(phi, Atom):
        return Atom(phi.predicate, tuple(apply_term(a, theta) for a in phi.args), phi.span)
    if isinstance(phi, And):
        return And(_apply(phi.left, theta, fresh), _apply(phi.right, theta, fresh), phi.span)
    if isinstance(phi, Or):
        return Or(_apply(phi.left, theta, fresh), _apply(phi.right, theta, fresh), phi.span)
    if isinstance(phi, Not):
        return Not(_apply(phi.body, theta, fresh), phi.span)
    if isinstance(phi, Exists):
        x = phi.var
        fv = free_vars(phi.body)
        inner = {v: t for v, t in theta.items() if v != x and v in fv}
        if not inner:
            return phi
        captured = any(x in iter_vars(t) for t in inner.values())
        body = phi.body
        if captured:
            y = fresh()
            body = _apply(body, {x: y}, fresh)
            x = y
        return Exists(x, _apply(body, inner, fresh), phi.span)
    return phi


def rename_formula(phi: Formula, mapping: Mapping[Var, Var]) -> Formula:
    """Rename variables everywhere, bound ones included (a bijection is assumed)."""
    if isinstance(phi, Eq):
        return Eq(rename_vars(phi.lhs, mapping), rename_vars(phi.rhs, mapping))
    if isinstance(phi, Atom):
        return Atom(phi.predicate, tuple(rename_vars(a, mapping) for a in phi.args))
    if isinstance(phi, And):
        return And(rename_formula(phi.left, mapping), rename_formula(phi.right, mapping))
    if isinstance(phi, Or):
        return Or(rename_formula(phi.left, mapping), rename_formula(phi.right, mapping))
    if isinstance(phi, Not):
        return Not(rename_formula(phi.body, mapping))
    if isinstance(phi, Exists):
        return Exists(mapping.get(phi.var, phi.var), rename_formula(phi.body, mapping))
    return phi


def formula_depth(phi: Formula) -> int:
    if isinstance(phi, (And, Or)):
        return 1 + max(formula_depth(phi.left), formula_depth(phi.right))
    if isinstance(phi, (Not, Exists)):
        return 1 + formula_depth(phi.body)
    return 0
