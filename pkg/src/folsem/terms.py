"""Generalized terms, signatures, algebras and J-evaluation.

A generalized term is a tree whose inner nodes are function applications
and whose leaves are variables, constants (arity-0 applications) or domain
values.  Evaluating a term with respect to an algebra collapses every
application whose arguments are all domain values into a single value; the
result is the evaluated normal form ("J-term").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Optional, Union


RESERVED_WORDS = frozenset({"exists", "true", "false"})


class MalformedInput(Exception):
    """Structural problem with user input (unknown symbol, wrong arity, ...).

    Never used for the semantic error state, which lives inside outcomes.
    """

    def __init__(self, message: str, span: Optional["SourceSpan"] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.message} (at {self.span.start}..{self.span.end})"


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets ``[start, end)`` into the parsed input."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")


@dataclass(frozen=True)
class Var:
    """A variable.  ``index`` is set only on generated (fresh) variables."""

    name: str
    index: Optional[int] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def is_fresh(self) -> bool:
        return self.index is not None

    def __str__(self) -> str:
        if self.index is None:
            return self.name
        return f"_{self.name}{self.index}"

    def sort_key(self) -> str:
        return str(self)


@dataclass(frozen=True)
class Val:
    """A domain value; the payload is owned by the algebra."""

    payload: Any


@dataclass(frozen=True)
class App:
    """Application of a function symbol.  Constants have no arguments."""

    symbol: str
    args: tuple = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


Term = Union[Var, Val, App]


class Signature:
    """Function and predicate symbols with their arities.

    With ``integer_literals`` every natural-number literal is an extra
    constant.  An ``open`` signature accepts any symbol; it is used when
    parsing without an interpretation.
    """

    def __init__(
        self,
        functions: Mapping[str, int] = (),
        predicates: Mapping[str, int] = (),
        integer_literals: bool = False,
        open: bool = False,
    ):
        self.functions = dict(functions)
        self.predicates = dict(predicates)
        self.integer_literals = integer_literals
        self.open = open
        for name, arity in list(self.functions.items()) + list(self.predicates.items()):
            if not isinstance(arity, int) or arity < 0:
                raise MalformedInput(f"symbol {name!r} has invalid arity {arity!r}")
        clash = set(self.functions) & set(self.predicates)
        if clash:
            raise MalformedInput(
                f"symbols declared both as function and predicate: {sorted(clash)}"
            )
        if "=" in self.predicates:
            raise MalformedInput("'=' is built in and cannot be declared as a predicate")

    def function_arity(self, name: str) -> Optional[int]:
        if name in self.functions:
            return self.functions[name]
        if self.integer_literals and name.isdigit():
            return 0
        return None

    def predicate_arity(self, name: str) -> Optional[int]:
        return self.predicates.get(name)

    def with_predicates(self, predicates: Mapping[str, int]) -> "Signature":
        return Signature(self.functions, predicates, self.integer_literals, self.open)

    def __repr__(self) -> str:
        return (
            f"Signature(functions={self.functions!r}, predicates={self.predicates!r}, "
            f"integer_literals={self.integer_literals})"
        )


class Algebra:
    """Domain plus total meanings for the function symbols.

    Subclasses implement :meth:`apply`; finite algebras also override
    :meth:`elements`.
    """

    signature: Signature

    def apply(self, symbol: str, args: tuple) -> Any:
        raise NotImplementedError

    def values_equal(self, a: Any, b: Any) -> bool:
        return a == b

    def elements(self) -> Optional[list]:
        """Duplicate-free list of domain payloads, or None if not enumerable."""
        return None

    def check_symbol(self, symbol: str, nargs: int, span=None) -> None:
        arity = self.signature.function_arity(symbol)
        if arity is None:
            raise MalformedInput(f"unknown function symbol {symbol!r}", span)
        if arity != nargs:
            raise MalformedInput(
                f"function symbol {symbol!r} has arity {arity}, got {nargs} arguments",
                span,
            )


def evaluate(t: Term, algebra: Algebra) -> Term:
    """Return the J-term of ``t``: every ground application collapsed to a value."""
    if isinstance(t, (Var, Val)):
        return t
    algebra.check_symbol(t.symbol, len(t.args), t.span)
    args = tuple(evaluate(a, algebra) for a in t.args)
    if all(isinstance(a, Val) for a in args):
        return Val(algebra.apply(t.symbol, tuple(a.payload for a in args)))
    return App(t.symbol, args)


def iter_vars(t: Term) -> Iterator[Var]:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            yield u
        elif isinstance(u, App):
            stack.extend(u.args)


def variables(t: Term) -> set:
    return set(iter_vars(t))


def occurs(x: Var, t: Term) -> bool:
    return any(v == x for v in iter_vars(t))


def is_ground(t: Term) -> bool:
    return next(iter_vars(t), None) is None


def jterm_equal(a: Term, b: Term, algebra: Algebra) -> bool:
    """Structural identity of two J-terms, comparing values with the algebra."""
    if isinstance(a, Val) and isinstance(b, Val):
        return algebra.values_equal(a.payload, b.payload)
    if isinstance(a, Var) and isinstance(b, Var):
        return a == b
    if isinstance(a, App) and isinstance(b, App):
        return (
            a.symbol == b.symbol
            and len(a.args) == len(b.args)
            and all(jterm_equal(x, y, algebra) for x, y in zip(a.args, b.args))
        )
    return False


def rename_vars(t: Term, mapping: Mapping[Var, Var]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, App):
        return App(t.symbol, tuple(rename_vars(a, mapping) for a in t.args))
    return t


def term_size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def all_vars(terms: Iterable[Term]) -> set:
    out = set()
    for t in terms:
        out.update(iter_vars(t))
    return out
