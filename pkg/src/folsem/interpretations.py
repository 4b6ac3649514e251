"""Concrete algebras and interpretations, plus the JSON description format.

Three algebras are provided:

* :class:`IntegerAlgebra` - arbitrary-precision integers with ``+``, binary
  and unary minus, ``*`` and a constant for every natural-number literal;
* :class:`HerbrandAlgebra` - ground terms over a signature, each symbol
  interpreted as itself;
* :class:`FiniteAlgebra` - named elements and total function tables.

An :class:`Interpretation` adds predicate relations on top of an algebra.
"""

from __future__ import annotations

import enum
import itertools
import json
from typing import Any, Mapping, Optional, Sequence

from .substitution import Subst, apply_term
from .terms import (
    Algebra,
    App,
    RESERVED_WORDS,
    MalformedInput,
    Signature,
    Term,
    Val,
    evaluate,
    is_ground,
)

INT_OPERATORS = {"+": 2, "-": 2, "*": 2, "neg": 1}


class UnsupportedOracle(Exception):
    """Raised when truth checking needs an enumerable domain and there is none."""


class IntegerAlgebra(Algebra):
    """Integers with the standard meanings of the arithmetic operators."""

    def __init__(self):
        self.signature = Signature(INT_OPERATORS, integer_literals=True)

    def apply(self, symbol: str, args: tuple) -> int:
        if symbol == "+":
            return args[0] + args[1]
        if symbol == "-":
            return args[0] - args[1]
        if symbol == "*":
            return args[0] * args[1]
        if symbol == "neg":
            return -args[0]
        if symbol.isdigit() and not args:
            return int(symbol)
        raise MalformedInput(f"unknown function symbol {symbol!r}")

    def __repr__(self) -> str:
        return "IntegerAlgebra()"


class HerbrandAlgebra(Algebra):
    """Ground terms over ``functions``; every symbol denotes itself."""

    def __init__(self, functions: Mapping[str, int]):
        self.signature = Signature(functions)
        if not any(a == 0 for a in self.signature.functions.values()):
            raise MalformedInput("a Herbrand algebra needs at least one constant")

    def apply(self, symbol: str, args: tuple) -> App:
        return App(symbol, tuple(args))

    def elements(self) -> Optional[list]:
        if any(a > 0 for a in self.signature.functions.values()):
            return None
        return [App(c) for c in self.signature.functions]

    def __repr__(self) -> str:
        return f"HerbrandAlgebra({self.signature.functions!r})"


class FiniteAlgebra(Algebra):
    """Named elements with total function tables.

    Every element name is also a constant denoting that element, unless a
    function of the same name is declared (which is rejected).
    """

    def __init__(self, elements: Sequence[str], tables: Mapping[str, tuple] = ()):
        elements = list(elements)
        if not elements:
            raise MalformedInput("the domain must be non-empty")
        if len(set(elements)) != len(elements):
            raise MalformedInput("duplicate domain elements")
        for e in elements:
            if not isinstance(e, str) or not _is_name(e):
                raise MalformedInput(f"invalid element name {e!r}")
        tables = dict(tables)
        clash = set(tables) & set(elements)
        if clash:
            raise MalformedInput(f"function names clash with element names: {sorted(clash)}")
        self._elements = elements
        self._element_set = frozenset(elements)
        self.tables = {}
        for name, (arity, table) in tables.items():
            if not _is_name(name):
                raise MalformedInput(f"invalid function name {name!r}")
            table = {tuple(k): v for k, v in dict(table).items()}
            for args in itertools.product(elements, repeat=arity):
                if args not in table:
                    raise MalformedInput(
                        f"table of {name!r} is partial: no entry for {list(args)}"
                    )
            for args, v in table.items():
                if len(args) != arity or not set(args) <= self._element_set:
                    raise MalformedInput(f"table of {name!r} has a bad key {list(args)}")
                if v not in self._element_set:
                    raise MalformedInput(f"table of {name!r} maps to unknown element {v!r}")
            self.tables[name] = (arity, table)
        functions = {e: 0 for e in elements}
        functions.update({n: a for n, (a, _) in self.tables.items()})
        self.signature = Signature(functions)

    def apply(self, symbol: str, args: tuple) -> str:
        if symbol in self.tables:
            return self.tables[symbol][1][args]
        if symbol in self._element_set and not args:
            return symbol
        raise MalformedInput(f"unknown function symbol {symbol!r}")

    def elements(self) -> list:
        return list(self._elements)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self._elements!r}, {sorted(self.tables)!r})"


def _is_name(s: str) -> bool:
    if s.isdigit():
        return True
    if s in RESERVED_WORDS:
        return False
    return bool(s) and (s[0].isalpha()) and all(c.isalnum() or c in "_'" for c in s)


class AtomStatus(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    NONGROUND = "nonground"


class Interpretation:
    """An algebra together with finite relations for the predicate symbols."""

    def __init__(self, algebra: Algebra, relations: Mapping[str, tuple] = ()):
        self.algebra = algebra
        self.relations = {}
        for name, (arity, tuples) in dict(relations).items():
            if not _is_name(name) or name.isdigit():
                raise MalformedInput(f"invalid predicate name {name!r}")
            tuples = frozenset(tuple(t) for t in tuples)
            for tup in tuples:
                if len(tup) != arity:
                    raise MalformedInput(f"tuple {list(tup)} of {name!r} has wrong length")
            self.relations[name] = (arity, tuples)
        self.signature = algebra.signature.with_predicates(
            {n: a for n, (a, _) in self.relations.items()}
        )
        self._source: Optional[dict] = None

    def holds(self, predicate: str, values: tuple) -> bool:
        return values in self.relations[predicate][1]

    def check_predicate(self, predicate: str, nargs: int, span=None) -> None:
        arity = self.signature.predicate_arity(predicate)
        if arity is None:
            raise MalformedInput(f"unknown predicate symbol {predicate!r}", span)
        if arity != nargs:
            raise MalformedInput(
                f"predicate {predicate!r} has arity {arity}, got {nargs} arguments", span
            )

    def to_document(self) -> dict:
        if self._source is None:
            raise ValueError("interpretation has no document form")
        return self._source

    def __repr__(self) -> str:
        return f"Interpretation({self.algebra!r}, predicates={sorted(self.relations)!r})"


def atom_status(
    predicate: str, args: Sequence[Term], theta: Subst, interp: Interpretation
) -> AtomStatus:
    """Status of ``p(args) theta``: true, false, or nonground."""
    interp.check_predicate(predicate, len(args))
    values = []
    for a in args:
        inst = apply_term(a, theta)
        if not is_ground(inst):
            return AtomStatus.NONGROUND
        values.append(evaluate(inst, interp.algebra))
    tup = tuple(v.payload for v in values)
    return AtomStatus.TRUE if interp.holds(predicate, tup) else AtomStatus.FALSE


def enumerate_domain(interp: Interpretation | Algebra) -> Optional[list]:
    """The domain as a list of values, or None when it is not enumerable."""
    algebra = interp.algebra if isinstance(interp, Interpretation) else interp
    elems = algebra.elements()
    if elems is None:
        return None
    return [Val(e) for e in elems]


def integer_interpretation(relations: Mapping[str, tuple] = ()) -> Interpretation:
    interp = Interpretation(IntegerAlgebra(), relations)
    interp._source = {
        "domain": "int",
        "predicates": {n: {"arity": a, "tuples": sorted(list(t) for t in ts)}
                       for n, (a, ts) in interp.relations.items()},
    }
    return interp


def finite_interpretation(
    elements: Sequence[str],
    functions: Mapping[str, tuple] = (),
    relations: Mapping[str, tuple] = (),
) -> Interpretation:
    """Build a finite interpretation.

    ``functions`` maps names to ``(arity, {args_tuple: element})`` and
    ``relations`` maps names to ``(arity, iterable of tuples)``.
    """
    algebra = FiniteAlgebra(elements, functions)
    for name, (arity, tuples) in dict(relations).items():
        for tup in tuples:
            for v in tup:
                if v not in algebra._element_set:
                    raise MalformedInput(f"tuple of {name!r} mentions unknown element {v!r}")
    interp = Interpretation(algebra, relations)
    interp._source = {
        "domain": list(elements),
        "functions": {
            n: {"arity": a, "table": [[list(k), v] for k, v in sorted(t.items())]}
            for n, (a, t) in sorted(algebra.tables.items())
        },
        "predicates": {
            n: {"arity": a, "tuples": sorted(list(t) for t in ts)}
            for n, (a, ts) in sorted(interp.relations.items())
        },
    }
    return interp


def herbrand_interpretation(
    functions: Mapping[str, int], relations: Mapping[str, tuple] = ()
) -> Interpretation:
    """Herbrand interpretation; relation tuples hold ground terms (App values)."""
    from .syntax import print_term

    algebra = HerbrandAlgebra(functions)
    checked = {}
    for name, (arity, tuples) in dict(relations).items():
        rows = []
        for tup in tuples:
            row = []
            for t in tup:
                if not isinstance(t, App) or not is_ground(t):
                    raise MalformedInput(f"tuple of {name!r} must contain ground terms")
                row.append(evaluate(t, algebra).payload)
            rows.append(tuple(row))
        checked[name] = (arity, rows)
    interp = Interpretation(algebra, checked)
    interp._source = {
        "domain": "herbrand",
        "functions": {n: {"arity": a} for n, a in sorted(algebra.signature.functions.items())},
        "predicates": {
            n: {"arity": a, "tuples": sorted([print_term(v) for v in t] for t in ts)}
            for n, (a, ts) in sorted(interp.relations.items())
        },
    }
    return interp


def _table_entries(name: str, arity: int, spec: Any) -> dict:
    if arity == 0 and isinstance(spec, str):
        return {(): spec}
    if isinstance(spec, dict):
        out = {}
        for key, v in spec.items():
            args = tuple(k.strip() for k in key.split(",")) if key.strip() else ()
            out[args] = v
        return out
    if isinstance(spec, list):
        out = {}
        for entry in spec:
            if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
                raise MalformedInput(f"table of {name!r}: entries must be [[args...], value]")
            key = tuple(entry[0])
            if key in out:
                raise MalformedInput(f"table of {name!r} lists {list(key)} twice")
            out[key] = entry[1]
        return out
    raise MalformedInput(f"table of {name!r} has unsupported form")


def _arity(name: str, spec: Any) -> int:
    if not isinstance(spec, dict) or "arity" not in spec:
        raise MalformedInput(f"symbol {name!r} needs an 'arity' field")
    arity = spec["arity"]
    if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
        raise MalformedInput(f"symbol {name!r} has invalid arity {arity!r}")
    return arity


def interpretation_from_document(doc: Mapping) -> Interpretation:
    """Build an interpretation from its JSON description (see docs/)."""
    from .syntax import parse_term

    if not isinstance(doc, Mapping) or "domain" not in doc:
        raise MalformedInput("interpretation document needs a 'domain' field")
    domain = doc["domain"]
    functions = doc.get("functions", {}) or {}
    predicates = doc.get("predicates", {}) or {}
    if not isinstance(functions, Mapping) or not isinstance(predicates, Mapping):
        raise MalformedInput("'functions' and 'predicates' must be objects")
    clash = set(functions) & set(predicates)
    if clash:
        raise MalformedInput(f"symbols declared twice: {sorted(clash)}")
    pred_arities = {n: _arity(n, s) for n, s in predicates.items()}

    def tuples_of(name):
        rows = predicates[name].get("tuples", [])
        if not isinstance(rows, list):
            raise MalformedInput(f"tuples of {name!r} must be a list")
        for r in rows:
            if not isinstance(r, list) or len(r) != pred_arities[name]:
                raise MalformedInput(f"tuple {r!r} of {name!r} has wrong length")
        return rows

    if domain == "int":
        if functions:
            raise MalformedInput("the integer algebra has fixed function symbols")
        algebra = IntegerAlgebra()
        relations = {}
        for name in predicates:
            rows = []
            for r in tuples_of(name):
                row = []
                for v in r:
                    if isinstance(v, bool):
                        raise MalformedInput(f"bad integer {v!r} in {name!r}")
                    if isinstance(v, int):
                        row.append(v)
                    elif isinstance(v, str):
                        t = evaluate(parse_term(v, algebra.signature), algebra)
                        if not isinstance(t, Val):
                            raise MalformedInput(f"tuple value {v!r} of {name!r} is not ground")
                        row.append(t.payload)
                    else:
                        raise MalformedInput(f"bad integer {v!r} in {name!r}")
                rows.append(tuple(row))
            relations[name] = (pred_arities[name], rows)
        return integer_interpretation(relations)

    if domain == "herbrand":
        arities = {n: _arity(n, s) for n, s in functions.items()}
        for n in arities:
            if not _is_name(n) or n.isdigit():
                raise MalformedInput(f"invalid function name {n!r}")
        sig = Signature(arities)
        relations = {}
        for name in predicates:
            rows = []
            for r in tuples_of(name):
                if not all(isinstance(v, str) for v in r):
                    raise MalformedInput(f"Herbrand tuples of {name!r} must be term strings")
                rows.append(tuple(parse_term(v, sig) for v in r))
            relations[name] = (pred_arities[name], rows)
        return herbrand_interpretation(arities, relations)

    if isinstance(domain, list):
        tables = {}
        for name, spec in functions.items():
            arity = _arity(name, spec)
            if "table" not in spec:
                raise MalformedInput(f"function {name!r} needs a 'table'")
            tables[name] = (arity, _table_entries(name, arity, spec["table"]))
        relations = {n: (pred_arities[n], [tuple(r) for r in tuples_of(n)]) for n in predicates}
        return finite_interpretation(domain, tables, relations)

    raise MalformedInput(f"unsupported domain {domain!r}; use a list of names, 'int' or 'herbrand'")


def load_interpretation(source: str) -> Interpretation:
    """Load from a JSON file path; the bare word ``int`` names the integers."""
    if source == "int":
        return integer_interpretation()
    try:
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read interpretation {source!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"interpretation {source!r} is not valid JSON: {exc}") from exc
    return interpretation_from_document(doc)


def dump_interpretation(interp: Interpretation) -> str:
    return json.dumps(interp.to_document(), sort_keys=True)

