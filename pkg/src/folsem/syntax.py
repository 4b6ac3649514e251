"""Concrete syntax: tokenizer, parser and canonical printer.

Grammar (see docs/grammar.md)::

    formula  := disj
    disj     := conj ( "|" disj )?
    conj     := unary ( "&" conj )?
    unary    := "~" unary | "exists" VAR disj | primary
    primary  := "true" | "false" | "(" formula ")"
              | term "=" term | PRED [ "(" term { "," term } ")" ]
    term     := prod { ("+" | "-") prod }
    prod     := neg { "*" neg }
    neg      := "-" neg | atom
    atom     := NUMBER | IDENT [ "(" term { "," term } ")" ] | "(" term ")"

Unicode input is accepted for the connectives (the ASCII forms are
canonical).  Identifiers starting with ``_`` are reserved for generated
variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .formulas import And, Atom, Bottom, Eq, Exists, Formula, Not, Or, Top
from .substitution import Subst
from .terms import (
    RESERVED_WORDS,
    Algebra,
    App,
    MalformedInput,
    Signature,
    SourceSpan,
    Term,
    Val,
    Var,
    evaluate,
)


class ParseError(MalformedInput):
    """Syntax or signature error, always carrying a span inside the input."""


OPEN_SIGNATURE = Signature(integer_literals=True, open=True)

_UNICODE = {"∧": "&", "∨": "|", "¬": "~", "·": "*", "−": "-", "∃": "exists"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<fresh>_[A-Za-z]+\d+(?![A-Za-z0-9_']))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[()=,&|~*+\-{}/;]|[∧∨¬·−∃])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, fresh, ident, kw, sym, eof
    text: str
    span: SourceSpan


def tokenize(text: str) -> list:
    # byte offset of every character position, for spans
    offsets = [0]
    for ch in text:
        offsets.append(offsets[-1] + len(ch.encode("utf-8")))
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", SourceSpan(offsets[pos], offsets[pos + 1])
            )
        kind = m.lastgroup
        tok = m.group()
        span = SourceSpan(offsets[m.start()], offsets[m.end()])
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "sym" and tok in _UNICODE:
            tok = _UNICODE[tok]
            kind = "kw" if tok == "exists" else "sym"
        elif kind == "ident" and tok in RESERVED_WORDS:
            kind = "kw"
        tokens.append(Token(kind, tok, span))
    end = offsets[-1]
    tokens.append(Token("eof", "", SourceSpan(end, end)))
    return tokens


# Raw term nodes produced before symbols are resolved against a signature.
@dataclass
class _RawApp:
    name: str
    args: Optional[list]
    span: SourceSpan
    bare: bool = True  # written as NAME or NAME(...), not parenthesized/operator


@dataclass
class _RawNum:
    text: str
    span: SourceSpan


@dataclass
class _RawFresh:
    var: Var
    span: SourceSpan


@dataclass
class _RawOp:
    symbol: str
    args: list
    span: SourceSpan


_Raw = Union[_RawApp, _RawNum, _RawFresh, _RawOp]


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.start, b.end)


class Parser:
    def __init__(self, text: str, signature: Signature, allow_fresh: bool = False):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.sig = signature
        self.allow_fresh = allow_fresh
        # arities seen so far when the signature is open
        self.seen_functions: dict = {}
        self.seen_predicates: dict = {}

    # -- token helpers --------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message: str, span: Optional[SourceSpan] = None) -> ParseError:
        t = self.tok
        if span is None:
            span = t.span
            found = "end of input" if t.kind == "eof" else repr(t.text)
            message = f"{message}, found {found}"
        return ParseError(message, span)

    def expect_end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error("expected end of input")

    # -- terms ------------------------------------------------------------
    def raw_term(self) -> _Raw:
        left = self.raw_prod()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.raw_prod()
            left = _RawOp(op, [left, right], _join(left.span, right.span))
        return left

    def raw_prod(self) -> _Raw:
        left = self.raw_neg()
        while self.at("*"):
            self.advance()
            right = self.raw_neg()
            left = _RawOp("*", [left, right], _join(left.span, right.span))
        return left

    def raw_neg(self) -> _Raw:
        if self.at("-"):
            start = self.advance().span
            arg = self.raw_neg()
            return _RawOp("neg", [arg], _join(start, arg.span))
        return self.raw_atom()

    def raw_atom(self) -> _Raw:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return _RawNum(t.text, t.span)
        if t.kind == "fresh":
            self.advance()
            m = re.fullmatch(r"_([A-Za-z]+)(\d+)", t.text)
            return _RawFresh(Var(m.group(1), int(m.group(2)), t.span), t.span)
        if t.kind == "ident":
            self.advance()
            if t.text.startswith("_"):
                raise ParseError(
                    f"identifier {t.text!r} uses the reserved '_' prefix", t.span
                )
            if self.at("("):
                self.advance()
                args = [self.raw_term()]
                while self.at(","):
                    self.advance()
                    args.append(self.raw_term())
                close = self.expect(")")
                return _RawApp(t.text, args, _join(t.span, close.span))
            return _RawApp(t.text, None, t.span)
        if self.at("("):
            start = self.advance().span
            inner = self.raw_term()
            close = self.expect(")")
            if isinstance(inner, _RawApp):
                inner.bare = False
            inner.span = _join(start, close.span)
            return inner
        raise self.error("expected a term")

    def resolve(self, raw: _Raw) -> Term:
        sig = self.sig
        if isinstance(raw, _RawFresh):
            if not self.allow_fresh:
                raise ParseError(
                    f"identifier {raw.var} uses the reserved '_' prefix", raw.span
                )
            return raw.var
        if isinstance(raw, _RawNum):
            if sig.function_arity(raw.text) == 0:
                return App(raw.text, (), raw.span)
            raise ParseError(
                f"integer literal {raw.text} needs the integer algebra", raw.span
            )
        if isinstance(raw, _RawOp):
            args = tuple(self.resolve(a) for a in raw.args)
            self._check_function(raw.symbol, len(args), raw.span)
            return App(raw.symbol, args, raw.span)
        name = raw.name
        if raw.args is None:
            if sig.predicate_arity(name) is not None or name in self.seen_predicates:
                raise ParseError(f"predicate {name!r} used as a term", raw.span)
            arity = sig.function_arity(name)
            if arity == 0:
                return App(name, (), raw.span)
            if arity is not None:
                raise ParseError(
                    f"function symbol {name!r} has arity {arity}, got 0 arguments", raw.span
                )
            return Var(name, None, raw.span)
        args = tuple(self.resolve(a) for a in raw.args)
        self._check_function(name, len(args), raw.span)
        return App(name, args, raw.span)

    def _check_function(self, name: str, nargs: int, span: SourceSpan) -> None:
        sig = self.sig
        if sig.predicate_arity(name) is not None or name in self.seen_predicates:
            raise ParseError(f"predicate {name!r} used as a function", span)
        arity = sig.function_arity(name)
        if arity is None and sig.open:
            arity = self.seen_functions.setdefault(name, nargs)
        if arity is None:
            raise ParseError(f"unknown function symbol {name!r}", span)
        if arity != nargs:
            raise ParseError(
                f"function symbol {name!r} has arity {arity}, got {nargs} arguments", span
            )

    def _atom(self, raw: _RawApp) -> Atom:
        sig = self.sig
        name = raw.name
        args = tuple(self.resolve(a) for a in (raw.args or []))
        arity = sig.predicate_arity(name)
        if arity is None and sig.open and sig.function_arity(name) is None:
            if name in self.seen_functions:
                raise ParseError(f"function symbol {name!r} used as a predicate", raw.span)
            arity = self.seen_predicates.setdefault(name, len(args))
        if arity is None:
            if sig.function_arity(name) is not None:
                raise ParseError(f"function symbol {name!r} used as a predicate", raw.span)
            raise ParseError(f"unknown predicate symbol {name!r}", raw.span)
        if arity != len(args):
            raise ParseError(
                f"predicate {name!r} has arity {arity}, got {len(args)} arguments", raw.span
            )
        return Atom(name, args, raw.span)

    def term(self) -> Term:
        return self.resolve(self.raw_term())

    # -- formulas ---------------------------------------------------------
    def formula(self) -> Formula:
        return self.disj()

    def disj(self) -> Formula:
        left = self.conj()
        if self.at("|"):
            self.advance()
            right = self.disj()
            return Or(left, right, _join(left.span, right.span))
        return left

    def conj(self) -> Formula:
        left = self.unary()
        if self.at("&"):
            self.advance()
            right = self.conj()
            return And(left, right, _join(left.span, right.span))
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            start = self.advance().span
            body = self.unary()
            return Not(body, _join(start, body.span))
        if self.at("exists"):
            start = self.advance().span
            t = self.tok
            if t.kind == "fresh" and self.allow_fresh:
                self.advance()
                m = re.fullmatch(r"_([A-Za-z]+)(\d+)", t.text)
                var = Var(m.group(1), int(m.group(2)), t.span)
            elif t.kind == "ident":
                self.advance()
                if t.text.startswith("_"):
                    raise ParseError(f"identifier {t.text!r} uses the reserved '_' prefix", t.span)
                sig = self.sig
                if sig.function_arity(t.text) is not None or sig.predicate_arity(t.text) is not None:
                    raise ParseError(f"cannot quantify over symbol {t.text!r}", t.span)
                var = Var(t.text, None, t.span)
            else:
                raise self.error("expected a variable after 'exists'")
            body = self.disj()
            return Exists(var, body, _join(start, body.span))
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if self.at("true"):
            self.advance()
            return Top(t.span)
        if self.at("false"):
            self.advance()
            return Bottom(t.span)
        start = self.pos
        term_error = None
        try:
            raw = self.raw_term()
        except ParseError as exc:
            term_error = exc
        else:
            if self.at("="):
                self.advance()
                lhs = self.resolve(raw)
                rhs_raw = self.raw_term()
                rhs = self.resolve(rhs_raw)
                return Eq(lhs, rhs, _join(raw.span, rhs_raw.span))
            if isinstance(raw, _RawApp) and raw.bare:
                return self._atom(raw)
        if not self.tokens[start].text == "(" or self.tokens[start].kind != "sym":
            if term_error is not None:
                raise term_error
            raise self.error("expected '=' or a predicate")
        self.pos = start
        open_span = self.advance().span
        try:
            inner = self.formula()
            close = self.expect(")")
        except ParseError as exc:
            if term_error is not None and term_error.span.start > exc.span.start:
                raise term_error
            raise
        return _rewrap(inner, _join(open_span, close.span))

    # -- substitutions ----------------------------------------------------
    def subst_bindings(self) -> list:
        self.expect("{")
        out = []
        if self.at("}"):
            self.advance()
            return out
        while True:
            t = self.tok
            raw = self.raw_atom()
            var = self.resolve(raw)
            if not isinstance(var, Var):
                raise ParseError("expected a variable on the left of '/'", t.span)
            self.expect("/")
            out.append((var, self.term()))
            if self.at(","):
                self.advance()
                continue
            self.expect("}")
            return out


def _rewrap(phi: Formula, span: SourceSpan) -> Formula:
    # keep the node but widen its span to the parentheses
    return type(phi)(**{**phi.__dict__, "span": span})


def parse_term(text: str, signature: Signature = OPEN_SIGNATURE, allow_fresh: bool = False) -> Term:
    p = Parser(text, signature, allow_fresh)
    t = p.term()
    p.expect_end()
    return t


def parse_formula(
    text: str, signature: Signature = OPEN_SIGNATURE, allow_fresh: bool = False
) -> Formula:
    p = Parser(text, signature, allow_fresh)
    phi = p.formula()
    p.expect_end()
    return phi


def parse_subst(text: str, algebra: Algebra, allow_fresh: bool = False) -> Subst:
    """Parse ``{x/t, ...}``; range terms are evaluated to J-terms."""
    p = Parser(text, getattr(algebra, "signature", OPEN_SIGNATURE), allow_fresh)
    start = p.tok.span
    bindings = p.subst_bindings()
    p.expect_end()
    m = {}
    for var, t in bindings:
        if var in m:
            raise ParseError(f"variable {var} is bound twice", var.span or start)
        h = evaluate(t, algebra)
        if h == var:
            raise ParseError(f"binding {var}/{var} is not allowed", var.span or start)
        m[var] = h
    return Subst(m)


def parse_outcome(text: str, algebra: Algebra, allow_fresh: bool = True):
    """Inverse of :func:`print_outcome`."""
    from .semantics import Outcome
    from .substitution import Answer, EMPTY

    parts = [s.strip() for s in _split_top(text, ";")]
    if parts == ["fail"]:
        return Outcome()
    answers = []
    error = False
    for i, part in enumerate(parts):
        if part == "error":
            if i != len(parts) - 1:
                raise ParseError("'error' must come last", SourceSpan(0, len(text.encode())))
            error = True
            continue
        answers.append(Answer(parse_subst(part, algebra, allow_fresh), EMPTY))
    return Outcome(tuple(answers), error)


def _split_top(text: str, sep: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


# -- printing --------------------------------------------------------------

_INFIX = {"+": (1, 1, 2), "-": (1, 1, 2), "*": (2, 2, 3)}  # prec, left, right


def _value_text(payload) -> tuple:
    if isinstance(payload, bool):
        return str(payload).lower(), 4
    if isinstance(payload, int):
        return str(payload), (3 if payload < 0 else 4)
    if isinstance(payload, App):
        return _term(payload, 0), _term_prec(payload)
    return str(payload), 4


def _term_prec(t: Term) -> int:
    if isinstance(t, App):
        if t.symbol in _INFIX and len(t.args) == 2:
            return _INFIX[t.symbol][0]
        if t.symbol == "neg" and len(t.args) == 1:
            return 3
        return 4
    if isinstance(t, Val):
        return _value_text(t.payload)[1]
    return 4


def _term(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        s = str(t)
    elif isinstance(t, Val):
        s = _value_text(t.payload)[0]
    elif t.symbol in _INFIX and len(t.args) == 2:
        _, lp, rp = _INFIX[t.symbol]
        s = f"{_term(t.args[0], lp)} {t.symbol} {_term(t.args[1], rp)}"
    elif t.symbol == "neg" and len(t.args) == 1:
        inner = _term(t.args[0], 3)
        s = f"-{inner}" if not inner.startswith("-") else f"- {inner}"
    elif not t.args:
        s = t.symbol
    else:
        s = f"{t.symbol}({', '.join(_term(a, 0) for a in t.args)})"
    if _term_prec(t) < ctx:
        return f"({s})"
    return s


def print_term(t: Term) -> str:
    return _term(t, 0)


def _formula(phi: Formula, ctx: int) -> str:
    # precedences: | 1, & 2, ~ 3, atoms 4; exists is parenthesized unless top
    if isinstance(phi, Eq):
        return f"{print_term(phi.lhs)} = {print_term(phi.rhs)}"
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.predicate
        return f"{phi.predicate}({', '.join(print_term(a) for a in phi.args)})"
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Not):
        return f"~{_formula(phi.body, 4)}"
    if isinstance(phi, And):
        s, prec = f"{_formula(phi.left, 3)} & {_formula(phi.right, 2)}", 2
    elif isinstance(phi, Or):
        s, prec = f"{_formula(phi.left, 2)} | {_formula(phi.right, 1)}", 1
    elif isinstance(phi, Exists):
        s, prec = f"exists {phi.var} ({_formula(phi.body, 0)})", 0
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return f"({s})" if prec < ctx else s


def print_formula(phi: Formula) -> str:
    return _formula(phi, 0)


def print_subst(theta) -> str:
    return "{" + ", ".join(f"{x}/{print_term(t)}" for x, t in theta.items()) + "}"


def print_outcome(outcome) -> str:
    parts = [print_subst(a.full) for a in outcome.answers]
    if outcome.error:
        parts.append("error")
    return "; ".join(parts) if parts else "fail"


def render_tree(node, indent: int = 0) -> str:
    """Indented AST dump used by ``folsem parse --tree``."""
    pad = "  " * indent
    if isinstance(node, Var):
        return f"{pad}Var {node}"
    if isinstance(node, Val):
        return f"{pad}Value {_value_text(node.payload)[0]}"
    if isinstance(node, App):
        lines = [f"{pad}App {node.symbol}"]
        lines += [render_tree(a, indent + 1) for a in node.args]
        return "\n".join(lines)
    if isinstance(node, Eq):
        return "\n".join([f"{pad}Eq", render_tree(node.lhs, indent + 1), render_tree(node.rhs, indent + 1)])
    if isinstance(node, Atom):
        lines = [f"{pad}Atom {node.predicate}"]
        lines += [render_tree(a, indent + 1) for a in node.args]
        return "\n".join(lines)
    if isinstance(node, (And, Or)):
        return "\n".join(
            [f"{pad}{type(node).__name__}", render_tree(node.left, indent + 1), render_tree(node.right, indent + 1)]
        )
    if isinstance(node, Not):
        return "\n".join([f"{pad}Not", render_tree(node.body, indent + 1)])
    if isinstance(node, Exists):
        return "\n".join([f"{pad}Exists {node.var}", render_tree(node.body, indent + 1)])
    return f"{pad}{type(node).__name__}"
