"""Expression and form grammar, parser, and canonical printers.

Expression grammar (whitespace-insensitive):

  expr   := ['-'] term (('+'|'-') term)*
  term   := factor ('*' factor)*
  factor := atom ('^' nat)*
  atom   := nat ['/' nat] | var | '(' expr ')'
  var    := 'x'<digit> | 'u'<digit> ['_' <digits>]

Jet indices are digit strings naming base variables, order-insensitive:
u1_21 and u1_12 denote the same coordinate.  Form literals extend the same
token stream with theta<digit>[_<digits>], dx<digit> and nu; '^' between
wedge factors is the exterior product, '^' followed by a number after a
scalar atom is a power.  nu expands to dx1 ^ ... ^ dxn.  A repeated wedge
factor collapses the term to zero with a RepeatedFactorWarning.

Printing is canonical: parse(print(value)) reproduces the identical value.
"""

from __future__ import annotations

import re
import warnings
from fractions import Fraction
from typing import NamedTuple

from .jetcore import Expr, JetContext, MultiIndex
from .forms import Form, WedgeMonomial, _canonical_factors


class ParseError(ValueError):
    """Syntax or range error, carrying 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class RepeatedFactorWarning(UserWarning):
    """A wedge monomial with a repeated factor was dropped as zero."""


class _Token(NamedTuple):
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<ident>[a-zA-Z]+\d*(?:_\d+)?)|(?P<op>[+\-*/^()])"
)

_IDENT_RE = re.compile(r"^([a-zA-Z]+)(\d*)(?:_(\d+))?$")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    last_nl = text.rfind("\n", 0, pos)
    return line, pos - last_nl


class _Parser:
    def __init__(self, text: str, ctx: JetContext):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept_op(self, *ops: str) -> str | None:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ops:
            self.i += 1
            return tok.text
        return None

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        line, col = _line_col(self.text, tok.pos)
        return ParseError(message, line, col)

    def expect_op(self, op: str) -> None:
        if not self.accept_op(op):
            raise self.error(f"expected {op!r}")

    def expect_end(self) -> None:
        if self.peek().kind != "end":
            raise self.error(f"unexpected trailing input {self.peek().text!r}")

    # -- identifiers ---------------------------------------------------------

    def classify(self, tok: _Token, allow_form: bool) -> tuple:
        m = _IDENT_RE.match(tok.text)
        name, digits, suffix = m.group(1), m.group(2), m.group(3)
        if name == "x":
            if not digits:
                raise self.error("x needs a base index, e.g. x1", tok)
            if suffix is not None:
                raise self.error("base variables take no jet index", tok)
            return ("x", self._base_index(digits, tok))
        if name == "u":
            if not digits:
                raise self.error("u needs a fibre index, e.g. u1", tok)
            return ("u", self._fibre_index(digits, tok), self._jet_index(suffix, tok))
        if not allow_form:
            raise self.error(f"unknown variable {tok.text!r} in an expression", tok)
        if name == "theta":
            if not digits:
                raise self.error("theta needs a fibre index, e.g. theta1", tok)
            return ("theta", self._fibre_index(digits, tok), self._jet_index(suffix, tok))
        if name == "dx":
            if not digits:
                raise self.error("dx needs a base index, e.g. dx1", tok)
            if suffix is not None:
                raise self.error("dx takes no jet index", tok)
            return ("dx", self._base_index(digits, tok))
        if name == "nu":
            if digits or suffix is not None:
                raise self.error("nu takes no indices", tok)
            return ("nu",)
        raise self.error(f"unknown token {tok.text!r}", tok)

    def _base_index(self, digits: str, tok: _Token) -> int:
        i = int(digits)
        if not 1 <= i <= self.ctx.n:
            raise self.error(f"base index {i} out of range 1..{self.ctx.n}", tok)
        return i

    def _fibre_index(self, digits: str, tok: _Token) -> int:
        a = int(digits)
        if not 1 <= a <= self.ctx.m:
            raise self.error(f"fibre index {a} out of range 1..{self.ctx.m}", tok)
        return a

    def _jet_index(self, suffix: str | None, tok: _Token) -> MultiIndex:
        exps = [0] * self.ctx.n
        if suffix:
            for ch in suffix:
                j = int(ch)
                if not 1 <= j <= self.ctx.n:
                    raise self.error(f"jet index digit {j} out of range 1..{self.ctx.n}", tok)
                exps[j - 1] += 1
        index = MultiIndex(exps)
        if index.order > self.ctx.max_order:
            raise self.error(
                f"jet order {index.order} above the cap {self.ctx.max_order}", tok
            )
        return index

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        negate = self.accept_op("-") is not None
        value = self.parse_term()
        if negate:
            value = -value
        while True:
            op = self.accept_op("+", "-")
            if op is None:
                return value
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs

    def parse_term(self) -> Expr:
        value = self.parse_factor()
        while self.accept_op("*"):
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> Expr:
        value = self.parse_atom()
        while self.accept_op("^"):
            tok = self.next()
            if tok.kind != "num":
                raise self.error("expected an integer exponent", tok)
            value = value ** int(tok.text)
        return value

    def parse_atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            value = Fraction(int(tok.text))
            if self.accept_op("/"):
                den = self.next()
                if den.kind != "num" or int(den.text) == 0:
                    raise self.error("expected a nonzero integer denominator", den)
                value /= int(den.text)
            return Expr.const(self.ctx, value)
        if tok.kind == "ident":
            kind = self.classify(tok, allow_form=False)
            if kind[0] == "x":
                return Expr.x(self.ctx, kind[1])
            return Expr.u(self.ctx, kind[1], kind[2])
        if tok.kind == "op" and tok.text == "(":
            value = self.parse_expr()
            self.expect_op(")")
            return value
        raise self.error(f"unexpected token {tok.text!r}" if tok.text else "unexpected end of input", tok)

    # -- forms -----------------------------------------------------------------

    def parse_form(self) -> Form:
        sign = -1 if self.accept_op("-") else 1
        coeff, factors = self.parse_form_term()
        terms = [(sign, coeff, factors)]
        while True:
            op = self.accept_op("+", "-")
            if op is None:
                break
            coeff, factors = self.parse_form_term()
            terms.append((1 if op == "+" else -1, coeff, factors))

        bidegrees = set()
        for _, _, factors in terms:
            r = sum(1 for f in factors if f[0] == 1)
            s = sum(1 for f in factors if f[0] == 0)
            bidegrees.add((r, s))
        if len(bidegrees) > 1:
            raise self.error(f"mixed bidegrees in one form literal: {sorted(bidegrees)}")
        r, s = bidegrees.pop()

        total = Form.zero(self.ctx, r, s)
        for sign, coeff, factors in terms:
            canon = _canonical_factors(factors)
            if canon is None:
                warnings.warn(
                    "repeated wedge factor collapses a term to zero",
                    RepeatedFactorWarning,
                    stacklevel=4,
                )
                continue
            parity, mono = canon
            value = coeff * (sign * parity)
            if value.is_zero():
                continue
            total = total + Form(self.ctx, r, s, {mono: value})
        return total

    def parse_form_term(self) -> tuple[Expr, list[tuple]]:
        """One wedge term: scalar factors fold into the coefficient, theta/dx/nu
        are collected as factors in written order."""
        coeff = Expr.const(self.ctx, 1)
        factors: list[tuple] = []
        pending: Expr | None = None  # scalar awaiting a possible power

        def flush() -> None:
            nonlocal coeff, pending
            if pending is not None:
                coeff = coeff * pending
                pending = None

        while True:
            tok = self.next()
            if tok.kind == "num":
                value = Fraction(int(tok.text))
                if self.accept_op("/"):
                    den = self.next()
                    if den.kind != "num" or int(den.text) == 0:
                        raise self.error("expected a nonzero integer denominator", den)
                    value /= int(den.text)
                flush()
                pending = Expr.const(self.ctx, value)
            elif tok.kind == "ident":
                kind = self.classify(tok, allow_form=True)
                if kind[0] == "x":
                    flush()
                    pending = Expr.x(self.ctx, kind[1])
                elif kind[0] == "u":
                    flush()
                    pending = Expr.u(self.ctx, kind[1], kind[2])
                elif kind[0] == "theta":
                    flush()
                    factors.append((0, kind[1], kind[2]))
                elif kind[0] == "dx":
                    flush()
                    factors.append((1, kind[1]))
                else:  # nu
                    flush()
                    factors.extend((1, i) for i in range(1, self.ctx.n + 1))
            elif tok.kind == "op" and tok.text == "(":
                flush()
                pending = self.parse_expr()
                self.expect_op(")")
            else:
                raise self.error(
                    f"unexpected token {tok.text!r}" if tok.text else "unexpected end of input",
                    tok,
                )

            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "^" and self.tokens[self.i + 1].kind == "num":
                if pending is None:
                    raise self.error("cannot raise a wedge factor to a power", nxt)
                self.next()
                exp = self.next()
                pending = pending ** int(exp.text)
                nxt = self.peek()
            if nxt.kind == "op" and nxt.text in ("*", "^"):
                self.next()
                continue
            flush()
            return coeff, factors


def parse_expr(text: str, ctx: JetContext) -> Expr:
    """Parse an expression literal into a canonical Expr."""
    parser = _Parser(text, ctx)
    value = parser.parse_expr()
    parser.expect_end()
    return value


def parse_form(text: str, ctx: JetContext) -> Form:
    """Parse a form literal into a canonical Form."""
    parser = _Parser(text, ctx)
    value = parser.parse_form()
    parser.expect_end()
    return value


# -- canonical printing ------------------------------------------------------


def _var_str(key: tuple) -> str:
    if key[0] == "x":
        return f"x{key[1]}"
    alpha, index = key[1], key[2]
    digits = index.digits()
    return f"u{alpha}_{digits}" if digits else f"u{alpha}"


def expr_to_str(f: Expr) -> str:
    """Canonical, reparseable rendering; terms sorted by monomial."""
    if f.is_zero():
        return "0"
    parts = []
    for mono, coeff in sorted(f.terms.items(), key=lambda kv: kv[0]):
        body = "*".join(
            _var_str(key) + (f"^{exp}" if exp > 1 else "") for key, exp in mono
        )
        mag = abs(coeff)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        parts.append((coeff < 0, text))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, text in parts[1:]:
        out += (" - " if negative else " + ") + text
    return out


def _monomial_str(ctx: JetContext, mono: WedgeMonomial) -> str:
    factors = []
    for c in mono.contact:
        digits = c.index.digits()
        factors.append(f"theta{c.alpha}_{digits}" if digits else f"theta{c.alpha}")
    if mono.horizontal == tuple(range(1, ctx.n + 1)):
        factors.append("nu")
    else:
        factors.extend(f"dx{i}" for i in mono.horizontal)
    return " ^ ".join(factors)


def form_to_str(w: Form) -> str:
    """Canonical, reparseable rendering; terms sorted by wedge monomial."""
    if w.is_zero():
        return "0"
    parts = []
    for mono, coeff in sorted(w.terms.items(), key=lambda kv: kv[0]):
        factors = _monomial_str(w.ctx, mono)
        if len(coeff.terms) > 1:
            text = f"({expr_to_str(coeff)})"
            negative = False
        else:
            text = expr_to_str(coeff)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            if text == "1":
                text = ""
        if factors:
            term = f"{text}*{factors}" if text else factors
        else:
            term = text or "1"
        parts.append((negative, term))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, term in parts[1:]:
        out += (" - " if negative else " + ") + term
    return out
