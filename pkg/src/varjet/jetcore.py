"""Exact polynomial algebra over jet coordinates.

The coordinate ring is the polynomial ring over the rationals in the base
variables x^1..x^n and the jet variables u^alpha_I, where alpha = 1..m labels
the fibre coordinate and I is an unordered multi-index (an exponent vector of
length n counting derivatives per base variable).  An expression is stored as
a dict from monomials to nonzero Fraction coefficients:

  monomial = tuple of (variable key, exponent) pairs, sorted by key
  variable key = ("x", i)  or  ("u", alpha, MultiIndex)

Zero coefficients are never stored and monomial keys are unique, so two
expressions are mathematically equal iff their dicts are equal.  Everything
here is immutable after construction; all operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator


@dataclass(frozen=True)
class JetContext:
    """Fixed per-session configuration: base dimension n, fibre dimension m,
    and the cap on jet order accepted from user input."""

    n: int
    m: int
    max_order: int = 4

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.max_order < 0:
            raise ValueError(f"max_order must be non-negative, got {self.max_order}")


class MultiIndex(tuple):
    """Unordered multi-index: exponent vector over the base variables.

    Entry j-1 counts derivatives along x^j.  Derivatives commute, so this is
    the only representation of a multi-index anywhere in the system.
    """

    def __new__(cls, exponents: Iterable[int]) -> "MultiIndex":
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative entry in multi-index {exps}")
        return super().__new__(cls, exps)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @property
    def order(self) -> int:
        return sum(self)

    def bump(self, j: int) -> "MultiIndex":
        """Append one derivative along x^j (1-based), i.e. I -> Ij."""
        if not 1 <= j <= len(self):
            raise ValueError(f"base index {j} out of range 1..{len(self)}")
        return MultiIndex(e + 1 if k == j - 1 else e for k, e in enumerate(self))

    def contains(self, other: "MultiIndex") -> bool:
        if len(self) != len(other):
            raise ValueError("multi-index dimension mismatch")
        return all(a >= b for a, b in zip(self, other))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        if not self.contains(other):
            raise ValueError(f"{other} not contained in {self}")
        return MultiIndex(a - b for a, b in zip(self, other))

    def digits(self) -> str:
        """Nondecreasing digit string, e.g. (2, 1) -> '112'."""
        return "".join(str(j + 1) * e for j, e in enumerate(self))

    def __repr__(self) -> str:
        return f"MultiIndex{tuple(self)}"


def mi_binom(J: MultiIndex, I: MultiIndex) -> int:
    """Componentwise product of binomial coefficients, prod_k C(J_k, I_k).

    Zero when I is not contained in J componentwise.  This is the coefficient
    in the higher Euler derivatives for sums over unordered multi-indices
    taken once each.
    """
    if len(J) != len(I):
        raise ValueError("multi-index dimension mismatch")
    out = 1
    for a, b in zip(J, I):
        if b > a:
            return 0
        out *= comb(a, b)
    return out


def multi_indices(n: int, order: int) -> Iterator[MultiIndex]:
    """All multi-indices of dimension n with |I| = order, each exactly once."""
    if order == 0:
        yield MultiIndex.zero(n)
        return
    for cuts in itertools.combinations(range(order + n - 1), n - 1):
        exps = []
        prev = -1
        for c in cuts:
            exps.append(c - prev - 1)
            prev = c
        exps.append(order + n - 2 - prev)
        yield MultiIndex(exps)


def multi_indices_upto(n: int, max_order: int) -> Iterator[MultiIndex]:
    for k in range(max_order + 1):
        yield from multi_indices(n, k)


# Variable keys inside monomials.  Tuples of unequal kinds compare on the tag
# first, so mixed sorts are deterministic.
def x_key(i: int) -> tuple:
    return ("x", i)


def u_key(alpha: int, index: MultiIndex) -> tuple:
    return ("u", alpha, index)


_ONE: tuple = ()  # empty monomial


def _mono_mul(a: tuple, b: tuple) -> tuple:
    """Merge two sorted (key, exp) tuples."""
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for key, exp in b:
        out[key] = out.get(key, 0) + exp
    return tuple(sorted(out.items()))


class Expr:
    """Canonical multivariate polynomial over the jet coordinates."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: JetContext, terms: dict):
        self.ctx = ctx
        self.terms = terms

    # -- construction ------------------------------------------------------

    @classmethod
    def _make(cls, ctx: JetContext, terms: dict) -> "Expr":
        return cls(ctx, {m: c for m, c in terms.items() if c != 0})

    @classmethod
    def zero(cls, ctx: JetContext) -> "Expr":
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx: JetContext, value) -> "Expr":
        c = Fraction(value)
        return cls(ctx, {_ONE: c} if c else {})

    @classmethod
    def x(cls, ctx: JetContext, i: int) -> "Expr":
        if not 1 <= i <= ctx.n:
            raise ValueError(f"base index {i} out of range 1..{ctx.n}")
        return cls(ctx, {((x_key(i), 1),): Fraction(1)})

    @classmethod
    def u(cls, ctx: JetContext, alpha: int, index: MultiIndex | None = None) -> "Expr":
        if not 1 <= alpha <= ctx.m:
            raise ValueError(f"fibre index {alpha} out of range 1..{ctx.m}")
        if index is None:
            index = MultiIndex.zero(ctx.n)
        if len(index) != ctx.n:
            raise ValueError("multi-index dimension mismatch")
        return cls(ctx, {((u_key(alpha, index), 1),): Fraction(1)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def jet_order(self) -> int:
        """Max |I| over the jet variables appearing; 0 when none appear."""
        order = 0
        for mono in self.terms:
            for key, _ in mono:
                if key[0] == "u":
                    order = max(order, key[2].order)
        return order

    def jet_vars(self) -> set[tuple[int, MultiIndex]]:
        """The set of (alpha, I) with u^alpha_I appearing in some monomial."""
        out = set()
        for mono in self.terms:
            for key, _ in mono:
                if key[0] == "u":
                    out.add((key[1], key[2]))
        return out

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Expr | None":
        if isinstance(other, Expr):
            if other.ctx != self.ctx:
                raise ValueError("mixing expressions from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.const(self.ctx, other)
        return None

    def __add__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in rhs.terms.items():
            new = out.get(mono, 0) + c
            if new:
                out[mono] = new
            else:
                out.pop(mono, None)
        return Expr(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Expr":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Expr.zero(self.ctx)
            return Expr(self.ctx, {m: v * c for m, v in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in rhs.terms.items():
                mono = _mono_mul(m1, m2)
                new = out.get(mono, 0) + c1 * c2
                if new:
                    out[mono] = new
                else:
                    out.pop(mono, None)
        return Expr(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Expr":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Expr.const(self.ctx, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Expr)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-dict payload; equality is structural

    def __repr__(self) -> str:
        return f"Expr({self})"

    def __str__(self) -> str:
        from .parser import expr_to_str

        return expr_to_str(self)


def is_zero(f: Expr) -> bool:
    """Exact zero test: true iff f is the zero polynomial."""
    return f.is_zero()


def partial_x(f: Expr, i: int) -> Expr:
    """Partial derivative with respect to the base variable x^i."""
    if not 1 <= i <= f.ctx.n:
        raise ValueError(f"base index {i} out of range 1..{f.ctx.n}")
    return _partial(f, x_key(i))


def partial_jet(f: Expr, alpha: int, index: MultiIndex) -> Expr:
    """Partial derivative with respect to the single coordinate u^alpha_I.

    All other jet coordinates count as independent.
    """
    if not 1 <= alpha <= f.ctx.m:
        raise ValueError(f"fibre index {alpha} out of range 1..{f.ctx.m}")
    if len(index) != f.ctx.n:
        raise ValueError("multi-index dimension mismatch")
    return _partial(f, u_key(alpha, index))


def _partial(f: Expr, key: tuple) -> Expr:
    out: dict = {}
    for mono, c in f.terms.items():
        for pos, (k, exp) in enumerate(mono):
            if k == key:
                rest = mono[:pos] + ((k, exp - 1),) + mono[pos + 1 :] if exp > 1 else mono[:pos] + mono[pos + 1 :]
                new = out.get(rest, 0) + c * exp
                if new:
                    out[rest] = new
                else:
                    out.pop(rest, None)
                break
    return Expr(f.ctx, out)


def total_derivative(f: Expr, j: int) -> Expr:
    """Total derivative D_j f = d_j f + sum_I u^alpha_{Ij} d^I_alpha f.

    The sum runs over the finitely many jet variables appearing in f, so the
    jet order rises by at most one.
    """
    out = partial_x(f, j)
    for alpha, index in f.jet_vars():
        out = out + Expr.u(f.ctx, alpha, index.bump(j)) * partial_jet(f, alpha, index)
    return out


def total_derivative_mi(f: Expr, index: MultiIndex, signed: bool = False) -> Expr:
    """Iterated total derivative D_I f; with signed set, (-D)_I f."""
    if len(index) != f.ctx.n:
        raise ValueError("multi-index dimension mismatch")
    out = f
    for j, e in enumerate(index, start=1):
        for _ in range(e):
            out = total_derivative(out, j)
    if signed and index.order % 2:
        out = -out
    return out
