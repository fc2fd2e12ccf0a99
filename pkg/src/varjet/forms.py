"""Bigraded differential forms on the jet coordinates.

A form of bidegree (r, s) is a dict from wedge monomials to Expr
coefficients.  A wedge monomial is a canonical product of s contact factors
theta^alpha_I and r horizontal factors dx^i: contact factors first, sorted by
(alpha, index), then horizontal indices ascending.  Reordering signs are
folded into the coefficient, repeated factors annihilate the monomial, and
zero coefficients are never stored, so forms are equal iff their dicts are.

Conventions fixed here and relied on everywhere else:

  theta^alpha_I = du^alpha_I - u^alpha_{Ij} dx^j      (vanishes on prolonged sections)
  d_H theta^alpha_I = dx^j ^ theta^alpha_{Ij},   d_V theta^alpha_I = 0
  nu = dx^1 ^ ... ^ dx^n
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple

from .jetcore import (
    Expr,
    JetContext,
    MultiIndex,
    multi_indices_upto,
    partial_jet,
    total_derivative,
)


class ContactFactor(NamedTuple):
    """The contact form theta^alpha_I; theta^alpha when I is empty."""

    alpha: int
    index: MultiIndex

    @property
    def order(self) -> int:
        return self.index.order


class WedgeMonomial(NamedTuple):
    contact: tuple[ContactFactor, ...]
    horizontal: tuple[int, ...]

    @property
    def contact_weight(self) -> int:
        return sum(c.order for c in self.contact)

    def has_order_zero_factor(self) -> bool:
        return any(c.order == 0 for c in self.contact)


# In-flight factors are tagged tuples sorting contact before horizontal:
# (0, alpha, index) for theta^alpha_I and (1, i) for dx^i.


def _canonical_factors(factors: list[tuple]) -> tuple[int, WedgeMonomial] | None:
    """Sort a 1-form factor list with permutation parity.

    Returns (sign, monomial), or None when a factor repeats (the wedge
    vanishes).  All factors are odd, so each swap flips the sign.
    """
    arr = list(factors)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j] < arr[j - 1]:
            arr[j], arr[j - 1] = arr[j - 1], arr[j]
            sign = -sign
            j -= 1
    for a, b in zip(arr, arr[1:]):
        if a == b:
            return None
    contact = tuple(ContactFactor(t[1], t[2]) for t in arr if t[0] == 0)
    horizontal = tuple(t[1] for t in arr if t[0] == 1)
    return sign, WedgeMonomial(contact, horizontal)


def _mono_factors(mono: WedgeMonomial) -> list[tuple]:
    out: list[tuple] = [(0, c.alpha, c.index) for c in mono.contact]
    out.extend((1, i) for i in mono.horizontal)
    return out


class Form:
    """A bidegree-homogeneous differential form."""

    __slots__ = ("ctx", "r", "s", "terms")

    def __init__(self, ctx: JetContext, r: int, s: int, terms: dict):
        self.ctx = ctx
        self.r = r
        self.s = s
        self.terms = terms

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: JetContext, r: int, s: int) -> "Form":
        return cls(ctx, r, s, {})

    @classmethod
    def from_terms(cls, ctx: JetContext, r: int, s: int, raw: dict) -> "Form":
        return cls(ctx, r, s, {m: c for m, c in raw.items() if not c.is_zero()})

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.r, self.s)

    def is_zero(self) -> bool:
        return not self.terms

    def in_omega0(self) -> bool:
        """True iff every monomial carries an order-zero contact factor."""
        return all(m.has_order_zero_factor() for m in self.terms)

    def _add_term(self, terms: dict, mono: WedgeMonomial, coeff: Expr) -> None:
        cur = terms.get(mono)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            terms.pop(mono, None)
        else:
            terms[mono] = new

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Form") -> None:
        if self.ctx != other.ctx:
            raise ValueError("mixing forms from different contexts")
        if self.bidegree != other.bidegree:
            raise ValueError(f"bidegree mismatch: {self.bidegree} vs {other.bidegree}")

    def __add__(self, other) -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            self._add_term(out, mono, c)
        return Form(self.ctx, self.r, self.s, out)

    def __neg__(self) -> "Form":
        return Form(self.ctx, self.r, self.s, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Form":
        """Scalar multiplication by an Expr or a rational."""
        if isinstance(other, (int, Fraction)):
            other = Expr.const(self.ctx, other)
        if not isinstance(other, Expr):
            return NotImplemented
        out: dict = {}
        for mono, c in self.terms.items():
            new = c * other
            if not new.is_zero():
                out[mono] = new
        return Form(self.ctx, self.r, self.s, out)

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Form)
            and self.ctx == other.ctx
            and self.bidegree == other.bidegree
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Form({self.r},{self.s}; {self})"

    def __str__(self) -> str:
        from .parser import form_to_str

        return form_to_str(self)


# -- basis factories -------------------------------------------------------


def theta(ctx: JetContext, alpha: int, index: MultiIndex | None = None) -> Form:
    if index is None:
        index = MultiIndex.zero(ctx.n)
    if not 1 <= alpha <= ctx.m:
        raise ValueError(f"fibre index {alpha} out of range 1..{ctx.m}")
    if len(index) != ctx.n:
        raise ValueError("multi-index dimension mismatch")
    mono = WedgeMonomial((ContactFactor(alpha, index),), ())
    return Form(ctx, 0, 1, {mono: Expr.const(ctx, 1)})


def dx(ctx: JetContext, i: int) -> Form:
    if not 1 <= i <= ctx.n:
        raise ValueError(f"base index {i} out of range 1..{ctx.n}")
    return Form(ctx, 1, 0, {WedgeMonomial((), (i,)): Expr.const(ctx, 1)})


def nu(ctx: JetContext) -> Form:
    """The fixed volume form dx^1 ^ ... ^ dx^n."""
    mono = WedgeMonomial((), tuple(range(1, ctx.n + 1)))
    return Form(ctx, ctx.n, 0, {mono: Expr.const(ctx, 1)})


def nu_contracted(ctx: JetContext, j: int) -> Form:
    """The (n-1, 0)-form obtained by contracting d/dx^j into nu."""
    if not 1 <= j <= ctx.n:
        raise ValueError(f"base index {j} out of range 1..{ctx.n}")
    rest = tuple(i for i in range(1, ctx.n + 1) if i != j)
    sign = Fraction(-1) ** (j - 1)
    return Form(ctx, ctx.n - 1, 0, {WedgeMonomial((), rest): Expr.const(ctx, sign)})


def scalar_form(f: Expr) -> Form:
    """Embed an Expr as a (0, 0)-form."""
    out: dict = {}
    if not f.is_zero():
        out[WedgeMonomial((), ())] = f
    return Form(f.ctx, 0, 0, out)


# -- operations ------------------------------------------------------------


def wedge(a: Form, b: Form) -> Form:
    """Exterior product; bidegrees add, signs follow the factor reordering."""
    if a.ctx != b.ctx:
        raise ValueError("mixing forms from different contexts")
    out: dict = {}
    r, s = a.r + b.r, a.s + b.s
    result = Form(a.ctx, r, s, out)
    for m1, c1 in a.terms.items():
        f1 = _mono_factors(m1)
        for m2, c2 in b.terms.items():
            canon = _canonical_factors(f1 + _mono_factors(m2))
            if canon is None:
                continue
            sign, mono = canon
            coeff = c1 * c2
            if sign < 0:
                coeff = -coeff
            result._add_term(out, mono, coeff)
    return result


def d_h(w: Form) -> Form:
    """Horizontal differential, a degree-(1, 0) derivation.

    On coefficients it contributes (D_i f) dx^i, on contact factors
    dx^j ^ theta^alpha_{Ij}, and it kills dx^i.
    """
    ctx = w.ctx
    out: dict = {}
    result = Form(ctx, w.r + 1, w.s, out)
    for mono, f in w.terms.items():
        factors = _mono_factors(mono)
        for i in range(1, ctx.n + 1):
            df = total_derivative(f, i)
            if df.is_zero():
                continue
            canon = _canonical_factors([(1, i)] + factors)
            if canon is None:
                continue
            sign, new_mono = canon
            result._add_term(out, new_mono, df if sign > 0 else -df)
        for pos, c in enumerate(mono.contact):
            slot_sign = -1 if pos % 2 else 1
            for j in range(1, ctx.n + 1):
                new_factors = list(factors)
                new_factors[pos : pos + 1] = [(1, j), (0, c.alpha, c.index.bump(j))]
                canon = _canonical_factors(new_factors)
                if canon is None:
                    continue
                sign, new_mono = canon
                coeff = f if sign * slot_sign > 0 else -f
                result._add_term(out, new_mono, coeff)
    return result


def d_v(w: Form) -> Form:
    """Vertical differential, a degree-(0, 1) derivation.

    On coefficients it contributes (d^I_alpha f) theta^alpha_I; contact and
    horizontal factors are d_V-closed.
    """
    ctx = w.ctx
    out: dict = {}
    result = Form(ctx, w.r, w.s + 1, out)
    for mono, f in w.terms.items():
        factors = _mono_factors(mono)
        for alpha, index in sorted(f.jet_vars()):
            df = partial_jet(f, alpha, index)
            if df.is_zero():
                continue
            canon = _canonical_factors([(0, alpha, index)] + factors)
            if canon is None:
                continue
            sign, new_mono = canon
            result._add_term(out, new_mono, df if sign > 0 else -df)
    return result


def contract(w: Form, alpha: int, index: MultiIndex) -> Form:
    """Interior product with the coordinate vector field d^I_alpha.

    Removes a matching theta^alpha_I factor with the alternating slot sign;
    monomials without one are annihilated.
    """
    ctx = w.ctx
    target = ContactFactor(alpha, MultiIndex(index))
    out: dict = {}
    result = Form(ctx, w.r, max(w.s - 1, 0), out)
    if w.s == 0:
        return result
    for mono, f in w.terms.items():
        for pos, c in enumerate(mono.contact):
            if c == target:
                new_mono = WedgeMonomial(
                    mono.contact[:pos] + mono.contact[pos + 1 :], mono.horizontal
                )
                result._add_term(out, new_mono, f if pos % 2 == 0 else -f)
                break  # canonical monomials have no repeated factor
    return result


def lie_total(w: Form, j: int) -> Form:
    """Total-derivative action on forms: degree-0 derivation with D_j on
    coefficients, theta^alpha_I -> theta^alpha_{Ij}, and dx^i -> 0."""
    ctx = w.ctx
    out: dict = {}
    result = Form(ctx, w.r, w.s, out)
    for mono, f in w.terms.items():
        df = total_derivative(f, j)
        if not df.is_zero():
            result._add_term(out, mono, df)
        for pos, c in enumerate(mono.contact):
            bumped = mono.contact[:pos] + (ContactFactor(c.alpha, c.index.bump(j)),) + mono.contact[pos + 1 :]
            canon = _canonical_factors(
                [(0, cf.alpha, cf.index) for cf in bumped]
                + [(1, i) for i in mono.horizontal]
            )
            if canon is None:
                continue
            sign, new_mono = canon
            result._add_term(out, new_mono, f if sign > 0 else -f)
    return result


def lie_total_mi(w: Form, index: MultiIndex, signed: bool = False) -> Form:
    """Iterated lie_total D_I; with signed set, (-D)_I."""
    out = w
    for j, e in enumerate(index, start=1):
        for _ in range(e):
            out = lie_total(out, j)
    if signed and index.order % 2:
        out = -out
    return out


def contact_weight_split(w: Form) -> dict[int, Form]:
    """Partition the monomials of w by total contact weight.

    The parts sum back to w exactly; the zero form splits into nothing.
    """
    parts: dict[int, dict] = {}
    for mono, f in w.terms.items():
        parts.setdefault(mono.contact_weight, {})[mono] = f
    return {
        k: Form(w.ctx, w.r, w.s, terms) for k, terms in sorted(parts.items())
    }


def omega0_monomials(ctx: JetContext, s: int, weight: int) -> Iterator[WedgeMonomial]:
    """Canonical basis monomials of Gr^weight Omega^{n,s}_0: s distinct
    contact factors of total order `weight`, at least one of order zero,
    with the full horizontal block."""
    if s < 1 or weight < 0:
        return
    universe = [
        ContactFactor(alpha, idx)
        for alpha in range(1, ctx.m + 1)
        for idx in multi_indices_upto(ctx.n, weight)
    ]
    universe.sort()
    horizontal = tuple(range(1, ctx.n + 1))
    from itertools import combinations

    for combo in combinations(universe, s):
        if sum(c.order for c in combo) != weight:
            continue
        if not any(c.order == 0 for c in combo):
            continue
        yield WedgeMonomial(tuple(combo), horizontal)
