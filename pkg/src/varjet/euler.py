"""Variational operators: Euler derivatives, the first-variation boundary
term, the interior Euler operator, delta_V, and the Helmholtz residuals.

A Lagrangian is represented by its density L (an Expr), the volume factor nu
being fixed.  A source form Delta = Delta_alpha theta^alpha ^ nu is kept as
its component tuple; the Form conversion is lossless both ways.

All multi-index sums truncate at the jet order actually present in the
operand, recomputed per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .jetcore import (
    Expr,
    JetContext,
    MultiIndex,
    mi_binom,
    multi_indices_upto,
    partial_jet,
    total_derivative_mi,
)
from .forms import (
    Form,
    contract,
    d_v,
    lie_total_mi,
    nu,
    nu_contracted,
    theta,
    wedge,
)


@dataclass(frozen=True)
class SourceForm:
    """Delta = Delta_alpha theta^alpha ^ nu, stored componentwise."""

    ctx: JetContext
    components: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.ctx.m:
            raise ValueError(
                f"expected {self.ctx.m} components, got {len(self.components)}"
            )
        for c in self.components:
            if c.ctx != self.ctx:
                raise ValueError("component context mismatch")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def jet_order(self) -> int:
        return max(c.jet_order() for c in self.components)

    def to_form(self) -> Form:
        out = Form.zero(self.ctx, self.ctx.n, 1)
        vol = nu(self.ctx)
        for alpha, comp in enumerate(self.components, start=1):
            if not comp.is_zero():
                out = out + wedge(theta(self.ctx, alpha), vol) * comp
        return out

    @classmethod
    def from_form(cls, w: Form) -> "SourceForm":
        ctx = w.ctx
        if w.bidegree != (ctx.n, 1):
            raise ValueError(f"source forms have bidegree ({ctx.n}, 1), got {w.bidegree}")
        zero_index = MultiIndex.zero(ctx.n)
        horizontal = tuple(range(1, ctx.n + 1))
        comps = [Expr.zero(ctx) for _ in range(ctx.m)]
        for mono, f in w.terms.items():
            (factor,) = mono.contact
            if factor.index != zero_index or mono.horizontal != horizontal:
                raise ValueError("form is not a source form (higher-order contact factor)")
            comps[factor.alpha - 1] = comps[factor.alpha - 1] + f
        return cls(ctx, tuple(comps))


def euler(density: Expr) -> SourceForm:
    """Euler derivative: component alpha is sum_I (-D)_I(d^I_alpha L)."""
    ctx = density.ctx
    comps = []
    by_alpha: dict[int, list[MultiIndex]] = {}
    for alpha, index in density.jet_vars():
        by_alpha.setdefault(alpha, []).append(index)
    for alpha in range(1, ctx.m + 1):
        total = Expr.zero(ctx)
        for index in by_alpha.get(alpha, []):
            total = total + total_derivative_mi(
                partial_jet(density, alpha, index), index, signed=True
            )
        comps.append(total)
    return SourceForm(ctx, tuple(comps))


def higher_euler(f: Expr, alpha: int, index: MultiIndex) -> Expr:
    """Higher Euler derivative E^I_alpha(f).

    Sum over unordered J containing I componentwise of
    mi_binom(J, I) (-D)_{J-I}(d^J_alpha f); at I = 0 this is the Euler
    derivative.  Vanishes when |I| exceeds the jet order of f.
    """
    ctx = f.ctx
    if len(index) != ctx.n:
        raise ValueError("multi-index dimension mismatch")
    total = Expr.zero(ctx)
    for a, J in f.jet_vars():
        if a != alpha or not J.contains(index):
            continue
        coeff = mi_binom(J, index)
        if coeff == 0:
            continue
        total = total + coeff * total_derivative_mi(
            partial_jet(f, alpha, J), J - index, signed=True
        )
    return total


def variation_boundary(density: Expr) -> Form:
    """Boundary term of the first variation.

    Returns eta in Omega^{n-1,1} with d_V(L nu) = E_alpha(L) theta^alpha ^ nu
    + d_H eta exactly:

      eta = -sum_{I,j} (I_j+1)/(|I|+1) D_I(E^{Ij}_alpha(L) theta^alpha) ^ (d_j _| nu)

    Sums run over unordered multi-indices taken once each, which forces the
    rational weights (I_j+1)/(|I|+1); the global minus comes from the
    contact-before-horizontal canonical ordering.  Both choices are pinned by
    the exact residual check.
    """
    ctx = density.ctx
    out = Form.zero(ctx, ctx.n - 1, 1)
    cap = max(density.jet_order() - 1, 0)
    for j in range(1, ctx.n + 1):
        inner = Form.zero(ctx, 0, 1)
        for index in multi_indices_upto(ctx.n, cap):
            term = Form.zero(ctx, 0, 1)
            for alpha in range(1, ctx.m + 1):
                coeff = higher_euler(density, alpha, index.bump(j))
                if not coeff.is_zero():
                    term = term + theta(ctx, alpha) * coeff
            if not term.is_zero():
                weight = Fraction(index[j - 1] + 1, index.order + 1)
                inner = inner + lie_total_mi(term, index) * weight
        if not inner.is_zero():
            out = out + wedge(inner, nu_contracted(ctx, j))
    return -out


def interior_euler(w: Form) -> Form:
    """Interior Euler operator
    I(w) = (1/s) theta^alpha ^ sum_I (-D)_I(d^I_alpha _| w).

    Idempotent on (n, s)-forms with I o d_H = 0; every monomial of the image
    carries an order-zero contact factor.  Defined for any r >= 0, but the
    projector laws are only asserted (and tested) at r = n.
    """
    if w.s == 0:
        raise ValueError("interior Euler operator undefined on (r, 0)-forms")
    ctx = w.ctx
    factors = sorted({c for mono in w.terms for c in mono.contact})
    acc = Form.zero(ctx, w.r, w.s)
    for factor in factors:
        t = contract(w, factor.alpha, factor.index)
        t = lie_total_mi(t, factor.index, signed=True)
        if not t.is_zero():
            acc = acc + wedge(theta(ctx, factor.alpha), t)
    return acc * Fraction(1, w.s)


def is_functional(w: Form) -> bool:
    """Membership test for the image of the interior Euler operator."""
    return (w - interior_euler(w)).is_zero()


def delta_v(w: Form) -> Form:
    """The coboundary delta_V = I o d_V on functional forms.

    Input must satisfy w = I(w); use delta_v_unchecked to apply the
    composite to an arbitrary (n, s)-form.
    """
    if not is_functional(w):
        raise ValueError("delta_v requires a functional form (w = I(w))")
    return delta_v_unchecked(w)


def delta_v_unchecked(w: Form) -> Form:
    return interior_euler(d_v(w))


def helmholtz_residuals(delta: SourceForm) -> dict[tuple[int, int, MultiIndex], Expr]:
    """Residuals of the Helmholtz condition d^I_beta Delta_alpha
    = (-1)^|I| E^I_alpha(Delta_beta).

    Reported for every ordered pair (alpha, beta) and every unordered I up to
    the jet order of Delta; no symmetry reduction.  All residuals vanish iff
    delta_v(Delta) = 0.
    """
    ctx = delta.ctx
    order = delta.jet_order()
    out: dict[tuple[int, int, MultiIndex], Expr] = {}
    for alpha in range(1, ctx.m + 1):
        for beta in range(1, ctx.m + 1):
            for index in multi_indices_upto(ctx.n, order):
                sign = -1 if index.order % 2 else 1
                res = partial_jet(delta.components[alpha - 1], beta, index) - sign * higher_euler(
                    delta.components[beta - 1], alpha, index
                )
                out[(alpha, beta, index)] = res
    return out
