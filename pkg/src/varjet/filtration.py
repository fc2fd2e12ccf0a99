"""The jet-order filtration on (n, s)-forms and its graded algebra.

F^l consists of the forms whose monomials have total contact weight at most
l.  The graded component Gr^l is realised concretely as the span of the
exact-weight-l basis monomials with at least one order-zero contact factor,
so quotient arithmetic is plain form arithmetic on weight-homogeneous
representatives.  The interior Euler operator preserves the filtration; the
induced map on each graded component (ibar) is an idempotent module
homomorphism, with closed forms at s = 2 (any level) and at level 1 (any s).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .jetcore import Expr, JetContext, MultiIndex
from .forms import (
    ContactFactor,
    Form,
    WedgeMonomial,
    contact_weight_split,
    nu,
    theta,
    wedge,
)
from .euler import SourceForm, delta_v, interior_euler, is_functional


def filtration_level(w: Form) -> int:
    """Smallest l with w in F^l: the maximum contact weight over monomials.

    The zero form sits in F^{-1} = 0 and reports level -1.
    """
    if w.r != w.ctx.n:
        raise ValueError("filtration level is defined for (n, s)-forms")
    if w.is_zero():
        return -1
    return max(m.contact_weight for m in w.terms)


@dataclass(frozen=True)
class GradedClass:
    """An element of Gr^l Omega^{n,s}_0, held as its basis-aligned
    representative: a form whose monomials all have contact weight exactly
    `level` and at least one order-zero contact factor."""

    level: int
    payload: Form

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("graded level must be non-negative")
        if self.payload.r != self.payload.ctx.n:
            raise ValueError("graded classes live in (n, s)-forms")
        if self.payload.s < 1:
            raise ValueError("graded classes need vertical degree >= 1")
        for mono in self.payload.terms:
            if mono.contact_weight != self.level:
                raise ValueError(
                    f"monomial of weight {mono.contact_weight} in a level-{self.level} class"
                )
            if not mono.has_order_zero_factor():
                raise ValueError("monomial lacks an order-zero contact factor")

    @property
    def ctx(self) -> JetContext:
        return self.payload.ctx

    @property
    def s(self) -> int:
        return self.payload.s

    def is_zero(self) -> bool:
        return self.payload.is_zero()

    def lift(self) -> Form:
        """Inclusion Gr^l -> F^l along the monomial basis."""
        return self.payload

    def __mul__(self, other) -> "GradedClass":
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        return GradedClass(self.level, self.payload * other)

    __rmul__ = __mul__

    def __add__(self, other) -> "GradedClass":
        if not isinstance(other, GradedClass) or other.level != self.level:
            return NotImplemented
        return GradedClass(self.level, self.payload + other.payload)

    def __sub__(self, other) -> "GradedClass":
        if not isinstance(other, GradedClass) or other.level != self.level:
            return NotImplemented
        return GradedClass(self.level, self.payload - other.payload)


def zero_class(ctx: JetContext, s: int, level: int) -> GradedClass:
    return GradedClass(level, Form.zero(ctx, ctx.n, s))


def gr_top(w: Form, l: int) -> GradedClass:
    """Project w in F^l Omega^{n,s}_0 onto its weight-l part, the canonical
    representative of w + F^{l-1}.  Errors if w carries weight above l or a
    monomial outside Omega^{n,s}_0."""
    if w.r != w.ctx.n:
        raise ValueError("gr_top is defined for (n, s)-forms")
    top: dict = {}
    for mono, c in w.terms.items():
        if mono.contact_weight > l:
            raise ValueError(f"form has weight {mono.contact_weight} > level {l}")
        if not mono.has_order_zero_factor():
            raise ValueError("form is not in Omega^{n,s}_0")
        if mono.contact_weight == l:
            top[mono] = c
    return GradedClass(l, Form(w.ctx, w.r, w.s, top))


def ibar(eta: GradedClass) -> GradedClass:
    """The induced interior Euler operator on Gr^l: project I(lift(eta))
    back to the top graded component.  Idempotent and module-linear."""
    if eta.is_zero():
        return eta
    return gr_top(interior_euler(eta.payload), eta.level)


def b_op(eta: GradedClass) -> Form:
    """Off-diagonal block of I at level l: B_l(eta) = I(lift(eta)) -
    lift(ibar(eta)), landing in F^{l-1} Omega^{n,s}_0."""
    if eta.is_zero():
        return Form.zero(eta.ctx, eta.ctx.n, eta.s)
    return interior_euler(eta.payload) - ibar(eta).payload


@dataclass(frozen=True)
class GammaDecomposition:
    """Graded splitting of a functional form: pairs (eta_k, omega_k) with
    omega_k = I(lift(eta_k)), listed for k = level, level-1, ..., 0."""

    pairs: tuple[tuple[GradedClass, Form], ...]

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(eta.level for eta, _ in self.pairs)

    def reconstruct(self, ctx: JetContext, s: int) -> Form:
        out = Form.zero(ctx, ctx.n, s)
        for _, omega in self.pairs:
            out = out + omega
        return out

    def is_zero(self) -> bool:
        return all(eta.is_zero() and omega.is_zero() for eta, omega in self.pairs)


def gamma_decompose(w: Form) -> GammaDecomposition:
    """Write a functional form uniquely as omega_l + ... + omega_0 with
    omega_k = I(lift(eta_k)) and eta_k = gr_top of the running remainder.

    Greedy top-down: each step strips the level-k graded part, so the
    remainder level drops strictly; a failure to drop signals a convention
    bug and raises RuntimeError.  Requires w = I(w).
    """
    if not is_functional(w):
        raise ValueError("gamma_decompose requires a functional form (w = I(w))")
    level = filtration_level(w)
    pairs: list[tuple[GradedClass, Form]] = []
    rem = w
    for k in range(level, -1, -1):
        if filtration_level(rem) > k:
            raise RuntimeError("remainder failed to drop a filtration level")
        eta = gr_top(rem, k)
        omega = interior_euler(eta.payload) if not eta.is_zero() else Form.zero(w.ctx, w.r, w.s)
        rem = rem - omega
        pairs.append((eta, omega))
    if not rem.is_zero():
        raise RuntimeError("graded decomposition left a nonzero remainder")
    return GammaDecomposition(tuple(pairs))


# -- closed forms: s = 2, any level ----------------------------------------


S2Coeffs = Mapping[tuple[int, int, MultiIndex], Expr]


def _s2_validate(coeffs: S2Coeffs, l: int) -> None:
    for (alpha, beta, index), value in coeffs.items():
        if index.order != l:
            raise ValueError(f"coefficient index {tuple(index)} has order != {l}")
        ctx = value.ctx
        if not (1 <= alpha <= ctx.m and 1 <= beta <= ctx.m):
            raise ValueError("fibre index out of range in s=2 coefficients")


def ibar_s2(coeffs: S2Coeffs, l: int) -> dict[tuple[int, int, MultiIndex], Expr]:
    """Closed form of ibar on Gr^l Omega^{n,2}_0 in the coefficient picture:
    A^I_{ab} -> (A^I_{ab} + (-1)^{l+1} A^I_{ba}) / 2."""
    _s2_validate(coeffs, l)
    sign = 1 if (l + 1) % 2 == 0 else -1
    out: dict[tuple[int, int, MultiIndex], Expr] = {}
    keys = set(coeffs) | {(b, a, I) for (a, b, I) in coeffs}
    for alpha, beta, index in keys:
        a_ab = coeffs.get((alpha, beta, index))
        a_ba = coeffs.get((beta, alpha, index))
        if a_ab is None and a_ba is None:
            continue
        ctx = (a_ab or a_ba).ctx
        zero = Expr.zero(ctx)
        value = ((a_ab or zero) + sign * (a_ba or zero)) * Fraction(1, 2)
        if not value.is_zero():
            out[(alpha, beta, index)] = value
    return out


def s2_in_image(coeffs: S2Coeffs, l: int) -> bool:
    """Image of ibar at s = 2: A^I_{ab} = (-1)^{l+1} A^I_{ba}."""
    return _s2_symmetry(coeffs, l, 1 if (l + 1) % 2 == 0 else -1)


def s2_in_kernel(coeffs: S2Coeffs, l: int) -> bool:
    """Kernel of ibar at s = 2: A^I_{ab} = (-1)^l A^I_{ba}."""
    return _s2_symmetry(coeffs, l, 1 if l % 2 == 0 else -1)


def _s2_symmetry(coeffs: S2Coeffs, l: int, sign: int) -> bool:
    _s2_validate(coeffs, l)
    keys = set(coeffs) | {(b, a, I) for (a, b, I) in coeffs}
    for alpha, beta, index in keys:
        a_ab = coeffs.get((alpha, beta, index))
        a_ba = coeffs.get((beta, alpha, index))
        ctx = (a_ab or a_ba).ctx
        zero = Expr.zero(ctx)
        if not ((a_ab or zero) - sign * (a_ba or zero)).is_zero():
            return False
    return True


def class_from_s2_coeffs(ctx: JetContext, coeffs: S2Coeffs, l: int) -> GradedClass:
    """Assemble sum A^I_{ab} theta^a ^ theta^b_I ^ nu as a graded class.

    Faithful for l >= 1, where the basis monomials are independent."""
    _s2_validate(coeffs, l)
    out = Form.zero(ctx, ctx.n, 2)
    vol = nu(ctx)
    for (alpha, beta, index), value in coeffs.items():
        out = out + wedge(wedge(theta(ctx, alpha), theta(ctx, beta, index)), vol) * value
    return GradedClass(l, out)


# -- closed forms: level 1, any s -------------------------------------------


L1Family = Mapping[tuple[tuple[int, ...], int], Expr]
# key: ((alpha_1, ..., alpha_s), i) for the coefficient A^i_{alpha_1...alpha_s}
# of theta^{a_1} ^ ... ^ theta^{a_{s-1}} ^ theta^{a_s}_i ^ nu.


def l1_matrix(s: int) -> list[list[Fraction]]:
    """The projector ibar at level 1 on cyclic coefficient vectors:
    entry (j, k) = delta_jk - (-1)^{(s-1)(j+k)} / s, exactly rational.

    Idempotent of rank s - 1; for s = 1 this is the 1x1 zero matrix (the
    level-1 graded space of Omega^{n,1}_0 is empty, the value is kept for
    formula continuity)."""
    if s < 1:
        raise ValueError("s must be positive")
    out = []
    for j in range(s):
        row = []
        for k in range(s):
            sign = -1 if ((s - 1) * (j + k)) % 2 else 1
            row.append(Fraction(int(j == k)) - Fraction(sign, s))
        out.append(row)
    return out


def _cyclic_shift(alphas: tuple[int, ...], k: int) -> tuple[int, ...]:
    return alphas[k:] + alphas[:k]


def _l1_validate(family: L1Family) -> int:
    """Check total antisymmetry in the first s-1 fibre indices; returns s."""
    if not family:
        raise ValueError("empty coefficient family")
    sizes = {len(alphas) for alphas, _ in family}
    if len(sizes) != 1:
        raise ValueError("mixed tuple lengths in coefficient family")
    (s,) = sizes
    zero = Expr.zero(next(iter(family.values())).ctx)
    for (alphas, i), value in family.items():
        for p in range(s - 2):
            swapped = list(alphas)
            swapped[p], swapped[p + 1] = swapped[p + 1], swapped[p]
            other = family.get((tuple(swapped), i), zero)
            if not (other + value).is_zero():
                raise ValueError(
                    "coefficients are not antisymmetric in the first s-1 fibre indices"
                )
    return s


def l1_apply(family: L1Family) -> dict[tuple[tuple[int, ...], int], Expr]:
    """Matrix action of ibar at level 1 on an antisymmetric family:
    row 0 of (I_s - c c^T) applied to each cyclic coefficient vector."""
    s = _l1_validate(family)
    zero = Expr.zero(next(iter(family.values())).ctx)
    keys = set(family)
    for alphas, i in list(keys):
        keys.update((_cyclic_shift(alphas, k), i) for k in range(s))
    out: dict[tuple[tuple[int, ...], int], Expr] = {}
    for alphas, i in keys:
        acc = Expr.zero(zero.ctx)
        for k in range(s):
            sign = -1 if ((s - 1) * k) % 2 else 1
            acc = acc + sign * family.get((_cyclic_shift(alphas, k), i), zero)
        value = family.get((alphas, i), zero) - acc * Fraction(1, s)
        if not value.is_zero():
            out[(alphas, i)] = value
    return out


def l1_membership(family: L1Family, which: str) -> bool:
    """Membership in the image or kernel of ibar at level 1.

    image:  sum_k (-1)^{(s-1)k} A^i_{cyclic shift k} = 0
    kernel: s A^i = sum_k (-1)^{(s-1)k} A^i_{cyclic shift k}

    checked for every index tuple (cyclic reindexing covers all matrix rows).
    The family must be totally antisymmetric in the first s-1 fibre indices.
    """
    if which not in ("image", "kernel"):
        raise ValueError("which must be 'image' or 'kernel'")
    s = _l1_validate(family)
    zero = Expr.zero(next(iter(family.values())).ctx)
    for alphas, i in family:
        acc = Expr.zero(zero.ctx)
        for k in range(s):
            sign = -1 if ((s - 1) * k) % 2 else 1
            acc = acc + sign * family.get((_cyclic_shift(alphas, k), i), zero)
        if which == "image":
            if not acc.is_zero():
                return False
        else:
            if not (s * family.get((alphas, i), zero) - acc).is_zero():
                return False
    return True


def class_from_l1_family(ctx: JetContext, family: L1Family) -> GradedClass:
    """Assemble sum A^i_{a_1...a_s} theta^{a_1} ^ ... ^ theta^{a_s}_i ^ nu
    as a level-1 graded class."""
    s = _l1_validate(family)
    if s == 1:
        # Omega^{n,1}_0 has no level-1 classes; only the zero family embeds.
        if any(not v.is_zero() for v in family.values()):
            raise ValueError("no nonzero level-1 classes exist at s = 1")
        return zero_class(ctx, 1, 1)
    out = Form.zero(ctx, ctx.n, s)
    vol = nu(ctx)
    for (alphas, i), value in family.items():
        term = theta(ctx, alphas[0])
        for alpha in alphas[1 : s - 1]:
            term = wedge(term, theta(ctx, alpha))
        term = wedge(term, theta(ctx, alphas[-1], MultiIndex.zero(ctx.n).bump(i)))
        out = out + wedge(term, vol) * value
    return GradedClass(1, out)


# -- graded components of delta_V Delta -------------------------------------


def mu_component(delta: SourceForm, k: int) -> GradedClass:
    """Weight-k graded component of delta_V(Delta) in Gr^k Omega^{n,2}_0.

    All components vanish iff Delta satisfies the Helmholtz conditions; they
    sum back to delta_V(Delta) exactly.
    """
    if k < 0 or k > max(delta.jet_order(), 0):
        raise ValueError(f"graded weight {k} outside 0..{max(delta.jet_order(), 0)}")
    w = delta_v(delta.to_form())
    part = contact_weight_split(w).get(k)
    if part is None:
        return zero_class(delta.ctx, 2, k)
    return GradedClass(k, part)
