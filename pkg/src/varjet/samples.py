"""Seeded random generators for expressions, forms, and graded classes.

Used by the CLI `check` command and by the test suite.  Everything takes an
explicit random.Random so runs are reproducible from a printed seed.
Instances are kept deliberately small: identities here are exact, so the
generators aim for coverage of the combinatorics, not for bulk.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .jetcore import Expr, JetContext, MultiIndex, multi_indices_upto
from .forms import ContactFactor, Form, WedgeMonomial, omega0_monomials
from .euler import SourceForm
from .filtration import GradedClass

_COEFFS = (-3, -2, -1, 1, 2, 3, Fraction(1, 2), Fraction(-1, 2))


def random_expr(
    rng: random.Random,
    ctx: JetContext,
    max_order: int = 2,
    terms: int = 2,
    max_degree: int = 2,
) -> Expr:
    """Random polynomial in the x's and the u^alpha_I with |I| <= max_order."""
    pool = [("x", i) for i in range(1, ctx.n + 1)] + [
        ("u", alpha, index)
        for alpha in range(1, ctx.m + 1)
        for index in multi_indices_upto(ctx.n, max_order)
    ]
    out = Expr.zero(ctx)
    for _ in range(rng.randint(1, terms)):
        term = Expr.const(ctx, rng.choice(_COEFFS))
        for _ in range(rng.randint(0, max_degree)):
            pick = rng.choice(pool)
            factor = (
                Expr.x(ctx, pick[1]) if pick[0] == "x" else Expr.u(ctx, pick[1], pick[2])
            )
            term = term * factor
        out = out + term
    return out


def random_nonzero_expr(rng: random.Random, ctx: JetContext, **kwargs) -> Expr:
    for _ in range(20):
        f = random_expr(rng, ctx, **kwargs)
        if not f.is_zero():
            return f
    return Expr.u(ctx, 1) + 1


def random_source_form(
    rng: random.Random, ctx: JetContext, max_order: int = 2, **kwargs
) -> SourceForm:
    return SourceForm(
        ctx,
        tuple(
            random_expr(rng, ctx, max_order=max_order, **kwargs)
            for _ in range(ctx.m)
        ),
    )


def _general_monomials(ctx: JetContext, r: int, s: int, max_factor_order: int):
    """All canonical (r, s) wedge monomials with contact orders bounded."""
    contacts = [
        ContactFactor(alpha, index)
        for alpha in range(1, ctx.m + 1)
        for index in multi_indices_upto(ctx.n, max_factor_order)
    ]
    contacts.sort()
    out = []
    for combo in itertools.combinations(contacts, s):
        for horiz in itertools.combinations(range(1, ctx.n + 1), r):
            out.append(WedgeMonomial(tuple(combo), tuple(horiz)))
    return out


def random_form(
    rng: random.Random,
    ctx: JetContext,
    r: int,
    s: int,
    max_factor_order: int = 2,
    monomials: int = 2,
    coeff_order: int = 1,
) -> Form:
    """Random (r, s)-form with small polynomial coefficients."""
    basis = _general_monomials(ctx, r, s, max_factor_order)
    if not basis:
        return Form.zero(ctx, r, s)
    picks = rng.sample(basis, min(monomials, len(basis)))
    terms: dict = {}
    for mono in picks:
        f = random_expr(rng, ctx, max_order=coeff_order, terms=2, max_degree=2)
        if not f.is_zero():
            terms[mono] = f
    return Form(ctx, r, s, terms)


def random_omega0_form(
    rng: random.Random,
    ctx: JetContext,
    s: int,
    level: int,
    monomials: int = 2,
    coeff_order: int = 1,
) -> Form:
    """Random member of F^level Omega^{n,s}_0 (weights 0..level mixed)."""
    basis = [
        mono
        for w in range(level + 1)
        for mono in omega0_monomials(ctx, s, w)
    ]
    if not basis:
        return Form.zero(ctx, ctx.n, s)
    picks = rng.sample(basis, min(monomials, len(basis)))
    terms: dict = {}
    for mono in picks:
        f = random_expr(rng, ctx, max_order=coeff_order, terms=2, max_degree=2)
        if not f.is_zero():
            terms[mono] = f
    return Form(ctx, ctx.n, s, terms)


def random_graded_class(
    rng: random.Random,
    ctx: JetContext,
    s: int,
    level: int,
    monomials: int = 2,
    coeff_order: int = 1,
) -> GradedClass:
    """Random class in Gr^level Omega^{n,s}_0 (zero when the space is empty)."""
    basis = list(omega0_monomials(ctx, s, level))
    if not basis:
        return GradedClass(level, Form.zero(ctx, ctx.n, s))
    picks = rng.sample(basis, min(monomials, len(basis)))
    terms: dict = {}
    for mono in picks:
        f = random_expr(rng, ctx, max_order=coeff_order, terms=2, max_degree=2)
        if not f.is_zero():
            terms[mono] = f
    return GradedClass(level, Form(ctx, ctx.n, s, terms))


def random_s2_coeffs(
    rng: random.Random, ctx: JetContext, l: int, entries: int = 3, coeff_order: int = 1
) -> dict[tuple[int, int, MultiIndex], Expr]:
    """Random coefficient table A^I_{ab}, |I| = l, for the s = 2 closed form."""
    keys = [
        (a, b, index)
        for a in range(1, ctx.m + 1)
        for b in range(1, ctx.m + 1)
        for index in multi_indices_upto(ctx.n, l)
        if index.order == l
    ]
    out: dict = {}
    for key in rng.sample(keys, min(entries, len(keys))):
        f = random_expr(rng, ctx, max_order=coeff_order, terms=2, max_degree=2)
        if not f.is_zero():
            out[key] = f
    return out


def random_l1_family(
    rng: random.Random, ctx: JetContext, s: int, entries: int = 3, coeff_order: int = 1
) -> dict[tuple[tuple[int, ...], int], Expr]:
    """Random coefficient family A^i_{a_1..a_s}, totally antisymmetric in the
    first s-1 fibre indices (stored with all permutations filled in)."""
    base_keys = [
        (alphas, last, i)
        for alphas in itertools.combinations(range(1, ctx.m + 1), s - 1)
        for last in range(1, ctx.m + 1)
        for i in range(1, ctx.n + 1)
    ]
    out: dict[tuple[tuple[int, ...], int], Expr] = {}
    if not base_keys:
        return out
    for alphas, last, i in rng.sample(base_keys, min(entries, len(base_keys))):
        f = random_expr(rng, ctx, max_order=coeff_order, terms=2, max_degree=2)
        if f.is_zero():
            continue
        for perm in itertools.permutations(alphas):
            sign = _perm_sign(alphas, perm)
            key = (perm + (last,), i)
            cur = out.get(key, Expr.zero(ctx))
            out[key] = cur + (f if sign > 0 else -f)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _perm_sign(base: tuple[int, ...], perm: tuple[int, ...]) -> int:
    arr = [base.index(p) for p in perm]
    sign = 1
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return sign
