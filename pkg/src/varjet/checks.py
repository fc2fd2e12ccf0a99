"""Executable identity checks.

Every theorem-level statement the package relies on is run here as an exact
symbolic check over seeded random instances: the first variation identity,
the projector laws of the interior Euler operator, the cochain law for
delta_V, the Helmholtz golden pairs and their equivalence with delta_V, the
filtration and graded-module properties, the block identities, the graded
decomposition, and the closed forms at s = 2 and level 1.  The CLI `check`
command runs this suite sized by flags; the acceptance tests run it at the
sizes fixed in the test module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .jetcore import Expr, JetContext, MultiIndex, multi_indices, partial_jet
from .forms import Form, contact_weight_split, d_h, d_v, nu, theta, wedge
from .euler import (
    SourceForm,
    delta_v,
    delta_v_unchecked,
    euler,
    helmholtz_residuals,
    interior_euler,
    variation_boundary,
)
from .filtration import (
    GradedClass,
    b_op,
    class_from_l1_family,
    class_from_s2_coeffs,
    filtration_level,
    gamma_decompose,
    ibar,
    ibar_s2,
    l1_apply,
    l1_matrix,
    l1_membership,
    mu_component,
)
from .samples import (
    random_expr,
    random_form,
    random_graded_class,
    random_l1_family,
    random_omega0_form,
    random_s2_coeffs,
    random_source_form,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f": {self.detail}" if self.detail and not self.passed else ""
        return f"{status} {self.name} ({self.cases} cases){extra}"


def first_variation_residual(density: Expr) -> Form:
    """d_V(L nu) - E(L) theta ^ nu - d_H(eta(L)); zero iff the fundamental
    formula holds for this Lagrangian."""
    ctx = density.ctx
    return (
        d_v(nu(ctx) * density)
        - euler(density).to_form()
        - d_h(variation_boundary(density))
    )


def check_first_variation(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    for k in range(cases):
        density = random_expr(rng, ctx, max_order=3, terms=2, max_degree=2)
        if not first_variation_residual(density).is_zero():
            return CheckResult("first_variation", False, cases, f"case {k}: {density}")
    return CheckResult("first_variation", True, cases)


def check_projector_idempotent(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    for k in range(cases):
        s = (k % 3) + 1
        w = random_form(rng, ctx, ctx.n, s, max_factor_order=2)
        iw = interior_euler(w)
        if interior_euler(iw) != iw:
            return CheckResult("projector_idempotent", False, cases, f"case {k}, s={s}")
    return CheckResult("projector_idempotent", True, cases)


def check_projector_kills_dh(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    for k in range(cases):
        s = (k % 3) + 1
        eta = random_form(rng, ctx, ctx.n - 1, s, max_factor_order=2)
        if not interior_euler(d_h(eta)).is_zero():
            return CheckResult("projector_kills_dh", False, cases, f"case {k}, s={s}")
    return CheckResult("projector_kills_dh", True, cases)


def check_cochain(rng: random.Random, ctx: JetContext, cases_s1: int, cases_s2: int) -> CheckResult:
    total = cases_s1 + cases_s2
    for k in range(cases_s1):
        w = interior_euler(random_form(rng, ctx, ctx.n, 1, max_factor_order=2))
        if not delta_v(delta_v(w)).is_zero():
            return CheckResult("cochain_delta_v", False, total, f"s=1 case {k}")
    for k in range(cases_s2):
        w = interior_euler(random_form(rng, ctx, ctx.n, 2, max_factor_order=1))
        if not delta_v(delta_v(w)).is_zero():
            return CheckResult("cochain_delta_v", False, total, f"s=2 case {k}")
    return CheckResult("cochain_delta_v", True, total)


def heat_source_form() -> SourceForm:
    """Delta = u_t - u_xx on n = 2 (x^2 playing time), m = 1."""
    ctx = JetContext(2, 1)
    return SourceForm(
        ctx,
        (Expr.u(ctx, 1, MultiIndex((0, 1))) - Expr.u(ctx, 1, MultiIndex((2, 0))),),
    )


def poisson_source_form() -> SourceForm:
    """Delta = u_xx on n = 1, m = 1 (the Euler derivative of -u_x^2/2)."""
    ctx = JetContext(1, 1)
    return SourceForm(ctx, (Expr.u(ctx, 1, MultiIndex((2,))),))


def residuals_all_zero(delta: SourceForm) -> bool:
    return all(v.is_zero() for v in helmholtz_residuals(delta).values())


def check_helmholtz_golden(rng: random.Random, ctx: JetContext, lagrangians: int) -> CheckResult:
    total = lagrangians + 2
    heat = heat_source_form()
    res = helmholtz_residuals(heat)
    key = (1, 1, MultiIndex((0, 1)))
    expected = Expr.const(heat.ctx, 2)
    if residuals_all_zero(heat) or res[key] != expected:
        return CheckResult("helmholtz_golden", False, total, "heat equation residual wrong")
    if not residuals_all_zero(poisson_source_form()):
        return CheckResult("helmholtz_golden", False, total, "u_xx flagged non-variational")
    for k in range(lagrangians):
        density = random_expr(rng, ctx, max_order=2, terms=2, max_degree=2)
        if not residuals_all_zero(euler(density)):
            return CheckResult("helmholtz_golden", False, total, f"E(L) case {k} flagged")
    return CheckResult("helmholtz_golden", True, total)


def check_helmholtz_matches_delta_v(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    """Residuals vanish iff delta_V does, and the graded components mu_k sum
    back to delta_V(Delta) exactly."""
    instances = [heat_source_form(), poisson_source_form()]
    for _ in range(cases):
        instances.append(random_source_form(rng, ctx, max_order=2))
        instances.append(euler(random_expr(rng, ctx, max_order=2, terms=2, max_degree=2)))
    for k, delta in enumerate(instances):
        dv = delta_v(delta.to_form())
        if residuals_all_zero(delta) != dv.is_zero():
            return CheckResult("helmholtz_matches_delta_v", False, len(instances), f"case {k}")
        total = Form.zero(delta.ctx, delta.ctx.n, 2)
        for weight in range(max(delta.jet_order(), 0) + 1):
            total = total + mu_component(delta, weight).payload
        if total != dv:
            return CheckResult(
                "helmholtz_matches_delta_v", False, len(instances), f"mu sum, case {k}"
            )
    return CheckResult("helmholtz_matches_delta_v", True, len(instances))


def check_filtration_preserved(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    done = 0
    while done < cases:
        s = (done % 3) + 1
        level = done % 4
        w = random_omega0_form(rng, ctx, s, level)
        if w.is_zero():
            done += 1
            continue
        if filtration_level(interior_euler(w)) > filtration_level(w):
            return CheckResult("filtration_preserved", False, cases, f"s={s}, l={level}")
        done += 1
    return CheckResult("filtration_preserved", True, cases)


def check_graded_linearity(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    for k in range(cases):
        s = (k % 3) + 1
        level = k % 3
        eta = random_graded_class(rng, ctx, s, level)
        f = random_expr(rng, ctx, max_order=2, terms=2, max_degree=2)
        if ibar(GradedClass(eta.level, eta.payload * f)) != GradedClass(
            eta.level, ibar(eta).payload * f
        ):
            return CheckResult("graded_linearity", False, cases, f"linearity, case {k}")
        if ibar(ibar(eta)) != ibar(eta):
            return CheckResult("graded_linearity", False, cases, f"idempotency, case {k}")
    return CheckResult("graded_linearity", True, cases)


def check_block_identities(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    for k in range(cases):
        s = (k % 2) + 2
        level = (k % 2) + 1
        eta = random_graded_class(rng, ctx, s, level)
        below = b_op(eta)
        i_below = interior_euler(below) if not below.is_zero() else below
        if b_op(eta - ibar(eta)) != i_below:
            return CheckResult("block_identities", False, cases, f"first identity, case {k}")
        if b_op(ibar(eta)) != below - i_below:
            return CheckResult("block_identities", False, cases, f"second identity, case {k}")
    return CheckResult("block_identities", True, cases)


def check_decomposition(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    zero = Form.zero(ctx, ctx.n, 2)
    if not gamma_decompose(zero).is_zero():
        return CheckResult("decomposition", False, cases + 1, "zero form")
    for k in range(cases):
        s = (k % 3) + 1
        level = k % 3
        w = interior_euler(random_omega0_form(rng, ctx, s, level))
        dec = gamma_decompose(w)
        if dec.reconstruct(ctx, s) != w:
            return CheckResult("decomposition", False, cases + 1, f"reconstruction, case {k}")
        for eta, _ in dec.pairs:
            if ibar(eta) != eta:
                return CheckResult("decomposition", False, cases + 1, f"eta not fixed, case {k}")
    return CheckResult("decomposition", True, cases + 1)


def _mat_mul(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _mat_rank(mat: list[list[Fraction]]) -> int:
    m = [row[:] for row in mat]
    rank = 0
    rows, cols = len(m), len(m[0])
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * p for v, p in zip(m[r], m[rank])]
        rank += 1
    return rank


def check_closed_forms(rng: random.Random, ctx: JetContext, cases: int) -> CheckResult:
    """Generic ibar against the s = 2 closed form (l = 1..3), against the
    level-1 matrix action (s = 2..4), matrix laws, and the s = 3 cyclic
    membership conditions."""
    total = 0
    for l in (1, 2, 3):
        for k in range(cases):
            coeffs = random_s2_coeffs(rng, ctx, l)
            if not coeffs:
                continue
            total += 1
            lhs = ibar(class_from_s2_coeffs(ctx, coeffs, l))
            rhs = class_from_s2_coeffs(ctx, ibar_s2(coeffs, l), l)
            if lhs != rhs:
                return CheckResult("closed_forms", False, total, f"s=2, l={l}, case {k}")

    l1_ctxs = {2: ctx, 3: JetContext(ctx.n, max(ctx.m, 2)), 4: JetContext(1, 3)}
    for s, c in l1_ctxs.items():
        for k in range(cases):
            family = random_l1_family(rng, c, s)
            if not family:
                continue
            total += 1
            lhs = ibar(class_from_l1_family(c, family))
            rhs = class_from_l1_family(c, l1_apply(family))
            if lhs != rhs:
                return CheckResult("closed_forms", False, total, f"l=1, s={s}, case {k}")

    for s in (2, 3, 4, 5):
        total += 1
        mat = l1_matrix(s)
        if _mat_mul(mat, mat) != mat:
            return CheckResult("closed_forms", False, total, f"l1_matrix({s}) not idempotent")
        if _mat_rank(mat) != s - 1:
            return CheckResult("closed_forms", False, total, f"l1_matrix({s}) rank != {s - 1}")

    cyc = JetContext(2, 3)
    for k in range(cases):
        family = random_l1_family(rng, cyc, 3)
        if not family:
            continue
        total += 1
        image_part = l1_apply(family)
        kernel_part = {
            key: family.get(key, Expr.zero(cyc)) - image_part.get(key, Expr.zero(cyc))
            for key in set(family) | set(image_part)
        }
        kernel_part = {k2: v for k2, v in kernel_part.items() if not v.is_zero()}
        for part, which in ((image_part, "image"), (kernel_part, "kernel")):
            if not part:
                continue
            if not l1_membership(part, which):
                return CheckResult("closed_forms", False, total, f"{which} membership, case {k}")
            cls = class_from_l1_family(cyc, part)
            fixed = ibar(cls) == cls
            killed = ibar(cls).is_zero()
            if which == "image" and not fixed:
                return CheckResult("closed_forms", False, total, f"image not fixed, case {k}")
            if which == "kernel" and not killed:
                return CheckResult("closed_forms", False, total, f"kernel not killed, case {k}")
    return CheckResult("closed_forms", True, total)


def mu_top_closed_form(delta: SourceForm) -> Form:
    """Top-weight graded component of delta_V(Delta) assembled directly from
    the coefficient formula

      mu_l = -1/2 sum_{|I|=l} (d^I_b Delta_a - (-1)^l d^I_a Delta_b)
             theta^a ^ theta^b_I ^ nu

    (sign fixed by Sum_k mu_k = delta_V Delta under the conventions here).
    """
    ctx = delta.ctx
    l = max(delta.jet_order(), 0)
    sign = 1 if l % 2 == 0 else -1
    out = Form.zero(ctx, ctx.n, 2)
    vol = nu(ctx)
    for a in range(1, ctx.m + 1):
        for b in range(1, ctx.m + 1):
            for index in multi_indices(ctx.n, l):
                coeff = partial_jet(delta.components[a - 1], b, index) - sign * partial_jet(
                    delta.components[b - 1], a, index
                )
                if coeff.is_zero():
                    continue
                term = wedge(wedge(theta(ctx, a), theta(ctx, b, index)), vol)
                out = out + term * (coeff * Fraction(-1, 2))
    return out


def check_paper_values(rng: random.Random, ctx: JetContext, mu_cases: int) -> CheckResult:
    total = 2 + mu_cases
    m1 = JetContext(1, 1)
    eta = GradedClass(
        2, wedge(wedge(theta(m1, 1), theta(m1, 1, MultiIndex((2,)))), nu(m1))
    )
    if not ibar(eta).is_zero():
        return CheckResult("paper_values", False, total, "Ibar_2[theta ^ theta_xx ^ nu] != 0")
    if l1_matrix(1) != [[Fraction(0)]]:
        return CheckResult("paper_values", False, total, "Ibar_1 at s=1 not zero")
    for k in range(mu_cases):
        delta = random_source_form(rng, ctx, max_order=2)
        top = mu_component(delta, max(delta.jet_order(), 0)).payload
        if top != mu_top_closed_form(delta):
            return CheckResult("paper_values", False, total, f"mu_l closed form, case {k}")
    return CheckResult("paper_values", True, total)


def run_all(n: int = 2, m: int = 2, seed: int = 0, cases: int = 20) -> list[CheckResult]:
    ctx = JetContext(n, m)
    rng = random.Random(seed)
    half = max(cases // 2, 1)
    return [
        check_first_variation(rng, ctx, cases),
        check_projector_idempotent(rng, ctx, cases),
        check_projector_kills_dh(rng, ctx, cases),
        check_cochain(rng, ctx, cases, half),
        check_helmholtz_golden(rng, ctx, half),
        check_helmholtz_matches_delta_v(rng, ctx, half),
        check_filtration_preserved(rng, ctx, cases),
        check_graded_linearity(rng, ctx, cases),
        check_block_identities(rng, ctx, cases),
        check_decomposition(rng, ctx, cases),
        check_closed_forms(rng, ctx, cases),
        check_paper_values(rng, ctx, max(cases // 4, 1)),
    ]
