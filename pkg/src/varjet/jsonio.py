"""Machine-readable form payloads.

Schema:

  {"bidegree": [r, s],
   "terms": [{"coeff": "<expression string>",
              "contact": [[alpha, "<index digits>"], ...],
              "dx": [i, ...]}, ...]}

Coefficient strings conform to the expression grammar, so a payload fed back
through the parser reproduces the identical canonical value.
"""

from __future__ import annotations

from .jetcore import JetContext, MultiIndex
from .forms import Form, _canonical_factors
from .parser import expr_to_str, parse_expr


def form_to_obj(w: Form) -> dict:
    terms = []
    for mono, coeff in sorted(w.terms.items(), key=lambda kv: kv[0]):
        terms.append(
            {
                "coeff": expr_to_str(coeff),
                "contact": [[c.alpha, c.index.digits()] for c in mono.contact],
                "dx": list(mono.horizontal),
            }
        )
    return {"bidegree": [w.r, w.s], "terms": terms}


def form_from_obj(obj: dict, ctx: JetContext) -> Form:
    r, s = obj["bidegree"]
    total = Form.zero(ctx, r, s)
    for term in obj["terms"]:
        coeff = parse_expr(term["coeff"], ctx)
        factors: list[tuple] = []
        for alpha, digits in term["contact"]:
            exps = [0] * ctx.n
            for ch in str(digits):
                exps[int(ch) - 1] += 1
            factors.append((0, int(alpha), MultiIndex(exps)))
        factors.extend((1, int(i)) for i in term["dx"])
        if len(term["contact"]) != s or len(term["dx"]) != r:
            raise ValueError("term factors disagree with the declared bidegree")
        canon = _canonical_factors(factors)
        if canon is None:
            continue
        sign, mono = canon
        value = coeff * sign
        if not value.is_zero():
            total = total + Form(ctx, r, s, {mono: value})
    return total
