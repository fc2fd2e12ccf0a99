"""Command-line interface.

Subcommands:

  el          Euler-Lagrange components of a Lagrangian density
  helmholtz   Helmholtz verdict and nonzero residuals for a source form
  ieuler      interior Euler operator applied to a form
  decompose   graded decomposition (eta_k, omega_k) of a functional form
  gr          filtration level and contact-weight split of a form
  check       run the identity suite over seeded random instances

Exit codes: 0 success or verdict PASS, 1 verdict FAIL or a domain error,
2 usage error, 3 parse error.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .jetcore import JetContext
from .euler import SourceForm, euler, helmholtz_residuals, interior_euler
from .filtration import filtration_level, gamma_decompose
from .forms import contact_weight_split
from .jsonio import form_to_obj
from .parser import ParseError, expr_to_str, form_to_str, parse_expr, parse_form
from . import checks

EXIT_OK = 0
EXIT_VERDICT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, default=1, help="base dimension (1..3)")
    sub.add_argument("--m", type=int, default=1, help="fibre dimension (1..3)")
    sub.add_argument("--max-order", type=int, default=4, help="cap on accepted jet order")
    sub.add_argument("--json", action="store_true", help="emit JSON instead of text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varjet",
        description="Exact variational calculus on jet coordinates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("el", help="Euler-Lagrange components of a Lagrangian density")
    _add_common(p)
    p.add_argument("density", help="Lagrangian density, e.g. '1/2*u1_1^2'")

    p = sub.add_parser("helmholtz", help="Helmholtz conditions for a source form")
    _add_common(p)
    p.add_argument("components", nargs="+", help="m source-form components Delta_alpha")

    p = sub.add_parser("ieuler", help="apply the interior Euler operator")
    _add_common(p)
    p.add_argument("form", help="form literal, e.g. 'u1_1*theta1_1 ^ nu'")

    p = sub.add_parser("decompose", help="graded decomposition of a functional form")
    _add_common(p)
    p.add_argument("form", help="functional form literal")

    p = sub.add_parser("gr", help="filtration level and weight split of a form")
    _add_common(p)
    p.add_argument("form", help="form literal")

    p = sub.add_parser("check", help="run the identity suite")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0, help="random seed (printed in the report)")
    p.add_argument("--cases", type=int, default=20, help="instances per property")

    return parser


def _context(args: argparse.Namespace, parser: argparse.ArgumentParser) -> JetContext:
    if not 1 <= args.n <= 3 or not 1 <= args.m <= 3:
        parser.error(f"--n and --m must be in 1..3 (got n={args.n}, m={args.m})")
    if args.max_order < 0:
        parser.error("--max-order must be non-negative")
    return JetContext(args.n, args.m, args.max_order)


def _cmd_el(args, ctx: JetContext) -> int:
    density = parse_expr(args.density, ctx)
    delta = euler(density)
    if args.json:
        payload = {
            "kind": "source_form",
            "n": ctx.n,
            "m": ctx.m,
            "components": [expr_to_str(c) for c in delta.components],
        }
        print(json.dumps(payload))
    else:
        for alpha, comp in enumerate(delta.components, start=1):
            print(f"E_{alpha} = {expr_to_str(comp)}")
    return EXIT_OK


def _cmd_helmholtz(args, ctx: JetContext) -> int:
    if len(args.components) != ctx.m:
        print(
            f"error: expected {ctx.m} component(s), got {len(args.components)}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    comps = tuple(parse_expr(text, ctx) for text in args.components)
    delta = SourceForm(ctx, comps)
    residuals = helmholtz_residuals(delta)
    nonzero = {k: v for k, v in residuals.items() if not v.is_zero()}
    verdict = "PASS" if not nonzero else "FAIL"
    if args.json:
        payload = {
            "kind": "helmholtz",
            "verdict": verdict,
            "residuals": [
                {
                    "alpha": a,
                    "beta": b,
                    "index": list(index),
                    "value": expr_to_str(v),
                }
                for (a, b, index), v in sorted(nonzero.items())
            ],
        }
        print(json.dumps(payload))
    else:
        print(f"verdict: {verdict}")
        for (a, b, index), v in sorted(nonzero.items()):
            print(f"residual alpha={a} beta={b} I={tuple(index)}: {expr_to_str(v)}")
    return EXIT_OK if verdict == "PASS" else EXIT_VERDICT_FAIL


def _cmd_ieuler(args, ctx: JetContext) -> int:
    w = parse_form(args.form, ctx)
    result = interior_euler(w)
    if args.json:
        print(json.dumps(form_to_obj(result)))
    else:
        print(form_to_str(result))
    return EXIT_OK


def _cmd_decompose(args, ctx: JetContext) -> int:
    w = parse_form(args.form, ctx)
    decomposition = gamma_decompose(w)
    if args.json:
        payload = {
            "kind": "gamma_decomposition",
            "pairs": [
                {
                    "level": eta.level,
                    "eta": form_to_obj(eta.payload),
                    "omega": form_to_obj(omega),
                }
                for eta, omega in decomposition.pairs
            ],
        }
        print(json.dumps(payload))
    else:
        if not decomposition.pairs:
            print("zero form: empty decomposition")
        for eta, omega in decomposition.pairs:
            print(f"k={eta.level}: eta = {form_to_str(eta.payload)}")
            print(f"k={eta.level}: omega = {form_to_str(omega)}")
    return EXIT_OK


def _cmd_gr(args, ctx: JetContext) -> int:
    w = parse_form(args.form, ctx)
    level = filtration_level(w)
    parts = contact_weight_split(w)
    if args.json:
        payload = {
            "kind": "filtration",
            "level": level,
            "parts": {str(k): form_to_obj(part) for k, part in parts.items()},
        }
        print(json.dumps(payload))
    else:
        print(f"level: {level}")
        for k, part in parts.items():
            print(f"weight {k}: {form_to_str(part)}")
    return EXIT_OK


def _cmd_check(args, ctx: JetContext) -> int:
    results = checks.run_all(n=ctx.n, m=ctx.m, seed=args.seed, cases=args.cases)
    if args.json:
        payload = {
            "kind": "check",
            "seed": args.seed,
            "n": ctx.n,
            "m": ctx.m,
            "cases": args.cases,
            "results": [
                {"name": r.name, "passed": r.passed, "cases": r.cases, "detail": r.detail}
                for r in results
            ],
        }
        print(json.dumps(payload))
    else:
        print(f"seed = {args.seed}  (n={ctx.n}, m={ctx.m}, cases={args.cases})")
        for r in results:
            print(r.line())
    failed = [r for r in results if not r.passed]
    if failed and not args.json:
        print(f"{len(failed)} of {len(results)} checks failed", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VERDICT_FAIL


_HANDLERS = {
    "el": _cmd_el,
    "helmholtz": _cmd_helmholtz,
    "ieuler": _cmd_ieuler,
    "decompose": _cmd_decompose,
    "gr": _cmd_gr,
    "check": _cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        ctx = _context(args, parser)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _HANDLERS[args.command](args, ctx)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT_FAIL


if __name__ == "__main__":
    sys.exit(main())
