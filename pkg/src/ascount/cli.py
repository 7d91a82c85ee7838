"""Command-line surface for the counting library.

Subcommands:

  count        one exact count: a local discriminant exponent, a global
               discriminant degree, or one explicit divisor
  series       Dirichlet-series coefficients; for the local field also the
               exact rational form and its linear recurrence
  verify       budgeted invariant suites (oracle, psi, integrality,
               inequalities) with a human summary and a JSON report
  asymptotics  main-term parameters, pole catalogs, leading constants,
               and polynomial fits as JSON

Exit codes: 0 success, 1 failed invariant or internal inconsistency,
2 usage error.  Output is byte-deterministic for fixed flags and seed,
independent of the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from random import Random

from .asymptotics import report_json
from .counting import (counts_by_degree, enumerate_global, enumerate_local,
                       global_count, global_count_by_degree, local_count)
from .dirichlet import (global_dirichlet, local_rational,
                        nested_geometric_check, psi_closed_form,
                        psi_polynomial, series_to_json)
from .errors import InvariantViolation, TruncationError
from .fields import INFINITY, Divisor, PrimeContext, finite_place, make_context

# ---------------------------------------------------------------------------
# divisor grammar
# ---------------------------------------------------------------------------

# term(,term)*; term = poly or poly^e or inf^e.  Polynomials are comma-free
# strings like t2+t+1 (digits after t give the exponent).  Over F_p the
# coefficients are single digits; for n > 1 they are bracketed base-p
# coordinate vectors in the power basis, constant digit first, e.g. [0,1]t+1.

_MONOMIAL = re.compile(r"^(?:\[([0-9,]+)\]|(\d+))?(?:t(\d+)?)?$")


def _split_terms(spec: str) -> list:
    """Split on commas that are not inside coefficient brackets."""
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(spec):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced ']' in divisor")
        elif ch == "," and depth == 0:
            terms.append(spec[start:i])
            start = i + 1
    if depth:
        raise ValueError("unbalanced '[' in divisor")
    terms.append(spec[start:])
    return terms


def _parse_coefficient(ctx: PrimeContext, vector: str, digits: str) -> int:
    if vector is not None:
        coords = [int(d) for d in vector.split(",") if d != ""]
        if not coords or len(coords) > ctx.n:
            raise ValueError(f"coefficient [{vector}] needs 1..{ctx.n} digits")
        if any(d >= ctx.p for d in coords):
            raise ValueError(f"coefficient digit out of range in [{vector}]")
        coords += [0] * (ctx.n - len(coords))
        return ctx.element_from_coords(coords)
    value = int(digits)
    if value >= ctx.p:
        raise ValueError(
            f"coefficient {value} is not reduced mod {ctx.p}"
            + (" (use a bracketed vector)" if ctx.n > 1 else ""))
    return value


def _parse_poly(ctx: PrimeContext, text: str) -> list:
    if not text:
        raise ValueError("empty polynomial in divisor")
    coeffs: dict = {}
    for mono in text.split("+"):
        m = _MONOMIAL.match(mono)
        if not m or not mono:
            raise ValueError(f"bad monomial {mono!r} in divisor")
        vector, digits, power = m.groups()
        if vector is None and digits is None and "t" not in mono:
            raise ValueError(f"bad monomial {mono!r} in divisor")
        k = 0 if "t" not in mono else (1 if power is None else int(power))
        c = 1 if (vector is None and digits is None) else \
            _parse_coefficient(ctx, vector, digits)
        coeffs[k] = ctx.fadd(coeffs.get(k, 0), c)
    deg = max(coeffs)
    return [coeffs.get(i, 0) for i in range(deg + 1)]


def parse_divisor(ctx: PrimeContext, spec: str) -> Divisor:
    """Parse `term(,term)*`, term = poly[^e] or inf[^e], into a Divisor."""
    pairs = []
    for term in _split_terms(spec.strip()):
        term = term.strip()
        if not term:
            raise ValueError("empty term in divisor")
        base, caret, exp = term.partition("^")
        e = 1
        if caret:
            if not exp.isdigit() or int(exp) < 1:
                raise ValueError(f"bad multiplicity {exp!r} in divisor")
            e = int(exp)
        place = INFINITY if base == "inf" else _parse_poly(ctx, base)
        if place is not INFINITY:
            place = finite_place(ctx, place)
        pairs.append((place, e))
    return Divisor(pairs)


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _emit(text: str, path) -> None:
    data = text if text.endswith("\n") else text + "\n"
    if path in (None, "-"):
        sys.stdout.write(data)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(data)


def _resolve_workers(flag) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("ASCOUNT_WORKERS", "")
    if env:
        try:
            return max(0, int(env))
        except ValueError:
            raise ValueError(f"ASCOUNT_WORKERS={env!r} is not an integer")
    return 0


def _u_poly(coeffs) -> str:
    """Render a polynomial in u = q^(-s), low degree first on input."""
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        unit = "1" if k == 0 else ("u" if k == 1 else f"u^{k}")
        body = unit if (mag == 1 and k > 0) else \
            (str(mag) if k == 0 else f"{mag}*{unit}")
        parts.append(("- " if c < 0 else "+ ") + body)
    if not parts:
        return "0"
    head = parts[0][2:] if parts[0][0] == "+" else "-" + parts[0][2:]
    return " ".join([head] + parts[1:])


def _rational_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else str(c)


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def cmd_count(args, parser) -> int:
    ctx = make_context(args.p, args.n, args.r)
    if args.mode == "local":
        if args.exp is None:
            parser.error("count local needs --exp")
        if args.exp < 0:
            parser.error("--exp must be non-negative")
        value = local_count(ctx, args.exp)
    else:
        if args.exp is not None:
            parser.error("count global takes --degree or --divisor, not --exp")
        if args.degree is not None:
            if args.degree < 0:
                parser.error("--degree must be non-negative")
            value = global_count_by_degree(ctx, args.degree)
        else:
            value = global_count(ctx, parse_divisor(ctx, args.divisor))
    _emit(str(value), args.out)
    return 0


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def cmd_series(args, parser) -> int:
    if args.max < 0:
        parser.error("--max must be non-negative")
    ctx = make_context(args.p, args.n, args.r)
    if args.mode == "global":
        series = global_dirichlet(ctx, args.max, _resolve_workers(args.workers))
        rational = None
    else:
        rational = local_rational(ctx).reduced()
        series = rational.series(args.max)
    coeffs = series.coefficients()

    if args.format == "tsv":
        text = "\n".join(f"{m}\t{_rational_str(c)}" for m, c in enumerate(coeffs))
    elif args.format == "json":
        payload = json.loads(series_to_json(ctx, series))
        if rational is not None:
            payload["numerator"] = [_rational_str(c) for c in rational.num]
            payload["denominator"] = [_rational_str(c) for c in rational.den]
            payload["recurrence"] = [_rational_str(w) for w in rational.recurrence()]
        text = json.dumps(payload, indent=2)
    else:
        lines = [",".join(_rational_str(c) for c in coeffs)]
        if rational is not None:
            lines.append(f"numerator: {_u_poly(rational.num)}")
            lines.append(f"denominator: {_u_poly(rational.den)}")
            terms = [f"{_rational_str(w)}*c[m-{k}]"
                     for k, w in enumerate(rational.recurrence(), start=1) if w]
            lines.append("recurrence: c[m] = "
                         + (" + ".join(terms) if terms else "0")
                         + f" for m > {len(rational.num) - 1}")
        text = "\n".join(lines)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

# Each item: (suite, name, nominal cost in seconds, thunk).  Thunks return
# None on success or a minimal counterexample string.  Nominal costs are
# calibrated desk-scale estimates; the selection must not depend on wall
# clocks or the report would stop being deterministic.

_LOCAL_ORACLE_GRID = ((2, 1, 1), (2, 2, 1), (3, 1, 1),
                      (2, 1, 2), (2, 2, 2), (3, 1, 2))
_GLOBAL_ORACLE_GRID = ((2, 1, 1, 8), (2, 1, 2, 6))
_PSI_GRID = ((2, 3), (3, 3), (5, 2), (7, 1))
_INTEGRALITY_GRID = ((2, 1, 1, 24), (2, 2, 1, 16), (3, 1, 1, 18),
                     (2, 1, 2, 48), (2, 2, 2, 24), (3, 1, 2, 24))


def _check_local_oracle(p: int, n: int, r: int, max_exp: int):
    ctx = make_context(p, n, r)
    brute = enumerate_local(ctx, max_exp)
    for e in range(max_exp + 1):
        closed = local_count(ctx, e)
        if closed != brute.get(e, 0):
            return (f"exponent {e}: closed form {closed}, "
                    f"enumeration {brute.get(e, 0)}")
    return None


def _check_global_oracle(p: int, n: int, r: int, max_deg: int):
    ctx = make_context(p, n, r)
    brute = counts_by_degree(enumerate_global(ctx, max_deg, check=True))
    coeffs = global_dirichlet(ctx, max_deg).coefficients()
    for d in range(max_deg + 1):
        closed = global_count_by_degree(ctx, d)
        got = brute.get(d, 0)
        if closed != got or coeffs[d] != got:
            return (f"degree {d}: closed form {closed}, series "
                    f"{_rational_str(coeffs[d])}, enumeration {got}")
    return None


def _check_psi_identity(p: int, r_max: int):
    for r in range(1, r_max + 1):
        ctx = make_context(p, 1, r)
        for f in range(1, r + 1):
            for norm in (p, p * p, p ** 3):
                if psi_polynomial(ctx, f, norm) != psi_closed_form(ctx, f, norm):
                    return f"p={p} r={r} f={f} norm={norm}"
    return None


def _check_nested_spots(seed: int):
    rng = Random(seed)
    for trial in range(8):
        depth = rng.randint(2, 4)
        alphas = tuple(-rng.randint(1, 4) for _ in range(depth))
        x = Fraction(rng.randint(2, 9), rng.choice((1, 2)))
        if x <= 1:
            x += 1
        if not nested_geometric_check(x, alphas, 12):
            return f"trial {trial}: x={x} alphas={alphas}"
    return None


def _check_integrality(p: int, n: int, r: int, truncation: int, workers: int):
    ctx = make_context(p, n, r)
    coeffs = global_dirichlet(ctx, truncation, workers).coefficients()
    for m, c in enumerate(coeffs):
        if c.denominator != 1 or c < 0:
            return f"c_{m} = {c} is not a non-negative integer"
    expected0 = 1 if r == 1 else 0
    if coeffs[0] != expected0:
        return f"c_0 = {_rational_str(coeffs[0])}, expected {expected0}"
    return None


def _check_inequalities():
    from .asymptotics import verify_inequalities
    report = verify_inequalities(7, 6)
    if not report["ok"]:
        for family, block in report.items():
            if family != "ok" and block["violations"]:
                return f"{family}: {block['violations'][0]}"
    labels = sorted({eq[0] for eq in report["zeta_abscissa_chain"]["equalities"]})
    if labels != ["collapse j=p=2", "left equality"]:
        return f"unexpected equality cases {labels}"
    return None


def _inequality_detail() -> str:
    from .asymptotics import verify_inequalities
    report = verify_inequalities(7, 6)
    cases = {}
    for label, p, r, j in report["zeta_abscissa_chain"]["equalities"]:
        cases.setdefault(f"{label} (j={j})", []).append(f"r={r}")
    listed = "; ".join(f"{k}: {', '.join(v)}" for k, v in sorted(cases.items()))
    single = len(report["single_block_bound"]["equalities"])
    return f"equalities: {listed}; single-block all-(p-1) tuples: {single}"


def _verify_items(seed: int, workers: int) -> list:
    items = []
    for (p, n, r) in _LOCAL_ORACLE_GRID:
        items.append(("oracle", f"local ({p},{n},{r}) exponents <= 12", 1.0,
                      lambda p=p, n=n, r=r: _check_local_oracle(p, n, r, 12)))
    for (p, n, r, d) in _GLOBAL_ORACLE_GRID:
        items.append(("oracle", f"global ({p},{n},{r}) degrees <= {d}", 2.0,
                      lambda p=p, n=n, r=r, d=d: _check_global_oracle(p, n, r, d)))
    for (p, r_max) in _PSI_GRID:
        items.append(("psi", f"closed form p={p} r <= {r_max} norms up to p^3",
                      2.0 if p > 3 else 1.0,
                      lambda p=p, r_max=r_max: _check_psi_identity(p, r_max)))
    items.append(("psi", f"nested geometric spot checks (seed {seed})", 1.0,
                  lambda: _check_nested_spots(seed)))
    for (p, n, r, M) in _INTEGRALITY_GRID:
        items.append(("integrality", f"global series ({p},{n},{r}) M={M}", 1.0,
                      lambda p=p, n=n, r=r, M=M:
                      _check_integrality(p, n, r, M, workers)))
    items.append(("inequalities", "abscissa lemmas p <= 7, r <= 6", 1.0,
                  _check_inequalities))
    return items


def cmd_verify(args, parser) -> int:
    if args.budget <= 0:
        parser.error("--budget must be positive")
    workers = _resolve_workers(args.workers)
    items = [it for it in _verify_items(args.seed, workers)
             if args.suite in ("all", it[0])]
    if not items:
        parser.error(f"no items in suite {args.suite!r}")

    # deterministic budget shrinking: drop the largest estimate first,
    # later-declared items first among ties, never below one item
    kept = set(range(len(items)))
    while len(kept) > 1 and sum(items[i][2] for i in kept) > args.budget:
        kept.remove(max(kept, key=lambda i: (items[i][2], i)))

    results = []
    failed = 0
    for i, (suite, name, cost, thunk) in enumerate(items):
        if i not in kept:
            results.append({"suite": suite, "item": name, "status": "skipped",
                            "detail": f"estimated {cost:.0f}s over budget"})
            continue
        counterexample = thunk()
        if counterexample is None:
            detail = _inequality_detail() if suite == "inequalities" else ""
            results.append({"suite": suite, "item": name, "status": "ok",
                            "detail": detail})
        else:
            failed += 1
            results.append({"suite": suite, "item": name, "status": "fail",
                            "detail": counterexample})
    for entry in results:
        line = f"[{entry['status']:>7}] {entry['suite']:<12} {entry['item']}"
        if entry["detail"]:
            line += f" :: {entry['detail']}"
        print(line)
    ran = sum(1 for e in results if e["status"] != "skipped")
    print(f"{ran} of {len(results)} items run, {failed} failed")

    report = json.dumps({"suite": args.suite, "budget": args.budget,
                         "seed": args.seed, "results": results,
                         "ok": failed == 0}, indent=2)
    if args.out in (None, "-"):
        print(report)
    else:
        _emit(report, args.out)
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------


def cmd_asymptotics(args, parser) -> int:
    if args.precision < 30:
        parser.error("--precision must be at least 30")
    if args.local and args.fit_max is not None:
        parser.error("--fit-max fits the global series; drop --local")
    ctx = make_context(args.p, args.n, args.r)
    coeffs = None
    if args.fit_max is not None:
        if args.fit_max < 0:
            parser.error("--fit-max must be non-negative")
        series = global_dirichlet(ctx, args.fit_max,
                                  _resolve_workers(args.workers))
        coeffs = [int(c) for c in series.coefficients()]
    full = json.loads(report_json(ctx, coefficients=coeffs,
                                  precision=args.precision))
    if args.local:
        payload = {key: full[key] for key in ("p", "n", "r", "params")}
        payload["pole_catalog"] = {"local": full["pole_catalog"]["local"]}
        payload["constants"] = full["constants"]
        full = payload
    else:
        full.pop("inequality_report", None)  # owned by `verify`
    _emit(json.dumps(full, indent=2), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def _add_context_flags(sub) -> None:
    sub.add_argument("--p", type=int, required=True,
                     help="residue characteristic (prime)")
    sub.add_argument("--n", type=int, default=1,
                     help="extension degree of the constant field (q = p^n)")
    sub.add_argument("--r", type=int, required=True,
                     help="rank of the elementary-abelian group C_p^r")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ascount",
        description="Exact counts of wildly ramified C_p^r-extensions of "
                    "F_q((t)) and F_q(t) by discriminant.")
    commands = parser.add_subparsers(dest="command", required=True)

    c = commands.add_parser(
        "count", help="one exact count",
        description="Count extensions with a prescribed discriminant: a "
                    "local exponent, a global degree, or one divisor given "
                    "as term(,term)* with term = poly[^e] or inf[^e], "
                    "polynomials written like t2+t+1.")
    c.add_argument("mode", choices=("local", "global"))
    _add_context_flags(c)
    what = c.add_mutually_exclusive_group(required=True)
    what.add_argument("--exp", type=int, help="local discriminant exponent")
    what.add_argument("--degree", type=int, help="global discriminant degree")
    what.add_argument("--divisor", help="explicit discriminant divisor")
    c.add_argument("--out", help="output path (default stdout)")
    c.set_defaults(func=cmd_count)

    s = commands.add_parser(
        "series", help="Dirichlet-series coefficients",
        description="Coefficients c_0..c_M of the counting series in "
                    "u = q^(-s); the local series also reports its exact "
                    "rational form and recurrence.")
    s.add_argument("mode", choices=("local", "global"))
    _add_context_flags(s)
    s.add_argument("--max", type=int, required=True,
                   help="largest exponent / degree M")
    s.add_argument("--format", choices=("plain", "json", "tsv"),
                   default="plain")
    s.add_argument("--workers", type=int,
                   help="parallel Euler-factor workers (0 = serial; "
                        "default from ASCOUNT_WORKERS)")
    s.add_argument("--out", help="output path (default stdout)")
    s.set_defaults(func=cmd_series)

    v = commands.add_parser(
        "verify", help="run invariant suites",
        description="Run the oracle, psi, integrality and inequality "
                    "suites.  Nominal grids shrink deterministically "
                    "(largest estimates dropped first) to fit the budget.")
    v.add_argument("--suite",
                   choices=("oracle", "psi", "integrality", "inequalities",
                            "all"),
                   default="all")
    v.add_argument("--budget", type=float, default=60.0,
                   help="time budget in seconds (nominal estimates)")
    v.add_argument("--seed", type=int, default=0,
                   help="seed for the sampled spot checks")
    v.add_argument("--workers", type=int)
    v.add_argument("--out", help="write the JSON report here instead of "
                                 "stdout")
    v.set_defaults(func=cmd_verify)

    a = commands.add_parser(
        "asymptotics", help="pole data, constants, and fits",
        description="Emit main-term parameters, pole catalogs, local "
                    "leading constants, and (with --fit-max) polynomial "
                    "fits of the exact coefficients, as JSON.")
    _add_context_flags(a)
    a.add_argument("--local", action="store_true",
                   help="only the local-field data")
    a.add_argument("--fit-max", type=int,
                   help="fit the global coefficients up to this degree")
    a.add_argument("--precision", type=int, default=120,
                   help="working precision in bits for the constants")
    a.add_argument("--workers", type=int)
    a.add_argument("--out", help="output path (default stdout)")
    a.set_defaults(func=cmd_asymptotics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
