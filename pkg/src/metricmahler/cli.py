"""Command-line front end.

Every subcommand emits one output record, either human-readable or as JSON
(``--json``) with a versioned schema.  Numeric enclosures are printed as
outward-rounded decimal strings, never binary floats; `exact` is true only
for values computed in exact arithmetic (bools, integers, rationals, formal
prime products) and false for every enclosure.

Exit codes: 0 success, 2 parse/usage error, 3 precision failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .enclosure import RealEnclosure, to_fraction
from .errors import (
    DomainInputError,
    EmptySearchError,
    HeightAxiomError,
    InputSyntaxError,
    InvariantViolation,
    MetricMahlerError,
    PrecisionError,
)
from .exact import (
    IntPolynomial,
    canonicalize_poly,
    format_rational,
    parse_polynomial,
    parse_rational,
    print_polynomial,
)
from .groups import derived_heights, framework_report, parse_group_file
from .measure import (
    DEFAULT_TOL,
    dobrowolski_lower_bound,
    is_p_adic_unit,
    is_root_of_unity,
    largest_nonunit_prime,
    mahler_measure,
    weil_height,
)
from .quadfield import qf_enumerate_min_height, qf_minimal_polynomial, parse_quad_element
from .roots import certified_roots
from .search import (
    parse_member_text,
    parse_pool_file,
    search_m1_upper,
    search_minf_upper,
    hinf_root_split,
)
from .surd import (
    format_surd,
    parse_surd,
    surd_degree,
    surd_from_rational,
    surd_m_infinity,
    surd_mul,
    surd_pow,
    surd_weil_height,
)

SCHEMA_VERSION = 1


def _decimal_digits(tol: Fraction) -> int:
    digits = len(str(tol.denominator // max(1, tol.numerator))) + 2
    return max(12, min(60, digits))


def _enclosure_value(enc: RealEnclosure, tol: Fraction) -> dict:
    digits = _decimal_digits(tol)
    lo, hi = enc.decimal_bounds(digits)
    width_lo, width_hi = RealEnclosure(enc.width, enc.width, enc.precision_bits).decimal_bounds(digits)
    return {"lo": lo, "hi": hi, "width": width_hi, "precision_bits": enc.precision_bits}


def _record(command: str, inputs: dict, value, exact: bool, witness=None, diagnostics=None) -> dict:
    record = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "value": value,
        "exact": exact,
    }
    if witness is not None:
        record["witness"] = witness
    record["diagnostics"] = diagnostics or {}
    return record


def _tol_arg(value: str) -> Fraction:
    try:
        tol = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad tolerance {value!r}: {exc}") from exc
    if tol <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricmahler",
        description="Mahler measures, Weil heights, metric heights, and strong metric Mahler measure bounds.",
    )
    parser.add_argument("--json", action="store_true", help="emit the record as JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--tol", type=_tol_arg, default=DEFAULT_TOL, help="enclosure width target")
        p.add_argument("--json", action="store_true", help="emit the record as JSON")
        return p

    p = add("mahler", help="Mahler measure enclosure of an integer polynomial")
    p.add_argument("poly")
    p = add("height", help="Weil height enclosure M(f)^(1/deg f)")
    p.add_argument("poly")
    p = add("roots", help="certified root disks of a squarefree polynomial")
    p.add_argument("poly")
    p = add("cyclo", help="is the polynomial a product of cyclotomic polynomials?")
    p.add_argument("poly")
    p = add("padic", help="p-adic unit test / largest non-unit prime")
    p.add_argument("poly")
    p.add_argument("--prime", type=int, default=None)
    p = add("dobrowolski", help="degree-based lower bound exp(c*(loglog d/log d)^3)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--constant", type=str, default="1/4")
    p = add("surd", help="exact strong metric Mahler measure, height, degree of a^(1/d)")
    p.add_argument("rational")
    p.add_argument("--root", type=int, default=1, help="root order d")
    p = add("surd-op", help="surd coset operations, e.g. 'mul(2^1/2, 3^-1)' or 'pow(2^1/2, -3/2)'")
    p.add_argument("expr")
    p = add("field-min", help="minimum Weil height > 1 in a bounded box of Q(sqrt(D))")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p = add("minf-search", help="strong metric Mahler measure bounds from a pool file")
    p.add_argument("pool_file")
    p.add_argument("target")
    p.add_argument("--max-length", type=int, default=None)
    p = add("m1-search", help="metric Mahler measure bounds from a pool file")
    p.add_argument("pool_file")
    p.add_argument("target")
    p.add_argument("--max-length", type=int, default=None)
    p = add("hinf-split", help="H(x)^(1/n) upper bound from the n-th root factorization")
    p.add_argument("surd")
    p.add_argument("--n", type=int, required=True)
    p = add("framework", help="height tables and theorem checks for a finite-group file")
    p.add_argument("group_file")
    p = add("lehmer-scan", help="smallest Mahler measure above 1 in a coefficient box")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--coef-bound", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_mahler(args) -> dict:
    f = parse_polynomial(args.poly)
    enc = mahler_measure(f, args.tol)
    return _record(
        "mahler",
        {"poly": print_polynomial(f), "tol": format_rational(args.tol)},
        _enclosure_value(enc, args.tol),
        exact=False,
        diagnostics={"precision_bits": enc.precision_bits},
    )


def _cmd_height(args) -> dict:
    f = parse_polynomial(args.poly)
    enc = weil_height(f, args.tol)
    return _record(
        "height",
        {"poly": print_polynomial(f), "tol": format_rational(args.tol)},
        _enclosure_value(enc, args.tol),
        exact=False,
        diagnostics={"precision_bits": enc.precision_bits},
    )


def _cmd_roots(args) -> dict:
    f = parse_polynomial(args.poly)
    boxes = certified_roots(f, args.tol)
    digits = _decimal_digits(args.tol)
    value = [
        {
            "re": RealEnclosure.exact(b.re).decimal_bounds(digits)[0],
            "im": RealEnclosure.exact(b.im).decimal_bounds(digits)[0],
            "radius": RealEnclosure.exact(b.radius).decimal_bounds(digits)[1],
            "multiplicity": b.multiplicity,
        }
        for b in boxes
    ]
    return _record(
        "roots",
        {"poly": print_polynomial(f), "tol": format_rational(args.tol)},
        value,
        exact=False,
    )


def _cmd_cyclo(args) -> dict:
    f = parse_polynomial(args.poly)
    return _record("cyclo", {"poly": print_polynomial(f)}, is_root_of_unity(f), exact=True)


def _cmd_padic(args) -> dict:
    f = parse_polynomial(args.poly)
    if args.prime is not None:
        value = is_p_adic_unit(f, args.prime)
        inputs = {"poly": print_polynomial(f), "prime": args.prime}
    else:
        p = largest_nonunit_prime(f)
        value = {"largest_nonunit_prime": p}
        inputs = {"poly": print_polynomial(f)}
    return _record("padic", inputs, value, exact=True)


def _cmd_dobrowolski(args) -> dict:
    c = parse_rational(args.constant)
    enc = dobrowolski_lower_bound(args.degree, c, args.tol)
    return _record(
        "dobrowolski",
        {"degree": args.degree, "constant": format_rational(c), "tol": format_rational(args.tol)},
        _enclosure_value(enc, args.tol),
        exact=False,
        diagnostics={"precision_bits": enc.precision_bits},
    )


def _cmd_surd(args) -> dict:
    q = parse_rational(args.rational)
    coset = surd_from_rational(q, args.root)
    height = surd_weil_height(coset)
    hv = height.float_view(args.tol)
    value = {
        "coset": format_surd(coset),
        "m_infinity": surd_m_infinity(coset),
        "height": str(height),
        "height_decimal": _enclosure_value(hv, args.tol),
        "degree": surd_degree(coset),
    }
    return _record(
        "surd", {"rational": format_rational(q), "root": args.root}, value, exact=True
    )


def _parse_surd_op(expr: str):
    s = expr.strip()
    open_idx = s.find("(")
    if open_idx < 0 or not s.endswith(")"):
        raise InputSyntaxError("expected op(arg1, arg2)", text=expr, position=0)
    op = s[:open_idx].strip()
    body = s[open_idx + 1 : -1]
    args = [a.strip() for a in body.split(",")]
    if op not in ("mul", "pow") or len(args) != 2:
        raise InputSyntaxError(f"unsupported surd operation {op!r}", text=expr, position=0)
    return op, args


def _cmd_surd_op(args) -> dict:
    op, operands = _parse_surd_op(args.expr)
    x = parse_surd(operands[0])
    if op == "mul":
        result = surd_mul(x, parse_surd(operands[1]))
    else:
        result = surd_pow(x, parse_rational(operands[1]))
    value = {
        "coset": format_surd(result),
        "m_infinity": surd_m_infinity(result),
        "height": str(surd_weil_height(result)),
        "degree": surd_degree(result),
    }
    return _record("surd-op", {"expr": args.expr}, value, exact=True)


def _cmd_field_min(args) -> dict:
    element, height = qf_enumerate_min_height(args.disc, args.bound, args.tol)
    value = {
        "element": str(element),
        "minimal_polynomial": print_polynomial(qf_minimal_polynomial(element)),
        "height": _enclosure_value(height, args.tol),
    }
    return _record(
        "field-min",
        {"disc": args.disc, "bound": args.bound, "tol": format_rational(args.tol)},
        value,
        exact=False,
        diagnostics={"precision_bits": height.precision_bits},
    )


def _run_search(args, searcher, name: str) -> dict:
    with open(args.pool_file, "r", encoding="utf-8") as fh:
        pool = parse_pool_file(fh.read())
    if args.max_length is not None:
        pool = type(pool)(
            [m.value for m in pool.members],
            max_length=args.max_length,
            tol=pool.tol,
            disc=pool.disc,
        )
    target = parse_member_text(args.target, pool.disc)
    report = searcher(target, pool, args.tol)
    value = {
        "upper": _enclosure_value(report.upper, args.tol),
        "lower": format_rational(report.lower),
        "pinned": report.pinned,
        "trivial_only": report.trivial_only,
        "enumerated": len(report.enumerated),
    }
    witness = [str(w) for w in report.witness]
    return _record(
        name,
        {
            "pool_file": args.pool_file,
            "target": args.target,
            "max_length": pool.max_length,
            "tol": format_rational(args.tol),
        },
        value,
        exact=False,
        witness=witness,
        diagnostics={"precision_bits": report.upper.precision_bits},
    )


def _cmd_hinf_split(args) -> dict:
    x = parse_surd(args.surd)
    enc = hinf_root_split(x, args.n, args.tol)
    return _record(
        "hinf-split",
        {"surd": format_surd(x), "n": args.n, "tol": format_rational(args.tol)},
        _enclosure_value(enc, args.tol),
        exact=False,
        diagnostics={"precision_bits": enc.precision_bits},
    )


def _cmd_framework(args) -> dict:
    with open(args.group_file, "r", encoding="utf-8") as fh:
        G = parse_group_file(fh.read())
    derived = derived_heights(G)
    checks = framework_report(G)

    def table(mapping):
        return {
            "(" + ",".join(str(a) for a in g) + ")": format_rational(mapping[g])
            for g in G.elements()
        }

    value = {
        "cyclic": list(G.cyclic_orders),
        "rho": table(G.height),
        "rho1": table(derived.rho1),
        "rho_inf": table(derived.rho_inf),
        "checks": checks,
        "all_checks_pass": all(checks.values()),
    }
    return _record("framework", {"group_file": args.group_file}, value, exact=True)


def _scan_canonical(coeffs: tuple) -> bool:
    """Keep one representative per measure-preserving symmetry class
    (reversal, global sign, x -> -x), comparing only the variants the scan
    actually generates (positive leading coefficient)."""
    variants = []
    for seq in (coeffs, coeffs[::-1]):
        for flip in (1, -1):
            base = tuple(flip * c for c in seq)
            for alt in (base, tuple(c if i % 2 == 0 else -c for i, c in enumerate(base))):
                if alt[-1] > 0:
                    variants.append(alt)
    return coeffs == min(variants)


def _cmd_lehmer_scan(args) -> dict:
    import itertools

    d, bound = args.degree, args.coef_bound
    if d < 1 or bound < 1:
        raise DomainInputError("degree and coef-bound must be positive")
    best = None
    best_poly = None
    scanned = 0
    measured = 0
    rng = range(-bound, bound + 1)
    for lead in range(1, bound + 1):
        for rest in itertools.product(rng, repeat=d):
            coeffs = rest + (lead,)
            if coeffs[0] == 0:
                continue
            scanned += 1
            if not _scan_canonical(coeffs):
                continue
            f = IntPolynomial(coeffs)
            if is_root_of_unity(f):
                continue
            measured += 1
            enc = mahler_measure(f, args.tol)
            if not enc.entirely_above(1 + args.tol):
                continue
            if best is None or enc.hi < best.lo or (enc.overlaps(best) and enc.lo < best.lo):
                best = enc
                best_poly = f
    if best is None:
        raise EmptySearchError("no polynomial with measure above 1 + tol in the scan range")
    value = {
        "poly": print_polynomial(canonicalize_poly(best_poly)),
        "measure": _enclosure_value(best, args.tol),
        "scanned": scanned,
        "measured": measured,
    }
    return _record(
        "lehmer-scan",
        {"degree": d, "coef_bound": bound, "tol": format_rational(args.tol)},
        value,
        exact=False,
        diagnostics={"precision_bits": best.precision_bits},
    )


_COMMANDS = {
    "mahler": _cmd_mahler,
    "height": _cmd_height,
    "roots": _cmd_roots,
    "cyclo": _cmd_cyclo,
    "padic": _cmd_padic,
    "dobrowolski": _cmd_dobrowolski,
    "surd": _cmd_surd,
    "surd-op": _cmd_surd_op,
    "field-min": _cmd_field_min,
    "hinf-split": _cmd_hinf_split,
    "framework": _cmd_framework,
    "lehmer-scan": _cmd_lehmer_scan,
}


def _render_human(record: dict, lines=None, prefix="") -> list[str]:
    lines = [] if lines is None else lines
    for key, val in record.items():
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            _render_human(val, lines, prefix + "  ")
        elif isinstance(val, list):
            lines.append(f"{prefix}{key}: {json.dumps(val)}")
        else:
            lines.append(f"{prefix}{key}: {val}")
    return lines


def run(argv) -> tuple[int, dict | None]:
    """Parse argv, run the subcommand, and return (exit_code, record)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    if args.command == "minf-search":
        record = _run_search(args, search_minf_upper, "minf-search")
    elif args.command == "m1-search":
        record = _run_search(args, search_m1_upper, "m1-search")
    else:
        record = _COMMANDS[args.command](args)
    record["diagnostics"]["wall_time_s"] = f"{time.monotonic() - start:.4f}"
    return 0, record


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, record = run(argv)
    except SystemExit as exc:  # argparse usage errors already print a message
        return exc.code if isinstance(exc.code, int) else 2
    except (InputSyntaxError, DomainInputError, HeightAxiomError, EmptySearchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return 3
    except (InvariantViolation, MetricMahlerError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 4
    if "--json" in argv:
        print(json.dumps(record, indent=2, sort_keys=False))
    else:
        print("\n".join(_render_human(record)))
    return code


if __name__ == "__main__":
    sys.exit(main())
