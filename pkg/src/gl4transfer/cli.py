"""Command-line front end.

Subcommands: ``count``, ``orbital``, ``tree``, ``intersect`` and
``verify``.  Exit codes: 0 success, 1 a verification row failed, 2 usage
error, 3 internal error (precision, certificate or ledger failures).
Output is deterministic: rows come in a fixed order and JSON keys are
sorted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import latcount
from .atverify import LAMBDAS, summary_line, sweep
from .bttree import (ball_count, classify_shape, compute_T,
                     conj_linear_from_invariant, distance_law_check,
                     max_multiplicity, predicted_shape)
from .errors import ArtifactError, InvalidInvariantError, NoMatchingError, NotRealizableError
from .finitefield import gf, prime_power_decomposition
from .intersect import (int_closed, int_geometric_quarter,
                        int_geometric_threequarter, QUARTER)
from .lattices import standard
from .localfield import NumInvariant, element_from_invariant
from .orbital import functional_equation_check, orbital_brute, orbital_closed

__all__ = ["main", "run", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

COUNT_COLUMNS = ["q", "a", "b", "function", "case", "k", "closed", "brute", "match"]
VERIFY_COLUMNS = ["check", "inv", "q", "lam", "lhs_dcoeff", "correction_coeff",
                  "rhs", "matched", "passed", "orbital_source", "int_source", "error"]


def _q_value(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be an integer, got {text!r}")
    try:
        prime_power_decomposition(q)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return q


def _q_list(text: str) -> list:
    return [_q_value(t) for t in text.split(",") if t.strip()]


def _inv(text: str) -> NumInvariant:
    try:
        return NumInvariant.parse(text).validate()
    except InvalidInvariantError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _lam(text: str) -> Fraction:
    try:
        lam = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad Hasse invariant {text!r}")
    if lam not in LAMBDAS:
        raise argparse.ArgumentTypeError("Hasse invariant must be 1/4 or 3/4")
    return lam


def _bool(x) -> str:
    return "true" if x else "false"


def _emit_table(rows: list, columns: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |",
             "|" + "|".join("---" for _ in columns) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in cells]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return _bool(v)
    return str(v)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_count(args) -> tuple[str, int]:
    q = args.q
    rows = []
    K = gf(q)
    for a in range(args.amax + 1):
        for b in range(a, args.amax + 1):
            M0, M1 = standard(K), latcount.diagonal_lattice(K, a, b)
            for k in range(a + b + 1):
                for name, closed, brute in (
                        ("phi", latcount.phi(a, b, k, q), latcount.brute_phi(M0, M1, k)),
                        ("phi_prim", latcount.phi_prim(a, b, k, q),
                         latcount.brute_phi_prim(M0, M1, k)),
                        ("psi", latcount.psi(a, b, k, q), latcount.brute_psi(M0, M1, k))):
                    rows.append({"q": q, "a": a, "b": b, "function": name, "case": "-",
                                 "k": k, "closed": closed, "brute": brute,
                                 "match": closed == brute})
                for case, inst in sorted(latcount.pair_instances(q, a, b).items()):
                    closed = latcount.pair_count(case, a, b, k, q)
                    brute = latcount.brute_pair_count(*inst, k)
                    rows.append({"q": q, "a": a, "b": b, "function": "pair_count",
                                 "case": case.name.lower(), "k": k, "closed": closed,
                                 "brute": brute, "match": closed == brute})
    ok = all(r["match"] for r in rows)
    return _emit_table(rows, COUNT_COLUMNS, args.out), EXIT_OK if ok else EXIT_FAIL


def cmd_orbital(args) -> tuple[str, int]:
    inv, q, fn = args.inv, args.q, args.fn
    p = orbital_closed(fn, inv, q)
    out = {"inv": str(inv), "q": q, "fn": fn, "poly": str(p),
           "coeffs": [list(t) for t in p.serialize()],
           "central": str(p.central_value()),
           "derivative_coeff": str(p.central_derivative_coeff()),
           "functional_equation": functional_equation_check(fn, inv, p)}
    code = EXIT_OK if out["functional_equation"] else EXIT_FAIL
    if args.brute:
        b = orbital_brute(fn, element_from_invariant(inv, q))
        out["brute_poly"] = str(b)
        out["brute_match"] = b == p
        if b != p:
            code = EXIT_FAIL
    return _json(out), code


def cmd_tree(args) -> tuple[str, int]:
    inv, q = args.inv, args.q
    z = conj_linear_from_invariant(inv, q)
    win = compute_T(z)
    shape = classify_shape(win)
    pred = predicted_shape(inv)
    census = {}
    for n in win.n.values():
        census[n] = census.get(n, 0) + 1
    law = distance_law_check(win)
    lines = [f"inv: {inv}", f"q: {q}", f"quotient: {_bool(win.quotient)}",
             f"shape: {shape}", f"predicted: {pred}",
             f"m: {win.m}", f"m_formula: {max_multiplicity(inv)}",
             f"T_size: {len(win.T)}", f"window_radius: {win.radius}",
             f"distance_law: {_bool(law)}"]
    if win.m >= 0:
        lines.append(f"ball_count: {ball_count(shape, win.m, q)}")
    lines.append("census: " + ", ".join(f"n={n}:{census[n]}" for n in sorted(census, reverse=True)))
    ok = law and shape == pred and win.m == max_multiplicity(inv)
    text = "\n".join(lines) + "\n"
    if args.edges:
        Tset = set(win.T)
        names = {L: i for i, L in enumerate(win.T)}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target", "source_lattice", "target_lattice"])
        for L in win.T:
            for N in win.adj[L]:
                if N in Tset and names[L] <= names[N]:
                    w.writerow([names[L], names[N], str(L), str(N)])
        text += buf.getvalue()
    return text, EXIT_OK if ok else EXIT_FAIL


def cmd_intersect(args) -> tuple[str, int]:
    inv, q, lam = args.inv, args.q, args.lam
    closed = int_closed(lam, inv, q)
    out = {"inv": str(inv), "q": q, "lambda": str(lam), "closed": closed}
    code = EXIT_OK
    if args.geometric:
        if inv.r > 0:
            res = (int_geometric_quarter(inv, q) if lam == QUARTER
                   else int_geometric_threequarter(inv, q))
            out["geometric"] = res.as_dict()
            out["match"] = res.value == closed
        else:
            out["geometric"] = {"value": 0, "empty": True}
            out["match"] = closed == 0
        if not out["match"]:
            code = EXIT_FAIL
    return _json(out), code


def cmd_verify(args) -> tuple[str, int]:
    if args.lam == "both":
        lambdas = LAMBDAS
    else:
        lambdas = (_lam(args.lam),)
    int_sources = ("closed", "geometric") if args.geometric else ("closed",)
    rows = sweep(args.q, args.rmax, args.d2max, lambdas, r_min=args.rmin,
                 int_sources=int_sources,
                 orbital_source="brute" if args.brute else "closed")
    table = _emit_table([r.as_dict() for r in rows], VERIFY_COLUMNS, args.out)
    if args.out != "json":
        table += summary_line(rows) + "\n"
    internal = any(r.error and not r.error.startswith(("NoMatching",)) for r in rows)
    if internal:
        return table, EXIT_INTERNAL
    return table, EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gl4transfer", description=(
        "Orbital integrals, tree multiplicities and intersection numbers "
        "for inner forms of GL_4 over F_q((pi)), with exact verification."))
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="closed-form lattice counts against enumeration")
    c.add_argument("--q", type=_q_value, required=True)
    c.add_argument("--amax", type=int, default=3)
    c.add_argument("--out", choices=("csv", "json", "md"), default="csv")
    c.set_defaults(func=cmd_count)

    o = sub.add_parser("orbital", help="orbital integral of one invariant")
    o.add_argument("--q", type=_q_value, required=True)
    o.add_argument("--inv", type=_inv, required=True, help="kind:r:d2, e.g. ram:1:-1")
    o.add_argument("--fn", choices=("par", "iw", "d"), default="iw")
    o.add_argument("--brute", action="store_true", help="also enumerate lattices")
    o.set_defaults(func=cmd_orbital)

    t = sub.add_parser("tree", help="shape of T(z) and multiplicity census")
    t.add_argument("--q", type=_q_value, required=True)
    t.add_argument("--inv", type=_inv, required=True)
    t.add_argument("--edges", action="store_true", help="append the edge list of T as CSV")
    t.set_defaults(func=cmd_tree)

    i = sub.add_parser("intersect", help="intersection number Int(g)")
    i.add_argument("--q", type=_q_value, required=True)
    i.add_argument("--lambda", dest="lam", type=_lam, required=True)
    i.add_argument("--inv", type=_inv, required=True)
    i.add_argument("--geometric", action="store_true")
    i.set_defaults(func=cmd_intersect)

    v = sub.add_parser("verify", help="fundamental lemma and transfer identities")
    v.add_argument("--q", type=_q_list, default=[2, 3])
    v.add_argument("--rmax", type=int, default=6)
    v.add_argument("--rmin", type=int, default=-2)
    v.add_argument("--d2max", type=int, default=4)
    v.add_argument("--lambda", dest="lam", default="both",
                   choices=("both", "1/4", "3/4"))
    v.add_argument("--out", choices=("csv", "json", "md"), default="csv")
    v.add_argument("--geometric", action="store_true",
                   help="also take Int from the tree recipes")
    v.add_argument("--brute", action="store_true",
                   help="orbital integrals by enumeration instead of closed forms")
    v.set_defaults(func=cmd_verify)

    for sp in (c, o, t, i, v):
        sp.add_argument("--output", help="write to this file instead of stdout")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        text, code = args.func(args)
    except (NoMatchingError, NotRealizableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArtifactError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
