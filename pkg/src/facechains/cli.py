"""Command-line front end.

Exit codes: 0 success or property holds, 2 usage error, 3 property fails
(witness printed), 4 brute-force cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from typing import Any

from . import associahedron as assoc
from . import permutahedron as perm
from . import reference
from .core import (
    CapExceededError,
    InputError,
    LengthPoint,
    assoc_corollary_bound,
    chain_excess,
    facet_bound,
    length_estimates,
    min_excess,
    shortness_report,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILS = 3
EXIT_CAP = 4

FAMILIES = ("perm", "assoc", "simplex", "cube")


class Outcome:
    """Payload plus exit status returned by every command."""

    def __init__(self, payload: dict, text: list[str], status: int = EXIT_OK, csv_rows=None, summary=None):
        self.payload = payload
        self.text = text
        self.status = status
        self.csv_rows = csv_rows
        self.summary = summary


def decimal6(x: Fraction | None) -> str:
    """Exact rational rounded half-to-even at 6 places, without going through floats."""
    if x is None:
        return "undefined"
    scaled = round(Fraction(x) * 10**6)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**6)
    return f"{sign}{whole}.{frac:06d}"


def fraction_str(x: Fraction | None) -> str:
    if x is None:
        return "undefined"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _ratio(x: Fraction | None, exact: bool) -> str:
    return fraction_str(x) if exact else decimal6(x)


def _ratio_json(x: Fraction | None) -> dict | None:
    if x is None:
        return None
    return {"exact": fraction_str(x), "decimal": decimal6(x)}


# --------------------------------------------------------------------------
# commands


def cmd_zebra(args) -> Outcome:
    k = args.k
    if args.a is not None:
        if args.m is not None or args.n is not None:
            raise InputError("--a cannot be combined with --m/--n")
        chain = perm.make_partial_zebra(args.a, k)
        ground = args.a
        head = {"construction": "partial_zebra", "a": args.a, "width": perm.partial_zebra_width(args.a)}
        title = f"partial zebra chain F^{k}({args.a})"
    else:
        if args.m is None or args.n is None:
            raise InputError("zebra needs --m and --n, or --a")
        chain = perm.make_zebra(args.m, args.n, k)
        ground = args.m * args.n
        head = {"construction": "zebra", "m": args.m, "n": args.n}
        title = f"zebra chain Zeb^{k}({args.m},{args.n})"

    pairs = chain.pair_verdicts(perm.weak_face_leq)
    excess = chain_excess(chain)
    bound = facet_bound(k, ground)
    ratio = Fraction(excess, bound) if bound else None
    checks = []
    if args.a is None and args.m == args.n:
        checks = perm.zebra_discrepancies(args.n, k)

    payload = {
        "command": "zebra",
        **head,
        "k": k,
        "ground_set": ground,
        "ambient_dim": chain.ambient_dim,
        "chain": [f.to_json() for f in chain.faces],
        "members": [
            {"l": l, "blocks": len(f.blocks), "dim": f.dim} for l, f in enumerate(chain.faces, start=1)
        ],
        "pairs_valid": pairs,
        "valid": all(pairs),
        "excess": excess,
        "E_k": bound,
        "ratio": _ratio_json(ratio),
        "checks": checks,
    }
    text = [f"{title} in the permutahedron on {ground} letters (dim {chain.ambient_dim})"]
    for l, f in enumerate(chain.faces, start=1):
        text.append(f"  {l}: {f}  blocks={len(f.blocks)} dim={f.dim}")
    for l, ok in enumerate(pairs, start=1):
        text.append(f"  member {l} <= member {l + 1}: {'yes' if ok else 'NO'}")
    text.append(f"valid: {'yes' if all(pairs) else 'no'}")
    text.append(f"excess: {excess}  E_k({ground}): {bound}  ratio: {_ratio(ratio, args.exact)}")
    for c in checks:
        where = f"l={c['l']}" if "l" in c else f"k={c['k']}"
        text.append(
            f"  {c['anchor']} n={c['n']} {where}: claimed {c['claimed']}, "
            f"measured {c['measured']} -> {c['status']}"
        )
    return Outcome(payload, text, EXIT_OK if all(pairs) else EXIT_FAILS)


def cmd_thuja(args) -> Outcome:
    n = args.n
    k = n - 1 if args.k is None else args.k
    chain = assoc.thuja_chain(n, k)
    measured_dims = [assoc.tree_dim(t) for t in chain.faces]
    pairs = chain.pair_verdicts(assoc.tree_face_leq)
    equalities = assoc.thuja_extreme_equalities(n, k)
    excess = assoc.thuja_excess(n, k)
    bound = facet_bound(k, n - 2)
    ratio = Fraction(excess, bound) if bound else None
    corollary = assoc_corollary_bound(k) if k > 2 else None
    within = None
    if corollary is not None and ratio is not None and bound < 0:
        within = ratio <= corollary

    payload = {
        "command": "thuja",
        "n": n,
        "k": k,
        "ambient_dim": n - 2,
        "chain": [assoc.tree_to_json(t) for t in chain.faces],
        "members": [
            {
                "l": l,
                "bracketing": assoc.tree_str(t),
                "dim": d,
                "expected_dim": (n - l) // 2,
            }
            for l, (t, d) in enumerate(zip(chain.faces, measured_dims), start=1)
        ],
        "pairs_valid": pairs,
        "top_equals_next_bottom": equalities,
        "valid": all(pairs),
        "excess": excess,
        "E_k": bound,
        "ratio": _ratio_json(ratio),
        "corollary_bound": _ratio_json(corollary),
        "within_corollary_bound": within,
    }
    text = [f"thuja chain Th^{k}({n}) in K({n}) (dim {n - 2})"]
    for l, (t, d) in enumerate(zip(chain.faces, measured_dims), start=1):
        text.append(f"  {l}: {assoc.tree_str(t)}  dim={d} expected={(n - l) // 2}")
    for l, (ok, eq) in enumerate(zip(pairs, equalities), start=1):
        text.append(
            f"  member {l} <= member {l + 1}: {'yes' if ok else 'NO'}"
            f"  (top == next bottom: {'yes' if eq else 'no'})"
        )
    text.append(f"valid: {'yes' if all(pairs) else 'no'}")
    text.append(f"excess: {excess}  E_k({n - 2}): {bound}  ratio: {_ratio(ratio, args.exact)}")
    if corollary is not None:
        verdict = "n/a" if within is None else ("yes" if within else "NO")
        text.append(f"corollary bound (k-2)/(2k-2): {_ratio(corollary, args.exact)}  within: {verdict}")
    return Outcome(payload, text, EXIT_OK if all(pairs) else EXIT_FAILS)


def build_polytope(family: str, n: int, cap: int | None = None):
    if family == "perm":
        return perm.permutahedron_polytope(n, cap)
    if family == "assoc":
        return assoc.associahedron_polytope(n, cap)
    if family == "simplex":
        return reference.simplex_polytope(n, cap)
    if family == "cube":
        return reference.cube_polytope(n, cap)
    raise InputError(f"unknown family {family!r}")


def _constructed_bound(family: str, n: int, k: int):
    """(name, excess, chain json) of the explicit construction, when one applies.

    Only chains of proper faces are reported, since those are what the search ranges over.
    """
    if family == "perm":
        chain = perm.make_partial_zebra(n, k)
        if chain.is_valid(perm.weak_face_leq) and max(chain.dims) < chain.ambient_dim:
            return f"F^{k}({n})", chain_excess(chain), [f.to_json() for f in chain.faces]
    if family == "assoc" and 1 <= k <= n - 1:
        chain = assoc.thuja_chain(n, k)
        if max(chain.dims) < chain.ambient_dim:
            return f"Th^{k}({n})", chain_excess(chain), [assoc.tree_to_json(t) for t in chain.faces]
    return None


def cmd_min_excess(args) -> Outcome:
    P = build_polytope(args.family, args.n, args.cap)
    rep = min_excess(P, args.k)
    lower = facet_bound(args.k, P.ambient_dim)
    payload: dict[str, Any] = {
        "command": "min-excess",
        "family": args.family,
        "n": args.n,
        "k": args.k,
        "faces": len(P),
        "ambient_dim": P.ambient_dim,
        "exists": rep.exists,
        "e_k": rep.e_k,
        "f_k": rep.f_k,
        "E_k": lower,
        "witness": None if not rep.exists else [P.serialize_fn(f) for f in rep.witness.faces],
        "witness_dims": None if not rep.exists else list(rep.witness.dims),
    }
    text = [f"{P.name}: {len(P)} faces, dim {P.ambient_dim}, k={args.k}"]
    if not rep.exists:
        text.append("no chain of this length exists")
        return Outcome(payload, text, EXIT_FAILS)
    text.append(f"e_k = {rep.e_k}  f_k = {rep.f_k}  E_k({P.ambient_dim}) = {lower}")
    text.append("witness: " + "  ".join(json.dumps(P.serialize_fn(f)) for f in rep.witness.faces))
    built = _constructed_bound(args.family, args.n, args.k)
    if built is not None:
        name, exc, faces = built
        payload["constructed"] = {"name": name, "excess": exc, "chain": faces, "consistent": exc >= rep.e_k}
        text.append(f"constructed {name}: excess {exc} ({'>=' if exc >= rep.e_k else '<'} e_k)")
    return Outcome(payload, text)


def parse_range(spec: str) -> range:
    for sep in ("..", ":", "-"):
        if sep in spec:
            lo, _, hi = spec.partition(sep)
            try:
                r = range(int(lo), int(hi) + 1)
            except ValueError:
                break
            if not r:
                raise InputError(f"empty range {spec!r}")
            return r
    try:
        v = int(spec)
    except ValueError:
        raise InputError(f"bad range {spec!r}; use e.g. 3..40") from None
    return range(v, v + 1)


def table_points(family: str, k: int, ns, partial: bool = False, cap: int | None = None):
    points = []
    for n in ns:
        if family == "perm":
            chain = perm.make_partial_zebra(n, k) if partial else perm.make_zebra(n, n, k)
            ground = chain.ambient_dim + 1
            # a single facet is the exact optimum for k = 1
            excess = 1 if k == 1 and chain.ambient_dim >= 1 else chain_excess(chain)
            points.append(LengthPoint(n, excess, chain.ambient_dim, ground))
        elif family == "assoc":
            if not 1 <= k <= n - 1:
                raise InputError(f"thuja chains need k <= n - 1 (n={n}, k={k})")
            excess = 1 if k == 1 and n >= 3 else assoc.thuja_excess(n, k, verify=n <= 200)
            points.append(LengthPoint(n, excess, n - 2))
        else:
            rep = min_excess(build_polytope(family, n, cap), k)
            points.append(LengthPoint(n, rep.e_k, rep.ambient_dim))
    return points


def cmd_table(args) -> Outcome:
    ns = parse_range(args.n_range)
    est = length_estimates(table_points(args.family, args.k, ns, args.partial, args.cap), args.k)
    header = ["n", "k", "excess", "E_k", "ratio", "beta_finite"]
    rows = [
        [r.n, r.k, r.e_k, r.E_k, _ratio(r.ratio, args.exact), _ratio(r.beta_finite, args.exact)]
        for r in est.rows
    ]
    summary = (
        f"# ratio non-decreasing: {'yes' if est.non_decreasing else 'no'}; "
        f"strictly increasing: {'yes' if est.strictly_increasing else 'no'}"
    )
    payload = {
        "command": "table",
        "family": args.family,
        "k": args.k,
        "rows": [
            {
                "n": r.n,
                "k": r.k,
                "excess": r.e_k,
                "E_k": r.E_k,
                "ratio": _ratio_json(r.ratio),
                "beta_finite": _ratio_json(r.beta_finite),
            }
            for r in est.rows
        ],
        "non_decreasing": est.non_decreasing,
        "strictly_increasing": est.strictly_increasing,
    }
    text = [",".join(header)] + [",".join(map(str, row)) for row in rows] + [summary]
    return Outcome(payload, text, csv_rows=[header] + rows, summary=summary)


def cmd_short(args) -> Outcome:
    if args.pairs_only and args.family == "assoc":
        rep = assoc.two_short_check(args.n, args.cap)
        payload = {
            "command": "short",
            "family": "assoc",
            "n": args.n,
            "mode": "pairs",
            "short": rep.passed,
            "vertex_pairs": rep.vertex_pairs,
            "face_pairs": rep.face_pairs,
            "vertex_violation": _tree_pair(rep.vertex_violation),
            "face_violation": _tree_pair(rep.face_violation),
        }
        text = [
            f"K({args.n}) 2-short: {'yes' if rep.passed else 'NO'} "
            f"({rep.vertex_pairs} comparable vertex pairs, {rep.face_pairs} comparable face pairs)"
        ]
        for label, pair in (("vertex", rep.vertex_violation), ("face", rep.face_violation)):
            if pair:
                text.append(f"{label} violation: " + " <= ".join(assoc.tree_str(t) for t in pair))
        return Outcome(payload, text, EXIT_OK if rep.passed else EXIT_FAILS)

    P = build_polytope(args.family, args.n, args.cap)
    if args.pairs_only:
        rep2 = min_excess(P, 2)
        short = rep2.e_k >= 1
        witness = rep2.witness if not short else None
        excess = rep2.e_k
        face = None
        mode = "pairs"
    else:
        rep = shortness_report(P, recursive=args.recursive)
        short, witness, excess, face = rep.short, rep.witness, rep.excess, rep.face
        mode = "recursive" if args.recursive else "own"
    payload = {
        "command": "short",
        "family": args.family,
        "n": args.n,
        "mode": mode,
        "short": short,
        "face": None if face is None else P.serialize_fn(face),
        "witness": None if witness is None else [P.serialize_fn(f) for f in witness.faces],
        "excess": None if short else excess,
    }
    text = [f"{P.name} ({mode}): {'short' if short else 'NOT short'}"]
    if not short:
        if face is not None:
            text.append(f"inside face {json.dumps(P.serialize_fn(face))}")
        text.append(
            f"witness (excess {excess}): "
            + "  ".join(json.dumps(P.serialize_fn(f)) for f in witness.faces)
        )
    return Outcome(payload, text, EXIT_OK if short else EXIT_FAILS)


def _tree_pair(pair):
    return None if pair is None else [assoc.tree_to_json(t) for t in pair]


# --------------------------------------------------------------------------
# plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--exact", action="store_true", help="print ratios as exact fractions")
    common.add_argument("--cap", type=int, help="override the brute-force size cap (warns)")

    parser = argparse.ArgumentParser(prog="facechains", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zebra", parents=[common], help="zebra or partial zebra chain certificate")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int, help="partial zebra on 1..a")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_zebra)

    p = sub.add_parser("thuja", parents=[common], help="thuja chain certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_thuja)

    p = sub.add_parser("min-excess", parents=[common], help="brute-force minimal excess")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_min_excess)

    p = sub.add_parser("table", parents=[common], help="finite-n length estimates")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-range", required=True, metavar="A..B")
    p.add_argument("--partial", action="store_true", help="perm: partial zebra F^k(n) rows")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("short", parents=[common], help="shortness check")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--recursive", action="store_true", help="also check every face")
    p.add_argument("--pairs-only", action="store_true", help="only chains of length 2")
    p.set_defaults(func=cmd_short)
    return parser


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(outcome.payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        if outcome.csv_rows is not None:
            writer.writerows(outcome.csv_rows)
        else:
            writer.writerow(["key", "value"])
            for key, value in outcome.payload.items():
                writer.writerow([key, value if isinstance(value, (int, str)) else json.dumps(value)])
        return buf.getvalue()
    return "\n".join(outcome.text) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ResourceWarning)
        try:
            outcome = args.func(args)
        except CapExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAP
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        finally:
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
    text = render(outcome, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if outcome.summary and args.format == "csv":
        print(outcome.summary, file=sys.stderr)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
