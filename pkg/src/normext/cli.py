"""normext command line.

Exit status: 0 when every check of the pipeline passed, 1 on a failed
mathematical check (pG not in H, a broken norm axiom, a non doubly stochastic
matrix, ...), 2 on malformed input.  Diagnostics go to stderr, one per line.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import checks
from .extend import ExtensionError, ExtensionProblem, chain_steps, prime_step_extend
from .groups import GroupError, Subgroup
from .io import (
    InputError,
    dump_norm,
    element_key,
    frac_str,
    load_group_file,
    load_norm_file,
    parse_element_key,
    parse_collections,
    parse_matrix,
    read_json,
    write_csv,
    write_json,
)
from .lattice import BASE_NORMS, LatticeWindowError, lattice_extend
from .pseudonorm import NormError, Pseudonorm, to_fraction, validate
from .transversal import (
    CollectionError,
    UniformCollection,
    birkhoff_decompose,
    label_key,
    p_fractional_transversal,
    transversal,
)
from .winding import discontinuity_report, triangle_sample


class CheckFailed(Exception):
    """A pipeline postcondition or precondition did not hold (exit 1)."""


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _csv_path(out: Path) -> Path:
    return out.with_suffix(".csv")


def _certificate_text(ext, x) -> str:
    rx, r0 = ext.certificate(x)
    return f"u={element_key(rx.u)} c={list(rx.counts)} v={element_key(r0.u)} d={list(r0.counts)}"


# -- validate -----------------------------------------------------------------------


def cmd_validate(args) -> int:
    N = load_norm_file(args.norm)
    report = validate(N, max_violations=args.max_violations)
    if report:
        print(f"ok: pseudonorm on {len(N.carrier)} elements of Z{list(N.group.orders)}")
        return 0
    for line in report.lines(N):
        _say(line)
    return 1


# -- extend / chain-extend -------------------------------------------------------------


def _load_extension_inputs(args):
    G, H = load_group_file(args.group, args.subgroup_index)
    N = load_norm_file(args.norm, G)
    if H is None:
        if not isinstance(N.carrier, Subgroup):
            H = Subgroup(G, G.elements)
        else:
            H = N.carrier
    elif set(H.elements) != set(N.carrier.elements):
        raise InputError(
            f"{args.norm}: norm is keyed on {len(N.carrier)} elements but the chosen subgroup has {len(H)}"
        )
    return G, H, N.recarry(H)


def _write_norm_outputs(out: Path, norm: Pseudonorm, cert) -> None:
    write_json(out, dump_norm(norm))
    rows = [(element_key(x), frac_str(norm(x)), cert(x)) for x in norm.carrier.elements]
    write_csv(_csv_path(out), ["element", "value", "certificate"], rows)


def cmd_extend(args) -> int:
    G, H, N = _load_extension_inputs(args)
    P = ExtensionProblem(G, H, args.prime, N, args.cap)
    ext = prime_step_extend(P)
    if args.check_cap:
        wider = prime_step_extend(P.with_cap(args.cap + 1), check=False)
        if wider.norm != ext.norm:
            x = next(x for x in G.elements if wider.norm(x) != ext.norm(x))
            raise CheckFailed(f"cap {args.cap} too small: value at {list(x)} drops to {wider.norm(x)} with cap {args.cap + 1}")
    _write_norm_outputs(Path(args.out), ext.norm, lambda x: _certificate_text(ext, x))
    print(f"extended to {G.order} elements (p={args.prime}, cap={args.cap}); wrote {args.out}")
    return 0


def cmd_chain_extend(args) -> int:
    G, H, N = _load_extension_inputs(args)
    steps = []
    norm, carrier = N, H
    for p, nxt, ext in chain_steps(G, H, N, args.cap):
        if ext.norm.restrict(carrier) != norm.recarry(carrier):
            raise CheckFailed(f"prime step {p} changed earlier values")
        steps.append((p, nxt, ext))
        norm, carrier = ext.norm, nxt
    final = norm.recarry(G)
    if final.restrict(H) != N:
        raise CheckFailed("chain extension does not restrict to the base norm")
    # certificate: the prime step that first assigned each value
    origin = {x: "base" for x in H.elements}
    for i, (p, nxt, ext) in enumerate(steps):
        for x in nxt.elements:
            if x not in origin:
                origin[x] = f"step {i + 1} p={p}: " + _certificate_text(ext, x)
    _write_norm_outputs(Path(args.out), final, origin.__getitem__)
    primes = [p for p, _, _ in steps]
    print(f"chain primes {primes}; extended to {G.order} elements; wrote {args.out}")
    return 0


# -- lattice ------------------------------------------------------------------------


def _load_table(path, dim):
    obj = read_json(path)
    raw = obj.get("values") if isinstance(obj, dict) else None
    if not isinstance(raw, dict):
        raise InputError(f"{path}: expected {{\"values\": {{\"[x1,...]\": \"value\"}}}}")
    table = {}
    for key, v in raw.items():
        pt = parse_element_key(key)
        if len(pt) != dim:
            raise InputError(f"{path}: point {key} does not have {dim} coordinates")
        try:
            table[tuple(Fraction(a) for a in pt)] = to_fraction(v)
        except NormError as exc:
            raise InputError(f"{path}: {exc}") from None
    return table


def cmd_lattice_extend(args) -> int:
    table = None
    if args.base == "table":
        if not args.table:
            raise InputError("--base table needs --table FILE")
        table = _load_table(args.table, args.dim)
    try:
        window = to_fraction(args.window)
    except NormError as exc:
        raise InputError(f"--window: {exc}") from None
    try:
        values = lattice_extend(args.dim, args.denominator, args.base, window, args.cap, table)
    except LatticeWindowError as exc:
        raise CheckFailed(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    points = sorted(values)
    for x in points:
        if all(a.denominator == 1 for a in x):
            want = table.get(x) if table is not None else BASE_NORMS[args.base](x)
            if want is not None and values[x] != want:
                raise CheckFailed(f"restriction changed the value at {[str(a) for a in x]}")
    out = Path(args.out)
    key = lambda x: "[" + ",".join(frac_str(a) for a in x) + "]"  # noqa: E731
    write_json(out, {
        "dim": args.dim,
        "denominator": args.denominator,
        "base": args.base,
        "window": frac_str(window),
        "cap": args.cap,
        "values": {key(x): frac_str(values[x]) for x in points},
    })
    write_csv(_csv_path(out), ["point", "value", "integral"],
              [(key(x), frac_str(values[x]), int(all(a.denominator == 1 for a in x))) for x in points])
    print(f"{len(points)} points of (1/{args.denominator})Z^{args.dim}; wrote {args.out}")
    return 0


# -- transversal / birkhoff ------------------------------------------------------------


def _labels_json(xs):
    return sorted(xs, key=label_key)


def cmd_transversal(args) -> int:
    k, A, B, p_file = parse_collections(read_json(args.collections), str(args.collections))
    p = args.p if args.p is not None else p_file
    if p is not None and p > 1:
        I = p_fractional_transversal(A, B, p)
        result = {"p": p, "transversal": _labels_json(I),
                  "intersections": {"A": [len(I & set(s)) for s in A], "B": [len(I & set(s)) for s in B]}}
        ok = all(len(I & set(s)) * p == len(s) for s in A + B)
    else:
        if k is None:
            k = len((A + B)[0]) if A + B else 1
        CA, CB = UniformCollection.of(A, k), UniformCollection.of(B, k)
        I = transversal(CA, CB)
        result = {"k": k, "transversal": _labels_json(I),
                  "intersections": {"A": [len(I & set(s)) for s in A], "B": [len(I & set(s)) for s in B]}}
        ok = all(len(I & set(s)) == 1 for s in A + B)
    if not ok:
        raise CheckFailed("transversal does not meet every set as required")
    _emit(args.out, result)
    return 0


def cmd_birkhoff(args) -> int:
    M = parse_matrix(read_json(args.matrix), str(args.matrix))
    D = birkhoff_decompose(M)
    if D.weight() != 1 or D.recompose(M.n) != [list(r) for r in M.entries]:
        raise CheckFailed("decomposition does not recompose the matrix")
    if len(D.terms) > M.positive_entries():
        raise CheckFailed("more terms than positive entries")
    result = {
        "n": M.n,
        "terms": [{"weight": frac_str(w), "permutation": list(s)} for w, s in D.terms],
    }
    _emit(args.out, result)
    return 0


def _emit(out, obj) -> None:
    if out:
        write_json(out, obj)
        print(f"wrote {out}")
    else:
        import json

        print(json.dumps(obj, indent=2))


# -- winding ------------------------------------------------------------------------


def cmd_winding_demo(args) -> int:
    out = Path(args.out)
    rows = discontinuity_report(args.kmax)
    write_csv(out, ["k", "norm_e_k", "norm_2e_k", "ratio"],
              [(r.k, repr(r.e_norm), repr(r.two_e_norm), repr(r.ratio)) for r in rows])
    rng = np.random.default_rng(args.seed)
    summaries = [triangle_sample(k, args.samples, rng) for k in range(1, min(args.kmax, 5) + 1)]
    tri = out.with_name(out.stem + "_triangle.csv")
    write_csv(tri, ["k", "samples", "max_excess", "max_identity_error", "ok"],
              [(s.k, s.samples, repr(s.max_excess), repr(s.max_identity_error), int(s.ok())) for s in summaries])
    bad = [r.k for r in rows if not (r.e_norm > 2 and abs(r.two_e_norm - 2.0 ** -r.k) <= 1e-12)]
    bad += [s.k for s in summaries if not s.ok()]
    print(f"wrote {out} and {tri}")
    if bad:
        raise CheckFailed(f"winding claims fail for k in {sorted(set(bad))}")
    return 0


# -- check ----------------------------------------------------------------------------


def cmd_check(args) -> int:
    results = checks.run_all(
        max_order=args.max_order, norms=args.norms, chain_norms=args.chain_norms,
        queries=args.queries, seed=args.seed, cap=args.cap,
    )
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


# -- parser ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normext", description="Exact pseudonorm extension on finite abelian groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the pseudonorm axioms for a norm file")
    p.add_argument("norm", help='norm JSON: {"group": {"orders": [...]}, "values": {"[0]": "0", ...}}')
    p.add_argument("--max-violations", type=_positive, default=20, help="violations to list (default 20)")
    p.set_defaults(func=cmd_validate)

    for name, helptext in (("extend", "one prime step H -> G (needs pG inside H)"),
                           ("chain-extend", "extend from any subgroup H through a chain of prime steps")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--group", required=True, help='group JSON: {"orders": [...], "subgroup_generators": [...]}')
        p.add_argument("--subgroup-index", type=_nonneg, default=None,
                       help="which subgroup when the group file lists several (default 0)")
        p.add_argument("--norm", required=True, help="norm JSON on H")
        if name == "extend":
            p.add_argument("--prime", type=int, required=True, help="prime p with pG inside H")
            p.add_argument("--check-cap", action="store_true", help="also recompute with cap+1 and fail on any change")
            p.set_defaults(func=cmd_extend)
        else:
            p.set_defaults(func=cmd_chain_extend)
        p.add_argument("--cap", type=_nonneg, default=2, help="extra p-blocks per basis index (default 2)")
        p.add_argument("--out", default="ext.json", help="output norm JSON; a CSV with the same stem is written too")

    p = sub.add_parser("lattice-extend", help="extend a norm from Z^n to (1/m)Z^n on a window")
    p.add_argument("--dim", type=_positive, default=1)
    p.add_argument("--denominator", type=_positive, default=2)
    p.add_argument("--base", choices=["abs-sum", "abs-max", "table"], default="abs-sum")
    p.add_argument("--table", help="JSON {\"values\": {\"[x1,...]\": \"value\"}} on integer points, for --base table")
    p.add_argument("--window", default="8", help="half-width of the output window (rational, default 8)")
    p.add_argument("--cap", type=_nonneg, default=2)
    p.add_argument("--out", default="lattice.json")
    p.set_defaults(func=cmd_lattice_extend)

    p = sub.add_parser("transversal", help="transversal of two disjoint uniform collections")
    p.add_argument("--collections", required=True, help='JSON {"k": 2, "A": [[...]], "B": [[...]]}')
    p.add_argument("--p", type=_positive, default=None, help="p-fractional variant: |I & C| = |C|/p")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_transversal)

    p = sub.add_parser("birkhoff", help="exact Birkhoff decomposition of a doubly stochastic matrix")
    p.add_argument("--matrix", required=True, help='JSON rows of rationals, e.g. [["1/2","1/2"],["1/2","1/2"]]')
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_birkhoff)

    p = sub.add_parser("winding-demo", help="discontinuity table and triangle sample for the winding norms")
    p.add_argument("--kmax", type=_positive, default=20)
    p.add_argument("--samples", type=_positive, default=100_000, help="triangle samples per k <= 5")
    p.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    p.add_argument("--out", default="winding.csv")
    p.set_defaults(func=cmd_winding_demo)

    p = sub.add_parser("check", help="run the invariant suite over generated corpora")
    p.add_argument("--max-order", type=_positive, default=64)
    p.add_argument("--norms", type=_positive, default=20, help="random norms per (G, H, p) in the prime-step sweep")
    p.add_argument("--chain-norms", type=_positive, default=4, help="random norms per (G, H) in the chain sweep")
    p.add_argument("--queries", type=_positive, default=1000, help="rho queries checked against brute force")
    p.add_argument("--cap", type=_nonneg, default=2)
    p.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    p.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        _say(f"error: {exc}")
        return 2
    except (CheckFailed, ExtensionError, NormError, CollectionError, GroupError) as exc:
        _say(f"failed: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
