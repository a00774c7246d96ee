"""Command line: gen, verify, discover, iso, params, catalog.

Exit codes: 0 success or pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import DEFAULT_BOUNDS
from .construct import params_theorem1, params_theorem2
from .formats import build, descriptor_parse, graph6_encode, read_graph6
from .symplectic import params_bg
from .verify import ddg_verify, identity_check, iso_check, partitions_discover

OK, FAIL, USAGE = 0, 1, 2


def _one_graph(path: str) -> np.ndarray:
    graphs = read_graph6(path)
    if len(graphs) != 1:
        raise ValueError(f"{path}: expected exactly one graph6 line, found {len(graphs)}")
    return graphs[0]


def _read_partition(path: str) -> np.ndarray:
    return np.array([int(tok) for tok in Path(path).read_text().split()], dtype=np.int64)


def cmd_gen(args) -> int:
    text = Path(args.descriptor).read_text(encoding="utf-8")
    d = descriptor_parse(text)
    if args.seed is not None:
        d = d.with_seed(args.seed)
    G = build(d, Path(args.descriptor).parent)
    line = graph6_encode(G.adjacency) + "\n"
    if args.output:
        Path(args.output).write_text(line, encoding="ascii")
    else:
        sys.stdout.write(line)
    if args.partition_out:
        Path(args.partition_out).write_text(" ".join(map(str, G.labels.tolist())) + "\n")
    print(f"declared {G.declared}", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    A = _one_graph(args.graph)
    if args.partition:
        check = ddg_verify(A, _read_partition(args.partition))
        if not check.ok:
            print(f"FAIL {check.reason} witness={check.witness} count={check.count}")
            return FAIL
        p = check.params
    else:
        found = partitions_discover(A, bound=args.bound).partitions
        if not found:
            print("FAIL no partition certifies a divisible design graph")
            return FAIL
        p = found[0][1]
    ident = identity_check(p)
    print(f"PASS {p} proper={p.proper} identity {ident.lhs}={ident.rhs}")
    return OK


def cmd_discover(args) -> int:
    disc = partitions_discover(_one_graph(args.graph), bound=args.bound)
    if disc.srg:
        print("strongly regular (v,k,lambda,mu) = ({},{},{},{})".format(*disc.srg))
    print(f"pair counts observed: {disc.count_values}")
    for labels, p in disc.partitions:
        print(f"{p} proper={p.proper}")
        if args.show_partition:
            print("  " + " ".join(map(str, labels.tolist())))
    return OK if disc.partitions else FAIL


def cmd_iso(args) -> int:
    res = iso_check(_one_graph(args.g), _one_graph(args.h), timeout=args.budget_seconds, bound=args.bound)
    print(f"{res.status} ({res.invariant or 'search'}; {res.nodes} nodes, {res.elapsed:.2f}s)")
    if res.mapping is not None:
        print(" ".join(map(str, res.mapping.tolist())))
    return OK if res.status == "isomorphic" else FAIL


def cmd_params(args) -> int:
    if args.which == "theorem1":
        q, d, m, lam = args.values
        p = params_theorem1(q, d, m, lam)
    elif args.which == "theorem2":
        q, d, m, kappa, lam = args.values
        p = params_theorem2(q, d, m, kappa, lam, args.variant)
    else:
        variant = args.values[0]
        q, e = map(int, args.values[1:])
        p = params_bg(variant, q, e)
    ident = identity_check(p)
    print(f"{p} proper={p.proper}")
    print(f"identity lambda1(n-1)+lambda2 n(m-1) = {ident.lhs}, k(k-1) = {ident.rhs}, v=mn {ident.v_equals_mn}: "
          + ("pass" if ident.ok else "FAIL"))
    return OK if ident.ok else FAIL


def cmd_catalog(args) -> int:
    from .catalog import run_catalog

    items = []
    for path in args.descriptors:
        text = Path(path).read_text(encoding="utf-8")
        if args.seed is not None:
            try:
                text = descriptor_parse(text).with_seed(args.seed)
            except ValueError:
                pass  # left as text so the run records the parse failure
        items.append(text)
    base = Path(args.descriptors[0]).parent if args.descriptors else Path(".")
    index = run_catalog(items, args.output, base_dir=base, iso_timeout=args.budget_seconds, jobs=args.jobs)
    print(json.dumps({k: index[k] for k in ("by_params", "duplicates", "failures")}, indent=2))
    return FAIL if index["failures"] or not all(e["ok"] for e in index["entries"]) else OK


def _params_args(values: list[str], which: str):
    if which == "bg":
        if len(values) != 3 or values[0].upper() not in ("X", "Y"):
            raise argparse.ArgumentTypeError("bg needs VARIANT(X|Y) Q E")
        return [values[0].upper(), values[1], values[2]]
    want = {"theorem1": 4, "theorem2": 5}[which]
    if len(values) != want:
        raise argparse.ArgumentTypeError(f"{which} needs {want} integers")
    return [int(v) for v in values]


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddgraph", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build a graph from a descriptor file")
    p.add_argument("descriptor")
    p.add_argument("-o", "--output")
    p.add_argument("--partition-out")
    p.add_argument("--seed", type=int, help="override labeling and sigma seeds")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="brute-force DDG check of a graph6 file")
    p.add_argument("graph")
    p.add_argument("--partition", help="file of whitespace-separated class labels")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUNDS.discover_vertices)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("discover", help="find every partition certifying a DDG")
    p.add_argument("graph")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUNDS.discover_vertices)
    p.add_argument("--show-partition", action="store_true")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("iso", help="isomorphism test of two graph6 files")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--budget-seconds", type=float, default=600.0)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUNDS.iso_vertices)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("params", help="evaluate the parameter formulas")
    p.add_argument("which", choices=["theorem1", "theorem2", "bg"])
    p.add_argument("values", nargs="+", help="theorem1: Q D M LAMBDA; theorem2: Q D M KAPPA LAMBDA; bg: X|Y Q E")
    p.add_argument("--variant", choices=["printed", "corrected"], default="printed")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("catalog", help="build, verify and deduplicate many descriptors")
    p.add_argument("descriptors", nargs="*")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--budget-seconds", type=float, default=60.0, help="iso_check budget per comparison")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "params":
            args.values = _params_args(args.values, args.which)
        return args.func(args)
    except (ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
