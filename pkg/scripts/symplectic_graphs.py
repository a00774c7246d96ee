"""Build X(4,K) and Y(4,K) over both local rings of order 4 and report what brute force finds.

    python3 scripts/symplectic_graphs.py [--q 2] [--e 2]
"""

import argparse

from ddgraph.algebra import is_prime, ring_make
from ddgraph.symplectic import params_bg, pc_relation_check, symplectic_graph
from ddgraph.verify import ddg_verify, identity_check, iso_check, partitions_discover


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--e", type=int, default=2)
    args = ap.parse_args()

    kinds = ["fq_x2"] + (["z_p2"] if is_prime(args.q) else [])
    ys = {}
    for kind in kinds:
        ring = ring_make(kind, args.q)
        Y = symplectic_graph("Y", args.e, ring)
        X = symplectic_graph("X", args.e, ring)
        disc = partitions_discover(Y.adjacency)
        print(f"{kind}: {Y.v} vertices, pair counts {disc.count_values}")
        for labels, p in disc.partitions:
            xcheck = ddg_verify(X.adjacency, labels)
            print(f"  Y {p}  X {xcheck.params}  pc_relation={pc_relation_check(X, Y, labels).ok}")
        ys[kind] = Y
    for variant in ("Y", "X") if args.e >= 2 else ():
        p = params_bg(variant, args.q, args.e)
        r = identity_check(p)
        print(f"formula {variant}: {p}  identity {r.lhs} vs {r.rhs}")
    if len(ys) == 2:
        res = iso_check(ys["z_p2"].adjacency, ys["fq_x2"].adjacency, timeout=600)
        print(f"Y over Z/p^2 vs Y over F_q[x]/(x^2): {res.status} ({res.invariant}, {res.nodes} nodes, {res.elapsed:.1f}s)")


if __name__ == "__main__":
    main()
