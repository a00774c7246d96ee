"""Recover Y(4,K) and the 28-vertex graph as Construction 1 instances.

    python3 scripts/sigma_search_demo.py [--attempts 50] [--no-structured]
"""

import argparse

from ddgraph.algebra import ring_make
from ddgraph.construct import sporadic28
from ddgraph.designs import affine_from_ag
from ddgraph.symdesigns import symdesign_fano, symdesign_null_polarity
from ddgraph.symplectic import sigma_search, symplectic_graph


def report(name, rep):
    if rep.found:
        print(f"{name}: found via {rep.method} in {rep.attempts} attempt(s), {rep.elapsed:.1f}s;"
              f" labeling symmetric={rep.labeling.fully_symmetric}")
    else:
        print(f"{name}: nothing after {rep.attempts} attempts, {rep.elapsed:.1f}s")
        for note in rep.notes[-3:]:
            print(f"  {note}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--attempts", type=int, default=50)
    ap.add_argument("--seconds", type=float, default=1800)
    ap.add_argument("--no-structured", action="store_true")
    args = ap.parse_args()
    kw = dict(attempts=args.attempts, seconds=args.seconds, structured=not args.no_structured)

    report("sporadic28", sigma_search(sporadic28(), symdesign_fano(), [affine_from_ag(2, 2)] * 7, **kw))
    A, D = symdesign_null_polarity(2, 2), affine_from_ag(2, 3)
    for kind in ("z_p2", "fq_x2"):
        target = symplectic_graph("Y", 2, ring_make(kind, 2)).to_instance()
        report(f"Y(4,{kind})", sigma_search(target, A, [D] * 15, **kw))


if __name__ == "__main__":
    main()
