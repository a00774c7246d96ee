"""Compare both parameter formulas for the partial complement with brute force.

    python3 scripts/theorem2_check.py [--seeds 10]
"""

import argparse

from ddgraph.construct import construct1, partial_complement, sigma_family_make
from ddgraph.designs import affine_from_ag
from ddgraph.symdesigns import label_assign, symdesign_null_polarity, symdesign_trivial
from ddgraph.verify import identity_check

CASES = [
    ("null polarity (15,7,3), AG(3,2)", lambda: symdesign_null_polarity(2, 2), (2, 3)),
    ("all ones m=7, AG(3,2)", lambda: symdesign_trivial("all_ones", 7), (2, 3)),
    ("all ones m=4, AG(2,3)", lambda: symdesign_trivial("all_ones", 4), (3, 2)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    for name, make, (q, d) in CASES:
        A, D = make(), affine_from_ag(q, d)
        if A.kappa != (q**d - 1) // (q - 1):
            continue
        seen = set()
        for seed in range(args.seeds):
            L = label_assign(A, "seeded", seed=seed)
            P = partial_complement(construct1(L, [D] * A.m, sigma_family_make(L, [D] * A.m, "seeded", seed=seed)))
            seen.add(P.meta["verification"].params.as_tuple())
        print(name)
        print(f"  brute force: {sorted(seen)}")
        for variant, p in P.meta["theorem2"].items():
            print(f"  {variant:9s} {p}  identity ok={identity_check(p).ok}")


if __name__ == "__main__":
    main()
