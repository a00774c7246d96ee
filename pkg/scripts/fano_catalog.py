"""Catalog seeded Fano-based Construction 1 graphs and count isomorphism classes.

    python3 scripts/fano_catalog.py OUT_DIR [--seeds 50] [--jobs 4]
"""

import argparse
import json

from ddgraph.catalog import run_catalog


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    stream = [
        json.dumps({
            "kind": "construction1",
            "symmetric_design": {"type": "fano"},
            "designs": {"type": "ag", "q": 2, "d": 2},
            "labeling": {"strategy": "seeded", "seed": s},
            "sigma": {"strategy": "seeded", "seed": s},
        })
        for s in range(args.seeds)
    ]
    stream.append(json.dumps({"kind": "sporadic28"}))
    index = run_catalog(stream, args.out, jobs=args.jobs)
    print(f"{len(index['entries'])} classes, {len(index['duplicates'])} duplicates, {len(index['failures'])} failures")
    for key, ids in index["by_params"].items():
        print(f"  {key}: {len(ids)}")


if __name__ == "__main__":
    main()
