"""Regenerate tests/golden/*.g6 from the descriptors next to them.

Only run this after an intentional change of vertex order or class numbering;
the acceptance suite compares fresh builds against these files byte for byte.
"""

import sys
from pathlib import Path

from ddgraph.formats import build, descriptor_parse, graph6_encode
from ddgraph.verify import ddg_verify

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> int:
    for path in sorted(GOLDEN.glob("*.json")):
        G = build(descriptor_parse(path.read_text()), GOLDEN)
        check = ddg_verify(G.adjacency, G.labels)
        path.with_suffix(".g6").write_text(graph6_encode(G.adjacency) + "\n")
        print(f"{path.stem:20s} {check.params}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
