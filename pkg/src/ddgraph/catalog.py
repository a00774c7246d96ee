"""Batch runner: build, verify, fingerprint and deduplicate a stream of descriptors.

Output directory layout::

    index        JSON: entries, params -> entry ids, duplicates, failures
    NNNN.g6      one graph6 line per kept entry
    NNNN.report  JSON verification report for that entry
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .formats import ConstructionDescriptor, build, descriptor_parse, graph6_decode, graph6_encode
from .verify import ddg_verify, fingerprint, identity_check, iso_check, partitions_discover

log = logging.getLogger(__name__)

__all__ = ["run_catalog", "verify_entry", "atomic_write"]


def atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _analyse(item):
    """Worker: build one descriptor and verify it by brute force."""
    descriptor, base_dir = item
    G = build(descriptor, base_dir)
    check = ddg_verify(G.adjacency, G.labels)
    labels = G.labels
    if not check.ok or not check.params.proper:
        proper = partitions_discover(G.adjacency).proper
        if proper:
            labels, _ = proper[0]
            check = ddg_verify(G.adjacency, labels)
    params = check.params
    return {
        "g6": graph6_encode(G.adjacency),
        "labels": labels.tolist(),
        "ok": check.ok,
        "reason": check.reason,
        "params": params.to_dict() if params else None,
        "identity": None if params is None else vars(identity_check(params)),
        "declared": G.declared.to_dict() if G.declared else None,
        "fingerprint": fingerprint(G.adjacency),
    }


def run_catalog(descriptors, out_dir, *, base_dir=".", iso_timeout: float = 60.0, jobs: int = 1) -> dict:
    """Process descriptors (objects or JSON text) into ``out_dir``; per-descriptor errors are recorded."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    parsed, failures = [], []
    for i, d in enumerate(descriptors):
        try:
            parsed.append((i, d if isinstance(d, ConstructionDescriptor) else descriptor_parse(d)))
        except ValueError as exc:
            failures.append({"descriptor": i, "error": str(exc)})

    items = [(d, str(base_dir)) for _, d in parsed]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_safe_analyse, items))
    else:
        results = [_safe_analyse(it) for it in items]

    entries, duplicates = [], []
    graphs = []
    for (i, d), res in zip(parsed, results):
        if "error" in res:
            failures.append({"descriptor": i, "error": res["error"]})
            continue
        A = graph6_decode(res["g6"])
        flags = []
        twin = None
        for entry, B in zip(entries, graphs):
            if entry["fingerprint"] != res["fingerprint"]:
                continue
            verdict = iso_check(A, B, timeout=iso_timeout, bound=max(500, len(A)))
            if verdict.status == "isomorphic":
                twin = entry["id"]
                break
            if verdict.status == "unknown":
                flags.append(f"possibly isomorphic to {entry['id']}")
        if twin is not None:
            duplicates.append({"descriptor": i, "isomorphic_to": twin})
            continue
        eid = f"{len(entries):04d}"
        report = {"id": eid, "descriptor": d.to_dict(), "flags": flags, **res}
        atomic_write(out / f"{eid}.g6", res["g6"] + "\n")
        atomic_write(out / f"{eid}.report", json.dumps(report, sort_keys=True, indent=2) + "\n")
        entries.append({"id": eid, "descriptor": i, "params": res["params"], "ok": res["ok"],
                        "fingerprint": res["fingerprint"], "flags": flags})
        graphs.append(A)
        log.info("entry %s from descriptor %d: %s", eid, i, res["params"])

    by_params = {}
    for e in entries:
        p = e["params"]
        key = "none" if p is None else f"({p['v']},{p['k']},{p['lambda1']},{p['lambda2']};{p['m']},{p['n']})"
        by_params.setdefault(key, []).append(e["id"])
    index = {"entries": entries, "by_params": by_params, "duplicates": duplicates, "failures": failures}
    atomic_write(out / "index", json.dumps(index, sort_keys=True, indent=2) + "\n")
    return index


def _safe_analyse(item):
    try:
        return _analyse(item)
    except Exception as exc:  # recorded per descriptor, never fatal to the run
        return {"error": f"{type(exc).__name__}: {exc}"}


def verify_entry(out_dir, eid: str) -> bool:
    """Re-verify a stored entry from its graph6 file and recorded partition."""
    out = Path(out_dir)
    A = graph6_decode((out / f"{eid}.g6").read_text(encoding="ascii"))
    report = json.loads((out / f"{eid}.report").read_text(encoding="utf-8"))
    check = ddg_verify(A, np.array(report["labels"]))
    return check.ok and check.params.to_dict() == report["params"]
