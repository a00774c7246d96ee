"""graph6 lines and JSON construction descriptors.

A descriptor is a small JSON object that fully determines a graph, e.g.::

    {
      "designs": {"d": 2, "q": 2, "type": "ag"},
      "kind": "construction1",
      "labeling": {"seed": 0, "strategy": "canonical"},
      "sigma": {"seed": 0, "strategy": "identity"},
      "symmetric_design": {"type": "fano"}
    }

``descriptor_emit`` writes the canonical form (sorted keys, defaults filled in,
two-space indent, trailing newline).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "graph6_encode",
    "graph6_decode",
    "read_graph6",
    "write_graph6",
    "DescriptorError",
    "ConstructionDescriptor",
    "descriptor_parse",
    "descriptor_emit",
    "build",
]


def _size_bytes(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 2**36:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError(f"graph6 cannot encode {n} vertices")


def graph6_encode(G) -> str:
    """Header-less graph6: size field, then the upper triangle column by column in 6-bit groups."""
    A = np.asarray(G, dtype=bool)
    n = len(A)
    if A.shape != (n, n) or not np.array_equal(A, A.T) or A.diagonal().any():
        raise ValueError("graph6 needs a symmetric adjacency matrix without loops")
    rows, cols = np.triu_indices(n, 1)
    order = np.lexsort((rows, cols))  # column-major: (0,1), (0,2), (1,2), (0,3), ...
    bits = A[rows[order], cols[order]].astype(np.uint8)
    bits = np.concatenate([bits, np.zeros(-len(bits) % 6, dtype=np.uint8)])
    chunks = bits.reshape(-1, 6) @ (1 << np.arange(5, -1, -1))
    return (_size_bytes(n) + bytes((chunks + 63).astype(np.uint8).tolist())).decode("ascii")


def graph6_decode(line: str) -> np.ndarray:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    data = s.encode("ascii")
    if not data or any(not 63 <= c <= 126 for c in data):
        raise ValueError(f"malformed graph6 line {line!r}")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) > 1 and data[1] == 126:
        if len(data) < 8:
            raise ValueError("truncated graph6 size field")
        n, pos = 0, 8
        for c in data[2:8]:
            n = (n << 6) | (c - 63)
    else:
        if len(data) < 4:
            raise ValueError("truncated graph6 size field")
        n, pos = 0, 4
        for c in data[1:4]:
            n = (n << 6) | (c - 63)
    nbits = n * (n - 1) // 2
    body = data[pos:]
    if len(body) != -(-nbits // 6):
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {-(-nbits // 6)} for n={n}")
    vals = np.frombuffer(body, dtype=np.uint8).astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).reshape(-1)
    if bits[nbits:].any():
        raise ValueError("nonzero padding bits in graph6 line")
    rows, cols = np.triu_indices(n, 1)
    order = np.lexsort((rows, cols))
    A = np.zeros((n, n), dtype=bool)
    A[rows[order], cols[order]] = bits[:nbits].astype(bool)
    return A | A.T


def read_graph6(path) -> list[np.ndarray]:
    return [graph6_decode(line) for line in Path(path).read_text(encoding="ascii").splitlines() if line.strip()]


def write_graph6(path, graphs) -> None:
    Path(path).write_text("".join(graph6_encode(G) + "\n" for G in graphs), encoding="ascii")


# -- descriptors -------------------------------------------------------------


class DescriptorError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DescriptorError("descriptor", f"duplicate key {key!r}")
        out[key] = value
    return out


def _int(obj: dict, key: str, path: str, *, default=None, minimum=None) -> int:
    if key not in obj:
        if default is None:
            raise DescriptorError(f"{path}.{key}", "required")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise DescriptorError(f"{path}.{key}", f"expected an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise DescriptorError(f"{path}.{key}", f"must be >= {minimum}")
    return val


def _object(val, path: str, allowed: set[str]) -> dict:
    if not isinstance(val, dict):
        raise DescriptorError(path, f"expected an object, got {type(val).__name__}")
    extra = sorted(set(val) - allowed)
    if extra:
        raise DescriptorError(f"{path}.{extra[0]}", "unknown key")
    return val


def _choice(obj: dict, key: str, path: str, options, default=None) -> str:
    val = obj.get(key, default)
    if val not in options:
        raise DescriptorError(f"{path}.{key}", f"expected one of {sorted(options)}, got {val!r}")
    return val


_SYM_KEYS = {
    "fano": set(),
    "all_ones": {"m"},
    "j_minus_i": {"m"},
    "null_polarity": {"e", "q"},
    "difference_set": {"m", "set"},
    "file": {"path"},
}
_DESIGN_KEYS = {"ag": {"q", "d"}, "hadamard": {"order", "method"}, "file": {"path"}}


def _norm_sym(val, path) -> dict:
    kind = _choice(_object(val, path, {"type"} | set().union(*_SYM_KEYS.values())), "type", path, _SYM_KEYS)
    _object(val, path, {"type"} | _SYM_KEYS[kind])
    out = {"type": kind}
    if kind in ("all_ones", "j_minus_i"):
        out["m"] = _int(val, "m", path, minimum=2)
    elif kind == "null_polarity":
        out["e"] = _int(val, "e", path, minimum=1)
        out["q"] = _int(val, "q", path, minimum=2)
    elif kind == "difference_set":
        out["m"] = _int(val, "m", path, minimum=2)
        ds = val.get("set")
        if not isinstance(ds, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in ds):
            raise DescriptorError(f"{path}.set", "expected a list of integers")
        out["set"] = sorted(ds)
    elif kind == "file":
        if not isinstance(val.get("path"), str):
            raise DescriptorError(f"{path}.path", "expected a string")
        out["path"] = val["path"]
    return out


def _norm_design(val, path) -> dict:
    kind = _choice(_object(val, path, {"type", "q", "d", "order", "method", "path"}), "type", path, _DESIGN_KEYS)
    _object(val, path, {"type"} | _DESIGN_KEYS[kind])
    out = {"type": kind}
    if kind == "ag":
        out["q"] = _int(val, "q", path, minimum=2)
        out["d"] = _int(val, "d", path, minimum=2)
    elif kind == "hadamard":
        out["order"] = _int(val, "order", path, minimum=8)
        out["method"] = _choice(val, "method", path, {"sylvester", "paley"}, default="sylvester")
    else:
        if not isinstance(val.get("path"), str):
            raise DescriptorError(f"{path}.path", "expected a string")
        out["path"] = val["path"]
    return out


def _matrix(val, path) -> list[list[int]]:
    if not isinstance(val, list) or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in val):
        raise DescriptorError(path, "expected a list of integer rows")
    return val


@dataclass(frozen=True)
class ConstructionDescriptor:
    """Canonical, self-contained recipe; ``data`` is the normalised JSON tree."""

    data: dict

    @property
    def kind(self) -> str:
        return self.data["kind"]

    def to_dict(self) -> dict:
        return json.loads(json.dumps(self.data))

    def with_seed(self, seed: int) -> "ConstructionDescriptor":
        d = self.to_dict()
        for key in ("labeling", "sigma"):
            if key in d:
                d[key]["seed"] = seed
        return ConstructionDescriptor(d)


def _normalise(raw) -> dict:
    top = _object(raw, "descriptor", {"kind", "symmetric_design", "designs", "labeling", "sigma", "ring", "variant"})
    kind = _choice(top, "kind", "descriptor", {"construction1", "partial_complement", "symplectic", "sporadic28"})
    out = {"kind": kind}
    if kind == "sporadic28":
        _object(top, "descriptor", {"kind"})
        return out
    if kind == "symplectic":
        _object(top, "descriptor", {"kind", "ring", "variant"})
        ring = _object(top.get("ring"), "descriptor.ring", {"kind", "q", "e"})
        out["ring"] = {
            "kind": _choice(ring, "kind", "descriptor.ring", {"z_p2", "fq_x2"}),
            "q": _int(ring, "q", "descriptor.ring", minimum=2),
            "e": _int(ring, "e", "descriptor.ring", minimum=1),
        }
        out["variant"] = _choice(top, "variant", "descriptor", {"X", "Y"})
        return out
    _object(top, "descriptor", {"kind", "symmetric_design", "designs", "labeling", "sigma"})
    if "symmetric_design" not in top:
        raise DescriptorError("descriptor.symmetric_design", "required")
    out["symmetric_design"] = _norm_sym(top["symmetric_design"], "descriptor.symmetric_design")
    designs = top.get("designs")
    if designs is None:
        raise DescriptorError("descriptor.designs", "required")
    if isinstance(designs, list):
        out["designs"] = [_norm_design(d, f"descriptor.designs[{i}]") for i, d in enumerate(designs)]
    else:
        out["designs"] = _norm_design(designs, "descriptor.designs")
    lab = _object(top.get("labeling", {}), "descriptor.labeling", {"strategy", "seed", "matrix"})
    strategy = _choice(lab, "strategy", "descriptor.labeling", {"canonical", "seeded", "symmetric", "explicit"}, "canonical")
    out["labeling"] = {"strategy": strategy, "seed": _int(lab, "seed", "descriptor.labeling", default=0)}
    if strategy == "explicit":
        out["labeling"]["matrix"] = _matrix(lab.get("matrix"), "descriptor.labeling.matrix")
    elif "matrix" in lab:
        raise DescriptorError("descriptor.labeling.matrix", "only allowed with strategy 'explicit'")
    sig = _object(top.get("sigma", {}), "descriptor.sigma", {"strategy", "seed", "maps"})
    strategy = _choice(sig, "strategy", "descriptor.sigma", {"identity", "seeded", "explicit"}, "identity")
    out["sigma"] = {"strategy": strategy, "seed": _int(sig, "seed", "descriptor.sigma", default=0)}
    if strategy == "explicit":
        maps = sig.get("maps")
        if not isinstance(maps, list) or not all(isinstance(t, list) and len(t) == 3 for t in maps):
            raise DescriptorError("descriptor.sigma.maps", "expected a list of [i, j, permutation] triples")
        out["sigma"]["maps"] = sorted(maps)
    elif "maps" in sig:
        raise DescriptorError("descriptor.sigma.maps", "only allowed with strategy 'explicit'")
    return out


def descriptor_parse(text: str) -> ConstructionDescriptor:
    try:
        raw = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise DescriptorError("descriptor", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return ConstructionDescriptor(_normalise(raw))


def descriptor_emit(d: ConstructionDescriptor) -> str:
    return json.dumps(d.data, sort_keys=True, indent=2) + "\n"


def _symmetric_from(source: dict, base: Path):
    from . import symdesigns as sd

    kind = source["type"]
    if kind == "fano":
        return sd.symdesign_fano()
    if kind == "all_ones":
        return sd.symdesign_trivial("all_ones", source["m"])
    if kind == "j_minus_i":
        return sd.symdesign_trivial("j_minus_i", source["m"])
    if kind == "null_polarity":
        return sd.symdesign_null_polarity(source["e"], source["q"])
    if kind == "difference_set":
        return sd.symdesign_difference_set(source["m"], source["set"])
    return sd.symdesign_load(base / source["path"])


def _design_from(source: dict, base: Path):
    from . import designs as ds

    if source["type"] == "ag":
        return ds.affine_from_ag(source["q"], source["d"])
    if source["type"] == "hadamard":
        return ds.affine_from_hadamard(ds.hadamard_matrix(source["order"], source["method"]))
    return ds.load_design(base / source["path"])


def build(d: ConstructionDescriptor, base_dir=".", **kw):
    """Construct the DdgInstance described by ``d``; relative file paths resolve against ``base_dir``."""
    from .construct import construct1, partial_complement, sigma_family_make, sporadic28
    from .symdesigns import label_assign

    base = Path(base_dir)
    data = d.data
    if d.kind == "sporadic28":
        G = sporadic28()
        G.provenance = d.to_dict()
        return G
    if d.kind == "symplectic":
        from .algebra import ring_make
        from .symplectic import symplectic_graph

        ring = ring_make(data["ring"]["kind"], data["ring"]["q"])
        G = symplectic_graph(data["variant"], data["ring"]["e"], ring).to_instance()
        G.provenance = d.to_dict()
        return G
    A = _symmetric_from(data["symmetric_design"], base)
    if isinstance(data["designs"], list):
        if len(data["designs"]) != A.m:
            raise DescriptorError("descriptor.designs", f"need {A.m} design sources, got {len(data['designs'])}")
        designs = [_design_from(s, base) for s in data["designs"]]
    else:
        designs = [_design_from(data["designs"], base)] * A.m
    lab = data["labeling"]
    L = label_assign(A, lab["strategy"], seed=lab["seed"], L=lab.get("matrix"))
    sig = data["sigma"]
    maps = {(i, j): p for i, j, p in sig["maps"]} if "maps" in sig else None
    sigma = sigma_family_make(L, designs, sig["strategy"], seed=sig["seed"], maps=maps)
    G = construct1(L, designs, sigma, provenance=d.to_dict())
    if d.kind == "partial_complement":
        G = partial_complement(G)
        G.provenance = d.to_dict()
    return G
