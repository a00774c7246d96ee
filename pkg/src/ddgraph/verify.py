"""Brute-force ground truth for divisible design graphs.

Graphs are square 0/1 (or boolean) numpy adjacency matrices.  Partitions are
either a label per vertex or a list of vertex classes; both are normalised to
labels numbered by the smallest vertex of each class.

Common-neighbour counts come from one float64 BLAS product ``A @ A``.  Entries
are at most v <= 2**53, so the float result is exact.
"""

from __future__ import annotations

import hashlib
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_BOUNDS

__all__ = [
    "DdgParams",
    "DdgCheck",
    "IdentityReport",
    "Discovery",
    "IsoResult",
    "as_adjacency",
    "normalize_partition",
    "common_neighbours",
    "ddg_verify",
    "identity_check",
    "partitions_discover",
    "iso_check",
    "colour_refinement",
    "fingerprint",
    "automorphism_generators",
]


@dataclass(frozen=True)
class DdgParams:
    v: int
    k: int
    lambda1: int
    lambda2: int
    m: int
    n: int
    label: str = ""

    @property
    def proper(self) -> bool:
        return self.m > 1 and self.n > 1 and self.lambda1 != self.lambda2

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.v, self.k, self.lambda1, self.lambda2, self.m, self.n)

    def same_values(self, other: "DdgParams") -> bool:
        return self.as_tuple() == other.as_tuple()

    def __str__(self) -> str:
        v, k, l1, l2, m, n = self.as_tuple()
        s = f"({v},{k},{l1},{l2};{m},{n})"
        return f"{s} [{self.label}]" if self.label else s

    def to_dict(self) -> dict:
        return {
            "v": self.v, "k": self.k, "lambda1": self.lambda1, "lambda2": self.lambda2,
            "m": self.m, "n": self.n, "proper": self.proper,
        }


@dataclass(frozen=True)
class IdentityReport:
    lhs: int
    rhs: int
    v_equals_mn: bool

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs and self.v_equals_mn

    def __bool__(self) -> bool:
        return self.ok


def identity_check(p: DdgParams) -> IdentityReport:
    """Double count walks x-z-y: lambda1*(n-1) + lambda2*n*(m-1) == k*(k-1)."""
    lhs = p.lambda1 * (p.n - 1) + p.lambda2 * p.n * (p.m - 1)
    return IdentityReport(lhs=lhs, rhs=p.k * (p.k - 1), v_equals_mn=p.v == p.m * p.n)


def as_adjacency(G) -> np.ndarray:
    A = np.asarray(G)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    return A.astype(bool)


def normalize_partition(partition, v: int) -> np.ndarray:
    """Class labels 0..m-1, numbered by first occurrence; rejects unequal class sizes."""
    if len(partition) and not np.isscalar(partition[0]):
        labels = np.full(v, -1, dtype=np.int64)
        for c, cls in enumerate(partition):
            for x in cls:
                if not 0 <= x < v or labels[x] != -1:
                    raise ValueError(f"vertex {x} is out of range or listed twice")
                labels[x] = c
        if (labels < 0).any():
            raise ValueError(f"vertex {int(np.argmax(labels < 0))} is in no class")
    else:
        labels = np.asarray(partition, dtype=np.int64)
        if labels.shape != (v,):
            raise ValueError(f"need {v} labels, got {labels.shape}")
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    labels = order[inv]
    sizes = np.bincount(labels)
    if len(set(sizes.tolist())) != 1:
        raise ValueError(f"classes have unequal sizes {sorted(set(sizes.tolist()))}")
    return labels


def common_neighbours(A: np.ndarray) -> np.ndarray:
    F = np.asarray(A, dtype=np.float64)
    return np.rint(F @ F).astype(np.int64)


@dataclass(frozen=True)
class DdgCheck:
    ok: bool
    params: DdgParams | None = None
    reason: str = ""
    witness: tuple = ()
    count: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _first_pair(mask: np.ndarray) -> tuple[int, int]:
    i, j = np.argwhere(mask)[0]
    return int(i), int(j)


def ddg_verify(G, partition) -> DdgCheck:
    """Check regularity and the two common-neighbour counts against ``partition``."""
    A = as_adjacency(G)
    v = len(A)
    labels = normalize_partition(partition, v)
    if A.diagonal().any():
        x = int(np.argmax(A.diagonal()))
        return DdgCheck(False, reason="loop", witness=(x, x))
    if not np.array_equal(A, A.T):
        return DdgCheck(False, reason="not symmetric", witness=_first_pair(A != A.T))
    deg = A.sum(axis=1)
    if v and (deg != deg[0]).any():
        x = int(np.argmax(deg != deg[0]))
        return DdgCheck(False, reason="not regular", witness=(0, x), count=int(deg[x]))
    C = common_neighbours(A)
    same = labels[:, None] == labels[None, :]
    off = ~np.eye(v, dtype=bool)
    counts = {}
    for name, mask in (("lambda1", same & off), ("lambda2", ~same)):
        vals = C[mask]
        if vals.size == 0:
            counts[name] = 0
            continue
        ref = vals[0]
        bad = mask & (C != ref)
        if bad.any():
            i, j = _first_pair(bad)
            return DdgCheck(False, reason=f"{name} not constant", witness=(i, j), count=int(C[i, j]))
        counts[name] = int(ref)
    m = int(labels.max()) + 1 if v else 0
    params = DdgParams(
        v=v, k=int(deg[0]) if v else 0, lambda1=counts["lambda1"], lambda2=counts["lambda2"],
        m=m, n=v // m if m else 0,
    )
    return DdgCheck(True, params=params)


@dataclass
class Discovery:
    partitions: list[tuple[np.ndarray, DdgParams]]
    count_values: list[int]
    srg: tuple[int, int, int, int] | None = None

    @property
    def proper(self) -> list[tuple[np.ndarray, DdgParams]]:
        return [(lab, p) for lab, p in self.partitions if p.proper]


def partitions_discover(G, *, bound: int = DEFAULT_BOUNDS.discover_vertices) -> Discovery:
    """All partitions certifying ``G`` as a DDG, one candidate per observed count value."""
    A = as_adjacency(G)
    v = len(A)
    if v > bound:
        raise ValueError(f"{v} vertices exceed discovery bound {bound}")
    deg = A.sum(axis=1)
    if v and (deg != deg[0]).any():
        raise ValueError("graph is not regular")
    C = common_neighbours(A)
    off = ~np.eye(v, dtype=bool)
    values = sorted(set(C[off].tolist()))

    srg = None
    adj_vals = set(C[A].tolist())
    non_vals = set(C[off & ~A].tolist())
    if len(adj_vals) <= 1 and len(non_vals) <= 1:
        lam = adj_vals.pop() if adj_vals else 0
        mu = non_vals.pop() if non_vals else 0
        srg = (v, int(deg[0]) if v else 0, lam, mu)

    found = []
    if len(values) == 1:
        labels = np.zeros(v, dtype=np.int64)
        found.append((labels, ddg_verify(A, labels).params))
        return Discovery(found, values, srg)
    for s in values:
        R = (C == s) | ~off
        # the relation must be an equivalence: checked, not assumed
        _, labels = np.unique(R, axis=0, return_inverse=True)
        labels = labels.reshape(-1)
        if not np.array_equal(labels[:, None] == labels[None, :], R):
            continue
        sizes = np.bincount(labels)
        if (sizes != sizes[0]).any():
            continue
        check = ddg_verify(A, labels)
        if check.ok:
            found.append((normalize_partition(labels, v), check.params))
    return Discovery(found, values, srg)


# -- isomorphism --------------------------------------------------------------


def _refine(mats: list[np.ndarray], colours: list[np.ndarray]) -> list[np.ndarray] | None:
    """Joint colour refinement; colours are named by sorted signature so they agree across graphs.

    Returns None as soon as the colour histograms of the graphs differ.
    """
    ncol = int(max(c.max() for c in colours)) + 1
    while True:
        sigs = []
        for A, c in zip(mats, colours):
            onehot = np.zeros((len(c), ncol))
            onehot[np.arange(len(c)), c] = 1.0
            sigs.append(np.column_stack([c, np.rint(A @ onehot).astype(np.int64)]))
        uniq, inv = np.unique(np.vstack(sigs), axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        new, start = [], 0
        for c in colours:
            new.append(inv[start : start + len(c)])
            start += len(c)
        hist0 = np.bincount(new[0], minlength=len(uniq))
        if any(not np.array_equal(hist0, np.bincount(n, minlength=len(uniq))) for n in new[1:]):
            return None
        if len(uniq) == ncol:
            return new
        colours, ncol = new, len(uniq)


def colour_refinement(G, colours=None) -> list[np.ndarray]:
    """Stable colouring of one graph, returned as the colour vector after every round."""
    A = as_adjacency(G).astype(np.float64)
    c = np.zeros(len(A), dtype=np.int64) if colours is None else np.asarray(colours, dtype=np.int64)
    rounds = [c]
    ncol = int(c.max()) + 1 if len(c) else 0
    while len(c):
        onehot = np.zeros((len(c), ncol))
        onehot[np.arange(len(c)), c] = 1.0
        sig = np.column_stack([c, np.rint(A @ onehot).astype(np.int64)])
        uniq, c = np.unique(sig, axis=0, return_inverse=True)
        c = c.reshape(-1)
        rounds.append(c)
        if len(uniq) == ncol:
            break
        ncol = len(uniq)
    return rounds


def fingerprint(G) -> dict:
    """Isomorphism invariants: size, degree, pair-count histogram, refined colour digest."""
    A = as_adjacency(G)
    v = len(A)
    C = common_neighbours(A)
    iu = np.triu_indices(v, 1)
    hist = sorted(Counter(zip(A[iu].tolist(), C[iu].tolist())).items())
    digest = hashlib.sha256()
    for c in colour_refinement(A):
        digest.update(np.bincount(c).astype(np.int64).tobytes())
        digest.update(b"|")
    return {
        "v": v,
        "k": sorted(set(A.sum(axis=1).tolist())),
        "pair_counts": [[int(a), int(c), n] for (a, c), n in hist],
        "colour_digest": digest.hexdigest(),
    }


@dataclass
class IsoResult:
    status: str  # "isomorphic" | "non-isomorphic" | "unknown"
    mapping: np.ndarray | None = None
    invariant: str = ""
    nodes: int = 0
    elapsed: float = 0.0

    def __bool__(self) -> bool:
        return self.status == "isomorphic"


class _Timeout(Exception):
    pass


def _target_cell(colours: np.ndarray) -> int | None:
    sizes = np.bincount(colours)
    if (sizes == 1).all():
        return None
    return min((s, c) for c, s in enumerate(sizes) if s > 1)[1]


class _Search:
    """Individualisation-refinement search for an isomorphism Ag -> Ah.

    With ``group`` (a sympy PermutationGroup of automorphisms of Ah) the
    candidates at each node are cut down to one per orbit of the pointwise
    stabiliser of the H vertices individualised so far.
    """

    def __init__(self, Ag, Ah, deadline, group=None):
        self.Ag, self.Ah = Ag, Ah
        self.mats = [Ag.astype(np.float64), Ah.astype(np.float64)]
        self.deadline = deadline
        self.group = group
        self.nodes = 0
        self._stabilisers = {}

    def _orbit_reps(self, prefix: tuple, cands: np.ndarray) -> list[int]:
        if self.group is None:
            return [int(w) for w in cands]
        if prefix not in self._stabilisers:
            stab = self.group.pointwise_stabilizer(list(prefix)) if prefix else self.group
            orbit_id = {}
            for k, orb in enumerate(stab.orbits()):
                for x in orb:
                    orbit_id[x] = k
            self._stabilisers[prefix] = orbit_id
        orbit_id = self._stabilisers[prefix]
        reps, seen = [], set()
        for w in cands:
            key = orbit_id.get(int(w), ("fixed", int(w)))
            if key not in seen:
                seen.add(key)
                reps.append(int(w))
        return reps

    def run(self, cg: np.ndarray, ch: np.ndarray, prefix: tuple = ()) -> np.ndarray | None:
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Timeout
        cell = _target_cell(cg)
        if cell is None:
            mapping = np.empty(len(cg), dtype=np.int64)
            mapping[np.argsort(cg)] = np.argsort(ch)
            if np.array_equal(self.Ag, self.Ah[np.ix_(mapping, mapping)]):
                return mapping
            return None
        u = int(np.flatnonzero(cg == cell)[0])
        fresh = int(cg.max()) + 1
        for w in self._orbit_reps(prefix, np.flatnonzero(ch == cell)):
            ng, nh = cg.copy(), ch.copy()
            ng[u] = fresh
            nh[w] = fresh
            refined = _refine(self.mats, [ng, nh])
            if refined is None:
                continue
            found = self.run(*refined, prefix + (w,))
            if found is not None:
                return found
        return None


def _orbit(start: int, gens: list[np.ndarray]) -> set[int]:
    orbit, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for g in gens:
            y = int(g[x])
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    return orbit


def automorphism_generators(H, colours=None, *, deadline: float | None = None, step_timeout: float = 5.0) -> list[np.ndarray]:
    """Generators of (a subgroup of) the colour-preserving automorphism group of H.

    Walks the first path of the search tree and, level by level from the
    deepest, looks for automorphisms fixing the path prefix and moving the
    path vertex to each cell-mate outside the orbit found so far.  Sub-searches
    that exceed ``step_timeout`` are skipped, so the result may generate a
    proper subgroup; it never contains a non-automorphism.
    """
    Ah = as_adjacency(H)
    v = len(Ah)
    F = [Ah.astype(np.float64)]
    c0 = np.zeros(v, dtype=np.int64) if colours is None else np.unique(colours, return_inverse=True)[1].reshape(-1)
    cur = _refine(F, [c0])[0]
    levels = []
    while (cell := _target_cell(cur)) is not None:
        members = np.flatnonzero(cur == cell)
        levels.append((cur, members))
        nc = cur.copy()
        nc[members[0]] = int(cur.max()) + 1
        cur = _refine(F, [nc])[0]
    mats = [F[0], F[0]]
    gens: list[np.ndarray] = []
    for cur, members in reversed(levels):
        base = int(members[0])
        fresh = int(cur.max()) + 1
        for w in members[1:]:
            if deadline is not None and time.monotonic() > deadline:
                return gens
            if int(w) in _orbit(base, gens):
                continue
            a, b = cur.copy(), cur.copy()
            a[base] = fresh
            b[w] = fresh
            refined = _refine(mats, [a, b])
            if refined is None:
                continue
            limit = time.monotonic() + step_timeout
            if deadline is not None:
                limit = min(limit, deadline)
            try:
                found = _Search(Ah, Ah, limit).run(*refined)
            except _Timeout:
                continue
            if found is not None:
                gens.append(found)
    return gens


def iso_check(
    G,
    H,
    *,
    bound: int = DEFAULT_BOUNDS.iso_vertices,
    timeout: float | None = None,
    colours_g=None,
    colours_h=None,
    prune: bool = True,
) -> IsoResult:
    """Decide whether G and H are isomorphic (optionally preserving vertex colours).

    Cheap invariants are compared first; otherwise individualisation-refinement
    backtracking runs until a mapping is found, the tree is exhausted, or
    ``timeout`` seconds pass (status "unknown").  With ``prune`` the candidate
    lists are reduced by automorphisms of H found beforehand.  A returned mapping sends
    vertex x of G to ``mapping[x]`` in H and has been re-checked on every pair.
    """
    t0 = time.monotonic()
    Ag, Ah = as_adjacency(G), as_adjacency(H)
    v = len(Ag)
    if max(v, len(Ah)) > bound:
        raise ValueError(f"graphs with {max(v, len(Ah))} vertices exceed iso bound {bound}")

    def done(status, invariant="", mapping=None, nodes=0):
        return IsoResult(status, mapping, invariant, nodes, time.monotonic() - t0)

    if v != len(Ah):
        return done("non-isomorphic", "vertex count")
    if Ag.sum() != Ah.sum():
        return done("non-isomorphic", "edge count")
    if sorted(Ag.sum(axis=1).tolist()) != sorted(Ah.sum(axis=1).tolist()):
        return done("non-isomorphic", "degree sequence")
    cg = np.zeros(v, dtype=np.int64) if colours_g is None else np.asarray(colours_g, dtype=np.int64)
    ch = np.zeros(v, dtype=np.int64) if colours_h is None else np.asarray(colours_h, dtype=np.int64)
    if sorted(cg.tolist()) != sorted(ch.tolist()):
        return done("non-isomorphic", "vertex colour histogram")
    if v == 0:
        return done("isomorphic", mapping=np.zeros(0, dtype=np.int64))
    Cg, Ch = common_neighbours(Ag), common_neighbours(Ah)
    iu = np.triu_indices(v, 1)
    if Counter(zip(Ag[iu].tolist(), Cg[iu].tolist())) != Counter(zip(Ah[iu].tolist(), Ch[iu].tolist())):
        return done("non-isomorphic", "pair-count multiset")

    mats = [Ag.astype(np.float64), Ah.astype(np.float64)]
    _, inv = np.unique(np.concatenate([cg, ch]), return_inverse=True)
    inv = inv.reshape(-1)
    refined = _refine(mats, [inv[:v], inv[v:]])
    if refined is None:
        return done("non-isomorphic", "refined colour histogram")
    deadline = None if timeout is None else t0 + timeout
    group = None
    if prune:
        try:
            gens = automorphism_generators(Ah, inv[v:], deadline=deadline)
        except _Timeout:
            gens = []
        if gens:
            from sympy.combinatorics import Permutation, PermutationGroup

            group = PermutationGroup([Permutation(g.tolist()) for g in gens])
    search = _Search(Ag, Ah, deadline, group)
    try:
        mapping = search.run(*refined)
    except _Timeout:
        return done("unknown", "timeout", nodes=search.nodes)
    if mapping is None:
        return done("non-isomorphic", "exhaustive search", nodes=search.nodes)
    # independent re-check, pair by pair
    for x in range(v):
        if not np.array_equal(Ag[x], Ah[mapping[x], mapping]) or cg[x] != ch[mapping[x]]:
            raise AssertionError("isomorphism search produced an invalid mapping")
    return done("isomorphic", mapping=mapping, nodes=search.nodes)
