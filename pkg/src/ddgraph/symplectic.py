"""Symplectic graphs X(2e, K) and Y(2e, K) over local rings, and the search for Construction 1 witnesses.

Vertices are the unit-scaling classes of vectors in K^{2e} with a unit
coordinate.  With the form a M b^T, M = [[O, I], [-I, O]], two classes are
adjacent in X when the form is nonzero and in Y when it is a nonzero element
of the maximal ideal J.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import LocalRing, ProjectiveClasses, projective_classes, prime_power
from .construct import (
    BijectionFamily,
    DdgInstance,
    block_pattern,
    construct1,
    params_theorem1,
    sigma_family_make,
)
from .designs import ResolvableDesign, design_isomorphism
from .symdesigns import LabeledMatrix, SymmetricDesignMatrix, label_assign
from .verify import DdgParams, fingerprint, iso_check, normalize_partition, partitions_discover

__all__ = [
    "SymplecticGraph",
    "symplectic_graph",
    "form_values",
    "params_bg",
    "PcReport",
    "pc_relation_check",
    "SearchReport",
    "sigma_search",
]


def form_values(ring: LocalRing, reps: np.ndarray, other: np.ndarray | None = None) -> np.ndarray:
    """Matrix of a M b^T for rows a of ``reps`` and b of ``other``."""
    other = reps if other is None else other
    e = reps.shape[1] // 2
    add, mul, neg = ring.add_table, ring.mul_table, ring.neg_table
    out = np.zeros((len(reps), len(other)), dtype=np.int64)
    for t in range(e):
        plus = mul[reps[:, t][:, None], other[:, t + e][None, :]]
        minus = mul[reps[:, t + e][:, None], other[:, t][None, :]]
        out = add[out, add[plus, neg[minus]]]
    return out


def _adjacent(ring: LocalRing, values: np.ndarray, variant: str) -> np.ndarray:
    nonzero = values != 0
    return nonzero & ring.in_ideal[values] if variant == "Y" else nonzero


@dataclass
class SymplecticGraph:
    variant: str
    ring: LocalRing
    e: int
    vertices: ProjectiveClasses
    adjacency: np.ndarray

    @property
    def v(self) -> int:
        return len(self.adjacency)

    def to_instance(self, labels=None) -> DdgInstance:
        """Wrap as a DdgInstance, using the unique discovered proper partition when none is given."""
        if labels is None:
            found = partitions_discover(self.adjacency).proper
            if len(found) != 1:
                raise ValueError(f"expected one proper partition, found {len(found)}")
            labels, params = found[0]
        else:
            params = None
        return DdgInstance(
            self.adjacency, labels, params,
            provenance={"kind": "symplectic", "variant": self.variant, "ring": self.ring.kind.value,
                        "q": self.ring.q, "e": self.e},
        )


def symplectic_graph(
    variant: str, e: int, ring: LocalRing, *, bound: int = 5000, spot_pairs: int = 200, seed: int = 0
) -> SymplecticGraph:
    variant = variant.upper()
    if variant not in ("X", "Y"):
        raise ValueError(f"variant must be X or Y, got {variant!r}")
    classes = projective_classes(ring, e)
    if len(classes) > bound:
        raise ValueError(f"{len(classes)} vertices exceed bound {bound}")
    reps = classes.reps
    adj = _adjacent(ring, form_values(ring, reps), variant)

    # well-definedness: rescaling either representative by a unit must not change adjacency
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, len(reps), size=(min(spot_pairs, len(reps) ** 2), 2))
    for u in ring.units:
        for w in ring.units:
            a = ring.mul_table[u][reps[pairs[:, 0]]]
            b = ring.mul_table[w][reps[pairs[:, 1]]]
            vals = np.diagonal(form_values(ring, a, b))
            if not np.array_equal(_adjacent(ring, vals, variant), adj[pairs[:, 0], pairs[:, 1]]):
                raise AssertionError("adjacency depends on the class representative")
    adj.setflags(write=False)
    return SymplecticGraph(variant, ring, e, classes, adj)


def params_bg(variant: str, q: int, e: int) -> DdgParams:
    """Parameters of X(2e, K) / Y(2e, K) exactly as quoted, including (m, n) = (q^{2e-1}(q-1), q^{2e}-1)."""
    variant = variant.upper()
    if prime_power(q) is None or e < 2:
        raise ValueError("need a prime power q and e >= 2")
    v = q ** (2 * e - 1) * (q ** (2 * e) - 1) // (q - 1)
    m, n = q ** (2 * e - 1) * (q - 1), q ** (2 * e) - 1
    if variant == "X":
        k = q ** (4 * e - 2) + q ** (4 * e - 3) - q ** (2 * e - 2)
        l1 = q ** (4 * e - 2) + q ** (4 * e - 3) - q ** (4 * e - 4) - q ** (2 * e - 2)
        l2 = (q ** (4 * e - 2) + q ** (4 * e - 3) - q ** (4 * e - 4) - q ** (4 * e - 5)
              - q ** (2 * e - 2) + q ** (2 * e - 3))
    elif variant == "Y":
        k = q ** (4 * e - 3) - q ** (2 * e - 2)
        l1 = q ** (4 * e - 3) - q ** (4 * e - 4) - q ** (2 * e - 2)
        l2 = q ** (4 * e - 4) - q ** (4 * e - 5) - q ** (2 * e - 2) + q ** (2 * e - 3)
    else:
        raise ValueError(f"variant must be X or Y, got {variant!r}")
    return DdgParams(v, k, l1, l2, m, n, label=f"bg-{variant}-printed")


@dataclass(frozen=True)
class PcReport:
    ok: bool
    reason: str = ""
    block: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def pc_relation_check(X, Y, partition) -> PcReport:
    """Is X exactly Y with every zero off-diagonal block (w.r.t. ``partition``) filled with ones?"""
    AX = np.asarray(getattr(X, "adjacency", X), dtype=bool)
    AY = np.asarray(getattr(Y, "adjacency", Y), dtype=bool)
    if AX.shape != AY.shape:
        raise ValueError("graphs have different vertex counts")
    labels = normalize_partition(partition, len(AX))
    if (AY & ~AX).any():
        return PcReport(False, "Y is not a subgraph of X")
    if np.array_equal(AX, AY):
        return PcReport(False, "degenerate: X and Y coincide")
    m = int(labels.max()) + 1
    cls = [np.flatnonzero(labels == c) for c in range(m)]
    for a in range(m):
        for b in range(m):
            bx = AX[np.ix_(cls[a], cls[b])]
            by = AY[np.ix_(cls[a], cls[b])]
            want = np.ones_like(by) if a != b and not by.any() else by
            if not np.array_equal(bx, want):
                return PcReport(False, "block differs", (a, b))
    return PcReport(True)


@dataclass
class SearchReport:
    found: bool
    attempts: int
    method: str = ""
    labeling: LabeledMatrix | None = None
    sigma: BijectionFamily | None = None
    mapping: np.ndarray | None = None
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0


def _target_partition(target: DdgInstance, want: DdgParams) -> np.ndarray | None:
    for labels, params in partitions_discover(target.adjacency).partitions:
        if params.same_values(want):
            return labels
    return None


def _reconstruct(target: DdgInstance, labels: np.ndarray, A: SymmetricDesignMatrix, designs, q: int):
    """Read labels and sigma off the target's block structure.

    Each neighbouring class j of class i splits P_i by "same non-neighbours in
    P_j"; these splits must be the parallel classes of an affine design on P_i
    isomorphic to the supplied design.  Returns (L, sigma) or a failure string.
    """
    adj = target.adjacency
    m = int(labels.max()) + 1
    cls = [np.flatnonzero(labels == c) for c in range(m)]
    n = len(cls[0])
    onehot = np.eye(m, dtype=np.int64)[labels]
    pattern = (onehot.T @ adj.astype(np.int64) @ onehot) > 0

    def loopless(P):
        return P & ~np.eye(len(P), dtype=bool)

    match = iso_check(loopless(pattern), loopless(A.A.astype(bool)),
                      colours_g=np.diag(pattern).astype(int), colours_h=np.diag(A.A))
    if match.status != "isomorphic":
        return "class pattern is not the symmetric design"
    to_a = match.mapping  # target class -> row of A

    # non-neighbour sets of each vertex in each neighbouring class, as local indices
    nonnbr = {}
    phi = {}
    for c in range(m):
        split = {}
        for c2 in np.flatnonzero(pattern[c]):
            sets = [frozenset(np.flatnonzero(~adj[x, cls[c2]]).tolist()) for x in cls[c]]
            nonnbr[c, int(c2)] = sets
            groups = {}
            for x, s in enumerate(sets):
                groups.setdefault(s, []).append(x)
            if len(groups) != q:
                return f"class {c}: neighbour class {c2} does not split it into {q} blocks"
            split[int(c2)] = list(groups.values())
        D = ResolvableDesign.from_classes(n, split.values(), q, designs[0].r)
        mapping = design_isomorphism(D, designs[to_a[c]])
        if mapping is None:
            return f"class {c}: induced design is not isomorphic to the supplied design"
        phi[c] = mapping

    L = np.zeros((m, m), dtype=np.int64)
    slot_maps = {}
    for c in range(m):
        h = int(to_a[c])
        Dh = designs[h]
        for c2 in np.flatnonzero(pattern[c]):
            c2 = int(c2)
            h2 = int(to_a[c2])
            D2 = designs[h2]
            # class of D_h whose blocks are the images of the split of P_c induced by c2
            x0 = 0
            same = [x for x in range(n) if nonnbr[c, c2][x] == nonnbr[c, c2][x0]]
            image = frozenset(int(phi[c][x]) for x in same)
            j = next((j for j in range(1, Dh.kappa + 1) if image in {frozenset(b) for b in Dh.classes[j - 1]}), None)
            if j is None:
                return f"class {c}: split by {c2} is not a parallel class"
            L[h, h2] = j
            perm = {}
            for x in range(n):
                s = int(Dh.slot_of[j - 1, phi[c][x]])
                block = frozenset(int(phi[c2][y]) for y in nonnbr[c, c2][x])
                hits = [(jj, t) for jj, cl in enumerate(D2.classes, 1) for t, b in enumerate(cl) if frozenset(b) == block]
                if len(hits) != 1:
                    return f"non-neighbours of a class-{c} vertex in class {c2} are not a block"
                perm.setdefault(s, set()).add(hits[0])
            slot_maps[h, h2] = perm
    try:
        lab = label_assign(A, "explicit", L=L)
    except ValueError as exc:
        return f"induced labels invalid: {exc}"
    maps = {}
    for (h, h2), perm in slot_maps.items():
        arr = np.full(q, -1, dtype=np.int64)
        for s, hits in perm.items():
            if len(hits) != 1 or next(iter(hits))[0] != lab.L[h2, h]:
                return f"sigma[{h},{h2}] is not well defined"
            arr[s] = next(iter(hits))[1]
        maps[h, h2] = arr
    try:
        sigma = sigma_family_make(lab, designs, "explicit", maps=maps)
    except ValueError as exc:
        return f"induced sigma invalid: {exc}"
    vertex_map = np.empty(len(adj), dtype=np.int64)
    for c in range(m):
        vertex_map[cls[c]] = int(to_a[c]) * n + phi[c]
    return lab, sigma, vertex_map


def sigma_search(
    target: DdgInstance,
    A: SymmetricDesignMatrix,
    designs,
    *,
    attempts: int = 50,
    seconds: float | None = None,
    base_seed: int = 0,
    iso_timeout: float = 60.0,
    structured: bool = True,
) -> SearchReport:
    """Look for a labeling and sigma family whose Construction 1 graph is isomorphic to ``target``.

    Attempt 0 (when ``structured``) reads labels and sigma off the target's own
    block structure; the remaining attempts draw seeded labelings and sigma
    families from ``base_seed`` on.  Every witness is re-verified by iso_check.
    """
    t0 = time.monotonic()
    designs = list(designs)
    q = designs[0].q
    d = round(np.log(designs[0].n_points) / np.log(q))
    want = params_theorem1(q, d, A.m, A.lam)
    labels = _target_partition(target, want)
    if labels is None:
        raise ValueError(f"target has no partition with parameters {want}; the search would be vacuous")
    report = SearchReport(False, 0)

    def out_of_time():
        return seconds is not None and time.monotonic() - t0 > seconds

    def accept(lab, sig, G, method):
        res = iso_check(G.adjacency, target.adjacency, timeout=iso_timeout, bound=max(500, G.v))
        if res.status == "isomorphic":
            report.found, report.method = True, method
            report.labeling, report.sigma, report.mapping = lab, sig, res.mapping
            return True
        report.notes.append(f"{method}: iso_check {res.status} ({res.invariant})")
        return False

    tried = 0
    if structured and attempts > 0:
        tried += 1
        got = _reconstruct(target, labels, A, designs, q)
        if isinstance(got, str):
            report.notes.append(f"structured: {got}")
        else:
            lab, sig, vmap = got
            G = construct1(lab, designs, sig)
            if not np.array_equal(G.adjacency[np.ix_(vmap, vmap)], target.adjacency):
                report.notes.append("structured: rebuilt graph differs under the induced vertex map")
            elif accept(lab, sig, G, "structured"):
                report.attempts, report.elapsed = tried, time.monotonic() - t0
                return report

    target_fp = fingerprint(target.adjacency)
    seed = base_seed
    while tried < attempts and not out_of_time():
        tried += 1
        lab = label_assign(A, "seeded", seed=seed)
        sig = sigma_family_make(lab, designs, "seeded", seed=seed)
        G = construct1(lab, designs, sig)
        if fingerprint(G.adjacency) != target_fp:
            report.notes.append(f"seed {seed}: fingerprint differs")
        elif accept(lab, sig, G, f"seeded({seed})"):
            break
        seed += 1
    report.attempts, report.elapsed = tried, time.monotonic() - t0
    return report
