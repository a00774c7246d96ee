"""Divisible design graphs from affine designs glued along a labeled symmetric design.

Vertex order is the disjoint union of the design point sets: vertex
``i * n + x`` is point ``x`` of design ``i``.  Vertices x in design i and y in
design j (x != y) are adjacent iff e(i, j) != 0 and y avoids the image under
sigma_ij of the class-e(i, j) block through x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .designs import ResolvableDesign
from .symdesigns import LabeledMatrix
from .verify import DdgParams, ddg_verify, normalize_partition

__all__ = [
    "BijectionFamily",
    "DdgInstance",
    "Theorem2Variant",
    "sigma_family_make",
    "construct1",
    "params_theorem1",
    "params_theorem2",
    "partial_complement",
    "block_pattern",
    "sporadic28",
]


@dataclass(frozen=True)
class BijectionFamily:
    """maps[(i, j)] is a permutation of block slots 0..q-1, defined where e(i, j) != 0."""

    q: int
    maps: dict

    def __post_init__(self):
        ident = np.arange(self.q)
        for (i, j), perm in self.maps.items():
            perm = np.asarray(perm)
            if sorted(perm.tolist()) != ident.tolist():
                raise ValueError(f"sigma[{i},{j}] is not a permutation of 0..{self.q - 1}")
            if i == j and not np.array_equal(perm, ident):
                raise ValueError(f"sigma[{i},{i}] must be the identity")
            back = self.maps.get((j, i))
            if back is None:
                raise ValueError(f"sigma[{j},{i}] missing while sigma[{i},{j}] is defined")
            if not np.array_equal(np.asarray(back)[perm], ident):
                raise ValueError(f"sigma[{j},{i}] is not the inverse of sigma[{i},{j}]")

    def __getitem__(self, key) -> np.ndarray:
        return np.asarray(self.maps[key])


def _check_designs(L: LabeledMatrix, designs) -> tuple[int, int, int]:
    if len(designs) != L.m:
        raise ValueError(f"need {L.m} designs, got {len(designs)}")
    shapes = {(D.n_points, D.q, D.r, D.kappa) for D in designs}
    if len(shapes) != 1:
        raise ValueError(f"designs disagree on (points, q, r, kappa): {sorted(shapes)}")
    n, q, r, kappa = shapes.pop()
    if kappa != L.kappa:
        raise ValueError(f"designs have {kappa} parallel classes but labels run over 1..{L.kappa}")
    return n, q, r


def sigma_family_make(L: LabeledMatrix, designs, strategy: str = "identity", *, seed: int = 0, maps=None) -> BijectionFamily:
    """``identity`` pairs equal slots; ``seeded`` draws sigma_ij for i < j from ``seed``; ``explicit`` validates ``maps``."""
    _, q, _ = _check_designs(L, designs)
    pairs = [(int(i), int(j)) for i, j in np.argwhere(L.L != 0)]
    strategy = strategy.lower()
    if strategy == "identity":
        return BijectionFamily(q, {p: np.arange(q) for p in pairs})
    if strategy == "seeded":
        rng = np.random.default_rng(seed)
        out = {}
        for i, j in pairs:
            if i == j:
                out[i, j] = np.arange(q)
            elif i < j:
                perm = rng.permutation(q)
                out[i, j] = perm
                out[j, i] = np.argsort(perm)
        return BijectionFamily(q, out)
    if strategy == "explicit":
        if maps is None:
            raise ValueError("explicit sigma needs maps")
        fam = BijectionFamily(q, {(int(i), int(j)): np.asarray(p) for (i, j), p in dict(maps).items()})
        if set(fam.maps) != set(pairs):
            raise ValueError("explicit sigma keys differ from the nonzero label positions")
        return fam
    raise ValueError(f"unknown sigma strategy {strategy!r}")


@dataclass
class DdgInstance:
    adjacency: np.ndarray
    labels: np.ndarray
    declared: DdgParams | None
    provenance: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=bool)
        if A.diagonal().any() or not np.array_equal(A, A.T):
            raise ValueError("adjacency must be symmetric with an empty diagonal")
        self.labels = normalize_partition(self.labels, len(A))
        A.setflags(write=False)
        self.adjacency = A

    @property
    def v(self) -> int:
        return len(self.adjacency)

    @property
    def m(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def n(self) -> int:
        return self.v // self.m

    def classes(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.labels == c) for c in range(self.m)]


def params_theorem1(q: int, d: int, m: int, lam: int) -> DdgParams:
    kappa = (q**d - 1) // (q - 1)
    if d < 2 or kappa * (kappa - 1) != (m - 1) * lam:
        raise ValueError(f"no symmetric 2-({m},{kappa},{lam}) design: kappa(kappa-1) != (m-1) lambda")
    return DdgParams(
        v=q**d * m,
        k=q ** (d - 1) * (q**d - 1),
        lambda1=q ** (d - 1) * (q**d - q ** (d - 1) - 1),
        lambda2=q ** (d - 2) * (q - 1) ** 2 * lam,
        m=m,
        n=q**d,
        label="theorem1",
    )


class Theorem2Variant(str, enum.Enum):
    AS_PRINTED = "printed"
    MIDDLE_TERM_CORRECTED = "corrected"


def params_theorem2(q: int, d: int, m: int, kappa: int, lam: int, variant=Theorem2Variant.AS_PRINTED) -> DdgParams:
    """Partial-complement parameters.

    The printed lambda2 has middle factor (q^d - 2q^{d-1}); the corrected
    variant uses (q^d - q^{d-1}), which agrees with brute force.
    """
    variant = Theorem2Variant(variant)
    if kappa != (q**d - 1) // (q - 1):
        raise ValueError(f"kappa must be (q^d-1)/(q-1) = {(q**d - 1) // (q - 1)}, got {kappa}")
    if kappa * (kappa - 1) != (m - 1) * lam:
        raise ValueError("kappa(kappa-1) != (m-1) lambda")
    middle = q**d - 2 * q ** (d - 1) if variant is Theorem2Variant.AS_PRINTED else q**d - q ** (d - 1)
    extra = q**d * (m - kappa)
    return DdgParams(
        v=q**d * m,
        k=q ** (d - 1) * (q**d - 1) + extra,
        lambda1=q ** (d - 1) * (q**d - q ** (d - 1) - 1) + extra,
        lambda2=q ** (d - 2) * (q - 1) ** 2 * lam + 2 * middle * (kappa - lam) + q**d * (m - 2 * kappa + lam),
        m=m,
        n=q**d,
        label=f"theorem2-{variant.value}",
    )


def _exponent(n: int, q: int) -> int | None:
    d = 0
    while n > 1 and n % q == 0:
        n //= q
        d += 1
    return d if n == 1 else None


def construct1(L: LabeledMatrix, designs, sigma: BijectionFamily, *, provenance: dict | None = None) -> DdgInstance:
    n, q, r = _check_designs(L, designs)
    m = L.m
    A = np.zeros((m * n, m * n), dtype=bool)
    for i, j in np.argwhere(L.L != 0):
        i, j = int(i), int(j)
        src = designs[i].slot_of[L.L[i, j] - 1]
        dst = designs[j].slot_of[L.L[j, i] - 1]
        A[i * n : (i + 1) * n, j * n : (j + 1) * n] = sigma[i, j][src][:, None] != dst[None, :]
    labels = np.repeat(np.arange(m), n)
    d = _exponent(n, q)
    meta = {"q": q, "r": r, "kappa": L.kappa, "lam": L.parent.lam, "m": m, "n": n}
    if d is not None and d >= 2 and r == q ** (d - 2):
        meta["d"] = d
        declared = params_theorem1(q, d, m, L.parent.lam)
    else:
        check = ddg_verify(A, labels)
        declared = check.params if check.ok else None
    return DdgInstance(A, labels, declared, provenance=dict(provenance or {}), meta=meta)


def block_pattern(G: DdgInstance) -> np.ndarray:
    """m x m 0/1 matrix marking which blocks of the canonical block matrix are nonzero."""
    onehot = np.eye(G.m, dtype=np.int64)[G.labels]
    return ((onehot.T @ G.adjacency.astype(np.int64) @ onehot) > 0).astype(np.int64)


def partial_complement(G: DdgInstance) -> DdgInstance:
    """Turn every all-zero off-diagonal block into an all-ones block; keep the partition."""
    pattern = block_pattern(G)
    empty_diag = np.flatnonzero(np.diag(pattern) == 0)
    if len(empty_diag):
        raise ValueError(f"diagonal block of class {int(empty_diag[0]) + 1} is zero")
    fill = (pattern == 0)[G.labels][:, G.labels]
    A = G.adjacency | fill
    check = ddg_verify(A, G.labels)
    meta = dict(G.meta)
    if {"q", "d", "kappa", "lam", "m"} <= meta.keys():
        meta["theorem2"] = {
            v.value: params_theorem2(meta["q"], meta["d"], meta["m"], meta["kappa"], meta["lam"], v)
            for v in Theorem2Variant
        }
    meta["verification"] = check
    return DdgInstance(
        A, G.labels, check.params if check.ok else None,
        provenance={"partial_complement_of": G.provenance}, meta=meta,
    )


_SPORADIC_BLOCKS = {
    "a": ("1100", "1100", "0011", "0011"),
    "b": ("1100", "0011", "1100", "0011"),
    "c": ("1100", "0011", "0011", "1100"),
    "d": ("0110", "1001", "1001", "0110"),
    "e": ("1010", "0101", "1010", "0101"),
    "f": ("1001", "0110", "0110", "1001"),
}

_SPORADIC_LAYOUT = (
    "O   a   b   c   O   O   O",
    "a'  d   O   O   e   O   O",
    "b'  O   d   O   O   e   O",
    "c'  O   O   d   O   O   e",
    "O   e'  O   O   O   a   c",
    "O   O   e'  O   a'  O   f",
    "O   O   O   e'  c'  f'  O",
)


def sporadic28() -> DdgInstance:
    """The 28-vertex (28,6,2,1;7,4) DDG assembled from its printed 4x4 blocks (x' is x transposed)."""
    blocks = {k: np.array([[int(c) for c in row] for row in rows]) for k, rows in _SPORADIC_BLOCKS.items()}
    blocks["O"] = np.zeros((4, 4), dtype=np.int64)
    grid = []
    for line in _SPORADIC_LAYOUT:
        grid.append([blocks[t[0]].T if t.endswith("'") else blocks[t] for t in line.split()])
    A = np.block(grid).astype(bool)
    labels = np.repeat(np.arange(7), 4)
    return DdgInstance(
        A, labels, DdgParams(28, 6, 2, 1, 7, 4, label="printed"),
        provenance={"kind": "sporadic28"},
    )

