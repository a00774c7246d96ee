"""Affine resolvable designs: AG(d, q) hyperplanes and Hadamard 3-designs.

A design stores its parallel classes explicitly.  Class ``j`` (1-based, as
consumed by Construction 1) is ``classes[j - 1]``; inside a class the blocks
are ordered by their smallest point, and that position is the block's *slot*.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .algebra import field_of_order, is_prime, prime_power, projective_points
from .config import DEFAULT_BOUNDS
from .verify import iso_check

__all__ = [
    "ResolvableDesign",
    "HadamardMatrix",
    "AffineReport",
    "affine_from_ag",
    "hadamard_matrix",
    "affine_from_hadamard",
    "affine_verify",
    "parallel_block_of",
    "design_isomorphism",
    "load_design",
    "dump_design",
]


def _sort_class(blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(sorted(int(x) for x in b)) for b in blocks), key=lambda b: b[0] if b else -1))


@dataclass(frozen=True)
class ResolvableDesign:
    n_points: int
    classes: tuple[tuple[tuple[int, ...], ...], ...]
    q: int
    r: int
    name: str = ""

    @classmethod
    def from_classes(cls, n_points: int, classes, q: int, r: int, name: str = "") -> "ResolvableDesign":
        return cls(n_points, tuple(_sort_class(c) for c in classes), q, r, name)

    @property
    def kappa(self) -> int:
        return len(self.classes)

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        return [b for c in self.classes for b in c]

    def block_id(self, j: int, slot: int) -> int:
        return sum(len(c) for c in self.classes[: j - 1]) + slot

    @cached_property
    def slot_of(self) -> np.ndarray:
        """slot_of[j - 1, x] = slot of the class-j block containing point x."""
        table = np.full((self.kappa, self.n_points), -1, dtype=np.int64)
        for j, cls in enumerate(self.classes):
            for s, block in enumerate(cls):
                if (table[j, list(block)] != -1).any():
                    raise ValueError(f"class {j + 1} has overlapping blocks")
                table[j, list(block)] = s
        if (table < 0).any():
            j, x = np.argwhere(table < 0)[0]
            raise ValueError(f"point {x} is not covered by class {j + 1}")
        table.setflags(write=False)
        return table

    def incidence(self) -> np.ndarray:
        blocks = self.blocks
        N = np.zeros((len(blocks), self.n_points), dtype=bool)
        for b, block in enumerate(blocks):
            N[b, list(block)] = True
        return N


def parallel_block_of(D: ResolvableDesign, j: int, x: int) -> int:
    """Id of the block of parallel class ``j`` (1-based) containing point ``x``."""
    if not 1 <= j <= D.kappa:
        raise IndexError(f"class {j} out of range 1..{D.kappa}")
    if not 0 <= x < D.n_points:
        raise IndexError(f"point {x} out of range 0..{D.n_points - 1}")
    return D.block_id(j, int(D.slot_of[j - 1, x]))


def affine_from_ag(q: int, d: int, *, bound: int = DEFAULT_BOUNDS.ag_points) -> ResolvableDesign:
    """Point-hyperplane design of AG(d, q).

    Points are GF(q)^d in lexicographic order; class j collects the hyperplanes
    n.x = c for the j-th normalised normal vector n.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if q**d > bound:
        raise ValueError(f"{q}**{d} points exceed bound {bound}")
    F = field_of_order(q)
    pts = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64)
    classes = []
    for normal in projective_points(F, d):
        dots = np.zeros(len(pts), dtype=np.int64)
        for t in range(d):
            dots = F.add_table[dots, F.mul_table[normal[t], pts[:, t]]]
        classes.append([np.flatnonzero(dots == c) for c in range(q)])
    return ResolvableDesign.from_classes(q**d, classes, q, q ** (d - 2), name=f"AG({d},{q})")


@dataclass(frozen=True)
class HadamardMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.matrix, dtype=np.int64)
        n = len(H)
        if H.shape != (n, n) or not np.isin(H, (-1, 1)).all():
            raise ValueError("a Hadamard matrix is square with entries +-1")
        if not np.array_equal(H @ H.T, n * np.eye(n, dtype=np.int64)):
            raise ValueError("H H^T != n I")
        H.setflags(write=False)
        object.__setattr__(self, "matrix", H)

    @property
    def order(self) -> int:
        return len(self.matrix)

    def normalized(self) -> "HadamardMatrix":
        H = self.matrix * self.matrix[0][None, :]
        return HadamardMatrix(H * H[:, :1])


def hadamard_matrix(order: int, method: str = "sylvester") -> HadamardMatrix:
    method = method.lower()
    if method == "sylvester":
        if order < 1 or order & (order - 1):
            raise ValueError(f"Sylvester needs a power of 2, got {order}")
        H = np.ones((1, 1), dtype=np.int64)
        while len(H) < order:
            H = np.block([[H, H], [H, -H]])
        return HadamardMatrix(H)
    if method == "paley":
        p = order - 1
        if order % 4 or not is_prime(p):
            raise ValueError(f"Paley I needs order = p + 1 = 0 mod 4 with p prime, got {order}")
        squares = {(x * x) % p for x in range(1, p)}
        chi = np.array([0] + [1 if x in squares else -1 for x in range(1, p)], dtype=np.int64)
        idx = np.arange(p)
        Q = chi[(idx[None, :] - idx[:, None]) % p]
        S = np.zeros((order, order), dtype=np.int64)
        S[0, 1:] = 1
        S[1:, 0] = -1
        S[1:, 1:] = Q
        return HadamardMatrix(S + np.eye(order, dtype=np.int64))
    raise ValueError(f"unknown Hadamard method {method!r}")


def affine_from_hadamard(H: HadamardMatrix) -> ResolvableDesign:
    """Hadamard 3-design: each non-initial row of the normalised matrix is a parallel class."""
    n = H.order
    if n < 8:
        raise ValueError(f"Hadamard order {n} is degenerate, need >= 8")
    M = H.normalized().matrix
    classes = [[np.flatnonzero(row == 1), np.flatnonzero(row == -1)] for row in M[1:]]
    return ResolvableDesign.from_classes(n, classes, 2, n // 4, name=f"Hadamard({n})")


@dataclass(frozen=True)
class AffineReport:
    ok: bool
    q: int | None = None
    r: int | None = None
    kappa: int | None = None
    pair_count: int | None = None
    violation: str = ""
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def affine_verify(D: ResolvableDesign) -> AffineReport:
    """Check the affine design axioms from the block list alone, then compare with D's declarations."""
    blocks = D.blocks
    declared_class = {}
    for j, cls in enumerate(D.classes, start=1):
        for b in cls:
            declared_class.setdefault(b, j)

    def fail(violation, **witness):
        return AffineReport(False, violation=violation, witness=witness)

    for b, block in enumerate(blocks):
        if not block or any(not 0 <= x < D.n_points for x in block) or len(set(block)) != len(block):
            return fail("malformed block", block=b)
    if len(set(blocks)) != len(blocks):
        return fail("repeated block", block=blocks.index(next(b for b in blocks if blocks.count(b) > 1)))

    N = D.incidence().astype(np.int64)
    inter = N @ N.T
    nb = len(blocks)
    off = ~np.eye(nb, dtype=bool)
    meet = sorted(set(inter[off & (inter > 0)].tolist()))
    if not meet:
        return fail("no two blocks intersect")
    if len(meet) > 1:
        r = meet[0]
        i, j = np.argwhere(off & (inter > 0) & (inter != r))[0]
        return fail("intersection number not constant", blocks=(int(i), int(j)), sizes=(r, int(inter[i, j])))
    r = meet[0]

    found = []
    seen = np.zeros(nb, dtype=bool)
    for b in range(nb):
        members = np.flatnonzero((inter[b] == 0) | ~off[b])
        cover = N[members].sum(axis=0)
        if (inter[np.ix_(members, members)][off[np.ix_(members, members)]] != 0).any() or (cover != 1).any():
            return fail(
                "parallel class does not partition the points",
                parallel_class=declared_class.get(blocks[b]), block=b,
            )
        if not seen[b]:
            seen[members] = True
            found.append(frozenset(blocks[x] for x in members))
    sizes = {len(c) for c in found}
    if len(sizes) != 1:
        return fail("parallel classes of different sizes", sizes=sorted(sizes))
    q = sizes.pop()

    pairs = N.T @ N
    poff = ~np.eye(D.n_points, dtype=bool)
    pc = sorted(set(pairs[poff].tolist()))
    if len(pc) != 1:
        x, y = np.argwhere(poff & (pairs != pc[0]))[0]
        return fail("pair count not constant", points=(int(x), int(y)), counts=(pc[0], int(pairs[x, y])))
    if D.n_points != q * q * r or any(len(b) != q * r for b in blocks):
        return fail("point or block count inconsistent with q and r", q=q, r=r)

    declared = [frozenset(c) for c in D.classes]
    if sorted(declared, key=sorted) != sorted(found, key=sorted):
        bad = next(j for j, c in enumerate(declared, start=1) if c not in found)
        return fail("declared parallel class differs from the disjointness class", parallel_class=bad)
    if (D.q, D.r) != (q, r):
        return fail("declared (q, r) differ from the observed values", declared=(D.q, D.r), observed=(q, r))
    return AffineReport(True, q=q, r=r, kappa=len(found), pair_count=pc[0])


def design_isomorphism(D1: ResolvableDesign, D2: ResolvableDesign, *, timeout: float | None = None):
    """Point map x -> phi[x] sending the blocks of D1 onto the blocks of D2, or None."""
    if (D1.n_points, len(D1.blocks)) != (D2.n_points, len(D2.blocks)):
        return None

    def incidence_graph(D):
        N = D.incidence()
        v, b = D.n_points, len(N)
        A = np.zeros((v + b, v + b), dtype=bool)
        A[v:, :v] = N
        A[:v, v:] = N.T
        return A, np.r_[np.zeros(v, dtype=np.int64), np.ones(b, dtype=np.int64)]

    A1, c1 = incidence_graph(D1)
    A2, c2 = incidence_graph(D2)
    res = iso_check(A1, A2, colours_g=c1, colours_h=c2, timeout=timeout, bound=max(len(A1), 500))
    if res.status != "isomorphic":
        return None
    return res.mapping[: D1.n_points]


def dump_design(D: ResolvableDesign) -> str:
    return json.dumps(
        {"points": D.n_points, "q": D.q, "r": D.r, "classes": [[list(b) for b in c] for c in D.classes]},
        sort_keys=True,
    )


def load_design(path) -> ResolvableDesign:
    """Read a design file: JSON with ``points``, ``q``, ``r`` and ``classes`` (lists of blocks)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    D = ResolvableDesign.from_classes(
        int(data["points"]), data["classes"], int(data["q"]), int(data["r"]), name=str(path)
    )
    report = affine_verify(D)
    if not report:
        raise ValueError(f"{path}: not an affine design ({report.violation})")
    return D
