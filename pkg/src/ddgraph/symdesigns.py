"""Symmetric incidence matrices of symmetric 2-(m, kappa, lambda) designs and their labelings."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import field_of_order, projective_points
from .config import DEFAULT_BOUNDS

__all__ = [
    "SymmetricDesignMatrix",
    "LabeledMatrix",
    "SymReport",
    "Trivial",
    "symdesign_fano",
    "symdesign_trivial",
    "symdesign_null_polarity",
    "symdesign_difference_set",
    "symdesign_verify",
    "symdesign_load",
    "label_assign",
    "symmetric_labeling",
]

FANO = (
    "0111000",
    "1100100",
    "1010010",
    "1001001",
    "0100011",
    "0010101",
    "0001110",
)


@dataclass(frozen=True)
class SymReport:
    ok: bool
    m: int | None = None
    kappa: int | None = None
    lam: int | None = None
    violation: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.m, self.kappa, self.lam)


def symdesign_verify(A) -> SymReport:
    """Symmetry, constant row sum and constant pairwise row inner product."""
    A = np.asarray(A, dtype=np.int64)
    m = len(A)
    if A.shape != (m, m) or m < 2:
        return SymReport(False, violation="not a square matrix of order >= 2")
    if not np.isin(A, (0, 1)).all():
        return SymReport(False, violation="entries are not 0/1")
    if not np.array_equal(A, A.T):
        i, j = np.argwhere(A != A.T)[0]
        return SymReport(False, violation="not symmetric", witness=(int(i), int(j)))
    rows = A.sum(axis=1)
    if (rows != rows[0]).any():
        return SymReport(False, violation="row sums differ", witness=(0, int(np.argmax(rows != rows[0]))))
    G = A @ A.T
    off = ~np.eye(m, dtype=bool)
    lam = int(G[0, 1])
    if (G[off] != lam).any():
        i, j = np.argwhere(off & (G != lam))[0]
        return SymReport(False, violation="row inner products differ", witness=(int(i), int(j)))
    kappa = int(rows[0])
    if lam == 0 or kappa * (kappa - 1) != (m - 1) * lam:
        return SymReport(False, violation="kappa(kappa-1) != (m-1) lambda with lambda >= 1", witness=(kappa, lam))
    return SymReport(True, m=m, kappa=kappa, lam=lam)


@dataclass(frozen=True)
class SymmetricDesignMatrix:
    A: np.ndarray
    m: int
    kappa: int
    lam: int
    name: str = ""

    @classmethod
    def checked(cls, A, name: str = "") -> "SymmetricDesignMatrix":
        A = np.array(A, dtype=np.int64)
        report = symdesign_verify(A)
        if not report:
            raise ValueError(f"{name or 'matrix'}: {report.violation} {report.witness}")
        A.setflags(write=False)
        return cls(A, report.m, report.kappa, report.lam, name)


def symdesign_fano() -> SymmetricDesignMatrix:
    return SymmetricDesignMatrix.checked([[int(c) for c in row] for row in FANO], name="fano")


class Trivial(str, enum.Enum):
    ALL_ONES = "all_ones"
    ALL_ONES_MINUS_IDENTITY = "j_minus_i"


def symdesign_trivial(variant: Trivial | str, m: int) -> SymmetricDesignMatrix:
    variant = Trivial(variant)
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    A = np.ones((m, m), dtype=np.int64)
    if variant is Trivial.ALL_ONES_MINUS_IDENTITY:
        if m < 3:
            raise ValueError("J - I needs m >= 3 for lambda >= 1")
        A -= np.eye(m, dtype=np.int64)
    return SymmetricDesignMatrix.checked(A, name=f"{variant.value}({m})")


def symdesign_null_polarity(e: int, q: int, *, bound: int = DEFAULT_BOUNDS.projective_points) -> SymmetricDesignMatrix:
    """Points of PG(2e-1, q), joined when the standard alternating form vanishes on them."""
    if e < 1:
        raise ValueError("need e >= 1")
    F = field_of_order(q)
    pts = projective_points(F, 2 * e, bound=bound)
    mul, add, neg = F.mul_table, F.add_table, F.neg_table
    form = np.zeros((len(pts), len(pts)), dtype=np.int64)
    for t in range(e):
        x, y = pts[:, t], pts[:, t + e]
        term = add[mul[x[:, None], y[None, :]], neg[mul[y[:, None], x[None, :]]]]
        form = add[form, term]
    return SymmetricDesignMatrix.checked((form == 0).astype(np.int64), name=f"null_polarity({e},{q})")


def symdesign_difference_set(m: int, D) -> SymmetricDesignMatrix:
    """A[i][j] = 1 iff i + j mod m lies in the difference set D."""
    D = sorted({int(d) % m for d in D})
    cover = np.zeros(m, dtype=np.int64)
    for a in D:
        for b in D:
            if a != b:
                cover[(a - b) % m] += 1
    if len(D) < 2 or (cover[1:] != cover[1]).any() or cover[1] == 0:
        raise ValueError(f"{D} is not a difference set mod {m}: coverage {cover[1:].tolist()}")
    idx = np.arange(m)
    A = np.isin((idx[:, None] + idx[None, :]) % m, D).astype(np.int64)
    return SymmetricDesignMatrix.checked(A, name=f"difference_set({m},{D})")


def symdesign_load(path) -> SymmetricDesignMatrix:
    """Rows of 0/1 characters, one row per line; blank lines and '#' comments ignored."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip().replace(" ", "")
        if line:
            rows.append([int(c) for c in line])
    return SymmetricDesignMatrix.checked(rows, name=str(path))


@dataclass(frozen=True)
class LabeledMatrix:
    """e(i, j) in {0, 1..kappa}: zero exactly where A is zero, each row a bijection onto 1..kappa."""

    L: np.ndarray
    parent: SymmetricDesignMatrix

    @property
    def m(self) -> int:
        return len(self.L)

    @property
    def kappa(self) -> int:
        return self.parent.kappa

    def __post_init__(self):
        L = np.array(self.L, dtype=np.int64)
        A = self.parent.A
        if L.shape != A.shape:
            raise ValueError(f"label matrix shape {L.shape} != {A.shape}")
        if not np.array_equal(L != 0, A != 0):
            i, j = np.argwhere((L != 0) != (A != 0))[0]
            raise ValueError(f"zero pattern differs from A at ({i}, {j})")
        want = list(range(1, self.parent.kappa + 1))
        for i, row in enumerate(L):
            if sorted(row[row != 0].tolist()) != want:
                raise ValueError(f"row {i} labels are not a bijection onto 1..{self.parent.kappa}")
        L.setflags(write=False)
        object.__setattr__(self, "L", L)

    @property
    def fully_symmetric(self) -> bool:
        return bool(np.array_equal(self.L, self.L.T))


def label_assign(A: SymmetricDesignMatrix, strategy: str = "canonical", *, seed: int = 0, L=None) -> LabeledMatrix:
    """Label the nonzero entries of each row with 1..kappa.

    ``canonical`` numbers them in increasing column order, ``seeded`` shuffles
    each row with ``numpy.random.default_rng(seed)``, ``explicit`` validates ``L``
    and ``symmetric`` searches for a labeling with e(i, j) = e(j, i).
    """
    strategy = strategy.lower()
    if strategy == "canonical":
        out = np.zeros_like(A.A)
        for i, row in enumerate(A.A):
            out[i, row != 0] = np.arange(1, A.kappa + 1)
        return LabeledMatrix(out, A)
    if strategy == "seeded":
        rng = np.random.default_rng(seed)
        out = np.zeros_like(A.A)
        for i, row in enumerate(A.A):
            out[i, row != 0] = rng.permutation(A.kappa) + 1
        return LabeledMatrix(out, A)
    if strategy == "explicit":
        if L is None:
            raise ValueError("explicit labeling needs L")
        return LabeledMatrix(np.asarray(L), A)
    if strategy == "symmetric":
        found = symmetric_labeling(A)
        if found is None:
            raise ValueError(f"no fully symmetric labeling of {A.name or 'A'} within the search limit")
        return found
    raise ValueError(f"unknown labeling strategy {strategy!r}")


def symmetric_labeling(A: SymmetricDesignMatrix, *, max_steps: int = 200_000) -> LabeledMatrix | None:
    """Backtracking proper edge colouring (loops included) with kappa colours, every vertex seeing all of them.

    Returns None when the search space is exhausted or ``max_steps`` is hit.
    """
    m, kappa = A.m, A.kappa
    edges = [(i, j) for i in range(m) for j in range(i, m) if A.A[i, j]]
    used = [set() for _ in range(m)]
    colour = {}
    steps = 0

    def place(t: int) -> bool:
        nonlocal steps
        if t == len(edges):
            return True
        steps += 1
        if steps > max_steps:
            raise StopIteration
        i, j = edges[t]
        for c in range(1, kappa + 1):
            if c in used[i] or c in used[j]:
                continue
            used[i].add(c)
            used[j].add(c)
            colour[i, j] = c
            if place(t + 1):
                return True
            used[i].discard(c)
            used[j].discard(c)
        return False

    try:
        ok = place(0)
    except StopIteration:
        return None
    if not ok:
        return None
    out = np.zeros_like(A.A)
    for (i, j), c in colour.items():
        out[i, j] = out[j, i] = c
    return LabeledMatrix(out, A)
