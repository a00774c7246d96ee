"""Exact arithmetic over GF(p^k) and the two local-ring families Z/p^2 and GF(q)[x]/(x^2).

Field and ring elements are plain integer indices; every operation is a table
lookup or a small vectorised digit computation, so the same (p, k) always
produces the same element order.  Numpy arrays returned by these objects are
read-only.
"""

from __future__ import annotations

import enum
import itertools
from functools import cached_property, lru_cache

import numpy as np

from .config import DEFAULT_BOUNDS

__all__ = [
    "FiniteField",
    "LocalRing",
    "RingKind",
    "ProjectiveClasses",
    "field_make",
    "ring_make",
    "projective_classes",
    "projective_points",
    "is_prime",
    "prime_power",
    "ideals",
]

# largest order for which full q x q operation tables are materialised
_FULL_TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q == p**k, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    return (p, k) if rest == 1 else None


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _poly_mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    # coefficient lists are little-endian; modulus is monic of degree k
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for t in range(k + 1):
                prod[deg - k + t] = (prod[deg - k + t] - c * modulus[t]) % p
    return prod[:k]


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    # a polynomial of degree k is irreducible iff it has no monic factor of degree <= k // 2
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            divisor = list(low) + [1]
            rem = list(poly)
            for top in range(k, deg - 1, -1):
                c = rem[top]
                if c:
                    for t in range(deg + 1):
                        rem[top - deg + t] = (rem[top - deg + t] - c * divisor[t]) % p
            if not any(rem[:deg]):
                return False
    return True


@lru_cache(maxsize=None)
def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree k (little-endian)."""
    if k == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=k):
        poly = tuple(reversed(high_first)) + (1,)
        if poly[0] and _is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


class FiniteField:
    """GF(p^k) with elements indexed 0..q-1.

    Element ``a`` is the polynomial whose base-p digits (constant term first)
    spell ``a``; 0 and 1 are the additive and multiplicative identities.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        q = self.q
        codes = np.arange(q)
        self.digits = _frozen(np.stack([(codes // p**i) % p for i in range(k)], axis=1))
        self._weights = p ** np.arange(k)

        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        for g in range(2, q) if q > 2 else [1]:
            seen = self._powers(g)
            if len(seen) == q - 1:
                exp[: q - 1] = seen
                exp[q - 1 :] = seen
                log[seen] = np.arange(q - 1)
                self.generator = g
                break
        else:
            self.generator = 1
            exp[:] = 1
            log[1] = 0
        self.exp = _frozen(exp)
        self.log = _frozen(log)

    def _powers(self, g: int) -> list[int]:
        gd = [int(c) for c in self.digits[g]]
        cur = [1] + [0] * (self.k - 1)
        out = []
        for _ in range(self.q - 1):
            code = sum(c * self.p**i for i, c in enumerate(cur))
            if out and code == 1:
                break
            out.append(code)
            cur = _poly_mulmod(cur, gd, self.modulus, self.p)
        return out

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, k={self.k})"

    def __len__(self) -> int:
        return self.q

    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a) + b) % self.p
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._weights

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return ((-self.digits[a]) % self.p) @ self._weights

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.q > _FULL_TABLE_LIMIT:
            raise MemoryError(f"full tables are only built for q <= {_FULL_TABLE_LIMIT}")
        e = np.arange(self.q)
        return _frozen(np.asarray(self.add(e[:, None], e[None, :]), dtype=np.int64))

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.q > _FULL_TABLE_LIMIT:
            raise MemoryError(f"full tables are only built for q <= {_FULL_TABLE_LIMIT}")
        e = np.arange(self.q)
        return _frozen(np.asarray(self.mul(e[:, None], e[None, :]), dtype=np.int64))

    @cached_property
    def neg_table(self) -> np.ndarray:
        return _frozen(np.asarray(self.neg(np.arange(self.q)), dtype=np.int64))


@lru_cache(maxsize=None)
def _field_cached(p: int, k: int) -> FiniteField:
    return FiniteField(p, k, _irreducible(p, k))


def field_make(p: int, k: int = 1, *, bound: int = DEFAULT_BOUNDS.field_order) -> FiniteField:
    """Build GF(p^k); equal arguments always return the same tables."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p**k > bound:
        raise ValueError(f"field order {p}**{k} exceeds bound {bound}")
    return _field_cached(p, k)


def field_of_order(q: int, **kw) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    return field_make(*pk, **kw)


class RingKind(str, enum.Enum):
    INTEGERS_MOD_P_SQUARED = "z_p2"
    POLYNOMIALS_MOD_X_SQUARED = "fq_x2"


class LocalRing:
    """Z/p^2 or GF(q)[x]/(x^2), both of order q^2 with maximal ideal J of order q.

    Z/p^2 elements are the integers 0..p^2-1.  An element a + b*x of
    GF(q)[x]/(x^2) is stored as the index ``a + q*b``, so the residue field
    part is ``index % q`` in both kinds.
    """

    def __init__(self, kind: RingKind, q: int):
        self.kind = RingKind(kind)
        self.q = q
        self.size = q * q
        s = self.size
        if self.kind is RingKind.INTEGERS_MOD_P_SQUARED:
            e = np.arange(s)
            add = (e[:, None] + e[None, :]) % s
            mul = (e[:, None] * e[None, :]) % s
            neg = (-e) % s
            in_ideal = e % q == 0
            self.field = field_make(q, 1)
        else:
            F = field_of_order(q)
            self.field = F
            e = np.arange(s)
            a, b = e % q, e // q
            fa, fm = F.add_table, F.mul_table
            add = fa[a[:, None], a[None, :]] + q * fa[b[:, None], b[None, :]]
            mul = fm[a[:, None], a[None, :]] + q * fa[
                fm[a[:, None], b[None, :]], fm[b[:, None], a[None, :]]
            ]
            neg = F.neg_table[a] + q * F.neg_table[b]
            in_ideal = a == 0
        self.add_table = _frozen(np.asarray(add, dtype=np.int64))
        self.mul_table = _frozen(np.asarray(mul, dtype=np.int64))
        self.neg_table = _frozen(np.asarray(neg, dtype=np.int64))
        self.in_ideal = _frozen(np.asarray(in_ideal))
        self.is_unit = _frozen(~self.in_ideal)
        self.units = _frozen(np.flatnonzero(self.is_unit))
        self.ideal = _frozen(np.flatnonzero(self.in_ideal))

    def __repr__(self) -> str:
        return f"LocalRing({self.kind.value!r}, q={self.q})"

    def as_pair(self, x: int) -> tuple[int, int]:
        """(a, b) with x = a + b*x for the polynomial kind, (x mod p, x div p) for Z/p^2."""
        return int(x) % self.q, int(x) // self.q

    def residue(self, x):
        """Image in the residue field K/J."""
        return np.asarray(x) % self.q


def ring_make(kind: RingKind | str, q: int) -> LocalRing:
    kind = RingKind(kind)
    if kind is RingKind.INTEGERS_MOD_P_SQUARED and not is_prime(q):
        raise ValueError(f"Z/p^2 needs a prime p, got {q}")
    if kind is RingKind.POLYNOMIALS_MOD_X_SQUARED and prime_power(q) is None:
        raise ValueError(f"GF(q)[x]/(x^2) needs a prime power q, got {q}")
    return _ring_cached(kind, q)


@lru_cache(maxsize=None)
def _ring_cached(kind: RingKind, q: int) -> LocalRing:
    return LocalRing(kind, q)


def ideals(ring: LocalRing) -> set[frozenset[int]]:
    """Every ideal of ``ring``, found as all sums of principal ideals."""
    s = ring.size
    principal = {frozenset(int(v) for v in ring.mul_table[a]) for a in range(s)}
    found = set(principal)
    frontier = set(principal)
    while frontier:
        new = set()
        for I in frontier:
            for P in principal:
                total = frozenset(int(ring.add_table[x, y]) for x in I for y in P)
                if total not in found:
                    new.add(total)
        found |= new
        frontier = new
    return found


class ProjectiveClasses:
    """Unit-scaling classes of vectors in K^dim having at least one unit coordinate.

    Vectors are coded as base-|K| integers with the first coordinate most
    significant, so code order is lexicographic order.  Each class is
    represented by its lexicographically least member and classes are numbered
    in representative order.
    """

    def __init__(self, ring: LocalRing, e: int, class_of: np.ndarray, reps: np.ndarray):
        self.ring = ring
        self.e = e
        self.dim = 2 * e
        self.class_of = _frozen(class_of)
        self.reps = _frozen(reps)

    def __len__(self) -> int:
        return len(self.reps)

    def encode(self, vec) -> int:
        code = 0
        for c in vec:
            code = code * self.ring.size + int(c)
        return code

    def lookup(self, vec) -> int:
        cid = int(self.class_of[self.encode(vec)])
        if cid < 0:
            raise KeyError(f"{tuple(vec)} has no unit coordinate")
        return cid


def expected_class_count(q: int, e: int) -> int:
    return q ** (2 * e - 1) * (q ** (2 * e) - 1) // (q - 1)


def projective_classes(
    ring: LocalRing, e: int, *, bound: int = DEFAULT_BOUNDS.class_count
) -> ProjectiveClasses:
    if e < 1:
        raise ValueError("need 2e >= 2")
    if expected_class_count(ring.q, e) > bound:
        raise ValueError(f"class count {expected_class_count(ring.q, e)} exceeds bound {bound}")
    return _classes_cached(ring, e)


@lru_cache(maxsize=None)
def _classes_cached(ring: LocalRing, e: int) -> ProjectiveClasses:
    s, dim = ring.size, 2 * e
    codes = np.arange(s**dim, dtype=np.int64)
    weights = s ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    vecs = (codes[:, None] // weights) % s
    valid = ring.is_unit[vecs].any(axis=1)
    best = codes.copy()
    for u in ring.units:
        best = np.minimum(best, ring.mul_table[u][vecs] @ weights)
    rep_codes = np.unique(best[valid])
    class_of = np.full(len(codes), -1, dtype=np.int64)
    class_of[valid] = np.searchsorted(rep_codes, best[valid])
    return ProjectiveClasses(ring, e, class_of, vecs[rep_codes])


def projective_points(F: FiniteField, n: int, *, bound: int = DEFAULT_BOUNDS.projective_points) -> np.ndarray:
    """Points of PG(n-1, q) as normalised vectors (first nonzero entry 1), lexicographic order."""
    q = F.q
    count = (q**n - 1) // (q - 1)
    if count > bound:
        raise ValueError(f"{count} projective points exceed bound {bound}")
    out = []
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return np.array(sorted(out), dtype=np.int64)
