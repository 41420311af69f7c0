"""Exact arithmetic for reduced fractions with power denominators.

The central object is the family of sets

    S(Q, k) = { a / q**k : gcd(a, q) = 1, 1 <= a < q**k, Q < q <= 2Q },

i.e. all reduced fractions in (0, 1) whose denominator is the k-th power of
a base drawn from the dyadic window (Q, 2Q].  Everything downstream (spacing
statistics, sieve experiments) consumes these sets, so enumeration is
columnar and exact: numerators and denominator bases are stored as integer
arrays sorted ascending by value, where the sort order is certified by exact
cross-multiplication, never by floating point alone.

Distances are measured on the torus R/Z: ``torus_distance`` returns the
exact reduced fraction min(d, 1-d) for d = (x - y) mod 1, and
``compare_distance_to_threshold`` decides the strict comparison
``dist < 1/(2N)`` purely in integer arithmetic.

All cross-multiplications are budgeted to 128 bits: any q**k at or above
2**64 is rejected with OverflowError up front (the product of two such
denominators is what the comparisons actually form).  Python integers would
not overflow, but the explicit budget keeps failures loud and keeps the
int64 fast paths honest about when they apply.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import Iterator

import numpy as np

from .arith import coprime_residues

# q**k must stay below 2**64 so that q**k * q'**k fits the 128-bit budget.
MAX_DENOMINATOR_BITS = 64

# int64 vector paths need every comparison product below 2**63; we keep a
# safety bit and require (2Q)**(2k) < 2**62 before using int64 storage.
_INT64_PRODUCT_BITS = 62

_CACHE_MAGIC = b"PWFRSET1"
_CACHE_HEADER = struct.Struct("<QQQ")


def _check_denominator(q: int, k: int) -> int:
    """Return q**k, raising OverflowError when it busts the 128-bit budget."""
    qk = q ** k
    if qk.bit_length() > MAX_DENOMINATOR_BITS:
        raise OverflowError(
            f"q**k = {qk} (q={q}, k={k}) exceeds the exact-integer width; "
            f"cross products require q**k < 2**{MAX_DENOMINATOR_BITS}"
        )
    return qk


@dataclass(frozen=True)
class PowerFraction:
    """A reduced fraction a / q**k with 1 <= a < q**k and gcd(a, q) = 1."""

    a: int
    q: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"exponent k must be >= 2, got {self.k}")
        if self.q < 1:
            raise ValueError(f"base q must be >= 1, got {self.q}")
        qk = self.q ** self.k
        if not 1 <= self.a < qk:
            raise ValueError(f"numerator {self.a} outside [1, {qk})")
        if gcd(self.a, self.q) != 1:
            raise ValueError(f"gcd({self.a}, {self.q}) != 1")

    @property
    def denominator(self) -> int:
        return self.q ** self.k

    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.denominator)

    def __float__(self) -> float:
        return self.a / self.denominator

    def __lt__(self, other: "PowerFraction") -> bool:
        return self.a * other.denominator < other.a * self.denominator

    def __str__(self) -> str:
        return f"{self.a}/{self.q}^{self.k}"


@dataclass(frozen=True)
class TorusDistance:
    """Exact distance ||x - y|| on R/Z as a reduced fraction in [0, 1/2]."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den < 1:
            raise ValueError("denominator must be positive")
        if not 0 <= 2 * self.num <= self.den:
            raise ValueError(f"{self.num}/{self.den} outside [0, 1/2]")
        if gcd(self.num, self.den) != 1 and self.num != 0:
            raise ValueError(f"{self.num}/{self.den} is not reduced")

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den


def torus_distance(x: PowerFraction, y: PowerFraction) -> TorusDistance:
    """Exact ||x - y||, the distance of x - y to its nearest integer.

    Works by integer cross-multiplication over the common denominator
    q**k * q'**k and folds the residue into [0, 1/2]; no floating point is
    involved at any step.
    """
    dx = _check_denominator(x.q, x.k)
    dy = _check_denominator(y.q, y.k)
    m = dx * dy
    r = (x.a * dy - y.a * dx) % m
    num = min(r, m - r)
    if num == 0:
        return TorusDistance(0, 1)
    g = gcd(num, m)
    return TorusDistance(num // g, m // g)


def compare_distance_to_threshold(d: TorusDistance, N: int) -> bool:
    """Strict test ``d < 1/(2N)`` evaluated as 2*N*num < den in integers."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return 2 * N * d.num < d.den


class FractionSet:
    """An enumerated S(Q, k), sorted ascending by value.

    Storage is columnar: ``numerators`` and ``bases`` are parallel integer
    arrays (int64 when the comparison products provably fit, otherwise
    Python-integer object arrays).  Individual elements materialize as
    :class:`PowerFraction` on demand; ``elements`` builds the whole list,
    which is only sensible for small sets.
    """

    def __init__(self, Q: int, k: int, numerators: np.ndarray, bases: np.ndarray):
        self.Q = int(Q)
        self.k = int(k)
        self._a = numerators
        self._q = bases

    def __len__(self) -> int:
        return len(self._a)

    def __getitem__(self, i: int) -> PowerFraction:
        return PowerFraction(int(self._a[i]), int(self._q[i]), self.k)

    def __iter__(self) -> Iterator[PowerFraction]:
        for i in range(len(self)):
            yield self[i]

    @property
    def numerators(self) -> np.ndarray:
        return self._a

    @property
    def bases(self) -> np.ndarray:
        return self._q

    def denominators(self) -> np.ndarray:
        if self._q.dtype == object:
            return np.array([int(q) ** self.k for q in self._q], dtype=object)
        return self._q.astype(np.int64) ** self.k

    @property
    def elements(self) -> list[PowerFraction]:
        return list(self)

    def values_float(self) -> np.ndarray:
        """Element values as float64; for ordering hints and plots only."""
        a = self._a.astype(np.float64)
        d = self.denominators().astype(np.float64)
        return a / d

    # -- serialization ----------------------------------------------------

    def write_csv(self, path) -> None:
        """CSV columns a, q, k, value; value is an 18-digit decimal string."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write("a,q,k,value\n")
            with localcontext() as ctx:
                ctx.prec = 40
                quant = Decimal(1).scaleb(-18)
                for i in range(len(self)):
                    a = int(self._a[i])
                    q = int(self._q[i])
                    val = (Decimal(a) / Decimal(q) ** self.k).quantize(quant)
                    fh.write(f"{a},{q},{self.k},{val}\n")

    def write_cache(self, path) -> None:
        """Compact binary cache: header (Q, k, count) then (a, q) u64 pairs."""
        with open(path, "wb") as fh:
            fh.write(_CACHE_MAGIC)
            fh.write(_CACHE_HEADER.pack(self.Q, self.k, len(self)))
            rec = np.empty((len(self), 2), dtype="<u8")
            rec[:, 0] = self._a.astype(np.uint64)
            rec[:, 1] = self._q.astype(np.uint64)
            rec.tofile(fh)

    @classmethod
    def read_cache(cls, path) -> "FractionSet":
        with open(path, "rb") as fh:
            magic = fh.read(len(_CACHE_MAGIC))
            if magic != _CACHE_MAGIC:
                raise ValueError(f"{path}: not a fraction-set cache")
            Q, k, count = _CACHE_HEADER.unpack(fh.read(_CACHE_HEADER.size))
            rec = np.fromfile(fh, dtype="<u8", count=2 * count)
        if rec.size != 2 * count:
            raise ValueError(f"{path}: truncated cache (expected {count} records)")
        rec = rec.reshape(count, 2)
        a = rec[:, 0].astype(np.int64)
        q = rec[:, 1].astype(np.int64)
        if not _int64_safe(int(Q), int(k)):
            a = a.astype(object)
            q = q.astype(object)
        return cls(int(Q), int(k), a, q)


def _int64_safe(Q: int, k: int) -> bool:
    return ((2 * Q) ** (2 * k)).bit_length() <= _INT64_PRODUCT_BITS


def enumerate_set(Q: int, k: int) -> FractionSet:
    """Enumerate S(Q, k): reduced a/q**k with Q < q <= 2Q, sorted by value.

    The cardinality is sum over the window of q**(k-1) * phi(q): numerators
    are exactly a = m*q + r with 0 <= m < q**(k-1) and r a reduced residue,
    since gcd(a, q) depends on a mod q alone.

    Sorting uses a float64 argsort as a hint and then certifies strict
    increase of adjacent pairs by exact cross-multiplication; if the floats
    cannot resolve the order (possible only near the width budget) it falls
    back to a full exact sort.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    _check_denominator(2 * Q, k)  # loud failure naming the largest q**k

    use_i64 = _int64_safe(Q, k)
    dtype = np.int64 if use_i64 else object
    a_parts = []
    q_parts = []
    for q in range(Q + 1, 2 * Q + 1):
        res = coprime_residues(q)
        rows = q ** (k - 1)
        if use_i64:
            a = (np.arange(rows, dtype=np.int64)[:, None] * q + res[None, :]).ravel()
        else:
            a = (
                np.arange(rows, dtype=object)[:, None] * q
                + res.astype(object)[None, :]
            ).ravel()
        a_parts.append(a)
        q_parts.append(np.full(len(a), q, dtype=dtype))
    nums = np.concatenate(a_parts) if a_parts else np.empty(0, dtype=dtype)
    bases = np.concatenate(q_parts) if q_parts else np.empty(0, dtype=dtype)

    dens = bases.astype(np.float64) ** k
    order = np.argsort(nums.astype(np.float64) / dens, kind="stable")
    nums = nums[order]
    bases = bases[order]

    if not _strictly_increasing(nums, bases, k):
        # float hint failed; do it the slow exact way
        keys = [Fraction(int(a), int(q) ** k) for a, q in zip(nums, bases)]
        order = sorted(range(len(keys)), key=keys.__getitem__)
        nums = nums[order]
        bases = bases[order]
        if not _strictly_increasing(nums, bases, k):
            raise AssertionError("duplicate values in fraction set")  # impossible
    return FractionSet(Q, k, nums, bases)


def _strictly_increasing(nums: np.ndarray, bases: np.ndarray, k: int) -> bool:
    if len(nums) < 2:
        return True
    if bases.dtype == object:
        d = np.array([int(q) ** k for q in bases], dtype=object)
    else:
        d = bases ** k
    lhs = nums[:-1] * d[1:]
    rhs = nums[1:] * d[:-1]
    return bool(np.all(lhs < rhs))


def expected_cardinality(Q: int, k: int) -> int:
    """The closed-form count: sum of q**(k-1) * phi(q) over Q < q <= 2Q."""
    total = 0
    for q in range(Q + 1, 2 * Q + 1):
        total += q ** (k - 1) * len(coprime_residues(q))
    return total
