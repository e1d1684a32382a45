"""Signatures of maximal spacings: validity, enumeration and counting.

A signature ``(m, (d1, ..., dk))`` records the number of zero-radius classes
and the support dimensions of the positive-radius classes. ``d1`` belongs to
the inner class when the centers are distinct, so only ``d2, ..., dk`` are
required to be non-increasing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator


@dataclass(frozen=True, order=True)
class Signature:
    m: int
    d: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a natural number, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if any(x < 1 for x in self.d):
            raise ValueError("positive-radius dimensions must be at least 1")
        tail = self.d[1:]
        if any(a < b for a, b in zip(tail, tail[1:])):
            raise ValueError("dimensions after the inner term must be non-increasing")

    @property
    def k(self) -> int:
        return len(self.d)

    @property
    def classes(self) -> int:
        return self.m + len(self.d)

    @property
    def total(self) -> int:
        """The signature's sum ``m + sum(d)``."""
        return self.m + sum(self.d)

    def __str__(self) -> str:
        return f"{self.m};({','.join(str(x) for x in self.d)})"

    def to_json(self) -> dict:
        return {"m": self.m, "d": list(self.d)}

    @classmethod
    def from_json(cls, obj: dict) -> "Signature":
        return cls(int(obj["m"]), tuple(int(x) for x in obj["d"]))


_TEXT = re.compile(r"^\s*\(?\s*(\d+)\s*[;,]\s*\(\s*([\d\s,]*?)\s*,?\s*\)\s*\)?\s*$")


def parse_signature(text: str) -> Signature:
    """Parse ``"m;(d1,d2,...)"``; the tuple form ``"(m,(d1,...))"`` is also accepted."""
    match = _TEXT.match(text)
    if not match:
        raise ValueError(f"cannot parse signature {text!r}")
    m = int(match.group(1))
    body = match.group(2).strip()
    d = tuple(int(x) for x in body.split(",") if x.strip()) if body else ()
    return Signature(m, d)


@dataclass(frozen=True)
class SignatureClassification:
    """Where a signature is valid: ``(I, n)`` in each family, or ``None``."""

    in_S_eq: tuple[int, int] | None
    in_S_neq: tuple[int, int] | None


def classify(s: Signature) -> SignatureClassification:
    I = s.classes
    eq = None
    descending = all(a >= b for a, b in zip(s.d, s.d[1:]))
    if I >= 1 and descending:
        if (I > 2 and s.m == 0) or (I <= 2 and s.m <= 1):
            eq = (I, sum(s.d))
    neq = None
    if I > 2 and s.k >= 1:
        neq = (I, s.m + s.k - 2 + sum(s.d))
    return SignatureClassification(eq, neq)


def partitions(N: int) -> list[tuple[int, ...]]:
    """All partitions of ``N`` as descending tuples, in reverse-lexicographic order."""
    if N < 0:
        raise ValueError("N must be a natural number")
    return list(_partitions(N, N))


def _partitions(N: int, largest: int) -> Iterator[tuple[int, ...]]:
    if N == 0:
        yield ()
        return
    for first in range(min(N, largest), 0, -1):
        for rest in _partitions(N - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partition_table(n: int) -> tuple[int, ...]:
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return tuple(table)


def partition_count(n: int) -> int:
    """The partition function p(n), by dynamic programming over part sizes."""
    if n < 0:
        raise ValueError("n must be a natural number")
    return _partition_table(n)[n]


def enumerate_eq(N: int) -> list[Signature]:
    """Signatures with sum ``N`` valid for coincident centers."""
    if N < 1:
        raise ValueError("N must be at least 1")
    out = [Signature(1, ()) if N == 1 else Signature(1, (N - 1,))]
    out.extend(Signature(0, p) for p in partitions(N))
    return out


def enumerate_neq(N: int) -> list[Signature]:
    """Signatures with sum ``N`` valid for distinct centers.

    The inner term runs over every value independently of the remaining
    partition, so pairs such as ``(1,(2,1))`` and ``(1,(1,2))`` both appear.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    out = []
    for m in range(N):
        for d1 in range(1, N - m + 1):
            for p in partitions(N - m - d1):
                if m + len(p) >= 2:
                    out.append(Signature(m, (d1,) + p))
    return out


@dataclass(frozen=True)
class MaximalCount:
    eq: int
    neq: int
    total: int

    def __str__(self) -> str:
        return f"eq={self.eq} neq={self.neq} total={self.total}"


def count_maximal(n: int) -> MaximalCount:
    """Number of isometry classes of maximal spacings in R^n, split by center flavor.

    For ``n = 0`` the coincident count is 1: the only candidate besides the
    single point would be the empty signature ``(0, ())``, which has no
    classes at all.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    p = _partition_table(n)
    eq = 1 + p[n] if n >= 1 else 1
    neq = sum(p[i] for i in range(1, n))
    total = sum(p[i] for i in range(n + 1))
    assert eq + neq == total
    return MaximalCount(eq, neq, total)


def signatures_in_dimension(n: int) -> tuple[list[Signature], list[Signature]]:
    """Enumerated signatures whose placement lands in ambient dimension ``n``."""
    eq: list[Signature] = []
    neq: list[Signature] = []
    for N in range(1, n + 2):
        for s in enumerate_eq(N):
            placement = classify(s).in_S_eq
            if placement and placement[1] == n:
                eq.append(s)
        for s in enumerate_neq(N):
            placement = classify(s).in_S_neq
            if placement and placement[1] == n:
                neq.append(s)
    return eq, neq
