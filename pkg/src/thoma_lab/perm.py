"""Finitary permutations of the positive integers.

A permutation is stored as a sparse mapping that omits fixed points, so two
permutations are equal exactly when their stored mappings are equal.
Composition follows ``(s * t)(i) == s(t(i))``: the right factor acts first.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Perm",
    "CycleType",
    "IDENTITY",
    "parse_cycles",
    "compose",
    "inverse",
    "support",
    "cycle_decomposition",
    "cycle_type",
    "parity",
    "conjugate",
    "conjugator",
    "transposition",
    "cycle",
]


class Perm:
    """A bijection of the positive integers with finite support."""

    __slots__ = ("_map", "_key", "_hash")

    def __init__(self, mapping: Mapping[int, int] | None = None):
        m: dict[int, int] = {}
        if mapping:
            for i, j in mapping.items():
                if not isinstance(i, int) or not isinstance(j, int) or i < 1 or j < 1:
                    raise ValueError(f"points must be positive integers, got {i}->{j}")
                if i != j:
                    m[i] = j
        if set(m) != set(m.values()):
            raise ValueError("mapping is not a bijection of its support")
        self._map = m
        self._key = tuple(sorted(m.items()))
        self._hash = hash(self._key)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]]) -> "Perm":
        """Left-to-right product of the given (not necessarily disjoint) cycles."""
        result = IDENTITY
        for c in cycles:
            result = result * cycle(*c)
        return result

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Perm":
        """Build from one-line notation ``images[i-1] == s(i)``."""
        return cls({i: j for i, j in enumerate(images, start=1)})

    def __call__(self, i: int) -> int:
        return self._map.get(i, i)

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        return compose(self, other)

    def __invert__(self) -> "Perm":
        return inverse(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Perm") -> bool:
        return self.sort_key() < other.sort_key()

    def __bool__(self) -> bool:
        return bool(self._map)

    def __repr__(self) -> str:
        return f"Perm({str(self)!r})"

    def __str__(self) -> str:
        cycles = cycle_decomposition(self)
        if not cycles:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._key)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self._map)

    def sort_key(self) -> tuple:
        # identity first, then by canonical cycle listing
        return (len(self._map) > 0, tuple(cycle_decomposition(self)))

    def max_point(self) -> int:
        return max(self._map, default=0)

    def images(self, n: int) -> tuple[int, ...]:
        """One-line notation on ``[n]``; raises if the support leaves ``[n]``."""
        if self.max_point() > n:
            raise ValueError(f"{self} does not lie in S_{n}")
        return tuple(self(i) for i in range(1, n + 1))


IDENTITY = Perm()


class CycleType:
    """Multiplicities ``m_k`` of the k-cycles (k >= 2) of a permutation."""

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[int, int] | None = None):
        items = []
        for k, m in (counts or {}).items():
            if k < 2:
                raise ValueError(f"cycle length must be >= 2, got {k}")
            if m < 0:
                raise ValueError(f"multiplicity must be >= 0, got {m}")
            if m:
                items.append((k, m))
        self._counts = tuple(sorted(items))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleType":
        return cls(Counter(k for k in lengths if k != 1))

    def __getitem__(self, k: int) -> int:
        return dict(self._counts).get(k, 0)

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._counts

    def as_dict(self) -> dict[int, int]:
        return dict(self._counts)

    def lengths(self) -> list[int]:
        """Cycle lengths in weakly decreasing order."""
        return sorted((k for k, m in self._counts for _ in range(m)), reverse=True)

    def moved(self) -> int:
        return sum(k * m for k, m in self._counts)

    def sign(self) -> int:
        return -1 if sum((k - 1) * m for k, m in self._counts) % 2 else 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycleType):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self == CycleType(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __repr__(self) -> str:
        return f"CycleType({self.as_dict()})"


def parse_cycles(text: str) -> Perm:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"``, ``"(1,2)"``, ``"e"`` or ``"()"``.

    Cycles are multiplied left to right, so overlapping cycles are allowed.
    """
    s = text.strip()
    if s == "e" or re.fullmatch(r"\(\s*\)", s):
        return IDENTITY
    if not s:
        raise ValueError("empty permutation string")
    cycles: list[list[int]] = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        if s[pos] != "(":
            raise ValueError(f"expected '(' at position {pos} in {text!r}")
        close = s.find(")", pos)
        if close < 0:
            raise ValueError(f"unclosed cycle in {text!r}")
        body = s[pos + 1 : close]
        if "(" in body:
            raise ValueError(f"nested parenthesis in {text!r}")
        tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        points = []
        for t in tokens:
            if not re.fullmatch(r"-?\d+", t):
                raise ValueError(f"bad token {t!r} in {text!r}")
            v = int(t)
            if v < 1:
                raise ValueError(f"points must be positive integers, got {v}")
            points.append(v)
        if len(points) < 2:
            raise ValueError(f"a cycle needs at least two points: ({body})")
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point in cycle ({body})")
        cycles.append(points)
        pos = close + 1
    return Perm.from_cycles(cycles)


def cycle(*points: int) -> Perm:
    """The cycle sending ``points[i]`` to ``points[i+1 mod k]``."""
    if len(set(points)) != len(points):
        raise ValueError(f"repeated point in cycle {points}")
    k = len(points)
    return Perm({points[i]: points[(i + 1) % k] for i in range(k)})


def transposition(i: int, j: int) -> Perm:
    return cycle(i, j)


def compose(s: Perm, t: Perm) -> Perm:
    """``i -> s(t(i))``."""
    out = {}
    for i in s._map.keys() | t._map.keys():
        j = s(t(i))
        if j != i:
            out[i] = j
    return Perm(out)


def inverse(s: Perm) -> Perm:
    return Perm({j: i for i, j in s._map.items()})


def support(s: Perm) -> frozenset[int]:
    return frozenset(s._map)


def cycle_decomposition(s: Perm) -> list[tuple[int, ...]]:
    """Disjoint cycles, each rotated to start at its least point, ordered by that point."""
    seen: set[int] = set()
    cycles = []
    for start in sorted(s._map):
        if start in seen:
            continue
        c = [start]
        seen.add(start)
        j = s(start)
        while j != start:
            c.append(j)
            seen.add(j)
            j = s(j)
        cycles.append(tuple(c))
    return cycles


def cycle_type(s: Perm) -> CycleType:
    return CycleType.from_lengths(len(c) for c in cycle_decomposition(s))


def parity(s: Perm) -> int:
    return cycle_type(s).sign()


def conjugate(t: Perm, s: Perm) -> Perm:
    """``t s t^-1``, i.e. ``s`` with every point relabelled by ``t``."""
    return Perm({t(i): t(j) for i, j in s._map.items()})


def conjugator(src: Iterable[int], dst: Iterable[int]) -> Perm:
    """A permutation with ``s(src[i]) == dst[i]`` and minimal support.

    Points of ``dst`` that are not in ``src`` still need preimages; they are
    paired in ascending order with the points of ``src`` that are not in ``dst``.
    """
    src, dst = tuple(src), tuple(dst)
    if len(src) != len(dst):
        raise ValueError("src and dst must have equal length")
    if len(set(src)) != len(src) or len(set(dst)) != len(dst):
        raise ValueError("src and dst must have distinct entries")
    if any(p < 1 for p in src + dst):
        raise ValueError("points must be positive integers")
    m = dict(zip(src, dst))
    need_image = sorted(set(dst) - set(src))
    free_image = sorted(set(src) - set(dst))
    m.update(zip(need_image, free_image))
    return Perm(m)
