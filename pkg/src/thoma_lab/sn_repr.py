"""Characters of the finite symmetric groups.

Partitions, hook-length dimensions and Murnaghan-Nakayama character values,
plus a finite-n experiment comparing normalized characters of scaled Young
diagrams with the corresponding Thoma character value on a k-cycle.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .characters import ThomaParameters, thoma_factor
from .group_ring import fraction_str
from .perm import CycleType

__all__ = [
    "Partition",
    "partitions",
    "conjugate_partition",
    "hook_lengths",
    "hook_dimension",
    "mn_character",
    "normalized_character",
    "class_size",
    "z_rho",
    "cycle_type_vector",
    "to_cycle_type",
    "character_table",
    "scaled_diagram",
    "LimitRow",
    "thoma_limit_experiment",
    "limit_csv",
]


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        return conjugate_partition(self)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def conjugate_partition(lam: Sequence[int]) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for r in lam if r > j) for j in range(lam[0]))


def hook_lengths(lam: Sequence[int]) -> list[list[int]]:
    conj = conjugate_partition(lam)
    return [[lam[i] - j + conj[j] - i - 1 for j in range(lam[i])] for i in range(len(lam))]


def hook_dimension(lam: Sequence[int]) -> int:
    lam = Partition(lam)
    prod = 1
    for row in hook_lengths(lam):
        for h in row:
            prod *= h
    return math.factorial(lam.n) // prod


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1
    if rho[0] == 1:
        # only fixed points remain
        return hook_dimension(lam)
    r, rest = rho[0], rho[1:]
    l = len(lam)
    beta = [lam[i] + l - 1 - i for i in range(l)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in beta_set:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new_beta = sorted((beta_set - {b}) | {nb}, reverse=True)
        new_lam = tuple(x for x in (new_beta[i] - (l - 1 - i) for i in range(l)) if x > 0)
        total += (-1) ** height * _mn(new_lam, rest)
    return total


def mn_character(lam: Sequence[int], rho: Sequence[int]) -> int:
    """Irreducible character ``chi_lam`` on the class of cycle type ``rho``.

    ``rho`` lists every cycle including fixed points.  Border strips are
    removed for the longest cycles first; results are memoized.
    """
    lam = Partition(lam)
    rho = Partition(sorted(rho, reverse=True))
    if lam.n != rho.n:
        raise ValueError(f"|lambda| = {lam.n} but |rho| = {rho.n}")
    return _mn(tuple(lam), tuple(rho))


def normalized_character(lam: Sequence[int], rho: Sequence[int]) -> Fraction:
    return Fraction(mn_character(lam, rho), hook_dimension(lam))


def z_rho(rho: Sequence[int]) -> int:
    z = 1
    counts: dict[int, int] = {}
    for k in rho:
        counts[k] = counts.get(k, 0) + 1
    for k, m in counts.items():
        z *= k**m * math.factorial(m)
    return z


def class_size(rho: Sequence[int]) -> int:
    return math.factorial(sum(rho)) // z_rho(rho)


def cycle_type_vector(ct: CycleType, n: int) -> Partition:
    """Pad a cycle type with fixed points up to ``n``."""
    moved = ct.moved()
    if moved > n:
        raise ValueError(f"cycle type moves {moved} points, more than n = {n}")
    return Partition(ct.lengths() + [1] * (n - moved))


def to_cycle_type(rho: Sequence[int]) -> CycleType:
    return CycleType.from_lengths(rho)


def character_table(n: int) -> dict[tuple[Partition, Partition], int]:
    parts = partitions(n)
    return {(lam, rho): mn_character(lam, rho) for lam in parts for rho in parts}


def _largest_remainder(targets: Sequence[Fraction], total: int) -> list[int]:
    floors = [math.floor(t) for t in targets]
    short = total - sum(floors)
    order = sorted(range(len(targets)), key=lambda i: (-(targets[i] - floors[i]), i))
    for i in order[:short]:
        floors[i] += 1
    return floors


def scaled_diagram(params: ThomaParameters, n: int) -> Partition:
    """Young diagram of size ``n`` whose rows follow ``alpha`` and columns ``beta``.

    Row ``i`` gets about ``a_i n`` boxes, column ``j`` about ``b_j n`` boxes and
    the leftover ``gamma n`` boxes fill a near-square block in the corner, with
    largest-remainder rounding so that the total is exactly ``n``.
    """
    a, b = params.alpha, params.beta
    sizes = _largest_remainder([x * n for x in (*a, *b, params.gamma)], n)
    rows = [r for r in sizes[: len(a)] if r > 0]
    cols = [c for c in sizes[len(a) : len(a) + len(b)] if c > 0]
    g = sizes[-1]
    p, q = len(rows), len(cols)

    side = math.isqrt(g)
    if side * side < g:
        side += 1
    block = [side] * (g // side) + ([g % side] if g % side else []) if g else []

    if any(rows[i] < rows[i + 1] for i in range(p - 1)) or any(
        cols[j] < cols[j + 1] for j in range(q - 1)
    ):
        raise ValueError(f"rounded sizes are not monotone at n = {n}")
    if p and rows[-1] < q + (side if block else 0):
        raise ValueError(f"infeasible diagram at n = {n}: rows too short for the columns")
    if q and cols[-1] < len(block):
        raise ValueError(f"infeasible diagram at n = {n}: columns too short for the gamma block")

    lam = list(rows)
    depth = max([len(block)] + cols)
    for i in range(depth):
        width = sum(1 for c in cols if c > i)
        if i < len(block):
            width += block[i]
        lam.append(width)
    lam = [x for x in lam if x > 0]
    if sum(lam) != n:
        raise ValueError(f"internal error: diagram has {sum(lam)} boxes, expected {n}")
    return Partition(lam)


@dataclass(frozen=True)
class LimitRow:
    n: int
    diagram: Partition
    value: Fraction
    error: Fraction

    def decimal(self) -> str:
        return f"{float(self.value):.12g}"


def thoma_limit_experiment(
    params: ThomaParameters, k: int, n_values: Iterable[int]
) -> list[LimitRow]:
    if k < 2:
        raise ValueError("k must be >= 2")
    target = thoma_factor(params, k)
    rows = []
    for n in n_values:
        if n < k:
            raise ValueError(f"n = {n} is smaller than the cycle length {k}")
        lam = scaled_diagram(params, n)
        value = normalized_character(lam, [k] + [1] * (n - k))
        rows.append(LimitRow(n, lam, value, abs(value - target)))
    return rows


def limit_csv(rows: Sequence[LimitRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "exact_value", "decimal_value", "abs_error"])
    for r in rows:
        w.writerow([r.n, fraction_str(r.value), r.decimal(), fraction_str(r.error)])
    return buf.getvalue()
