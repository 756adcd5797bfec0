"""Thoma characters of the infinite symmetric group and exact positivity checks.

A Thoma character with parameters ``alpha = (a_1 >= a_2 >= ...)`` and
``beta = (b_1 >= b_2 >= ...)`` takes the value

    chi(s) = prod_k ( sum_i a_i^k + (-1)^(k-1) sum_j b_j^k ) ^ m_k(s)

on a permutation with ``m_k(s)`` cycles of length ``k``.  Only finitely many
rational parameters are supported, so every value is an exact fraction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

from .group_ring import Scalar, as_scalar, fraction_str, parse_fraction
from .perm import CycleType, Perm, conjugate, cycle, cycle_type, inverse

__all__ = [
    "ThomaParameters",
    "ClassFunction",
    "GramCertificate",
    "RegularCheck",
    "thoma_factor",
    "thoma_eval",
    "mixture_eval",
    "thoma_character",
    "mixture_character",
    "table_function",
    "gram_matrix",
    "certify_psd",
    "check_regular_from_3cycle",
    "random_parameters",
    "random_permutation",
    "all_permutations",
    "conjugacy_invariant",
    "REGULAR",
    "TRIVIAL",
    "SIGN",
]


@dataclass(frozen=True)
class ThomaParameters:
    alpha: tuple[Fraction, ...] = ()
    beta: tuple[Fraction, ...] = ()

    def __post_init__(self):
        a = tuple(parse_fraction(x) for x in self.alpha)
        b = tuple(parse_fraction(x) for x in self.beta)
        for name, seq in (("alpha", a), ("beta", b)):
            if any(x < 0 for x in seq):
                raise ValueError(f"{name} entries must be nonnegative")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"{name} must be weakly decreasing")
        if sum(a) + sum(b) > 1:
            raise ValueError("sum(alpha) + sum(beta) must not exceed 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def gamma(self) -> Fraction:
        """Leftover mass ``1 - sum(alpha) - sum(beta)``."""
        return 1 - sum(self.alpha) - sum(self.beta)

    def is_regular(self) -> bool:
        return not any(self.alpha) and not any(self.beta)

    def to_json(self) -> dict:
        return {
            "alpha": [fraction_str(x) for x in self.alpha],
            "beta": [fraction_str(x) for x in self.beta],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ThomaParameters":
        return cls(tuple(obj.get("alpha", ())), tuple(obj.get("beta", ())))

    @classmethod
    def parse(cls, alpha: str = "", beta: str = "") -> "ThomaParameters":
        """From comma separated fraction lists, e.g. ``parse("1/2,1/2", "")``."""

        def split(text: str) -> tuple[Fraction, ...]:
            return tuple(parse_fraction(t) for t in text.split(",") if t.strip())

        return cls(split(alpha), split(beta))

    def __str__(self) -> str:
        a = ", ".join(map(str, self.alpha))
        b = ", ".join(map(str, self.beta))
        return f"alpha=({a}) beta=({b})"


def thoma_factor(params: ThomaParameters, k: int) -> Fraction:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    sign = -1 if k % 2 == 0 else 1
    return sum((a**k for a in params.alpha), Fraction(0)) + sign * sum(
        (b**k for b in params.beta), Fraction(0)
    )


def _eval_on_type(params: ThomaParameters, ct: CycleType) -> Fraction:
    value = Fraction(1)
    for k, m in ct.items():
        value *= thoma_factor(params, k) ** m
        if not value:
            break
    return value


def thoma_eval(params: ThomaParameters, s: Perm | CycleType) -> Fraction:
    ct = s if isinstance(s, CycleType) else cycle_type(s)
    return _eval_on_type(params, ct)


def _check_mixture(weights: Sequence, components: Sequence[ThomaParameters]) -> list[Fraction]:
    if len(weights) != len(components):
        raise ValueError("weights and components must have equal length")
    if not weights:
        raise ValueError("a mixture needs at least one component")
    w = [parse_fraction(x) for x in weights]
    if any(x <= 0 for x in w):
        raise ValueError("mixture weights must be positive")
    if sum(w) != 1:
        raise ValueError(f"mixture weights sum to {sum(w)}, not 1")
    return w


def mixture_eval(
    weights: Sequence, components: Sequence[ThomaParameters], s: Perm | CycleType
) -> Fraction:
    w = _check_mixture(weights, components)
    ct = s if isinstance(s, CycleType) else cycle_type(s)
    return sum((wi * _eval_on_type(c, ct) for wi, c in zip(w, components)), Fraction(0))


class ClassFunction:
    """A function on permutations that only sees the cycle type.

    ``kind`` is one of ``thoma``, ``mixture``, ``expectation-indicator`` or
    ``custom-table``.  Construction fails unless the value at the identity is 1.
    """

    KINDS = ("thoma", "mixture", "expectation-indicator", "custom-table")

    def __init__(self, evaluator: Callable[[CycleType], object], kind: str, label: str = ""):
        if kind not in self.KINDS:
            raise ValueError(f"unknown class function kind {kind!r}")
        self.kind = kind
        self.label = label or kind
        self._evaluator = lru_cache(maxsize=None)(lambda ct: as_scalar(evaluator(ct)))
        if self._evaluator(CycleType()) != 1:
            raise ValueError(f"class function {self.label!r} is not normalized at e")

    def on_type(self, ct: CycleType) -> Scalar:
        return self._evaluator(ct)

    def __call__(self, s: Perm | CycleType) -> Scalar:
        ct = s if isinstance(s, CycleType) else cycle_type(s)
        return self._evaluator(ct)

    def __repr__(self) -> str:
        return f"ClassFunction({self.label!r}, kind={self.kind!r})"


def thoma_character(params: ThomaParameters) -> ClassFunction:
    return ClassFunction(lambda ct: _eval_on_type(params, ct), "thoma", f"thoma {params}")


def mixture_character(weights: Sequence, components: Sequence[ThomaParameters]) -> ClassFunction:
    w = _check_mixture(weights, components)
    comps = tuple(components)
    return ClassFunction(
        lambda ct: sum((wi * _eval_on_type(c, ct) for wi, c in zip(w, comps)), Fraction(0)),
        "mixture",
        f"mixture of {len(comps)}",
    )


def table_function(table: Mapping, default=0, label: str = "table") -> ClassFunction:
    """A class function given by explicit values on cycle types.

    Keys may be ``CycleType`` objects or plain ``{k: m_k}`` dicts; unlisted
    cycle types take ``default``.
    """
    norm = {(k if isinstance(k, CycleType) else CycleType(dict(k))): v for k, v in table.items()}
    norm.setdefault(CycleType(), 1)
    return ClassFunction(lambda ct: norm.get(ct, default), "custom-table", label)


REGULAR = ThomaParameters()
TRIVIAL = ThomaParameters((Fraction(1),))
SIGN = ThomaParameters((), (Fraction(1),))


def gram_matrix(phi: ClassFunction, elems: Sequence[Perm]) -> list[list[Scalar]]:
    if not elems:
        raise ValueError("gram_matrix needs at least one element")
    invs = [inverse(s) for s in elems]
    return [[phi(si * sj) for sj in elems] for si in invs]


# ---------------------------------------------------------------------------
# exact positive-semidefiniteness


@dataclass
class GramCertificate:
    """Outcome of an exact LDL* elimination.

    For ``psd`` the witness is ``(order, L, D)`` with ``P M P^T = L D L*``;
    for ``not-psd`` it is a vector ``v`` with ``v* M v < 0``.
    """

    verdict: str
    pivots: list[Fraction]
    order: list[int]
    lower: list[list[Scalar]] = field(default_factory=list)
    witness: list[Scalar] | None = None
    value: Fraction | None = None

    @property
    def is_psd(self) -> bool:
        return self.verdict == "psd"

    def verify(self, M: Sequence[Sequence]) -> bool:
        """Recompute the witness against ``M`` in exact arithmetic."""
        M = _as_matrix(M)
        n = len(M)
        if self.verdict == "not-psd":
            v = self.witness
            q = _quad(M, v)
            return q.is_real() and q.re < 0 and q.re == self.value
        if any(d < 0 for d in self.pivots):
            return False
        L, P = self.lower, self.order
        for i in range(n):
            for j in range(n):
                acc = Scalar()
                for k in range(min(i, j) + 1):
                    acc = acc + L[i][k] * self.pivots[k] * L[j][k].conj()
                if acc != M[P[i]][P[j]]:
                    return False
        return True

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "pivots": [fraction_str(d) for d in self.pivots],
            "order": self.order,
        }
        if self.witness is not None:
            out["witness"] = [c.to_json() for c in self.witness]
            out["value"] = fraction_str(self.value)
        return out


def _as_matrix(M: Sequence[Sequence]) -> list[list[Scalar]]:
    rows = [[as_scalar(x) if not isinstance(x, str) else Scalar(parse_fraction(x)) for x in r] for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    return rows


def _quad(M: list[list[Scalar]], v: Sequence[Scalar]) -> Scalar:
    n = len(M)
    total = Scalar()
    for i in range(n):
        if not v[i]:
            continue
        row = Scalar()
        for j in range(n):
            if v[j]:
                row = row + M[i][j] * v[j]
        total = total + v[i].conj() * row
    return total


def certify_psd(M: Sequence[Sequence]) -> GramCertificate:
    """Decide positive semidefiniteness of a Hermitian matrix exactly.

    Sparse witnesses ``e_i`` and ``e_i -+ e_j`` are tried first.  Otherwise
    symmetric elimination with diagonal pivoting: at each stage the largest
    remaining diagonal entry is the pivot.  A negative largest diagonal, or a
    zero diagonal next to a nonzero off-diagonal entry, yields a witness.
    """
    A = _as_matrix(M)
    n = len(A)
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i].conj():
                raise ValueError(f"matrix is not Hermitian at ({i}, {j})")
    short = _sparse_witness(A)
    if short is not None:
        return short

    S = [row[:] for row in A]
    order = list(range(n))
    L = [[Scalar() for _ in range(n)] for _ in range(n)]
    pivots: list[Fraction] = []

    for k in range(n):
        p = max(range(k, n), key=lambda i: (S[i][i].re, -i))
        if p != k:
            S[k], S[p] = S[p], S[k]
            for row in S:
                row[k], row[p] = row[p], row[k]
            L[k], L[p] = L[p], L[k]
            order[k], order[p] = order[p], order[k]
        d = S[k][k].re
        if d < 0:
            z = [Scalar()] * n
            z[k] = Scalar(1)
            return _reject(A, L, order, pivots, z, k)
        if d == 0:
            for i in range(k + 1, n):
                if S[i][k]:
                    # 2x2 block [[0, a], [conj a, 0]] with a != 0
                    z = [Scalar()] * n
                    z[k] = Scalar(1)
                    z[i] = -S[i][k]
                    return _reject(A, L, order, pivots, z, k)
            # remaining diagonal is all zero and this column vanishes
            L[k][k] = Scalar(1)
            pivots.append(Fraction(0))
            continue
        L[k][k] = Scalar(1)
        inv_d = Fraction(1) / d
        for i in range(k + 1, n):
            L[i][k] = S[i][k] * inv_d
        for i in range(k + 1, n):
            if not S[i][k]:
                continue
            for j in range(k + 1, n):
                if S[k][j]:
                    S[i][j] = S[i][j] - L[i][k] * S[k][j]
        for i in range(k + 1, n):
            S[i][k] = Scalar()
            S[k][i] = Scalar()
        pivots.append(d)

    return GramCertificate("psd", pivots, order, L)


def _sparse_witness(A: list[list[Scalar]]) -> GramCertificate | None:
    n = len(A)
    for i in range(n):
        if A[i][i].re < 0:
            v = [Scalar(int(t == i)) for t in range(n)]
            return GramCertificate("not-psd", [], list(range(n)), witness=v, value=A[i][i].re)
    for i in range(n):
        for j in range(i + 1, n):
            for sign in (-1, 1):
                # (e_i + sign e_j)* A (e_i + sign e_j)
                q = A[i][i].re + A[j][j].re + 2 * sign * A[i][j].re
                if q < 0:
                    v = [Scalar(1 if t == i else sign if t == j else 0) for t in range(n)]
                    return GramCertificate("not-psd", [], list(range(n)), witness=v, value=q)
    return None


def _reject(A, L, order, pivots, z, k) -> GramCertificate:
    """Lift a Schur-complement witness ``z`` back to the original coordinates.

    With ``P A P^T = L diag(D, S) L*`` (L unit lower on the eliminated block),
    ``y = L^-* z`` satisfies ``y* P A P^T y = z* diag(D, S) z``.
    """
    n = len(A)
    y = list(z)
    for i in range(k - 1, -1, -1):
        acc = y[i]
        for j in range(i + 1, n):
            if L[j][i]:
                acc = acc - L[j][i].conj() * y[j]
        y[i] = acc
    v = [Scalar()] * n
    for pos, orig in enumerate(order):
        v[orig] = y[pos]
    q = _quad(A, v)
    assert q.is_real() and q.re < 0, "internal error: witness does not certify"
    return GramCertificate("not-psd", list(pivots), list(order), witness=v, value=q.re)


# ---------------------------------------------------------------------------
# regular-character test from the value on a 3-cycle


@dataclass
class RegularCheck:
    status: str  # "pass" | "fail" | "not-applicable"
    value_on_3cycle: Fraction
    violating_component: int | None = None
    violating_perm: Perm | None = None
    sampled: int = 0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value_on_3cycle": fraction_str(self.value_on_3cycle),
            "violating_component": self.violating_component,
            "violating_perm": None if self.violating_perm is None else str(self.violating_perm),
            "sampled": self.sampled,
        }


def random_permutation(rng: random.Random, n: int = 10, nontrivial: bool = True) -> Perm:
    pts = list(range(1, n + 1))
    while True:
        rng.shuffle(pts)
        s = Perm.from_images(pts)
        if s or not nontrivial:
            return s


def check_regular_from_3cycle(
    weights: Sequence,
    components: Sequence[ThomaParameters],
    seed: int = 0,
    samples: int = 100,
) -> RegularCheck:
    """If a finite mixture vanishes on (1 2 3), confirm it is the regular character.

    Every component's value on a 3-cycle is a sum of cubes, hence nonnegative,
    so a vanishing mixture forces every component to have zero parameters.
    """
    w = _check_mixture(weights, components)
    c3 = cycle(1, 2, 3)
    at3 = mixture_eval(w, components, c3)
    if at3 != 0:
        return RegularCheck("not-applicable", at3)
    for idx, c in enumerate(components):
        if thoma_factor(c, 3) < 0 or not c.is_regular():
            return RegularCheck("fail", at3, violating_component=idx)
    rng = random.Random(seed)
    for _ in range(samples):
        s = random_permutation(rng, 10)
        if mixture_eval(w, components, s) != 0:
            return RegularCheck("fail", at3, violating_perm=s, sampled=samples)
    return RegularCheck("pass", at3, sampled=samples)


def random_parameters(rng: random.Random, max_len: int = 3, max_num: int = 6) -> ThomaParameters:
    """Random valid parameters with small denominators."""
    a = [rng.randint(0, max_num) for _ in range(rng.randint(0, max_len))]
    b = [rng.randint(0, max_num) for _ in range(rng.randint(0, max_len))]
    total = sum(a) + sum(b)
    denom = total + rng.randint(0 if total else 1, max_num)
    alpha = sorted((Fraction(x, denom) for x in a if x), reverse=True)
    beta = sorted((Fraction(x, denom) for x in b if x), reverse=True)
    return ThomaParameters(tuple(alpha), tuple(beta))


def all_permutations(n: int) -> list[Perm]:
    """Every element of S_n, in lexicographic one-line order."""
    return [Perm.from_images(p) for p in permutations(range(1, n + 1))]


def conjugacy_invariant(phi: ClassFunction, samples: Iterable[tuple[Perm, Perm]]) -> bool:
    return all(phi(conjugate(t, s)) == phi(s) for t, s in samples)
