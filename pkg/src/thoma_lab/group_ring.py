"""The group ring of the finitary symmetric group over Gaussian rationals.

Elements are finitely supported formal sums ``sum c_s s`` with exact
coefficients in Q(i).  Terms with zero coefficient are never stored, so
``==`` is mathematical equality.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .perm import IDENTITY, Perm, conjugate, inverse, parse_cycles

__all__ = [
    "Scalar",
    "GroupRingElement",
    "as_scalar",
    "element",
    "parse_element",
    "linear_combine",
    "multiply",
    "star",
    "trace",
    "inner_product",
    "conj_action",
    "fraction_str",
    "parse_fraction",
]

Number = Union[int, Fraction, "Scalar"]


def fraction_str(q: Fraction) -> str:
    """Exact ``"p/q"`` rendering; integers are written ``"p/1"``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not an exact fraction: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class Scalar:
    """A Gaussian rational ``re + im*i``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __sub__(self, other: Number) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: Number) -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, GroupRingElement):
            return NotImplemented
        o = as_scalar(other)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero scalar")
        return self * o.conj() * Scalar(1 / d)

    def __rtruediv__(self, other: Number) -> "Scalar":
        return as_scalar(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return Scalar(1) / self**-k
        out = Scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def to_json(self) -> dict:
        return {"re": fraction_str(self.re), "im": fraction_str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, dict):
            return cls(parse_fraction(obj.get("re", "0")), parse_fraction(obj.get("im", "0")))
        return cls(parse_fraction(obj))


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class GroupRingElement:
    """A finite formal sum of permutations with Gaussian rational coefficients."""

    __slots__ = ("_terms", "_key")

    def __init__(self, terms: Mapping[Perm, Number] | Iterable[tuple[Perm, Number]] = ()):
        acc: dict[Perm, Scalar] = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for p, c in pairs:
            acc[p] = acc.get(p, Scalar()) + as_scalar(c)
        self._terms = {p: c for p, c in acc.items() if c}
        self._key: tuple | None = None

    @property
    def terms(self) -> dict[Perm, Scalar]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Perm, Scalar]]:
        return iter(sorted(self._terms.items(), key=lambda pc: pc[0].sort_key()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, p: Perm) -> Scalar:
        return self._terms.get(p, Scalar())

    def support_perms(self) -> set[Perm]:
        return set(self._terms)

    def _canon(self) -> tuple:
        if self._key is None:
            self._key = tuple(
                sorted((str(p), c.re, c.im) for p, c in self._terms.items())
            )
        return self._key

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GroupRingElement):
            return self._terms == other._terms
        if isinstance(other, Perm):
            return self == GroupRingElement({other: 1})
        if isinstance(other, (int, Fraction, Scalar)):
            return self == GroupRingElement({IDENTITY: other})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._canon())

    def __add__(self, other) -> "GroupRingElement":
        o = element(other)
        return linear_combine([1, 1], [self, o])

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({p: -c for p, c in self._terms.items()})

    def __sub__(self, other) -> "GroupRingElement":
        return linear_combine([1, -1], [self, element(other)])

    def __rsub__(self, other) -> "GroupRingElement":
        return linear_combine([1, -1], [element(other), self])

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, (int, Fraction, Scalar)):
            c = as_scalar(other)
            return GroupRingElement({p: c * v for p, v in self._terms.items()})
        return multiply(self, element(other))

    def __rmul__(self, other) -> "GroupRingElement":
        if isinstance(other, (int, Fraction, Scalar)):
            return self * other
        return multiply(element(other), self)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for p, c in self:
            label = str(p)
            if c == 1:
                txt, neg = label, False
            elif c == -1:
                txt, neg = label, True
            elif c.is_real():
                neg = c.re < 0
                txt = f"{abs(c.re)}*{label}"
            else:
                txt, neg = f"({c})*{label}", False
            if not parts:
                parts.append(("-" if neg else "") + txt)
            else:
                parts.append(("- " if neg else "+ ") + txt)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GroupRingElement({str(self)!r})"

    def to_json(self) -> list[dict]:
        rows = [(str(p), c) for p, c in self._terms.items()]
        rows.sort(key=lambda r: r[0])
        return [{"coeff": c.to_json(), "perm": label} for label, c in rows]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, rows: Sequence[dict]) -> "GroupRingElement":
        return cls((parse_cycles(r["perm"]), Scalar.from_json(r["coeff"])) for r in rows)


def element(x) -> GroupRingElement:
    """Coerce a permutation, scalar or element into a group-ring element."""
    if isinstance(x, GroupRingElement):
        return x
    if isinstance(x, Perm):
        return GroupRingElement({x: 1})
    if isinstance(x, (int, Fraction, Scalar)):
        return GroupRingElement({IDENTITY: x})
    if isinstance(x, str):
        return parse_element(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a group-ring element")


_TERM = re.compile(
    r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*?\s*)?((?:\([^()]*\)\s*)+|e\b)"
)


def parse_element(text: str) -> GroupRingElement:
    """Parse sums like ``"(1 3)(2 4) - (1 4 3) + 1/2*(1 2)"``.

    Each term is an optional sign, an optional rational coefficient and a
    permutation in cycle notation (``e`` for the identity).  Only real
    coefficients are accepted here; use JSON for complex ones.
    """
    s = text.strip()
    if s == "0":
        return GroupRingElement()
    pos = 0
    terms: list[tuple[Perm, Fraction]] = []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse group-ring element at {s[pos:]!r}")
        sign, coeff, perm = m.groups()
        if terms and sign is None:
            raise ValueError(f"missing '+' or '-' before {perm.strip()!r}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        terms.append((parse_cycles(perm), c))
        pos = m.end()
    return GroupRingElement(terms)


def linear_combine(coeffs: Sequence[Number], elems: Sequence) -> GroupRingElement:
    if len(coeffs) != len(elems):
        raise ValueError("coeffs and elems must have equal length")
    acc: dict[Perm, Scalar] = {}
    for c, x in zip(coeffs, elems):
        c = as_scalar(c)
        if not c:
            continue
        for p, v in element(x)._terms.items():
            acc[p] = acc.get(p, Scalar()) + c * v
    return GroupRingElement(acc)


def multiply(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    acc: dict[Perm, Scalar] = {}
    for p, a in x._terms.items():
        for q, b in y._terms.items():
            r = p * q
            acc[r] = acc.get(r, Scalar()) + a * b
    return GroupRingElement(acc)


def star(x: GroupRingElement) -> GroupRingElement:
    return GroupRingElement({inverse(p): c.conj() for p, c in x._terms.items()})


def trace(x: GroupRingElement) -> Scalar:
    """Coefficient of the identity."""
    return element(x).coeff(IDENTITY)


def inner_product(a, b) -> Scalar:
    """``<a, b> = trace(star(b) a)``, linear in ``a``."""
    a, b = element(a), element(b)
    # only pairs with q^-1 p = e contribute
    total = Scalar()
    for p, c in a._terms.items():
        d = b._terms.get(p)
        if d is not None:
            total = total + d.conj() * c
    return total


def conj_action(g: Perm, x) -> GroupRingElement:
    """``g x g^-1``, applied term by term."""
    return GroupRingElement({conjugate(g, p): c for p, c in element(x)._terms.items()})
