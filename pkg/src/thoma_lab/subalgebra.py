"""Normal subgroups of the finitary symmetric group and their group algebras.

The only normal subgroups are the trivial group, the finitary alternating
group and the whole group.  For each, the trace-preserving conditional
expectation onto its group algebra keeps exactly the Fourier terms lying in
the subgroup.
"""

from __future__ import annotations

import enum
from typing import Iterable

from .characters import ClassFunction
from .group_ring import GroupRingElement, element
from .perm import CycleType, Perm, conjugate, parity, support, transposition

__all__ = [
    "NormalSubgroup",
    "contains",
    "expectation",
    "expectation_trace",
    "support_control_check",
    "conjugation_orbit",
]


class NormalSubgroup(str, enum.Enum):
    TRIVIAL = "trivial"
    ALTERNATING = "alternating"
    FULL = "full"

    @classmethod
    def parse(cls, text: "str | NormalSubgroup") -> "NormalSubgroup":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(
                f"unknown normal subgroup {text!r}; expected trivial, alternating or full"
            ) from None

    def __str__(self) -> str:
        return self.value


def _in_subgroup_by_type(H: NormalSubgroup, ct: CycleType) -> bool:
    if H is NormalSubgroup.FULL:
        return True
    if H is NormalSubgroup.ALTERNATING:
        return ct.sign() == 1
    return not ct


def contains(H: NormalSubgroup, s: Perm) -> bool:
    H = NormalSubgroup.parse(H)
    if H is NormalSubgroup.FULL:
        return True
    if H is NormalSubgroup.ALTERNATING:
        return parity(s) == 1
    return not s


def expectation(H: NormalSubgroup, x) -> GroupRingElement:
    H = NormalSubgroup.parse(H)
    x = element(x)
    return GroupRingElement({p: c for p, c in x.terms.items() if contains(H, p)})


def expectation_trace(H: NormalSubgroup) -> ClassFunction:
    """``g -> trace(E(g) g^-1)``, which is the indicator function of ``H``."""
    H = NormalSubgroup.parse(H)
    return ClassFunction(
        lambda ct: 1 if _in_subgroup_by_type(H, ct) else 0,
        "expectation-indicator",
        f"indicator of {H.value}",
    )


def support_control_check(H: NormalSubgroup, s: Perm) -> bool:
    """Every term of ``E(s)`` moves only points that ``s`` moves."""
    if not s:
        raise ValueError("support control is stated for s != e")
    supp = support(s)
    return all(support(p) <= supp for p in expectation(H, s).support_perms())


def conjugation_orbit(s: Perm, A: Iterable[int], count: int) -> list[Perm]:
    """Pairwise distinct conjugates ``t_k s t_k^-1`` with ``t_k = (i j_k)`` in ``S_A``.

    ``i`` is the least point of ``supp(s) & A`` and ``j_1 < j_2 < ...`` are the
    least points of ``A`` beyond ``max(supp(s))``.  Conjugate ``k`` then has
    support ``(supp(s) - {i}) | {j_k}``, so no two coincide.
    """
    A = set(A)
    if count < 0:
        raise ValueError("count must be nonnegative")
    supp = support(s)
    meet = supp & A
    if not meet:
        raise ValueError("supp(s) does not meet A: s commutes with S_A")
    i = min(meet)
    far = sorted(j for j in A if j > max(supp))
    if len(far) < count:
        raise ValueError(f"A has only {len(far)} points beyond max(supp(s)), need {count}")
    return [conjugate(transposition(i, j), s) for j in far[:count]]
