"""Step-by-step replay of the algebraic arguments behind the ISR classification.

Every step either recomputes an identity in the group ring, solves a small
polynomial system exactly, or runs a finite closure/enumeration.  Membership
in the unknown invariant subalgebra ``P`` is tracked by :class:`Certified`:
an element counts as known to lie in ``P`` only if it was assumed as a case
hypothesis or produced from certified elements by a product, a conjugation
or a linear combination.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import sympy

from .characters import (
    REGULAR,
    SIGN,
    TRIVIAL,
    ThomaParameters,
    all_permutations,
    certify_psd,
    check_regular_from_3cycle,
    conjugacy_invariant,
    gram_matrix,
    random_parameters,
    random_permutation,
    table_function,
    thoma_character,
    thoma_eval,
)
from .group_ring import (
    GroupRingElement,
    Scalar,
    conj_action,
    element,
    fraction_str,
    inner_product,
    linear_combine,
    parse_element,
    star,
    trace,
)
from .perm import (
    IDENTITY,
    Perm,
    conjugate,
    conjugator,
    cycle,
    inverse,
    parity,
    parse_cycles,
    support,
    transposition,
)
from .sn_repr import thoma_limit_experiment
from .subalgebra import (
    NormalSubgroup,
    conjugation_orbit,
    contains,
    expectation,
    expectation_trace,
    support_control_check,
)

__all__ = [
    "Step",
    "ReplayReport",
    "Certified",
    "UncertifiedError",
    "NormalSubgroupInfo",
    "replay_transposition_branch",
    "replay_step1",
    "replay_step2_solutions",
    "replay_rule_out_symmetry",
    "replay_conclusion",
    "enumerate_normal_subgroups",
    "all_subgroups_naive",
    "finite_isr_counting",
    "replay_all",
    "SECTIONS",
    "rational_roots",
]


# ---------------------------------------------------------------------------
# reports


def _witness_json(w: Any) -> Any:
    if isinstance(w, GroupRingElement):
        return w.to_json()
    if isinstance(w, Scalar):
        return w.to_json()
    if isinstance(w, Fraction):
        return fraction_str(w)
    if isinstance(w, Perm):
        return str(w)
    if isinstance(w, (set, frozenset)):
        return sorted((_witness_json(x) for x in w), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(w, (list, tuple)):
        return [_witness_json(x) for x in w]
    if isinstance(w, dict):
        return {str(k): _witness_json(v) for k, v in w.items()}
    if isinstance(w, sympy.Basic):
        return str(w)
    return w


@dataclass
class Step:
    label: str
    claim: str
    verified: bool
    witness: Any = None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "claim": self.claim,
            "verified": bool(self.verified),
            "witness": _witness_json(self.witness),
        }


@dataclass
class ReplayReport:
    case: str
    steps: list[Step] = field(default_factory=list)

    def check(self, label: str, claim: str, verified: bool, witness: Any = None) -> bool:
        self.steps.append(Step(label, claim, bool(verified), witness))
        return bool(verified)

    def extend(self, other: "ReplayReport", prefix: str = "") -> None:
        for s in other.steps:
            self.steps.append(Step(prefix + s.label, s.claim, s.verified, s.witness))

    def step(self, label: str) -> Step:
        for s in self.steps:
            if s.label == label:
                return s
        raise KeyError(label)

    @property
    def passed(self) -> bool:
        return bool(self.steps) and all(s.verified for s in self.steps)

    @property
    def overall(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "steps": [s.to_json() for s in self.steps],
            "overall": self.overall,
        }

    def to_text(self) -> str:
        lines = [f"[{self.case}]"]
        for s in self.steps:
            mark = "ok  " if s.verified else "FAIL"
            lines.append(f"  {mark} {s.label}: {s.claim}")
        lines.append(f"  overall: {self.overall}")
        return "\n".join(lines)


class UncertifiedError(ValueError):
    """An operation used an element not yet known to lie in P."""


class Certified:
    """Elements known to lie in an invariant unital *-subalgebra ``P``."""

    def __init__(self):
        self._members: dict[GroupRingElement, str] = {element(1): "unit"}

    def __contains__(self, x) -> bool:
        return element(x) in self._members

    def reason(self, x) -> str:
        return self._members[element(x)]

    def _require(self, *xs: GroupRingElement) -> None:
        for x in xs:
            if element(x) not in self._members:
                raise UncertifiedError(f"{x} is not certified to lie in P")

    def _add(self, x: GroupRingElement, reason: str) -> GroupRingElement:
        self._members.setdefault(x, reason)
        return x

    def assume(self, x, reason: str) -> GroupRingElement:
        return self._add(element(x), f"hypothesis: {reason}")

    def product(self, a, b, reason: str = "product") -> GroupRingElement:
        self._require(a, b)
        return self._add(element(a) * element(b), reason)

    def conj(self, g: Perm, a, reason: str = "conjugation") -> GroupRingElement:
        self._require(a)
        return self._add(conj_action(g, a), reason)

    def combine(self, coeffs: Sequence, elems: Sequence, reason: str = "linear combination"):
        self._require(*elems)
        return self._add(linear_combine(coeffs, elems), reason)

    def star(self, a, reason: str = "adjoint") -> GroupRingElement:
        self._require(a)
        return self._add(star(element(a)), reason)


# ---------------------------------------------------------------------------
# symbolic coefficients (dict Perm -> sympy expression)

Sym = dict


def _sym(terms: Iterable[tuple[Perm, Any]]) -> Sym:
    out: Sym = {}
    for p, c in terms:
        out[p] = sympy.expand(out.get(p, 0) + c)
    return {p: c for p, c in out.items() if c != 0}


def _sym_conj(g: Perm, x: Sym) -> Sym:
    return _sym((conjugate(g, p), c) for p, c in x.items())


def _sym_star(x: Sym) -> Sym:
    return _sym((inverse(p), sympy.conjugate(c)) for p, c in x.items())


def _sym_mul(x: Sym, y: Sym) -> Sym:
    return _sym((p * q, a * b) for p, a in x.items() for q, b in y.items())


def _sym_trace(x: Sym):
    return x.get(IDENTITY, sympy.Integer(0))


def _sym_apply(linear: Callable[[Perm], Sym], x: Sym) -> Sym:
    """Extend a map on basis permutations linearly to symbolic elements."""
    return _sym((q, c * d) for p, c in x.items() for q, d in linear(p).items())


def _sym_equations(lhs: Sym, rhs: Sym) -> list:
    keys = sorted(set(lhs) | set(rhs), key=lambda p: p.sort_key())
    eqs = [sympy.expand(lhs.get(p, 0) - rhs.get(p, 0)) for p in keys]
    return [e for e in eqs if e != 0]


def _same_system(found: Sequence, expected: Sequence) -> bool:
    """Two equation lists agree up to sign and ordering."""
    norm = lambda eqs: {frozenset({sympy.expand(e), sympy.expand(-e)}) for e in eqs}
    return norm(found) == norm(expected)


# ---------------------------------------------------------------------------
# exact polynomial roots


def rational_roots(coeffs: Sequence) -> list[Fraction]:
    """All rational roots of ``sum coeffs[i] x^i`` via the rational root theorem."""
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if not c:
        raise ValueError("zero polynomial has every number as a root")
    lcm = math.lcm(*(x.denominator for x in c))
    ints = [int(x * lcm) for x in c]
    roots = set()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots)

    def divisors(m: int) -> list[int]:
        m = abs(m)
        return [d for d in range(1, m + 1) if m % d == 0]

    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(a * cand**i for i, a in enumerate(ints)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _rational_grid(height: int = 6) -> list[Fraction]:
    vals = {Fraction(p, q) for q in range(1, height + 1) for p in range(-2 * height, 2 * height + 1)}
    return sorted(vals)


# ---------------------------------------------------------------------------
# E((1 2)) in {0, (1 2)}


MU, THETA, C = sympy.symbols("mu theta c")


def replay_transposition_branch() -> ReplayReport:
    r = ReplayReport("transposition-branch")
    t12 = transposition(1, 2)

    local = {p for p in all_permutations(2)}
    r.check(
        "tb-support",
        "S_supp((1 2)) = {e, (1 2)}, so E((1 2)) = c + mu (1 2)",
        local == {IDENTITY, t12},
        local,
    )

    ansatz = _sym([(IDENTITY, C), (t12, MU)])
    basis_E = lambda p: ({IDENTITY: sympy.Integer(1)} if p == IDENTITY else ansatz)
    twice = _sym_apply(basis_E, ansatz)
    eqs = _sym_equations(ansatz, twice)
    expected = [C - (C + C * MU), MU - MU**2]
    r.check(
        "tb-idempotence",
        "E(E((1 2))) = E((1 2)) gives c = c + c mu and mu = mu^2",
        _same_system(eqs, expected),
        {"E(E((1 2)))": {str(p): str(v) for p, v in twice.items()}},
    )

    # case split: roots of mu^2 - mu, then c from c*mu = 0
    mus = rational_roots([0, -1, 1])
    branches = []
    for m in mus:
        c_eq = sympy.expand((C - (C + C * MU)).subs(MU, m))
        if c_eq == 0:
            branches.append({"mu": Fraction(m), "c": "free"})
        else:
            cs = rational_roots([c_eq.subs(C, 0), c_eq.coeff(C, 1)])
            branches.extend({"mu": Fraction(m), "c": cv} for cv in cs)
    expected_branches = [{"mu": Fraction(0), "c": "free"}, {"mu": Fraction(1), "c": Fraction(0)}]
    r.check(
        "tb-branches",
        "either mu = 0 (c free) or (mu, c) = (1, 0)",
        branches == expected_branches,
        branches,
    )

    solved = sympy.solve(expected, [MU, C], dict=True)
    solved_set = {(s.get(MU, MU), s.get(C, C)) for s in solved}
    r.check(
        "tb-independent-solve",
        "an independent symbolic solve returns the same two branches",
        solved_set == {(0, C), (1, 0)},
        sorted(map(str, solved_set)),
    )

    sat = lambda m, c: c == c + c * m and m == m * m
    r.check("tb-candidate-10", "(mu, c) = (1, 0) satisfies both equations", sat(Fraction(1), Fraction(0)))
    r.check("tb-candidate-00", "(mu, c) = (0, 0) satisfies both equations", sat(Fraction(0), Fraction(0)))
    r.check(
        "tb-candidate-half",
        "mu = 1/2 violates mu = mu^2",
        not sat(Fraction(1, 2), Fraction(0)),
        fraction_str(Fraction(1, 2) - Fraction(1, 4)),
    )

    grid = _rational_grid()
    extra = [
        (m, c)
        for m in grid
        for c in grid
        if sat(m, c) and not (m == 0 or (m == 1 and c == 0))
    ]
    r.check(
        "tb-exhaustive",
        f"no other rational solutions among {len(grid)}^2 grid points",
        not extra,
        extra[:5],
    )

    forced = trace(element(t12))
    r.check(
        "tb-trace-forces-c",
        "c = tau(E((1 2))) = tau((1 2)) = 0",
        forced == 0,
        forced,
    )
    return r


# ---------------------------------------------------------------------------
# Step 1: shape of E((1 2 3))


def replay_step1() -> ReplayReport:
    r = ReplayReport("step1")
    c123, c132 = cycle(1, 2, 3), cycle(1, 3, 2)
    t12, t13, t23 = transposition(1, 2), transposition(1, 3), transposition(2, 3)

    v1 = c123 * t13 * c132
    r.check("step1-identity-1", "(1 2 3)(1 3)(1 3 2) = (1 2)", v1 == t12, v1)
    v2 = c123 * t12 * c132
    r.check("step1-identity-2", "(1 2 3)(1 2)(1 3 2) = (2 3)", v2 == t23, v2)

    orbit = {conjugate(g, t12) for g in (IDENTITY, c123, c132)}
    r.check(
        "step1-orbit",
        "(1 2), (1 3), (2 3) form one orbit under conjugation by <(1 2 3)>",
        orbit == {t12, t13, t23},
        orbit,
    )

    # the (1 2 3)-invariant, trace-zero part of C[S_3]
    s3 = sorted(all_permutations(3), key=lambda p: p.sort_key())
    xs = sympy.symbols(f"x0:{len(s3)}")
    general = _sym(zip(s3, xs))
    eqs = _sym_equations(_sym_conj(c123, general), general) + [_sym_trace(general)]
    sol = sympy.solve(eqs, xs, dict=True)[0]
    fixed = {p: sympy.simplify(sympy.sympify(v).subs(sol)) for p, v in general.items()}
    free = sorted({s for v in fixed.values() for s in sympy.sympify(v).free_symbols}, key=str)
    shape_ok = (
        len(free) == 3
        and fixed[IDENTITY] == 0
        and fixed[t12] == fixed[t13] == fixed[t23]
        and len({fixed[t12], fixed[c123], fixed[c132]}) == 3
    )
    r.check(
        "step1-ansatz-derived",
        "invariance under (1 2 3) and tau = 0 leave c((1 2)+(1 3)+(2 3)) + mu(1 2 3) + theta(1 3 2)",
        shape_ok,
        {str(p): str(v) for p, v in fixed.items()},
    )

    ansatz = _sym([(t12, C), (t13, C), (t23, C), (c123, MU), (c132, THETA)])
    inv = all(_sym_conj(g, ansatz) == ansatz for g in (c123, c132))
    r.check(
        "step1-ansatz-invariant",
        "the ansatz is fixed by conjugation with (1 2 3) and (1 3 2)",
        inv,
        {str(p): str(v) for p, v in _sym_conj(c123, ansatz).items()},
    )

    # <(1 2), x> = tau(x^* (1 2))
    ip = _sym_trace(_sym_mul(_sym_star(ansatz), {t12: sympy.Integer(1)}))
    r.check(
        "step1-orthogonality",
        "<(1 2), E((1 2 3))> = conj(c), so E((1 2)) = 0 forces c = 0",
        sympy.simplify(ip - sympy.conjugate(C)) == 0,
        str(ip),
    )
    return r


# ---------------------------------------------------------------------------
# Step 2: (mu, theta) in four candidates


def replay_step2_solutions() -> ReplayReport:
    r = ReplayReport("step2")
    c123, c132, t23 = cycle(1, 2, 3), cycle(1, 3, 2), transposition(2, 3)
    e123 = _sym([(c123, MU), (c132, THETA)])

    r.check("step2-transport-perm", "(2 3)(1 2 3)(2 3) = (1 3 2)", conjugate(t23, c123) == c132)
    e132 = _sym_conj(t23, e123)
    r.check(
        "step2-transport",
        "E((1 3 2)) = (2 3) E((1 2 3)) (2 3) = mu (1 3 2) + theta (1 2 3)",
        e132 == _sym([(c132, MU), (c123, THETA)]),
        {str(p): str(v) for p, v in e132.items()},
    )

    r.check("step2-inverse", "(1 2 3)^-1 = (1 3 2)", inverse(c123) == c132)
    adj = _sym_star(e123)
    r.check(
        "step2-star",
        "E((1 2 3))^* = conj(mu) (1 3 2) + conj(theta) (1 2 3)",
        adj == _sym([(c132, sympy.conjugate(MU)), (c123, sympy.conjugate(THETA))]),
        {str(p): str(v) for p, v in adj.items()},
    )

    eqs = _sym_equations(e132, adj)
    real_ok = _same_system(eqs, [MU - sympy.conjugate(MU), THETA - sympy.conjugate(THETA)])
    r.check(
        "step2-realness",
        "comparing both expressions gives mu = conj(mu), theta = conj(theta)",
        real_ok,
        [str(e) for e in eqs],
    )

    basis_E = lambda p: e123 if p == c123 else e132
    twice = _sym_apply(basis_E, e123)
    idem = _sym_equations(e123, twice)
    expected = [MU - (MU**2 + THETA**2), THETA - 2 * MU * THETA]
    r.check(
        "step2-idempotence",
        "E(E((1 2 3))) = (mu^2 + theta^2)(1 2 3) + 2 mu theta (1 3 2)",
        _same_system(idem, expected),
        {str(p): str(v) for p, v in twice.items()},
    )

    # theta (1 - 2 mu) = 0: branch theta = 0, or mu = 1/2
    sols = set()
    for m in rational_roots([0, -1, 1]):  # theta = 0: mu^2 - mu = 0
        sols.add((m, Fraction(0)))
    half = Fraction(1, 2)
    for t in rational_roots([half**2 - half, 0, 1]):  # mu = 1/2: theta^2 = mu - mu^2
        sols.add((half, t))
    expected_pairs = {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (half, half), (half, -half)}
    r.check(
        "step2-solutions",
        "(mu, theta) in {(0, 0), (1, 0), (1/2, 1/2), (1/2, -1/2)}",
        sols == expected_pairs,
        sorted(sols),
    )

    solved = sympy.solve(expected, [MU, THETA], dict=True)
    solved_set = {(Fraction(str(s[MU])), Fraction(str(s[THETA]))) for s in solved}
    r.check(
        "step2-independent-solve",
        "an independent symbolic solve finds exactly the same four pairs",
        solved_set == expected_pairs,
        sorted(solved_set),
    )

    sat = lambda m, t: m == m * m + t * t and t == 2 * m * t
    r.check("step2-candidate-00", "(0, 0) satisfies the system", sat(Fraction(0), Fraction(0)))
    r.check("step2-candidate-plus", "(1/2, 1/2) satisfies the system", sat(half, half))
    r.check(
        "step2-candidate-11",
        "(1, 1) is rejected: theta = 2 mu theta reads 1 = 2",
        not sat(Fraction(1), Fraction(1)),
    )
    grid = _rational_grid()
    extra = [(m, t) for m in grid for t in grid if sat(m, t) and (m, t) not in expected_pairs]
    r.check(
        "step2-exhaustive",
        f"no other rational solutions among {len(grid)}^2 grid points",
        not extra,
        extra[:5],
    )
    return r


# ---------------------------------------------------------------------------
# ruling out (1/2, +-1/2)


def _hyp_E_3cycle(sign: int) -> Callable[[int, int, int], GroupRingElement]:
    """E((i j k)) = 1/2((i j k) + sign (i k j)), transported from E((1 2 3))."""
    base = linear_combine([Fraction(1, 2), Fraction(sign, 2)], [cycle(1, 2, 3), cycle(1, 3, 2)])

    def E(i: int, j: int, k: int) -> GroupRingElement:
        return conj_action(conjugator((1, 2, 3), (i, j, k)), base)

    return E


def _matches(r: ReplayReport, label: str, claim: str, got: GroupRingElement, displayed: str, P: Certified):
    want = parse_element(displayed)
    return r.check(label, claim, got == want and got in P, got)


def _replay_plus() -> ReplayReport:
    r = ReplayReport("rule-out-plus")
    P = Certified()
    E = _hyp_E_3cycle(+1)
    c123 = cycle(1, 2, 3)
    t = transposition

    h = P.assume(E(1, 2, 3), "E((1 2 3)) = 1/2((1 2 3) + (1 3 2))")
    r.check("eq-1/2-hypothesis", "E((1 2 3)) = 1/2((1 2 3)+(1 3 2)) lies in P", h in P, h)
    x123 = P.combine([2], [h])

    def x(i, j, k):
        # 2 E((i j k)) via conjugation of the hypothesis
        return P.conj(conjugator((1, 2, 3), (i, j, k)), x123)

    e124 = conj_action(t(3, 4), h)
    r.check(
        "eq-1/2-transport",
        "E((1 2 4)) = (3 4) E((1 2 3)) (3 4) = 1/2((1 2 4)+(1 4 2))",
        e124 == parse_element("1/2*(1 2 4) + 1/2*(1 4 2)") and e124 == E(1, 2, 4),
        e124,
    )
    x124 = P.conj(t(3, 4), x123)

    prod = P.product(x123, x124)
    _matches(r, "eq-1/2-product", "[(1 2 3)+(1 3 2)][(1 2 4)+(1 4 2)] = (1 3)(2 4)+(1 4 3)+(2 4 3)+(1 4)(2 3)",
             prod, "(1 3)(2 4) + (1 4 3) + (2 4 3) + (1 4)(2 3)", P)

    ad34 = P.conj(t(3, 4), prod)
    _matches(r, "eq-1/2-ad34", "(3 4)-conjugate: (1 4)(2 3)+(1 3 4)+(2 3 4)+(1 3)(2 4) in P",
             ad34, "(1 4)(2 3) + (1 3 4) + (2 3 4) + (1 3)(2 4)", P)

    sum2 = P.combine(
        [Fraction(1, 2)] * 2 + [Fraction(-1, 2)] * 2,
        [prod, ad34, x(1, 3, 4), x(2, 3, 4)],
    )
    _matches(r, "eq-1/2-sum-of-double-transpositions", "(1 3)(2 4)+(1 4)(2 3) in P",
             sum2, "(1 3)(2 4) + (1 4)(2 3)", P)

    ad23 = P.conj(t(2, 3), sum2)
    _matches(r, "eq-1/2-ad23", "(2 3)-conjugate: (1 2)(3 4)+(1 4)(2 3) in P",
             ad23, "(1 2)(3 4) + (1 4)(2 3)", P)

    diff = P.combine([1, -1], [sum2, ad23])
    _matches(r, "eq-1/2-subtraction", "(1 3)(2 4)-(1 2)(3 4) in P", diff, "(1 3)(2 4) - (1 2)(3 4)", P)

    ad24 = P.conj(t(2, 4), sum2)
    _matches(r, "eq-1/2-ad24", "(2 4)-conjugate: (1 3)(2 4)+(1 2)(3 4) in P",
             ad24, "(1 3)(2 4) + (1 2)(3 4)", P)

    d1 = P.combine([Fraction(1, 2), Fraction(1, 2)], [diff, ad24])
    _matches(r, "eq-1/2-double-transposition", "(1 3)(2 4) in P", d1, "(1 3)(2 4)", P)

    d2 = P.conj(t(3, 4), d1)
    _matches(r, "eq-1/2-ad34-double-transposition", "(1 4)(2 3) in P", d2, "(1 4)(2 3)", P)

    a = P.combine([1, -1, -1], [prod, d1, d2])
    _matches(r, "eq-1/2-a", "a = (1 4 3)+(2 4 3) in P", a, "(1 4 3) + (2 4 3)", P)

    a25 = P.conj(t(2, 5), a)
    _matches(r, "eq-1/2-ad25-a", "(2 5)a(2 5) = (1 4 3)+(5 4 3) in P", a25, "(1 4 3) + (5 4 3)", P)

    a12 = P.conj(t(1, 2), a25)
    _matches(r, "eq-1/2-ad12", "(1 2)-conjugate: (2 4 3)+(5 4 3) in P", a12, "(2 4 3) + (5 4 3)", P)

    adiff = P.combine([1, -1], [a, a25])
    _matches(r, "eq-1/2-a-difference", "a - (2 5)a(2 5) = (2 4 3)-(5 4 3) in P",
             adiff, "(2 4 3) - (5 4 3)", P)

    z = P.combine([Fraction(1, 2), Fraction(1, 2)], [adiff, a12])
    _matches(r, "eq-1/2-243-in-P", "(2 4 3) in P", z, "(2 4 3)", P)

    w = P.conj(conjugator((2, 4, 3), (1, 2, 3)), z)
    _matches(r, "eq-1/2-123-in-P", "(1 2 3) in P by conjugation", w, "(1 2 3)", P)

    # an element of P is fixed by E, contradicting the hypothesis
    r.check(
        "eq-1/2-contradiction",
        "(1 2 3) in P forces E((1 2 3)) = (1 2 3), which differs from 1/2((1 2 3)+(1 3 2))",
        w == element(c123) and element(c123) != E(1, 2, 3),
        linear_combine([1, -1], [c123, E(1, 2, 3)]),
    )
    return r


def _replay_minus() -> ReplayReport:
    r = ReplayReport("rule-out-minus")
    P = Certified()
    E = _hyp_E_3cycle(-1)
    t = transposition

    h = P.assume(E(1, 2, 3), "E((1 2 3)) = 1/2((1 2 3) - (1 3 2))")
    r.check("eq--1/2-hypothesis", "E((1 2 3)) = 1/2((1 2 3)-(1 3 2)) lies in P", h in P, h)
    x123 = P.combine([2], [h])

    def x(i, j, k):
        return P.conj(conjugator((1, 2, 3), (i, j, k)), x123)

    e124 = conj_action(t(3, 4), h)
    r.check(
        "eq--1/2-transport",
        "E((1 2 4)) = 1/2((1 2 4)-(1 4 2))",
        e124 == parse_element("1/2*(1 2 4) - 1/2*(1 4 2)") and e124 == E(1, 2, 4),
        e124,
    )
    x124 = P.conj(t(3, 4), x123)

    prod = P.product(x123, x124)
    _matches(r, "eq--1/2-product", "[(1 2 3)-(1 3 2)][(1 2 4)-(1 4 2)] = (1 3)(2 4)-(1 4 3)-(2 4 3)+(1 4)(2 3)",
             prod, "(1 3)(2 4) - (1 4 3) - (2 4 3) + (1 4)(2 3)", P)

    ad23 = P.conj(t(2, 3), prod)
    _matches(r, "eq--1/2-ad23", "(2 3)-conjugate: (1 2)(3 4)-(1 4 2)-(3 4 2)+(1 4)(2 3) in P",
             ad23, "(1 2)(3 4) - (1 4 2) - (3 4 2) + (1 4)(2 3)", P)

    y = x(2, 3, 4)
    r.check(
        "eq--1/2-aux-234",
        "-(2 4 3)+(3 4 2) = -(2 4 3)+(2 3 4) in P",
        y == parse_element("-(2 4 3) + (3 4 2)") and y in P,
        y,
    )
    mixed = P.combine([1, -1, -1], [prod, ad23, y])
    _matches(r, "eq--1/2-mixed", "(1 3)(2 4)-(1 2)(3 4)-(1 4 3)+(1 4 2) in P",
             mixed, "(1 3)(2 4) - (1 2)(3 4) - (1 4 3) + (1 4 2)", P)

    mixed2 = P.conj(t(1, 3), mixed)
    _matches(r, "eq--1/2-2nd-mixed", "(1 3)-conjugate: (1 3)(2 4)-(2 3)(1 4)-(1 3 4)+(3 4 2) in P",
             mixed2, "(1 3)(2 4) - (2 3)(1 4) - (1 3 4) + (3 4 2)", P)

    z = x(1, 3, 4)
    r.check(
        "eq--1/2-aux-134",
        "-(1 4 3)+(1 3 4) in P",
        z == parse_element("-(1 4 3) + (1 3 4)") and z in P,
        z,
    )
    mm = P.combine([1, -1, -1], [mixed, mixed2, z])
    _matches(r, "eq--1/2-mixed-minus-2nd", "-(1 2)(3 4)+(2 3)(1 4)+(1 4 2)-(3 4 2) in P",
             mm, "-(1 2)(3 4) + (2 3)(1 4) + (1 4 2) - (3 4 2)", P)

    s = P.combine([Fraction(1, 2), Fraction(1, 2)], [ad23, mm])
    _matches(r, "eq--1/2-sum", "(2 3)(1 4)-(3 4 2) in P", s, "(2 3)(1 4) - (3 4 2)", P)

    f = P.combine([1, -1], [ad23, s])
    _matches(r, "eq--1/2-final-member", "(1 2)(3 4)-(1 4 2) in P", f, "(1 2)(3 4) - (1 4 2)", P)

    c142 = element(cycle(1, 4, 2))
    e142 = E(1, 4, 2)
    r.check(
        "eq--1/2-E142",
        "E((1 4 2)) = 1/2((1 4 2)-(1 2 4))",
        e142 == parse_element("1/2*(1 4 2) - 1/2*(1 2 4)"),
        e142,
    )
    ip = inner_product(c142 - e142, f)
    r.check(
        "eq--1/2-inner-product",
        "<(1 4 2) - E((1 4 2)), (1 2)(3 4)-(1 4 2)> = -1/2",
        ip == Fraction(-1, 2),
        ip,
    )
    # x - E(x) is orthogonal to every element of P
    r.check(
        "eq--1/2-contradiction",
        "the inner product must vanish since (1 2)(3 4)-(1 4 2) lies in P; -1/2 != 0",
        f in P and ip != 0,
        ip,
    )
    return r


def replay_rule_out_symmetry(case: str) -> ReplayReport:
    if case == "plus":
        return _replay_plus()
    if case == "minus":
        return _replay_minus()
    raise ValueError(f"case must be 'plus' or 'minus', got {case!r}")


# ---------------------------------------------------------------------------
# finite closures


def _closure(gens: Iterable[Perm]) -> set[Perm]:
    gens = list(gens)
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = g * h
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def replay_conclusion(branch: str, seed: int = 0, n_max: int = 6) -> ReplayReport:
    if branch == "full":
        return _conclusion_full(n_max)
    if branch == "alternating":
        return _conclusion_alternating(n_max)
    if branch == "trivial":
        return _conclusion_trivial(seed)
    raise ValueError(f"branch must be full, alternating or trivial, got {branch!r}")


def _conclusion_full(n_max: int) -> ReplayReport:
    r = ReplayReport("step3-full")
    t12 = transposition(1, 2)
    E12 = element(t12)
    bad = []
    for i, j in itertools.permutations(range(1, n_max + 1), 2):
        s = conjugator((1, 2), (i, j))
        if conj_action(s, E12) != element(transposition(i, j)):
            bad.append((i, j))
    r.check(
        "full-transport",
        f"E((i j)) = s E((1 2)) s^-1 = (i j) for all i != j in [{n_max}]",
        not bad,
        bad,
    )
    orders = {}
    for n in range(2, n_max + 1):
        gens = [transposition(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
        orders[n] = len(_closure(gens))
    r.check(
        "full-generation",
        f"transpositions generate S_[n] for n <= {n_max}",
        all(orders[n] == math.factorial(n) for n in orders),
        orders,
    )
    return r


def _conclusion_alternating(n_max: int) -> ReplayReport:
    r = ReplayReport("step3-alternating")
    c123 = cycle(1, 2, 3)
    bad = []
    for i, j, k in itertools.permutations(range(1, n_max + 1), 3):
        s = conjugator((1, 2, 3), (i, j, k))
        if conj_action(s, element(c123)) != element(cycle(i, j, k)):
            bad.append((i, j, k))
    r.check(
        "alt-transport",
        f"E((i j k)) = s (1 2 3) s^-1 = (i j k) for all distinct triples in [{n_max}]",
        not bad,
        bad,
    )
    orders, even_ok = {}, True
    for n in range(3, n_max + 1):
        gens = [cycle(*c) for c in itertools.permutations(range(1, n + 1), 3)]
        group = _closure(gens)
        orders[n] = len(group)
        even_ok &= group == {p for p in all_permutations(n) if parity(p) == 1}
    r.check(
        "alt-generation",
        f"3-cycles generate A_[n] for 3 <= n <= {n_max}",
        even_ok and all(orders[n] == math.factorial(n) // 2 for n in orders),
        orders,
    )
    t12 = transposition(1, 2)
    coset_ok = {}
    for n in range(5, n_max + 1):
        full = set(all_permutations(n))
        alt = {p for p in full if parity(p) == 1}
        coset = {t12 * p for p in alt}
        coset_ok[n] = not (alt & coset) and (alt | coset) == full
    r.check(
        "alt-coset",
        "S_[n] = A_[n] disjoint-union (1 2)A_[n] for n >= 5",
        all(coset_ok.values()),
        coset_ok,
    )
    H = NormalSubgroup.ALTERNATING
    E12 = expectation(H, t12)
    killed = all(
        expectation(H, t12 * p) == E12 * p and not expectation(H, t12 * p)
        for p in all_permutations(min(n_max, 5))
        if parity(p) == 1
    )
    r.check(
        "alt-odd-coset-vanishes",
        "E((1 2) s) = E((1 2)) s = 0 for every even s",
        E12 == 0 and killed,
        E12,
    )
    return r


def _conclusion_trivial(seed: int) -> ReplayReport:
    r = ReplayReport("step3-trivial")
    chk = check_regular_from_3cycle([1], [REGULAR], seed=seed)
    r.check(
        "trivial-regular",
        "phi((1 2 3)) = 0 forces phi = delta_e",
        chk.status == "pass",
        chk.to_json(),
    )
    H = NormalSubgroup.TRIVIAL
    phi = expectation_trace(H)
    rng = random.Random(seed)
    sample = [random_permutation(rng, 10) for _ in range(100)]
    ok = True
    for s in sample:
        Es = expectation(H, s)
        norm = inner_product(Es, Es)
        ok &= not Es and norm == phi(s) == 0
    r.check(
        "trivial-norm",
        "||E(s)||^2 = phi(s) = 0, hence E(s) = 0 for sampled s != e",
        ok,
        len(sample),
    )
    r.check("trivial-unit", "E(e) = e, so P = C", expectation(H, IDENTITY) == element(1))
    return r


# ---------------------------------------------------------------------------
# normal subgroups of S_n


@dataclass
class NormalSubgroupInfo:
    order: int
    generators: list[Perm]
    elements: frozenset = field(repr=False, default=frozenset())

    def to_json(self) -> dict:
        return {"order": self.order, "generators": [str(g) for g in self.generators]}


def _tmul(a: tuple, b: tuple) -> tuple:
    # (a b)(i) = a(b(i)) on 0-based one-line tuples
    return tuple(a[i] for i in b)


def _tinv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def _tuple_closure(gens: Iterable[tuple], n: int) -> frozenset:
    e = tuple(range(n))
    gens = list(gens)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = _tmul(g, h)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def _to_perm(t: tuple) -> Perm:
    return Perm.from_images(i + 1 for i in t)


def _generators_for(elements: frozenset, n: int) -> list[Perm]:
    ordered = sorted(elements, key=lambda t: _to_perm(t).sort_key())
    gens: list[tuple] = []
    current = frozenset({tuple(range(n))})
    for g in ordered:
        if current == elements:
            break
        if g not in current:
            gens.append(g)
            current = _tuple_closure(gens, n)
    return [_to_perm(g) for g in gens]


def enumerate_normal_subgroups(n: int) -> list[NormalSubgroupInfo]:
    """Normal subgroups of S_n as unions of conjugacy classes closed under products."""
    if not 2 <= n <= 6:
        raise ValueError("n must satisfy 2 <= n <= 6")
    group = list(itertools.permutations(range(n)))
    e = tuple(range(n))
    conj_gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]

    classes: list[frozenset] = []
    seen: set[tuple] = set()
    for g in group:
        if g in seen:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for x in frontier:
                for s in conj_gens:
                    y = _tmul(_tmul(s, x), _tinv(s))
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orbit
        classes.append(frozenset(orbit))

    identity_class = next(c for c in classes if e in c)
    others = [c for c in classes if c is not identity_class]
    order = math.factorial(n)
    found = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            size = 1 + sum(len(c) for c in combo)
            if order % size:
                continue
            H = frozenset(identity_class.union(*combo))
            if all(_tmul(a, b) in H for a in H for b in H):
                found.append(H)
    found.sort(key=len)
    return [NormalSubgroupInfo(len(H), _generators_for(H, n), H) for H in found]


def all_subgroups_naive(n: int) -> list[frozenset]:
    """Every subgroup of S_n, grown one generator at a time (small n only)."""
    group = list(itertools.permutations(range(n)))
    subgroups = {frozenset({tuple(range(n))})}
    frontier = set(subgroups)
    while frontier:
        nxt = set()
        for H in frontier:
            for g in group:
                if g in H:
                    continue
                K = _tuple_closure(list(H) + [g], n)
                if K not in subgroups:
                    subgroups.add(K)
                    nxt.add(K)
        frontier = nxt
    return sorted(subgroups, key=len)


def normal_naive(n: int) -> list[frozenset]:
    group = list(itertools.permutations(range(n)))
    return [
        H
        for H in all_subgroups_naive(n)
        if all(_tmul(_tmul(g, h), _tinv(g)) in H for g in group for h in H)
    ]


def _is_normal_subgroup(H: frozenset, n: int) -> bool:
    group = list(itertools.permutations(range(n)))
    closed = all(_tmul(a, b) in H for a in H for b in H) and all(_tinv(a) in H for a in H)
    normal = all(_tmul(_tmul(g, h), _tinv(g)) in H for g in group for h in H)
    return closed and normal


# ---------------------------------------------------------------------------
# finite groups: only C_1 and C_2 can be ISR


def finite_isr_counting(n: int) -> ReplayReport:
    """Counting check on the abelian model ``l^infty([n])``.

    The subalgebra ``{x : x_1 = x_2}`` would have to be ``L(H)`` with
    ``#H = n - 1``; Lagrange then needs ``(n - 1) | n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = ReplayReport(f"finite-isr-{n}")
    if n == 1:
        r.check("finite-isr-vacuous", "the trivial group has only one subalgebra", True, 1)
        return r
    # block indicator vectors spanning the pinched subalgebra
    blocks = [[1, 1] + [0] * (n - 2)] + [[1 if i == j else 0 for i in range(n)] for j in range(2, n)]
    dim = sympy.Matrix(blocks).rank()
    r.check("finite-isr-dimension", f"dim {{x in l^infty([{n}]) : x_1 = x_2}} = {n - 1}", dim == n - 1, dim)
    divides = n % (n - 1) == 0
    r.check(
        "finite-isr-lagrange",
        f"(n - 1) | n for n = {n}" if divides else f"{n - 1} does not divide {n}",
        divides,
        {"n": n, "n-1": n - 1},
    )
    return r


# ---------------------------------------------------------------------------
# everything


SECTIONS = (
    "cycle-notation",
    "normal-subgroups",
    "positive-definite",
    "thoma-formula",
    "regular-character",
    "finite-isr",
    "relative-commutant",
    "induced-trace",
    "rule-out-plus",
    "rule-out-minus",
    "support-control",
    "transposition-branch",
    "step1",
    "step2",
    "step3-full",
    "step3-alternating",
    "step3-trivial",
)


def _section_notation(seed: int) -> ReplayReport:
    r = ReplayReport("cycle-notation")
    s = parse_cycles("(1 2 3)")
    r.check("notation-cycle", "(1 2 3) sends 1->2, 2->3, 3->1", s.mapping == {1: 2, 2: 3, 3: 1}, s)
    rng = random.Random(seed)
    ok = True
    for _ in range(100):
        k = rng.randint(2, 5)
        src = rng.sample(range(1, 12), k)
        dst = rng.sample(range(1, 12), k)
        g = conjugator(src, dst)
        ok &= all(g(a) == b for a, b in zip(src, dst))
        ok &= conjugate(g, cycle(*src)) == cycle(*dst)
    r.check("notation-conjugator", "s (n_1 ... n_k) s^-1 = (m_1 ... m_k) whenever s n_i = m_i", ok, 100)
    a, b = cycle(1, 2, 3), cycle(4, 5)
    r.check("notation-disjoint-commute", "disjointly supported permutations commute", a * b == b * a)
    return r


def _section_normal_subgroups() -> ReplayReport:
    r = ReplayReport("normal-subgroups")
    for n in (5, 6):
        subs = enumerate_normal_subgroups(n)
        orders = [h.order for h in subs]
        r.check(
            f"normal-subgroups-S{n}",
            f"S_[{n}] has exactly the normal subgroups {{e}}, A_[{n}], S_[{n}]",
            orders == [1, math.factorial(n) // 2, math.factorial(n)]
            and all(_is_normal_subgroup(h.elements, n) for h in subs),
            [h.to_json() for h in subs],
        )
    klein = [h for h in enumerate_normal_subgroups(4) if h.order == 4]
    r.check(
        "normal-subgroups-klein",
        "S_[4] has an extra normal subgroup of order 4, hence the n >= 5 restriction",
        len(klein) == 1,
        [h.to_json() for h in klein],
    )
    t12 = transposition(1, 2)
    idx = {}
    for n in (5, 6):
        full = set(all_permutations(n))
        alt = {p for p in full if contains(NormalSubgroup.ALTERNATING, p)}
        idx[n] = len(full) // len(alt)
        idx[n] = idx[n] if {t12 * p for p in alt} | alt == full else -1
    r.check("normal-subgroups-index", "[S_[n] : A_[n]] = 2 via the coset (1 2)A_[n]", set(idx.values()) == {2}, idx)
    return r


def _planted_counterexample():
    # 1 at e, 2 on transpositions, 0 elsewhere; its Gram matrix on {e, (1 2)} is [[1, 2], [2, 1]]
    return table_function({((2, 1),): 2}, default=0, label="planted non-positive")


def _section_positive_definite(seed: int) -> ReplayReport:
    r = ReplayReport("positive-definite")
    rng = random.Random(seed)
    s4 = all_permutations(4)
    verdicts = []
    for _ in range(3):
        p = random_parameters(rng)
        cert = certify_psd(gram_matrix(thoma_character(p), s4))
        verdicts.append(cert.is_psd and cert.verify(gram_matrix(thoma_character(p), s4)))
    r.check("pd-thoma", "sampled Thoma characters have PSD Gram matrices on S_[4]", all(verdicts), len(verdicts))
    phi = _planted_counterexample()
    M = gram_matrix(phi, s4)
    cert = certify_psd(M)
    r.check(
        "pd-reject",
        "a class function with value 2 on transpositions is not positive definite",
        not cert.is_psd and cert.verify(M),
        cert.value,
    )
    return r


def _section_thoma(seed: int) -> ReplayReport:
    r = ReplayReport("thoma-formula")
    rng = random.Random(seed)
    c123 = cycle(1, 2, 3)
    ok = True
    for _ in range(100):
        p = random_parameters(rng)
        v = thoma_eval(p, c123)
        ok &= v == sum(a**3 for a in p.alpha) + sum(b**3 for b in p.beta) and v >= 0
    r.check("thoma-3cycle", "chi((1 2 3)) = sum a_i^3 + sum b_j^3 >= 0", ok, 100)
    ok = all(thoma_eval(SIGN, s) == parity(s) for s in (random_permutation(rng, 10) for _ in range(200)))
    r.check("thoma-sign", "beta = (1) gives the sign character", ok, 200)
    ok = all(thoma_eval(REGULAR, s) == 0 for s in (random_permutation(rng, 10) for _ in range(100)))
    r.check("thoma-regular", "empty parameters give delta_e", ok and thoma_eval(REGULAR, IDENTITY) == 1)
    exact = all(row.error == 0 for p in (TRIVIAL, SIGN) for row in thoma_limit_experiment(p, 2, [8, 12]))
    r.check("thoma-finite-anchors", "trivial and sign characters of S_n match exactly", exact)
    return r


def _section_regular(seed: int) -> ReplayReport:
    r = ReplayReport("regular-character")
    res = check_regular_from_3cycle([1], [REGULAR], seed=seed)
    r.check("regular-pass", "phi((1 2 3)) = 0 gives phi = delta_e", res.status == "pass", res.to_json())
    res2 = check_regular_from_3cycle([Fraction(1, 2)] * 2, [REGULAR, REGULAR], seed=seed)
    r.check("regular-duplicate", "duplicated decomposition still passes", res2.status == "pass", res2.to_json())
    res3 = check_regular_from_3cycle([1], [ThomaParameters((Fraction(1, 2),))], seed=seed)
    r.check(
        "regular-not-applicable",
        "alpha = (1/2) has phi((1 2 3)) = 1/8, so the statement does not apply",
        res3.status == "not-applicable" and res3.value_on_3cycle == Fraction(1, 8),
        res3.to_json(),
    )
    return r


def _section_finite_isr() -> ReplayReport:
    r = ReplayReport("finite-isr")
    verdict = {n: finite_isr_counting(n).passed for n in range(1, 9)}
    r.check(
        "finite-isr-classification",
        "the counting check passes exactly for n = 1, 2",
        verdict == {n: n <= 2 for n in verdict},
        verdict,
    )
    return r


def _section_commutant() -> ReplayReport:
    r = ReplayReport("relative-commutant")
    ok = True
    cases = [(parse_cycles("(1 2)"), {1, 3, 4, 5, 6}, 3), (parse_cycles("(1 3 2)(4 5)"), set(range(2, 20, 2)), 4)]
    witness = {}
    for s, A, count in cases:
        orbit = conjugation_orbit(s, A, count)
        i = min(support(s) & A)
        js = sorted(j for j in A if j > max(support(s)))[:count]
        ok &= len(set(orbit)) == count
        ok &= [support(x) for x in orbit] == [(support(s) - {i}) | {j} for j in js]
        witness[str(s)] = [str(x) for x in orbit]
    try:
        conjugation_orbit(parse_cycles("(1 2)"), {3, 4}, 1)
        ok = False
    except ValueError:
        pass
    r.check(
        "commutant-orbit",
        "t_k s t_k^-1 with t_k = (i j_k) have supports (supp(s) - {i}) + {j_k}, pairwise distinct",
        ok,
        witness,
    )
    return r


def _section_induced_trace(seed: int) -> ReplayReport:
    r = ReplayReport("induced-trace")
    s4 = all_permutations(4)
    rng = random.Random(seed)
    pairs = [(random_permutation(rng, 8), random_permutation(rng, 8)) for _ in range(50)]
    for H in NormalSubgroup:
        phi = expectation_trace(H)
        M = gram_matrix(phi, s4)
        cert = certify_psd(M)
        r.check(
            f"induced-trace-{H.value}",
            f"phi(g) = tau(E(g) g^-1) for {H.value} is normalized, conjugation invariant and PSD on S_[4]",
            phi(IDENTITY) == 1 and conjugacy_invariant(phi, pairs) and cert.is_psd and cert.verify(M),
            [fraction_str(d) for d in cert.pivots],
        )
        ok = all(
            inner_product(expectation(H, s), expectation(H, s)) == phi(s)
            == trace(expectation(H, s) * element(inverse(s)))
            for s in all_permutations(5)
        )
        r.check(f"induced-trace-norm-{H.value}", "||E(s)||^2 = tau(E(s) s^-1) = phi(s) on S_[5]", ok)
    return r


def _section_support_control() -> ReplayReport:
    r = ReplayReport("support-control")
    perms = [p for p in all_permutations(5) if p]
    ok = all(support_control_check(H, s) for H in NormalSubgroup for s in perms)
    r.check("support-control", "E(s) lies in L(S_supp(s)) for every s != e in S_[5]", ok, len(perms))
    # invariance under S_{N - supp(s)} is what forces it
    s = cycle(1, 2, 3)
    outside = [transposition(i, j) for i, j in itertools.combinations(range(4, 9), 2)]
    r.check(
        "support-control-fixed",
        "t s t^-1 = s for t supported off supp(s)",
        all(conjugate(t, s) == s for t in outside),
    )
    return r


def replay_all(seed: int = 0) -> dict:
    reports = [
        _section_notation(seed),
        _section_normal_subgroups(),
        _section_positive_definite(seed),
        _section_thoma(seed),
        _section_regular(seed),
        _section_finite_isr(),
        _section_commutant(),
        _section_induced_trace(seed),
        replay_rule_out_symmetry("plus"),
        replay_rule_out_symmetry("minus"),
        _section_support_control(),
        replay_transposition_branch(),
        replay_step1(),
        replay_step2_solutions(),
        replay_conclusion("full", seed),
        replay_conclusion("alternating", seed),
        replay_conclusion("trivial", seed),
    ]
    assert tuple(r.case for r in reports) == SECTIONS
    overall = all(r.passed for r in reports)
    return {
        "case": "all",
        "seed": seed,
        "sections": [r.to_json() for r in reports],
        "verified": {r.case: r.passed for r in reports},
        "overall": "pass" if overall else "fail",
    }
