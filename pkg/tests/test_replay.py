import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from thoma_lab import replay as rp
from thoma_lab.group_ring import GroupRingElement, element, parse_element
from thoma_lab.perm import cycle, transposition

F = Fraction


def witness_element(report, label) -> GroupRingElement:
    return GroupRingElement.from_json(report.step(label).to_json()["witness"])


class TestReport:
    def test_overall(self):
        r = rp.ReplayReport("demo")
        assert r.overall == "fail"  # no steps
        r.check("a", "ok", True, element(cycle(1, 2)))
        assert r.overall == "pass"
        r.check("b", "bad", False)
        assert r.overall == "fail"
        doc = r.to_json()
        assert doc["steps"][0]["witness"] == [{"coeff": {"re": "1/1", "im": "0/1"}, "perm": "(1 2)"}]
        assert "FAIL b" in r.to_text()
        with pytest.raises(KeyError):
            r.step("missing")


class TestCertified:
    def test_unit_and_closure(self):
        P = rp.Certified()
        assert element(1) in P
        x = P.assume(parse_element("(1 2 3) + (1 3 2)"), "hypothesis")
        y = P.conj(transposition(3, 4), x)
        z = P.product(x, y)
        assert z in P and P.reason(z) == "product"
        assert P.star(z) in P

    def test_rejects_uncertified(self):
        P = rp.Certified()
        stranger = element(cycle(1, 2, 3))
        with pytest.raises(rp.UncertifiedError):
            P.product(stranger, element(1))
        with pytest.raises(rp.UncertifiedError):
            P.conj(transposition(1, 2), stranger)
        with pytest.raises(rp.UncertifiedError):
            P.combine([1], [stranger])

    def test_displayed_mismatch_is_caught(self):
        r = rp.ReplayReport("mutation")
        P = rp.Certified()
        x = P.assume(parse_element("(1 3)(2 4) + (1 4 3)"), "h")
        assert not rp._matches(r, "wrong", "", x, "(1 3)(2 4) - (1 4 3)", P)
        assert not rp._matches(r, "uncertified", "", element(cycle(1, 4, 3)), "(1 4 3)", P)
        assert rp._matches(r, "right", "", x, "(1 4 3) + (1 3)(2 4)", P)


class TestRationalRoots:
    def test_examples(self):
        assert rp.rational_roots([0, -1, 1]) == [0, 1]
        assert rp.rational_roots([F(-1, 4), 0, 1]) == [F(-1, 2), F(1, 2)]
        assert rp.rational_roots([2, 0, 1]) == []
        with pytest.raises(ValueError):
            rp.rational_roots([0, 0])

    @given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=4), min_size=1, max_size=3),
           st.integers(0, 2))
    def test_sympy_oracle(self, roots, extra):
        x = sympy.Symbol("x")
        poly = sympy.expand(sympy.prod([x - sympy.Rational(r.numerator, r.denominator) for r in roots]) * (x**2 + 1) ** extra)
        coeffs = [F(str(c)) for c in reversed(sympy.Poly(poly, x).all_coeffs())]
        assert rp.rational_roots(coeffs) == sorted(set(roots))


class TestTranspositionBranch:
    def test_passes(self):
        r = rp.replay_transposition_branch()
        assert r.passed
        assert r.step("tb-branches").witness == [{"mu": 0, "c": "free"}, {"mu": 1, "c": 0}]

    def test_candidates(self):
        r = rp.replay_transposition_branch()
        for label in ("tb-candidate-10", "tb-candidate-00", "tb-candidate-half", "tb-exhaustive"):
            assert r.step(label).verified


class TestStep1:
    def test_passes(self):
        r = rp.replay_step1()
        assert r.passed
        assert r.step("step1-identity-1").witness == transposition(1, 2)


class TestStep2:
    def test_solution_set(self):
        r = rp.replay_step2_solutions()
        assert r.passed
        half = F(1, 2)
        assert set(r.step("step2-solutions").witness) == {(0, 0), (1, 0), (half, half), (half, -half)}

    def test_grid_oracle(self):
        # direct search over a wider grid than the replay uses
        grid = {F(p, q) for q in range(1, 9) for p in range(-16, 17)}
        sols = {(m, t) for m in grid for t in grid if m == m * m + t * t and t == 2 * m * t}
        assert sols == {(0, 0), (1, 0), (F(1, 2), F(1, 2)), (F(1, 2), F(-1, 2))}


DISPLAYED_PLUS = {
    "eq-1/2-product": "(1 3)(2 4) + (1 4 3) + (2 4 3) + (1 4)(2 3)",
    "eq-1/2-ad34": "(1 4)(2 3) + (1 3 4) + (2 3 4) + (1 3)(2 4)",
    "eq-1/2-sum-of-double-transpositions": "(1 3)(2 4) + (1 4)(2 3)",
    "eq-1/2-ad23": "(1 2)(3 4) + (1 4)(2 3)",
    "eq-1/2-subtraction": "(1 3)(2 4) - (1 2)(3 4)",
    "eq-1/2-ad24": "(1 3)(2 4) + (1 2)(3 4)",
    "eq-1/2-double-transposition": "(1 3)(2 4)",
    "eq-1/2-a": "(1 4 3) + (2 4 3)",
    "eq-1/2-ad25-a": "(1 4 3) + (5 4 3)",
    "eq-1/2-ad12": "(2 4 3) + (5 4 3)",
    "eq-1/2-a-difference": "(2 4 3) - (5 4 3)",
    "eq-1/2-243-in-P": "(2 4 3)",
}

DISPLAYED_MINUS = {
    "eq--1/2-product": "(1 3)(2 4) - (1 4 3) - (2 4 3) + (1 4)(2 3)",
    "eq--1/2-ad23": "(1 2)(3 4) - (1 4 2) - (3 4 2) + (1 4)(2 3)",
    "eq--1/2-mixed": "(1 3)(2 4) - (1 2)(3 4) - (1 4 3) + (1 4 2)",
    "eq--1/2-2nd-mixed": "(1 3)(2 4) - (2 3)(1 4) - (1 3 4) + (3 4 2)",
    "eq--1/2-mixed-minus-2nd": "-(1 2)(3 4) + (2 3)(1 4) + (1 4 2) - (3 4 2)",
    "eq--1/2-sum": "(2 3)(1 4) - (3 4 2)",
    "eq--1/2-final-member": "(1 2)(3 4) - (1 4 2)",
}


class TestRuleOut:
    @pytest.mark.parametrize("label,text", DISPLAYED_PLUS.items())
    def test_plus_witnesses(self, label, text):
        r = rp.replay_rule_out_symmetry("plus")
        assert r.step(label).verified
        assert witness_element(r, label) == parse_element(text)

    @pytest.mark.parametrize("label,text", DISPLAYED_MINUS.items())
    def test_minus_witnesses(self, label, text):
        r = rp.replay_rule_out_symmetry("minus")
        assert r.step(label).verified
        assert witness_element(r, label) == parse_element(text)

    def test_endpoints(self):
        plus = rp.replay_rule_out_symmetry("plus")
        minus = rp.replay_rule_out_symmetry("minus")
        assert plus.passed and minus.passed
        assert plus.steps[-1].label == "eq-1/2-contradiction"
        assert minus.step("eq--1/2-inner-product").witness == F(-1, 2)
        assert minus.steps[-1].to_json()["witness"] == {"re": "-1/2", "im": "0/1"}

    def test_recompute_plus_chain_by_hand(self):
        # independent recomputation from the product formula down to (2 4 3)
        E = parse_element
        prod = E("(1 2 3) + (1 3 2)") * E("(1 2 4) + (1 4 2)")
        s = (prod + prod.__class__({transposition(3, 4) * p * transposition(3, 4): c for p, c in prod})
             - E("(1 3 4) + (1 4 3)") - E("(2 3 4) + (2 4 3)")) * F(1, 2)
        assert s == E("(1 3)(2 4) + (1 4)(2 3)")

    def test_bad_case(self):
        with pytest.raises(ValueError):
            rp.replay_rule_out_symmetry("zero")

    def test_wrong_hypothesis_breaks_chain(self, monkeypatch):
        # with the wrong sign the displayed elements no longer match
        monkeypatch.setattr(rp, "_hyp_E_3cycle", lambda sign, orig=rp._hyp_E_3cycle: orig(-sign))
        assert not rp.replay_rule_out_symmetry("plus").passed
        assert not rp.replay_rule_out_symmetry("minus").passed


class TestConclusion:
    @pytest.mark.parametrize("branch", ["full", "alternating", "trivial"])
    def test_branches(self, branch):
        assert rp.replay_conclusion(branch, seed=3).passed

    def test_bad_branch(self):
        with pytest.raises(ValueError):
            rp.replay_conclusion("klein")


class TestNormalSubgroups:
    @pytest.mark.parametrize("n,orders", [(2, [1, 2]), (3, [1, 3, 6]), (4, [1, 4, 12, 24]),
                                          (5, [1, 60, 120]), (6, [1, 360, 720])])
    def test_orders(self, n, orders):
        subs = rp.enumerate_normal_subgroups(n)
        assert [h.order for h in subs] == orders
        for h in subs:
            assert rp._is_normal_subgroup(h.elements, n)
            assert rp._tuple_closure([tuple(g(i + 1) - 1 for i in range(n)) for g in h.generators], n) == h.elements

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_naive_cross_check(self, n):
        fast = {h.elements for h in rp.enumerate_normal_subgroups(n)}
        assert fast == set(rp.normal_naive(n))

    def test_subgroup_counts_naive(self):
        # S_3 has 6 subgroups, S_4 has 30
        assert len(rp.all_subgroups_naive(3)) == 6
        assert len(rp.all_subgroups_naive(4)) == 30

    def test_klein(self):
        (klein,) = [h for h in rp.enumerate_normal_subgroups(4) if h.order == 4]
        expected = {(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)}
        assert klein.elements == expected

    def test_range(self):
        with pytest.raises(ValueError):
            rp.enumerate_normal_subgroups(7)


class TestFiniteISR:
    def test_examples(self):
        assert rp.finite_isr_counting(2).passed
        assert not rp.finite_isr_counting(3).passed
        assert rp.finite_isr_counting(3).step("finite-isr-lagrange").witness == {"n": 3, "n-1": 2}
        assert rp.finite_isr_counting(1).passed

    @pytest.mark.parametrize("n", range(1, 12))
    def test_lagrange(self, n):
        assert rp.finite_isr_counting(n).passed == (n <= 2)


class TestReplayAll:
    def test_sections(self):
        doc = rp.replay_all(seed=0)
        assert doc["overall"] == "pass"
        assert [s["case"] for s in doc["sections"]] == list(rp.SECTIONS)
        assert all(doc["verified"].values())
        json.dumps(doc)

    def test_witnesses_recompute(self):
        # every group-ring witness of the symmetry chains round-trips exactly
        for case in ("plus", "minus"):
            r = rp.replay_rule_out_symmetry(case)
            for s in r.steps:
                if isinstance(s.witness, GroupRingElement):
                    assert GroupRingElement.from_json(s.to_json()["witness"]) == s.witness
