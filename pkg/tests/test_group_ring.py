import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from thoma_lab.group_ring import (
    GroupRingElement,
    Scalar,
    conj_action,
    element,
    fraction_str,
    inner_product,
    linear_combine,
    multiply,
    parse_element,
    parse_fraction,
    star,
    trace,
)
from thoma_lab.perm import IDENTITY, parse_cycles

from conftest import perms, ring_elements, scalars

P = parse_cycles
E = parse_element
N = 5


def table_convolution(x: GroupRingElement, y: GroupRingElement) -> dict:
    # oracle: convolve over one-line tuples of [N] with the rule (ab)(i) = a(b(i))
    out: dict = {}
    for p, a in x:
        tp = tuple(p(i) for i in range(1, N + 1))
        for q, b in y:
            tq = tuple(q(i) for i in range(1, N + 1))
            key = tuple(tp[tq[i] - 1] for i in range(N))
            out[key] = out.get(key, Scalar()) + a * b
    return {k: v for k, v in out.items() if v}


class TestScalar:
    def test_arithmetic(self):
        i = Scalar(0, 1)
        assert i * i == -1
        assert (Scalar(1, 2) * Scalar(3, -1)) == Scalar(5, 5)
        assert Scalar(1, 1) / Scalar(1, 1) == 1
        assert Scalar(Fraction(1, 2)) + Fraction(1, 2) == 1
        assert Scalar(3, 4).abs2() == 25
        assert Scalar(3, 4).conj() == Scalar(3, -4)

    def test_json(self):
        s = Scalar(Fraction(-1, 2), Fraction(3))
        assert s.to_json() == {"re": "-1/2", "im": "3/1"}
        assert Scalar.from_json(s.to_json()) == s

    def test_fractions(self):
        assert fraction_str(Fraction(6, -4)) == "-3/2"
        assert parse_fraction(" -3/2 ") == Fraction(-3, 2)
        with pytest.raises(ValueError):
            parse_fraction("0.5")
        with pytest.raises(ZeroDivisionError):
            Scalar(1) / Scalar(0)

    @given(scalars(), scalars(), scalars())
    def test_field_laws(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert (a * b).conj() == a.conj() * b.conj()
        if b:
            assert (a / b) * b == a


class TestElements:
    def test_zero_pruning(self):
        x = E("(1 2) - (1 2) + (1 3)")
        assert len(x) == 1 and x == element(P("(1 3)"))
        assert not (x - x)
        assert str(x - x) == "0"

    def test_print_and_parse(self):
        x = E("1/2*(1 2 4) - 1/2*(1 4 2)")
        assert str(x) == "1/2*(1 2 4) - 1/2*(1 4 2)"
        assert E(str(x)) == x
        assert str(E("(2 4 3) + (1 3)(2 4)")) == "(1 3)(2 4) + (2 4 3)"

    @pytest.mark.parametrize("text", ["(1 2) (1 3)x", "(1 2) e", "1/2*", "(1 2) + + (1 3)"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            E(text)

    def test_json_layout(self):
        x = E("(1 4 3) - 1/2*(1 3)(2 4)")
        rows = x.to_json()
        assert rows == [
            {"coeff": {"re": "-1/2", "im": "0/1"}, "perm": "(1 3)(2 4)"},
            {"coeff": {"re": "1/1", "im": "0/1"}, "perm": "(1 4 3)"},
        ]
        assert GroupRingElement.from_json(json.loads(json.dumps(rows))) == x

    @given(ring_elements())
    def test_json_round_trip(self, x):
        assert GroupRingElement.from_json(x.to_json()) == x


class TestLinearCombine:
    def test_examples(self):
        x, y = E("(1 2) + 2*(1 3)"), E("(2 3)")
        assert linear_combine([1, 0], [x, y]) == x
        assert linear_combine([1, 1], [P("(1 4 3)"), P("(1 3 4)")]) == E("(1 4 3) + (1 3 4)")
        assert linear_combine([1, -1], [x, x]) == GroupRingElement()

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            linear_combine([1], [])


class TestMultiply:
    def test_plus_product(self):
        got = multiply(E("(1 2 3) + (1 3 2)"), E("(1 2 4) + (1 4 2)"))
        assert got == E("(1 3)(2 4) + (1 4 3) + (2 4 3) + (1 4)(2 3)")

    def test_minus_product(self):
        got = multiply(E("(1 2 3) - (1 3 2)"), E("(1 2 4) - (1 4 2)"))
        assert got == E("(1 3)(2 4) - (1 4 3) - (2 4 3) + (1 4)(2 3)")

    @given(ring_elements(), ring_elements())
    def test_table_oracle(self, x, y):
        got = {tuple(p(i) for i in range(1, N + 1)): c for p, c in multiply(x, y)}
        assert got == table_convolution(x, y)

    @settings(max_examples=50)
    @given(ring_elements(), ring_elements(), ring_elements())
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(ring_elements())
    def test_unit(self, x):
        assert element(IDENTITY) * x == x == x * element(IDENTITY)


class TestStarTraceInner:
    def test_star_examples(self):
        mu, th = Scalar(1, 2), Scalar(Fraction(1, 3), -1)
        x = GroupRingElement({P("(1 2 3)"): mu, P("(1 3 2)"): th})
        assert star(x) == GroupRingElement({P("(1 3 2)"): mu.conj(), P("(1 2 3)"): th.conj()})
        assert star(element(IDENTITY)) == element(IDENTITY)

    @given(ring_elements())
    def test_star_involution(self, x):
        assert star(star(x)) == x

    @given(ring_elements(), ring_elements())
    def test_star_antimultiplicative(self, x, y):
        assert star(x * y) == star(y) * star(x)

    def test_trace_examples(self):
        assert trace(element(IDENTITY)) == 1
        assert trace(element(P("(1 2)"))) == 0
        x = E("(1 2 3) + (1 3 2)")
        assert trace(x * star(x)) == 2

    @given(ring_elements(), ring_elements())
    def test_trace_cyclic(self, x, y):
        assert trace(x * y) == trace(y * x)

    def test_inner_examples(self):
        a = E("(1 4 2)") - E("1/2*(1 4 2) - 1/2*(1 2 4)")
        b = E("(1 2)(3 4) - (1 4 2)")
        assert inner_product(a, b) == Fraction(-1, 2)
        s, t = P("(1 2 5)"), P("(3 4)")
        assert inner_product(s, s) == 1
        assert inner_product(s, t) == 0

    @given(ring_elements(), ring_elements())
    def test_inner_is_trace_formula(self, a, b):
        assert inner_product(a, b) == trace(star(b) * a)

    @given(ring_elements())
    def test_inner_norm(self, x):
        n = inner_product(x, x)
        assert n.is_real() and n.re == sum(c.abs2() for _, c in x)
        assert (n.re > 0) == bool(x)


class TestConjAction:
    def test_examples(self):
        mu, th = Scalar(2), Scalar(0, 1)
        x = GroupRingElement({P("(1 2 3)"): mu, P("(1 3 2)"): th})
        assert conj_action(P("(3 4)"), x) == GroupRingElement({P("(1 2 4)"): mu, P("(1 4 2)"): th})
        assert conj_action(IDENTITY, x) == x
        rhs = E("(1 3)(2 4) - (1 4 3) - (2 4 3) + (1 4)(2 3)")
        assert conj_action(P("(2 3)"), rhs) == E("(1 2)(3 4) - (1 4 2) - (3 4 2) + (1 4)(2 3)")

    @given(perms(N), ring_elements(), ring_elements())
    def test_automorphism(self, g, x, y):
        assert conj_action(g, x * y) == conj_action(g, x) * conj_action(g, y)
        assert conj_action(g, star(x)) == star(conj_action(g, x))
        assert trace(conj_action(g, x)) == trace(x)
        assert conj_action(g, x) == element(g) * x * element(g.__invert__())
