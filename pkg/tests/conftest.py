import random
from fractions import Fraction

from hypothesis import strategies as st

from thoma_lab.characters import ThomaParameters
from thoma_lab.group_ring import GroupRingElement, Scalar
from thoma_lab.perm import Perm


@st.composite
def perms(draw, n=8):
    images = draw(st.permutations(range(1, n + 1)))
    return Perm.from_images(images)


small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def scalars(draw, complex_=True):
    re = draw(small_fractions)
    im = draw(small_fractions) if complex_ else Fraction(0)
    return Scalar(re, im)


@st.composite
def ring_elements(draw, n=5, max_terms=6, complex_=True):
    terms = draw(st.lists(st.tuples(perms(n), scalars(complex_)), max_size=max_terms))
    return GroupRingElement(terms)


@st.composite
def thoma_params(draw, max_len=3):
    """Random valid parameters: nonincreasing, nonnegative, total mass at most 1."""
    raw = draw(st.lists(st.integers(0, 12), max_size=2 * max_len))
    denom = draw(st.integers(max(1, sum(raw)), max(1, sum(raw)) + 12))
    split = draw(st.integers(0, len(raw)))
    a = sorted((Fraction(x, denom) for x in raw[:split]), reverse=True)
    b = sorted((Fraction(x, denom) for x in raw[split:]), reverse=True)
    return ThomaParameters(tuple(a), tuple(b))


def seeded_perm(rng: random.Random, n: int) -> Perm:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Perm.from_images(images)
