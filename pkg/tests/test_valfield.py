import random
from fractions import Fraction

import pytest

from lrval.valfield import (
    INFINITY,
    FieldElement,
    InvalidSupportError,
    as_rational,
    format_rational,
    monomial,
    parse_field_element,
    parse_rational,
    random_unit,
)


def naive_product(a, b):
    """Reference convolution with Fraction exponents."""
    acc = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = Fraction(ea) + Fraction(eb)
            acc[e] = acc.get(e, 0) + ca * cb
    return {e: c for e, c in acc.items() if c}


def random_element(rng, nterms=4, den=(1, 2, 3)):
    terms = {}
    for _ in range(rng.randint(0, nterms)):
        d = rng.choice(den)
        terms[Fraction(rng.randint(-6, 12), d)] = Fraction(rng.randint(-5, 5), rng.choice((1, 1, 2)))
    return FieldElement(terms)


def test_canonical_form_drops_zeros_and_sorts():
    x = FieldElement({3: 1, 1: 2, 2: 0})
    assert x.terms == ((1, 2), (3, 1))
    assert FieldElement({1: 1}) + FieldElement({1: -1}) == FieldElement.zero()


def test_product_matches_reference_convolution():
    rng = random.Random(5)
    for _ in range(300):
        a, b = random_element(rng), random_element(rng)
        got = {Fraction(e): c for e, c in (a * b).terms}
        assert got == naive_product(a, b)


def test_ring_axioms_on_random_elements():
    rng = random.Random(11)
    for _ in range(100):
        a, b, c = (random_element(rng) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a - a == FieldElement.zero()


def test_valuation_is_multiplicative_and_ultrametric():
    rng = random.Random(2)
    for _ in range(200):
        a, b = random_element(rng), random_element(rng)
        if a and b:
            assert (a * b).valuation() == a.valuation() + b.valuation()
        s = a + b
        if s:
            assert s.valuation() >= min(a.valuation(), b.valuation())


def test_zero_has_infinite_valuation():
    z = FieldElement.zero()
    assert z.valuation() is INFINITY
    assert INFINITY > 10**9
    assert INFINITY + 3 is INFINITY
    with pytest.raises(ArithmeticError):
        INFINITY - INFINITY


def test_unit_part_and_shift():
    x = FieldElement({Fraction(3, 2): 4, 2: 1})
    u = x.unit_part()
    assert u.valuation() == 0 and u.is_unit()
    assert u.shift(Fraction(3, 2)) == x
    assert monomial(2, 3).shift(-2) == FieldElement.constant(3)
    with pytest.raises(ValueError):
        FieldElement.zero().unit_part()


def test_truncate_keeps_low_order_terms():
    x = FieldElement({0: 1, 1: 1, Fraction(5, 2): 1, 3: 1})
    assert x.truncate(3).terms == ((0, 1), (1, 1), (Fraction(5, 2), 1))
    assert x.truncate(0) == FieldElement.zero()


def test_rational_text_round_trip():
    for q in [Fraction(0), Fraction(7), Fraction(-3, 4), Fraction(22, 7)]:
        assert parse_rational(format_rational(q)) == q
    assert format_rational(5) == "5/1"
    assert parse_rational("4.5") == Fraction(9, 2)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_field_element_text_round_trip():
    rng = random.Random(8)
    for _ in range(100):
        x = random_element(rng)
        assert parse_field_element(str(x)) == x


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1", {0: 1}),
        ("-1/2", {0: Fraction(-1, 2)}),
        ("t", {1: 1}),
        ("-t", {1: -1}),
        ("3*t^2", {2: 3}),
        ("t^(5/2)", {Fraction(5, 2): 1}),
        ("t^2 + 1", {0: 1, 2: 1}),
        ("-3*t^-1", {-1: -3}),
        ("0", {}),
    ],
)
def test_shorthand_terms(text, expected):
    assert parse_field_element(text) == FieldElement(expected)


@pytest.mark.parametrize("text", ["t^", "x", "1 + 1", "2*t^(1/0)", "-"])
def test_malformed_terms_raise(text):
    with pytest.raises(ValueError):
        parse_field_element(text)


def test_random_unit_is_a_unit_and_seeded():
    u = random_unit(3, [0, 1, Fraction(1, 2)])
    assert u.valuation() == 0 and len(u) == 3
    assert random_unit(3, [0, 1, Fraction(1, 2)]) == u
    with pytest.raises(InvalidSupportError):
        random_unit(1, [1, 2])
