import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lbz.errors import ParseError, UnassignedGeneratorError
from lbz.heisenberg import (
    A,
    B,
    C,
    ONE,
    HElement,
    basis_elements,
    evaluate,
    format_helement,
    h_mul,
    leibniz_witness,
    multilinear_evaluation_rank,
    nonzero_substitutions,
    parse_helement,
    random_element,
)
from lbz.term import parse_lincomb, parse_term


def t(k):
    return HElement.t_power(k)


def table_product(u: HElement, w: HElement) -> HElement:
    """Bilinear extension of the basis multiplication table (oracle)."""

    def basis(h):
        out = [("a", h.ca), ("b", h.cb), ("c", h.cc)]
        out += [(k, c) for k, c in enumerate(h.f)]
        return [(e, c) for e, c in out if c]

    def table(e1, e2):
        if e1 == "b" and e2 == "a":
            return C
        if e1 == "a" and e2 == "b":
            return -C
        if isinstance(e1, int):
            if e2 == "a":
                return t(e1 - 1) * e1 if e1 else HElement()
            if e2 == "b":
                return t(e1 + 1)
            if e2 == "c":
                return t(e1)
        return HElement()

    total = HElement()
    for (e1, c1), (e2, c2) in itertools.product(basis(u), basis(w)):
        total = total + table(e1, e2) * (c1 * c2)
    return total


rationals = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 4))
elements = st.builds(HElement, rationals, rationals, rationals, st.lists(rationals, max_size=5).map(tuple))


class TestStructure:
    def test_heisenberg_relations(self):
        assert h_mul(B, A) == C
        assert h_mul(A, B) == -C
        assert not h_mul(A, C) and not h_mul(C, A)

    def test_polynomial_action(self):
        assert h_mul(t(3), A) == t(2) * 3
        assert h_mul(t(3), B) == t(4)
        assert h_mul(t(3), C) == t(3)
        assert not h_mul(A, t(2))

    @settings(max_examples=200, deadline=None)
    @given(elements, elements)
    def test_matches_table(self, u, w):
        assert h_mul(u, w) == table_product(u, w)

    def test_leibniz_on_basis(self):
        basis = basis_elements(4)
        for u, v, w in itertools.product(basis, repeat=3):
            assert not leibniz_witness(u, v, w)

    @settings(max_examples=200, deadline=None)
    @given(elements, elements, elements)
    def test_leibniz_random(self, u, v, w):
        assert not leibniz_witness(u, v, w)

    def test_not_lie(self):
        # ONE * C = ONE but C * ONE = 0: H~ is not anticommutative
        assert h_mul(ONE, C) == ONE and not h_mul(C, ONE)


class TestEvaluation:
    def test_word(self):
        a = {1: t(2), 2: A, 3: B}
        assert evaluate(parse_term("x1x2x3"), a) == t(2) * 2

    def test_combination(self):
        a = {1: A, 2: B}
        assert evaluate(parse_lincomb("x1x2 - x2x1"), a) == C * -2

    def test_unassigned(self):
        with pytest.raises(UnassignedGeneratorError):
            evaluate(parse_term("x1x2"), {1: A})

    def test_identity_4_vanishes(self):
        f = parse_term("x1(x2(x3x4))")
        rng = random.Random(3)
        for _ in range(50):
            a = {i: random_element(rng) for i in range(1, 5)}
            assert not evaluate(f, a)

    def test_free_rank_small(self):
        # in degree 3 H~ satisfies no multilinear identity
        assert multilinear_evaluation_rank(3, samples=4, seed=1) == 6


class TestText:
    @pytest.mark.parametrize("text", ["a", "-c", "2*a - 1/2*b + c + [t^2 - 3/2*t + 1]", "[t]", "0"])
    def test_round_trip(self, text):
        h = parse_helement(text)
        assert parse_helement(format_helement(h)) == h

    def test_parse_value(self):
        assert parse_helement("2*a - 1/2*b + [t^2 + 1]") == HElement(2, Fraction(-1, 2), 0, (1, 0, 1))

    @pytest.mark.parametrize("bad", ["", "d", "a b", "[t^2", "2*a + [t/0]"])
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_helement(bad)

    @settings(max_examples=100, deadline=None)
    @given(elements)
    def test_round_trip_random(self, h):
        assert parse_helement(format_helement(h)) == h


class TestSubstitutionTables:
    def test_matches_direct_evaluation(self):
        f = parse_lincomb("x1(x2x4)(x3) - 2 * x3x1(x2x4)")
        elems = basis_elements(3)
        table = nonzero_substitutions(f, elems)
        for idx in itertools.product(range(len(elems)), repeat=4):
            value = evaluate(f, {v: elems[i] for v, i in zip((1, 2, 3, 4), idx)})
            assert table.get(idx, HElement()) == value

    def test_printed_sign_of_nesting_identity_fails(self):
        wrong = parse_lincomb("x1(x2x5)(x3x4) - x1(x2x3)(x4x5) - x1(x2x4)(x3x5)")
        assert nonzero_substitutions(wrong, basis_elements(2))

    def test_rejects_repeated_variables(self):
        with pytest.raises(ValueError):
            nonzero_substitutions(parse_lincomb("x1x1"), basis_elements(1))
