import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import trees, multilinear_trees
from lbz.errors import ParseError
from lbz.heisenberg import evaluate, random_assignment
from lbz.term import (
    Leaf,
    LinComb,
    Mul,
    TermComb,
    format_term,
    is_left_normed,
    leaves,
    leibniz_reduce,
    multilinearize,
    parse_lincomb,
    parse_term,
    reduce_lincomb,
    skew_symmetrize,
    standard_polynomial,
    x,
)


def lc(text):
    return reduce_lincomb(parse_lincomb(text))


class TestParsing:
    def test_left_normed_default(self):
        assert parse_term("x1x2x3") == Mul(Mul(x(1), x(2)), x(3))

    def test_explicit_grouping(self):
        assert parse_term("x1(x2x3)") == Mul(x(1), Mul(x(2), x(3)))

    def test_factors_associate_left(self):
        assert parse_term("x1(x2x3)(x4x5)") == Mul(Mul(x(1), Mul(x(2), x(3))), Mul(x(4), x(5)))

    def test_whitespace_is_ignored(self):
        assert parse_term(" x1 ( x2 x3 ) ") == parse_term("x1(x2x3)")

    def test_multidigit_indices(self):
        assert parse_term("x12x3") == Mul(x(12), x(3))

    @pytest.mark.parametrize("bad", ["", "x", "x0", "x1(x2", "x1)x2", "y1", "x1 + "])
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_term(bad)

    def test_error_has_caret(self):
        with pytest.raises(ParseError) as info:
            parse_term("x1(x2")
        assert "^" in str(info.value)

    @pytest.mark.parametrize("t,text", [
        (Mul(Mul(x(1), x(2)), x(3)), "x1x2x3"),
        (Mul(x(1), Mul(x(2), x(3))), "x1(x2x3)"),
        (x(7), "x7"),
    ])
    def test_format(self, t, text):
        assert format_term(t) == text

    @settings(max_examples=300, deadline=None)
    @given(trees(max_leaves=7))
    def test_round_trip(self, t):
        assert parse_term(format_term(t)) == t


class TestCombinations:
    def test_no_zero_coefficients(self):
        c = LinComb([((1, 2), 1), ((1, 2), -1), ((2, 1), 3)])
        assert c.as_dict() == {(2, 1): Fraction(3)}

    def test_parse_coefficients(self):
        c = parse_lincomb("2 * x1x2 - 1/2 * x2x1 + x1(x2x3)")
        assert c.coeff(parse_term("x2x1")) == Fraction(-1, 2)
        assert c.coeff(parse_term("x1(x2x3)")) == 1

    def test_unicode_minus(self):
        assert parse_lincomb("x1x2 − x2x1") == parse_lincomb("x1x2 - x2x1")

    def test_zero_prints_as_zero(self):
        assert str(LinComb()) == "0"

    def test_ascii_output(self):
        assert str(lc("x1(x2x3)")) == "x1x2x3 - x1x3x2"


class TestReduction:
    def test_right_bracket(self):
        assert lc("x1(x2x3)") == lc("x1x2x3 - x1x3x2")

    def test_left_normed_fixed(self):
        assert leibniz_reduce(parse_term("x1x2x3")) == LinComb.word((1, 2, 3))

    def test_product_of_brackets(self):
        assert lc("(x1x2)(x3x4)") == lc("x1x2x3x4 - x1x2x4x3")

    def test_zero(self):
        assert reduce_lincomb(TermComb()) == LinComb()

    def test_scalar(self):
        assert lc("2 * x1(x2x3)") == lc("x1(x2x3)") * 2

    def test_antisymmetry_in_right_factor(self):
        assert lc("x1(x2x3) + x1(x3x2)") == LinComb()

    @settings(max_examples=150, deadline=None)
    @given(trees(max_leaves=7))
    def test_strategies_agree(self, t):
        assert leibniz_reduce(t, "bottom-up") == leibniz_reduce(t, "rewrite")

    @settings(max_examples=150, deadline=None)
    @given(trees(max_leaves=6))
    def test_output_left_normed_and_idempotent(self, t):
        red = leibniz_reduce(t)
        assert reduce_lincomb(red.to_terms()) == red
        assert all(is_left_normed(s) for s, _ in red.to_terms())

    @settings(max_examples=60, deadline=None)
    @given(multilinear_trees(6))
    def test_multilinearity_preserved(self, t):
        for w, _ in leibniz_reduce(t):
            assert sorted(w) == sorted(leaves(t))

    def test_soundness_in_h(self, rng):
        for _ in range(40):
            t = parse_term(format_term(_random_tree(rng, rng.randint(2, 6))))
            a = random_assignment(range(1, 7), rng)
            assert evaluate(t, a) == evaluate(leibniz_reduce(t), a)

    def test_bracket_product_in_h(self, rng):
        t = parse_term("(x1x2)(x3x4)")
        for _ in range(20):
            a = random_assignment(range(1, 5), rng)
            assert evaluate(t, a) == evaluate(lc("x1x2x3x4 - x1x2x4x3"), a)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            leibniz_reduce(x(1), "sideways")


def _random_tree(rng, n):
    if n == 1:
        return Leaf(rng.randint(1, 6))
    cut = rng.randint(1, n - 1)
    return Mul(_random_tree(rng, cut), _random_tree(rng, n - cut))


class TestPolarization:
    def test_multilinear_fixed(self):
        f = parse_lincomb("x1(x2(x3x4))")
        assert multilinearize(f) == [f]

    def test_square_polarizes_to_two_placements(self):
        (comp,) = multilinearize(parse_lincomb("x1x2x2x3"))
        assert len(comp) == 2
        assert comp.variables() == (1, 3, 4, 5)

    def test_components_are_multilinear(self):
        for comp in multilinearize(parse_lincomb("x1x2x2x3x2 + x1x2x3x3x2")):
            assert comp.is_multilinear()

    @pytest.mark.parametrize("text,holds", [
        ("x1(x3(x2x2))", True),
        ("x1(x2x2)(x3x3)", True),
        ("x1(x2x3)(x2x3)", False),
        ("x1x3x2x3 - x1x2x3x3", False),
    ])
    def test_polarization_holds_iff_original_holds(self, rng, text, holds):
        f = parse_lincomb(text)
        (comp,) = multilinearize(f)
        for _ in range(10):
            a = random_assignment(range(1, 10), rng)
            if holds:
                assert not evaluate(f, a) and not evaluate(comp, a)
        a = random_assignment(range(1, 10), rng)
        assert (not evaluate(f, a)) == holds
        assert (not evaluate(comp, a)) == holds


class TestSkewSymmetric:
    def test_two_variables(self):
        assert skew_symmetrize(parse_term("x1x2x3"), {2, 3}) == parse_lincomb("x1x2x3 - x1x3x2")

    def test_single_variable(self):
        t = parse_term("x1x2x3")
        assert skew_symmetrize(t, {2}) == TermComb.of(t)

    def test_24_terms(self):
        assert len(skew_symmetrize(parse_term("x1x2x3x4x5"), {2, 3, 4, 5})) == 24

    def test_standard_polynomial_small(self):
        assert standard_polynomial([1, 2]) == parse_lincomb("x1x2 - x2x1")
        assert standard_polynomial([1]) == TermComb.of(x(1))
        assert len(standard_polynomial([1, 2, 3])) == 6

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_standard_polynomial_antisymmetric(self, n):
        st = standard_polynomial(list(range(1, n + 1)))
        for i, j in itertools.combinations(range(1, n + 1), 2):
            swapped = st.relabel({i: j, j: i})
            assert swapped == -st
