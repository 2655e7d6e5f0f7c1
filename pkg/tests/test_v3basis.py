import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import multilinear_trees
from lbz.errors import ParseError
from lbz.heisenberg import evaluate, random_assignment, theorem2_assignment
from lbz.term import TermComb, parse_lincomb, parse_term, reduce_lincomb
from lbz.v3basis import (
    ThetaElement,
    coordinates_by_linear_algebra,
    coordinates_to_lincomb,
    coordinates_to_termcomb,
    enumerate_theta,
    evaluation_matrix_rank,
    find_nesting,
    parse_theta,
    random_multilinear_element,
    reduce_to_theta,
    theta_to_lincomb,
    verify_theorem2,
)
from lbz.variety import builtin_variety, multilinear_dimension


def th(text):
    return parse_theta(text)


class TestTheta:
    def test_text_round_trip(self):
        for theta in enumerate_theta(5):
            assert parse_theta(str(theta)) == theta

    def test_parse(self):
        assert th("theta(1; (2,3)(4,5); 6)") == ThetaElement(6, 1, ((2, 3), (4, 5)), (6,))

    @pytest.mark.parametrize("bad", ["theta(1; (3,2); )", "theta(1; (2,5)(3,4); )", "theta(1; ; 3,2)",
                                     "theta(1; ; 3)", "tht(1;;)", "theta(1; (2,3; )"])
    def test_invalid(self, bad):
        with pytest.raises(ParseError):
            parse_theta(bad)

    def test_n1(self):
        assert enumerate_theta(1) == [ThetaElement(1, 1)]

    def test_n3(self):
        thetas = enumerate_theta(3)
        assert len(thetas) == 6
        assert [t.m for t in thetas] == [0, 0, 0, 1, 1, 1]

    def test_counts(self):
        assert [len(enumerate_theta(n)) for n in range(1, 8)] == [1, 2, 6, 16, 45, 126, 357]

    def test_all_valid_and_sorted(self):
        thetas = enumerate_theta(6)
        for t in thetas:
            t.validate()
        assert thetas == sorted(thetas, key=ThetaElement.sort_key)
        assert len(set(thetas)) == len(thetas)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_count_matches_quotient(self, n):
        assert len(enumerate_theta(n)) == multilinear_dimension(builtin_variety("V3tilde"), n)


class TestThetaToLincomb:
    def test_no_brackets(self):
        assert theta_to_lincomb(th("theta(1; ; 2,3)")) == reduce_lincomb(parse_lincomb("x1x2x3"))

    def test_one_bracket(self):
        assert theta_to_lincomb(th("theta(1; (2,3); )")) == reduce_lincomb(parse_lincomb("x1x2x3 - x1x3x2"))

    def test_two_brackets(self, rng):
        theta = th("theta(1; (2,3)(4,5); )")
        lc = theta_to_lincomb(theta)
        assert len(lc) == 4
        for _ in range(20):
            a = random_assignment(range(1, 6), rng)
            assert evaluate(lc, a) == evaluate(theta.to_term(), a)


class TestReduce:
    def test_single_swap(self):
        coords = reduce_to_theta(parse_term("x1x3x2"))
        assert coords == {th("theta(1; ; 2,3)"): 1, th("theta(1; (2,3); )"): -1}

    def test_single_swap_in_h(self, rng):
        image = coordinates_to_termcomb(reduce_to_theta(parse_term("x1x3x2")))
        for _ in range(20):
            a = random_assignment(range(1, 4), rng)
            assert evaluate(image, a) == evaluate(parse_term("x1x3x2"), a)

    def test_fixed_points(self):
        for theta in enumerate_theta(5):
            assert reduce_to_theta(theta.to_term(), 5) == {theta: 1}

    def test_nesting_rule(self):
        coords = reduce_to_theta(parse_term("x1(x2x5)(x3x4)"))
        assert coords == {th("theta(1; (2,4)(3,5); )"): 1, th("theta(1; (2,3)(4,5); )"): -1}

    def test_identity_4_is_zero(self):
        assert reduce_to_theta(parse_term("x1(x2(x3x4))")) == {}

    def test_zero(self):
        assert reduce_to_theta(TermComb(), 0) == {}

    @pytest.mark.parametrize("text", ["x1x1", "x1x3", "x2x3x2"])
    def test_rejects_non_multilinear(self, text):
        with pytest.raises(ValueError):
            reduce_to_theta(parse_lincomb(text))

    def test_wrong_n(self):
        with pytest.raises(ValueError):
            reduce_to_theta(parse_term("x1x2"), 3)

    def test_find_nesting(self):
        assert find_nesting(((1, 2), (3, 4))) is None
        assert find_nesting(((1, 3), (2, 4))) is None
        assert find_nesting(((1, 4), (2, 3))) == ((1, 4), (2, 3))
        assert find_nesting(((1, 2), (3, 6), (4, 5))) == ((3, 6), (4, 5))
        assert find_nesting(((1, 3), (2, 6), (4, 5))) == ((2, 6), (4, 5))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_agrees_with_linear_algebra(self, n):
        rng = random.Random(n)
        for _ in range(10):
            e = random_multilinear_element(n, rng)
            assert reduce_to_theta(e, n) == coordinates_by_linear_algebra(e, n)

    @settings(max_examples=40, deadline=None)
    @given(multilinear_trees(6), st.integers(0, 2 ** 16))
    def test_sound_in_h(self, t, seed):
        rng = random.Random(seed)
        image = coordinates_to_termcomb(reduce_to_theta(t, 6))
        a = random_assignment(range(1, 7), rng)
        assert evaluate(image, a) == evaluate(t, a)

    @settings(max_examples=40, deadline=None)
    @given(multilinear_trees(5), multilinear_trees(5), st.integers(-3, 3), st.integers(-3, 3))
    def test_linear(self, s, t, alpha, beta):
        e = TermComb([(s, alpha), (t, beta)])
        expected = {}
        for theta, c in reduce_to_theta(s, 5).items():
            expected[theta] = expected.get(theta, 0) + alpha * c
        for theta, c in reduce_to_theta(t, 5).items():
            expected[theta] = expected.get(theta, 0) + beta * c
        assert reduce_to_theta(e, 5) == {k: v for k, v in expected.items() if v}

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 44), st.integers(-4, 4).filter(bool)), min_size=1, max_size=5))
    def test_projection(self, picks):
        thetas = enumerate_theta(5)
        coords = {}
        for k, c in picks:
            coords[thetas[k]] = coords.get(thetas[k], 0) + Fraction(c)
        coords = {k: v for k, v in coords.items() if v}
        assert reduce_to_theta(coordinates_to_lincomb(coords), 5) == coords


class TestTheorem2:
    def test_assignment(self):
        a = theorem2_assignment(th("theta(2; (1,3); 4)"), 4, 4)
        assert str(a[2]) == "[t^4]" and str(a[1]) == "a" and str(a[3]) == "b" and str(a[4]) == "c"

    def test_assignment_fdeg(self):
        with pytest.raises(ValueError):
            theorem2_assignment(th("theta(1; ; 2)"), 2, 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_independence(self, n):
        rank, count = evaluation_matrix_rank(n)
        assert rank == count

    def test_report_n1(self):
        assert verify_theorem2(1, samples=5).passed

    def test_report_n4(self):
        report = verify_theorem2(4, samples=10, assignments=3)
        assert report.passed and report.evaluation_rank == 16
        assert report.summary().startswith("PASS")
