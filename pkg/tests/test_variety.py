import json
import random
from math import factorial

import pytest

from oracles import free_rank_by_bracketings, h_evaluation_rank
from lbz.errors import ParseError, ResourceBoundError, UnknownVarietyError
from lbz.heisenberg import evaluate, random_assignment
from lbz.term import LinComb, parse_lincomb, reduce_lincomb
from lbz.v3basis import enumerate_theta
from lbz.variety import (
    RIGHT_NESTED,
    BRACKET_NESTING,
    VarietySpec,
    builtin_variety,
    check_condition_3,
    colength_profile,
    condition3_element,
    dump_variety,
    identity,
    skew_insertion_identity,
    ideal_tower,
    is_identity,
    load_variety,
    multilinear_dimension,
    resolve_variety,
    solve_condition_3,
    tideal_multilinear,
)

V3 = builtin_variety("V3tilde")


class TestBuiltins:
    def test_free_is_empty(self):
        assert builtin_variety("free").identities == ()

    def test_v3_identities(self):
        assert [i.name for i in V3.identities] == ["right-nested", "bracket-nesting"]

    def test_v1(self):
        (ident,) = builtin_variety("V1tilde").identities
        assert ident.element == parse_lincomb("x1(x2x3)(x4x5)")

    @pytest.mark.parametrize("name", ["NsA(2)", "nsa2", "V3TILDE", "v1_tilde"])
    def test_name_variants(self, name):
        builtin_variety(name)

    @pytest.mark.parametrize("name", ["", "nsa(0)", "V2tilde", "lie"])
    def test_unknown(self, name):
        with pytest.raises(UnknownVarietyError):
            builtin_variety(name)


class TestDimensions:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_free_matches_bracketing_oracle(self, n):
        assert multilinear_dimension(builtin_variety("free"), n) == factorial(n) == free_rank_by_bracketings(n)

    def test_abelian(self):
        ab = builtin_variety("abelian")
        assert [multilinear_dimension(ab, n) for n in range(1, 5)] == [1, 0, 0, 0]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_v3_matches_theta_count(self, n):
        assert multilinear_dimension(V3, n) == len(enumerate_theta(n))

    @pytest.mark.parametrize("n", [4, 5])
    def test_v3_matches_h_evaluation(self, n):
        # H~ generates V3~, so random evaluations attain dim P_n
        assert h_evaluation_rank(n, samples=6, seed=n) == multilinear_dimension(V3, n)

    def test_regression_values(self):
        assert [multilinear_dimension(builtin_variety("V1tilde"), n) for n in range(1, 6)] == [1, 2, 6, 24, 90]
        assert [multilinear_dimension(builtin_variety("NsA(1)"), n) for n in range(1, 6)] == [1, 2, 6, 12, 20]

    def test_bound(self):
        with pytest.raises(ResourceBoundError):
            tideal_multilinear(V3, 8)
        with pytest.raises(ResourceBoundError):
            tideal_multilinear(V3, 5, max_n=4)

    def test_renaming_and_order_invariance(self):
        renamed = identity("x7(x3x9)(x4x8) - x7(x3x8)(x4x9) + x7(x3x4)(x8x9)")
        a = VarietySpec("a", (BRACKET_NESTING, RIGHT_NESTED))
        b = VarietySpec("b", (RIGHT_NESTED, renamed))
        for n in range(1, 6):
            assert multilinear_dimension(a, n) == multilinear_dimension(b, n) == multilinear_dimension(V3, n)

    def test_monotone(self):
        right_nested = VarietySpec("right-nested only", (RIGHT_NESTED,))
        for n in range(1, 6):
            assert multilinear_dimension(V3, n) <= multilinear_dimension(right_nested, n) <= factorial(n)

    def test_stabilization(self):
        tower = ideal_tower(V3)
        tower.level(6)
        for st in tower.stats:
            assert st["rank"] == factorial(st["degree"]) - len(enumerate_theta(st["degree"]))
            ranks = [r for _, r in st["history"]]
            assert ranks == sorted(ranks)

    @pytest.mark.parametrize("n", [4, 5])
    def test_ideal_rows_vanish_in_h(self, n):
        q = tideal_multilinear(V3, n)
        rng = random.Random(n)
        assignments = [random_assignment(range(1, n + 1), rng) for _ in range(3)]
        for _, row in q.ideal._ech.rows():
            e = LinComb({q.words[k]: c for k, c in row.items()})
            for a in assignments:
                assert not evaluate(e, a)

    def test_backends_agree(self):
        from lbz.kernels import COMPILED_AVAILABLE

        if not COMPILED_AVAILABLE:
            pytest.skip("compiled kernel not built")
        for n in range(1, 6):
            a = tideal_multilinear(V3, n, backend="python").ideal
            b = tideal_multilinear(V3, n, backend="compiled").ideal
            assert a.pivots == b.pivots and a.rows == b.rows


class TestMembership:
    def test_defining_identities_hold(self):
        for name in ("V3tilde", "V1tilde", "abelian", "NsA(1)"):
            v = builtin_variety(name)
            for ident in v.identities:
                assert is_identity(v, ident)

    def test_free_has_no_identity(self):
        assert not is_identity(builtin_variety("free"), "x1(x2(x3x4))")

    def test_skew_insertion_holds_in_v3(self):
        assert is_identity(V3, skew_insertion_identity())

    @pytest.mark.parametrize("a,b,c,d", [((6,), (), (), ()), ((), (6,), (), ()), ((), (), (), (6,))])
    def test_skew_insertion_with_inserts(self, a, b, c, d):
        assert is_identity(V3, skew_insertion_identity(a, b, c, d))

    def test_nonmultilinear_identity(self):
        # x(y(yy)) follows from (4); xyy does not
        assert is_identity(V3, "x1(x2(x2x2))")
        assert not is_identity(V3, "x1x2x2")

    def test_normal_form_of_identity_is_zero(self):
        q = tideal_multilinear(V3, 4)
        assert q.normal_form(reduce_lincomb(parse_lincomb("x1(x2(x3x4))"))) == LinComb()


class TestCondition3:
    def test_pattern(self):
        e = condition3_element(1, 2, [0])
        assert e == parse_lincomb("x1x3x2x3")

    def test_abelian_check(self):
        assert check_condition_3(builtin_variety("abelian"), 1, 2, [0])

    @pytest.mark.parametrize("alpha", [0, 1])
    def test_free_check(self, alpha):
        assert not check_condition_3(builtin_variety("free"), 1, 1, [alpha])

    def test_abelian_solve(self):
        assert solve_condition_3(builtin_variety("abelian"), 1, 2) == [0]

    def test_free_solve(self):
        assert solve_condition_3(builtin_variety("free"), 2, 3) is None

    def test_v1_solve(self):
        assert solve_condition_3(builtin_variety("V1tilde"), 1, 2) is None

    def test_solution_checks(self):
        v = builtin_variety("NsA(1)")
        alphas = solve_condition_3(v, 2, 3)
        assert alphas is not None and check_condition_3(v, 2, 3, alphas)

    @pytest.mark.parametrize("k,m", [(0, 1), (3, 2)])
    def test_bad_range(self, k, m):
        with pytest.raises(ValueError):
            solve_condition_3(V3, k, m)


class TestFiles:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "v3.json"
        path.write_text(json.dumps(dump_variety(V3)))
        loaded = load_variety(path)
        assert [i.element for i in loaded.identities] == [i.element for i in V3.identities]
        assert resolve_variety(str(path)).name == "V3tilde"

    def test_record_format(self, tmp_path):
        path = tmp_path / "f.json"
        path.write_text(json.dumps({"name": "abel", "identities": [
            {"name": "xy", "terms": [{"coefficient": "1", "term": "x1x2"}]}]}))
        assert multilinear_dimension(load_variety(path), 2) == 0

    @pytest.mark.parametrize("content", ["{", '{"identities": 3}', '[{"terms": [{"coefficient": "1/0", "term": "x1"}]}]'])
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content)
        with pytest.raises(ParseError):
            load_variety(path)


def test_colength_profile():
    assert colength_profile(builtin_variety("free"), 3) == [(1, 1), (2, 2), (3, 4)]
    assert colength_profile(V3, 5) == [(1, 1), (2, 2), (3, 4), (4, 7), (5, 10)]
