import pytest

from mzv.errors import InvalidFamily, InvalidIndex, NotApplicable, NotCovered
from mzv.ffield import FieldCtx
from mzv.prover import prove_identity
from mzv.recipes import (FAMILIES, c_of, check_shift_conjecture, family_indices,
                         full_delta_small_a, large_index_delta, predict, struct_params, t_of,
                         ta_prime, ta_q4)
from mzv.solver import extract_T, solve_shuffle

F2, F3, F4, F5 = FieldCtx(2), FieldCtx(3), FieldCtx(2, 2), FieldCtx(5)


def test_struct_params_frozen():
    sp = struct_params(F5, 2)
    assert (sp.m, sp.r, sp.j_max) == (1, 20, 4)
    assert [sp.phi(0, j) for j in range(5)] == [18, 14, 10, 6, 2]
    assert sp.phi(1, 0) == 38
    sp = struct_params(F3, 7)
    assert (sp.m, sp.r, sp.j_max) == (2, 18, 5)


def test_t_of_frozen_and_scaling():
    # 6 - 1 = 10 in base 5, so (5 - 0)(5 - 1)
    assert t_of(5, 6) == 20
    assert t_of(5, 2) == 4
    assert t_of(3, 2) == 2
    for p in (2, 3, 5):
        for a in range(1, 31):
            assert all(t_of(p, a) == t_of(p, p**m * a) for m in range(4))


def test_ta_prime_sizes_and_coefficients():
    for F in (F3, F5):
        for a in range(1, 11):
            if a % F.p:
                ta = ta_prime(F, a)
                assert len(ta) == t_of(F.p, a)
                assert not ta.warnings
    # j = 1 drops out: 4 + 14 carries in base 5
    assert ta_prime(F5, 2).entries == ((1, 18, 0), (4, 10, 2), (3, 6, 3), (2, 2, 4))
    assert c_of(F5, 2, 0) == 1
    with pytest.raises(NotApplicable):
        ta_prime(F4, 2)
    with pytest.raises(InvalidIndex):
        c_of(F5, 2, 9)


def test_main_structure_against_solver():
    # the increments between consecutive steps are the predicted T_a image
    for a in (2, 3, 4):
        sp, ta = struct_params(F5, a), ta_prime(F5, a)
        for s in (1, 2):
            b = 1 + s * sp.r
            assert set(extract_T(F5, a, b)) == {(c, b - phi) for c, phi in ta.pairs()}


@pytest.mark.parametrize("F,a_values,bmax", [(F2, (2, 3, 4), 24), (F4, (2, 3, 4), 24),
                                            (F3, (2, 3), 24), (F5, (2, 3), 30)], ids=str)
def test_full_formulas_match_solver(F, a_values, bmax):
    for a in a_values:
        for b in range(1, bmax + 1):
            pred = full_delta_small_a(F, a, b)
            assert pred.shuffle.as_set() == solve_shuffle(F, a, b).as_set(), (a, b)


def test_recipe_dispatch():
    assert predict(F5, 2, 30).recipe == "full:q-odd-a2"
    assert predict(F4, 5, 9).recipe == "q4"
    assert predict(F5, 6, 9).recipe == "main"
    assert predict(F5, 6, 9, "q4").partial
    with pytest.raises(NotCovered):
        full_delta_small_a(F5, 4, 3)
    with pytest.raises(ValueError):
        predict(F5, 2, 3, "astrology")


def test_q4_rule_matches_solver():
    for a in (5, 6, 7, 9):
        sp = struct_params(F4, a)
        b = 1 + 2 * sp.r
        got = set(extract_T(F4, a, b))
        assert got == {(c, b - phi) for c, phi in ta_q4(F4, a).pairs()}, a


def test_large_index_first_family_is_proved():
    for F, n in [(F2, 2), (F3, 1), (F4, 1), (F5, 1)]:
        pred = large_index_delta(F, FAMILIES[0], n)
        assert pred.shuffle.pairs == ((F.p - 1, F.q**n),)
        assert prove_identity(pred.shuffle).proved


def test_large_index_readings():
    # the last family as printed misses terms the solver needs
    printed = large_index_delta(F3, FAMILIES[4], 2, 1)
    fit = large_index_delta(F3, FAMILIES[4], 2, 1, reading="solver-fit")
    truth = solve_shuffle(F3, 10, 7).as_set()
    assert printed.warnings and printed.shuffle.as_set() != truth
    assert fit.shuffle.as_set() == truth
    for F in (F2, F3, F4):
        for n in (1, 2):
            for fam, i in [(FAMILIES[3], None)] + [(FAMILIES[4], i) for i in range(n + 1)]:
                pred = large_index_delta(F, fam, n, i, reading="solver-fit")
                a, b = family_indices(F.q, fam, n, i)
                assert pred.shuffle.as_set() == solve_shuffle(F, a, b).as_set(), (F.q, fam, n, i)
    # i = 0 gives back the second family
    assert (large_index_delta(F5, FAMILIES[4], 1, 0).shuffle.as_set()
            == large_index_delta(F5, FAMILIES[1], 1).shuffle.as_set())
    with pytest.raises(InvalidFamily):
        family_indices(3, FAMILIES[4], 2, 5)
    with pytest.raises(InvalidFamily):
        large_index_delta(F3, "q^n,q^n", 1)


def test_shift_rule():
    for a in range(2, 13):
        j = 0
        while a - 4**j >= 1:
            assert check_shift_conjecture(F4, a, j), (a, j)
            j += 1
    with pytest.raises(NotApplicable):
        check_shift_conjecture(F5, 5, 0)
    with pytest.raises(InvalidIndex):
        check_shift_conjecture(F4, 4, 1)
