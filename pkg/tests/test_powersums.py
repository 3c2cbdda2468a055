import pytest
from hypothesis import given, settings, strategies as st

from mzv.errors import InvalidIndex, TooLarge
from mzv.ffield import FieldCtx
from mzv.polyrat import Poly, RatFunc, rat_from_int
from mzv.powersums import (carlitz_eval, closed_form_Sd, delta, delta_scaled, ell, monics,
                           power_sum, power_sum_double, power_sum_double_oracle, power_sum_less,
                           power_sum_less_scaled, power_sum_oracle, power_sum_scaled,
                           special_polys, zeta_trunc)

F2, F3, F4 = FieldCtx(2), FieldCtx(3), FieldCtx(2, 2)


def test_frozen_values():
    # 1/t + 1/(t+1)
    assert str(power_sum(F2, 1, 1)) == "(1)/(t^2+t)"
    # sum of 1/(t+c)^2 over F_3 is 1/(t^3-t)^2
    assert str(power_sum(F3, 1, 2)) == "(1)/(t^6+t^4+t^2)"
    assert str(ell(F2, 2)) == "t^6+t^5+t^3+t^2"


def test_special_polys_definitions(ctx):
    t = Poly.t(ctx)
    q = ctx.q
    for n in range(1, 4):
        br, D, L, l = special_polys(ctx, n)
        assert br == t ** (q**n) - t
        _, Dp, Lp, lp = special_polys(ctx, n - 1)
        assert D == Dp ** q * br
        assert L == Lp * (t ** (q**n) - t)
        assert l == lp * (t - t ** (q**n))


def test_carlitz_kills_low_degree_polynomials(ctx):
    # e_d vanishes exactly on polynomials of degree < d
    for d in range(1, 3):
        for m in monics(ctx, d - 1):
            assert carlitz_eval(ctx, d, Poly(ctx, m)).is_zero()
        assert not carlitz_eval(ctx, d, Poly.t(ctx) ** d).is_zero()


@pytest.mark.parametrize("d", [0, 1, 2])
def test_oracle_equivalence(ctx, d):
    for k in range(1, 31):
        assert power_sum(ctx, d, k) == power_sum_oracle(ctx, d, k), (d, k)


def test_oracle_degree_three_small_q():
    for F in (F2, F3):
        for k in range(1, 21):
            assert power_sum(F, 3, k) == power_sum_oracle(F, 3, k)


def test_oracle_size_guard():
    with pytest.raises(TooLarge):
        power_sum_oracle(FieldCtx(5), 8, 1)


def test_carlitz_identities(ctx):
    dmax = 3 if ctx.q == 5 else 4
    for d in range(dmax + 1):
        assert power_sum(ctx, d, 1) == RatFunc(ell(ctx, d)).inverse()
        for s in range(1, 11):
            assert power_sum(ctx, d, ctx.p * s) == power_sum(ctx, d, s).frobenius(1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(1, 30))
def test_scaled_forms_are_polynomial_multiples(d, k):
    for F in (F3, F4):
        ld = RatFunc(ell(F, d))
        assert RatFunc(Poly(F, power_sum_scaled(F, d, k))) == ld**k * power_sum(F, d, k)
        assert RatFunc(Poly(F, power_sum_less_scaled(F, d, k))) == ld**k * power_sum_less(F, d, k)


def test_delta_and_double_sums():
    for d in range(3):
        assert power_sum_double(F3, d, 2, 3) == power_sum_double_oracle(F3, d, 2, 3)
        lhs = RatFunc(Poly(F3, delta_scaled(F3, d, 2, 4)))
        assert lhs == RatFunc(ell(F3, d)) ** 6 * delta(F3, d, 2, 4)
    # S_d(1)^2 = S_d(2) in characteristic 2
    assert delta(F2, 2, 1, 1) == rat_from_int(F2, 0)


def test_zeta_trunc_depth_two():
    direct = rat_from_int(F3, 0)
    for d1 in range(3):
        for d2 in range(d1):
            direct = direct + power_sum(F3, d1, 2) * power_sum(F3, d2, 1)
    assert zeta_trunc(F3, (2, 1), 2) == direct
    with pytest.raises(InvalidIndex):
        zeta_trunc(F3, (1, 1, 1, 1, 1), 2)


@pytest.mark.parametrize("F", [F2, F3, F4], ids=str)
def test_closed_form(F):
    for m in range(2, F.q + 1):
        for i in range(3):
            for d in range(4):
                assert closed_form_Sd(F, m, i, d)[0], (m, i, d)


def test_invalid_arguments():
    with pytest.raises(InvalidIndex):
        power_sum(F2, 1, 0)
    with pytest.raises(InvalidIndex):
        closed_form_Sd(F2, 3, 0, 1)
