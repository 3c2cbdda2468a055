import itertools
import math

import pytest
from hypothesis import given, strategies as st

from mzv.errors import CompositeP, DegreeMismatch, ReducibleModulus
from mzv.ffield import (FieldCtx, base_p_digits, canonical_modulus, carry_count, field_from_q,
                        has_carry, is_irreducible, lucas_binom)


@pytest.mark.parametrize("p,n,expected", [
    (2, 2, (1, 1, 1)),
    (2, 3, (1, 1, 0, 1)),
    (3, 2, (1, 0, 1)),
    (5, 2, (2, 0, 1)),
])
def test_canonical_modulus_is_smallest_irreducible(p, n, expected):
    assert canonical_modulus(p, n) == expected
    # nothing smaller in base-p order is irreducible
    for tail in itertools.product(range(p), repeat=n):
        cand = tail + (1,)
        if sum(c * p**i for i, c in enumerate(cand)) < sum(c * p**i for i, c in enumerate(expected)):
            assert not is_irreducible(cand, p)


def test_constructor_errors():
    with pytest.raises(CompositeP):
        FieldCtx(4)
    with pytest.raises(DegreeMismatch):
        FieldCtx(2, 2, [1, 1, 0, 1])
    with pytest.raises(ReducibleModulus):
        FieldCtx(2, 2, [1, 0, 1])  # (x+1)^2
    with pytest.raises(DegreeMismatch):
        FieldCtx(2, 0)


def test_field_from_q():
    F = field_from_q(9)
    assert (F.p, F.n, F.q) == (3, 2, 9)
    with pytest.raises(CompositeP):
        field_from_q(6)


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3), (5, 1)])
def test_field_axioms_exhaustive(p, n):
    F = FieldCtx(p, n)
    els = list(F.elements())
    assert len(set(els)) == F.q
    nonzero = [e for e in els if not e.is_zero()]
    for a in nonzero:
        assert a * a.inverse() == F.one
        assert a ** (F.q - 1) == F.one
        assert a.frobenius(n) == a
    for a, b in itertools.product(els[:6], repeat=2):
        assert a + b == b + a
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_flint_bridge_round_trip(ctx):
    for e in ctx.elements():
        assert ctx.from_flint(ctx.to_flint(e)) == e


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_base_p_digits_round_trip(m, p):
    assert sum(d * p**i for i, d in enumerate(base_p_digits(m, p))) == m


@given(st.integers(0, 300), st.integers(0, 300), st.sampled_from([2, 3, 5]))
def test_lucas_matches_binomial(n, k, p):
    assert lucas_binom(n, k, p) == math.comb(n, k) % p


@given(st.integers(0, 500), st.integers(0, 500), st.sampled_from([2, 3, 5]))
def test_carries_against_kummer(x, y, p):
    # Kummer: the p-adic valuation of C(x+y, x) is the number of carries
    v, c = 0, math.comb(x + y, x)
    while c % p == 0:
        c //= p
        v += 1
    assert carry_count(x, y, p) == v
    assert has_carry(x, y, p) == (v > 0)
