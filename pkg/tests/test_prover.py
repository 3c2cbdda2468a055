from mzv.ffield import FieldCtx
from mzv.polyrat import bipoly_eval_T
from mzv.prover import NUMERIC_ONLY, PROVED, REFUTED, prove_identity
from mzv.solver import ShuffleSet, solve_shuffle

F3, F5 = FieldCtx(3), FieldCtx(5)


def test_example_is_proved():
    res = prove_identity(solve_shuffle(F5, 2, 30))
    assert res.status == PROVED
    assert res.checked_d == [0, 1, 2, 3]
    assert res.to_dict() == {"status": "proved", "checked_d": [0, 1, 2, 3]}


def test_wrong_relation_is_refuted_with_witness():
    res = prove_identity(ShuffleSet(F5, 2, 30, ((3, 4), (2, 8))))
    assert res.status == REFUTED
    assert res.failing_d == 1
    assert not bipoly_eval_T(res.residual, 1).is_zero()
    assert "residual" in res.to_dict()


def test_odd_terms_fall_back_to_numeric_checks():
    # w - a_j = 3 is not a multiple of q - 1 = 2, so no bivariate identity exists
    fake = ShuffleSet(F3, 2, 3, ((1, 2),))
    res = prove_identity(fake)
    assert "no bivariate form" in res.note
    assert res.status == REFUTED and res.failing_d is not None


def test_numeric_only_when_checks_pass_without_bivariate_form():
    # G_1 does not exist over F_3; both sides vanish at d = 0
    fake = ShuffleSet(F3, 1, 2, ((1, 2),))
    res = prove_identity(fake, check_d=(0,))
    assert res.status == NUMERIC_ONLY and res.checked_d == [0]
