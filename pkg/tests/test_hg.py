import json
import logging

import pytest

from mzv.errors import InvalidIndex, NoPolynomialSolution
from mzv.ffield import FieldCtx
from mzv.hg import HGCache, compute_G, compute_H, g_degree_bound, h_degree_bound
from mzv.polyrat import RatFunc, bipoly_eval_T
from mzv.powersums import ell, power_sum, power_sum_less


def _scaled(ctx, d, k, fn):
    return RatFunc(ell(ctx, d)) ** k * fn(ctx, d, k)


def test_defining_property(ctx, tmp_cache):
    for k in range(1, 16):
        H = compute_H(ctx, k)
        assert H.degree() <= h_degree_bound(ctx.q, k)
        for d in range(5):
            assert bipoly_eval_T(H, d) == _scaled(ctx, d, k, power_sum)
        if k % (ctx.q - 1) == 0:
            G = compute_G(ctx, k)
            assert G.degree() <= g_degree_bound(ctx.q, k)
            for d in range(5):
                assert bipoly_eval_T(G, d) == _scaled(ctx, d, k, power_sum_less)
    assert tmp_cache.bound_violations == []


def test_G_needs_even_index(tmp_cache):
    F3 = FieldCtx(3)
    with pytest.raises(NoPolynomialSolution):
        compute_G(F3, 3)
    # the failure is memoized as well
    with pytest.raises(NoPolynomialSolution):
        compute_G(F3, 3)
    with pytest.raises(InvalidIndex):
        compute_H(F3, 0)


def test_cache_files_round_trip(tmp_path):
    F = FieldCtx(5)
    first = HGCache(tmp_path)
    H = compute_H(F, 12, first)
    G = compute_G(F, 12, first)
    files = sorted(p.name for p in tmp_path.rglob("*.json"))
    assert files == ["G12.json", "H12.json"]
    second = HGCache(tmp_path)
    assert compute_H(F, 12, second) == H
    assert compute_G(F, 12, second) == G


def test_corrupt_entries_are_recomputed(tmp_path, caplog):
    F = FieldCtx(3)
    H = compute_H(F, 7, HGCache(tmp_path))
    path = next(tmp_path.rglob("H7.json"))

    data = json.loads(path.read_text())
    data["bipoly"]["terms"][0][1] = "t+1"
    path.write_text(json.dumps(data))
    with caplog.at_level(logging.WARNING):
        assert compute_H(F, 7, HGCache(tmp_path)) == H
    assert "checksum" in caplog.text
    # rewritten with a valid entry
    assert json.loads(path.read_text())["checksum"] == data["checksum"]

    path.write_text("{not json")
    assert compute_H(F, 7, HGCache(tmp_path)) == H


def test_cache_keyed_by_modulus(tmp_path):
    a, b = FieldCtx(3, 2), FieldCtx(3, 2, [2, 2, 1])
    compute_H(a, 4, HGCache(tmp_path))
    compute_H(b, 4, HGCache(tmp_path))
    assert len({p.parent for p in tmp_path.rglob("H4.json")}) == 2


def test_frozen_small_H():
    from mzv.polyrat import serialize_bipoly

    F2 = FieldCtx(2)
    assert serialize_bipoly(compute_H(F2, 1, HGCache()))["terms"] == [[0, "1"]]
    # ell_d^3 S_d(3) = (T^2 + t) / (t^2 + t) over F_2; at d = 0 this is 1
    data = serialize_bipoly(compute_H(F2, 3, HGCache()))
    assert data["den"] == "t^2+t"
    assert data["terms"] == [[0, "t"], [2, "1"]]
