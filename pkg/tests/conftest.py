import pytest

from mzv.ffield import FieldCtx
from mzv.hg import HGCache, set_default_cache

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pn: f"q{pn[0] ** pn[1]}")
def ctx(request):
    return FieldCtx(*request.param)


@pytest.fixture
def tmp_cache(tmp_path):
    cache = HGCache(tmp_path / "hg")
    set_default_cache(cache)
    yield cache
    set_default_cache(HGCache())
