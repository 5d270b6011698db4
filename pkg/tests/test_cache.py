import json

import pytest

from mzvcomplex import cache, dihedral
from mzvcomplex.linalg import Quotient


@pytest.fixture
def tmp_cache(tmp_path):
    old = cache._dir
    cache.set_cache_dir(tmp_path)
    yield tmp_path
    cache.set_cache_dir(old)


def _q():
    return Quotient.build(4, [{0: 2, 1: -2}, {2: 3, 3: 1}])


def test_round_trip(tmp_cache):
    q = _q()
    cache.store_quotient(7, 5, 2, q)
    back = cache.load_quotient(7, 5, 2)
    assert back.dim == q.dim
    assert back.coords({1: 1}) == q.coords({1: 1})
    assert cache.load_quotient(7, 5, 3) is None


def test_tampered_entry_is_ignored(tmp_cache, caplog):
    cache.store_quotient(7, 5, 2, _q())
    (path,) = tmp_cache.iterdir()
    doc = json.loads(path.read_text())
    doc["payload"]["ngens"] = 5
    path.write_text(json.dumps(doc))
    assert cache.load_quotient(7, 5, 2) is None
    assert "checksum" in caplog.text


def test_env_var(monkeypatch, tmp_path):
    old = cache._dir
    cache.set_cache_dir(None)
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    assert cache.cache_dir() == tmp_path
    monkeypatch.delenv(cache.ENV_VAR)
    assert cache.cache_dir() is None
    cache.set_cache_dir(old)


def test_cached_space_matches_fresh(tmp_cache):
    fresh = dihedral.DihedralSpace(3, 5, 2)
    cache.store_quotient(3, 5, 2, fresh.quotient)
    loaded = dihedral.DihedralSpace(3, 5, 2, cache.load_quotient(3, 5, 2))
    assert loaded.basis == fresh.basis
