import os
import time

import pandas as pd
import pytest

from src.cache_manager import CHUNK_COLUMNS, CacheManager


@pytest.fixture
def cache(tmp_path):
    return CacheManager(str(tmp_path / "egs"), enabled=True)


def _frame():
    return pd.DataFrame([{"key": "code:7", "edges": "[[0, 1, 1]]", "status": "indecomposable", "reason": "r"}],
                        columns=CHUNK_COLUMNS)


def test_config_key_is_stable_and_order_free():
    a = CacheManager.config_key({"sizes": [1, 1], "d": 2})
    b = CacheManager.config_key({"d": 2, "sizes": [1, 1]})
    assert a == b
    assert len(a) == 16
    assert a != CacheManager.config_key({"sizes": [1, 1], "d": 3})


def test_chunk_round_trip(cache):
    key = cache.config_key({"sizes": [1, 1, 1, 1]})
    assert cache.get_chunk(key, 0, 64) is None
    cache.save_chunk(key, 0, 64, _frame(), {"examined": 64, "decomposable": 63})
    frame, counts = cache.get_chunk(key, 0, 64)
    assert frame.to_dict("records") == _frame().to_dict("records")
    assert counts == {"examined": 64, "decomposable": 63}
    stats = cache.get_cache_stats()
    assert stats["hits"] == 1
    assert stats["misses"] == 1
    assert stats["chunks"] == 1
    assert stats["configurations"] == 1


def test_chunk_needs_both_files(cache):
    key = "abc"
    cache.save_chunk(key, 0, 8, _frame(), {"examined": 8})
    os.remove(os.path.join(cache.cache_dir, key, f"chunk_{0:012d}_{8:012d}.json"))
    assert cache.get_chunk(key, 0, 8) is None


def test_disabled_cache_writes_nothing(tmp_path):
    cache = CacheManager(str(tmp_path / "off"), enabled=False)
    cache.save_meta("k", {"a": 1})
    cache.save_chunk("k", 0, 1, _frame(), {"examined": 1})
    assert cache.get_chunk("k", 0, 1) is None
    assert not os.path.exists(cache.cache_dir)


def test_clear_and_cleanup(cache):
    cache.save_meta("old", {"a": 1})
    cache.save_meta("new", {"a": 2})
    past = time.time() - 10 * 24 * 3600
    for name in os.listdir(os.path.join(cache.cache_dir, "old")):
        os.utime(os.path.join(cache.cache_dir, "old", name), (past, past))
    assert cache.cleanup_old_cache(max_days=5) == 1
    assert cache.list_keys() == ["new"]
    assert cache.clear() == 1
    assert cache.list_keys() == []
