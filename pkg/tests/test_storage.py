"""
Tests for the SQLite noise-table cache.
"""

import numpy as np
import pytest

from shared.detector.tables import build_noise_tables
from shared.models.config import HOME_ENV_VAR
from shared.storage import TableStore


@pytest.fixture
def store(tmp_path):
    return TableStore(tmp_path / "tables.db")


@pytest.fixture(scope="module")
def white_tables():
    return build_noise_tables(np.eye(4), tol=1e-7)


class TestTableStore:
    """Save, look up and clear cached tables."""

    def test_miss_on_empty_store(self, store):
        assert store.get_tables(np.eye(4), 1e-7) is None

    def test_round_trip(self, store, white_tables):
        store.save_tables(white_tables)
        loaded = store.get_tables(np.eye(4), 1e-7)
        assert loaded is not None
        np.testing.assert_array_equal(loaded.o, white_tables.o)
        np.testing.assert_array_equal(loaded.d, white_tables.d)
        assert loaded.orbits == white_tables.orbits
        assert loaded.m == 2

    def test_tolerance_is_part_of_key(self, store, white_tables):
        store.save_tables(white_tables)
        assert store.get_tables(np.eye(4), 1e-6) is None

    def test_replace_keeps_one_entry(self, store, white_tables):
        store.save_tables(white_tables)
        store.save_tables(white_tables)
        stats = store.get_stats()
        assert stats["total_tables"] == 1
        assert stats["per_m"] == {2: 1}
        assert stats["database_size_bytes"] > 0

    def test_clear(self, store, white_tables):
        store.save_tables(white_tables)
        store.clear()
        assert store.get_stats()["total_tables"] == 0

    def test_default_location_follows_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(HOME_ENV_VAR, str(tmp_path / "cache-home"))
        assert TableStore().db_path == tmp_path / "cache-home" / "tables.db"
