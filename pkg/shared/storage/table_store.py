"""
Table Store
SQLite-backed cache of detector noise tables.

Tables are keyed by (m, coherence hash, tolerance) so repeated CLI runs
on the same scenario skip the orthant evaluations. Stored at
~/.onebit_rao/tables.db unless ONEBIT_RAO_HOME says otherwise.
"""

import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from shared.detector.tables import coherence_hash
from shared.models.config import default_home
from shared.models.detector import NoiseTables


SCHEMA_VERSION = 1


class TableStore:
    """
    SQLite-backed noise-table storage.

    Arrays are stored as float64 blobs alongside their shapes; entries
    written by another schema version are ignored.
    """

    def __init__(self, db_path: Optional[Path] = None):
        """
        Initialize table store.

        Args:
            db_path: Custom path for database (default: <home>/tables.db)
        """
        self.db_path = Path(db_path) if db_path else default_home() / "tables.db"
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._init_db()

    def _init_db(self):
        """Create the database schema if it doesn't exist."""
        with sqlite3.connect(str(self.db_path)) as conn:
            conn.execute("""
                CREATE TABLE IF NOT EXISTS noise_tables (
                    m INTEGER NOT NULL,
                    coherence_hash TEXT NOT NULL,
                    tol REAL NOT NULL,
                    schema_version INTEGER NOT NULL,
                    coherence BLOB NOT NULL,
                    orthants BLOB NOT NULL,
                    derivatives BLOB NOT NULL,
                    orbits TEXT NOT NULL,
                    built_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    UNIQUE (m, coherence_hash, tol, schema_version)
                )
            """)
            conn.commit()

    def save_tables(self, tables: NoiseTables):
        """
        Save or replace noise tables.

        Args:
            tables: Tables to store
        """
        with sqlite3.connect(str(self.db_path)) as conn:
            conn.execute("""
                INSERT OR REPLACE INTO noise_tables
                (m, coherence_hash, tol, schema_version, coherence,
                 orthants, derivatives, orbits, built_at)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                tables.m,
                coherence_hash(tables.c),
                float(tables.tol),
                SCHEMA_VERSION,
                tables.c.astype(np.float64).tobytes(),
                tables.o.astype(np.float64).tobytes(),
                tables.d.astype(np.float64).tobytes(),
                json.dumps(tables.orbits),
                datetime.now().isoformat()
            ))
            conn.commit()

    def get_tables(self, c: np.ndarray, tol: float) -> Optional[NoiseTables]:
        """
        Look up tables for a coherence matrix.

        Args:
            c: 2m x 2m coherence matrix
            tol: Orthant tolerance the tables must have been built with

        Returns:
            NoiseTables or None if not cached
        """
        c = np.asarray(c, dtype=float)
        m = c.shape[0] // 2
        with sqlite3.connect(str(self.db_path)) as conn:
            row = conn.execute(
                """SELECT coherence, orthants, derivatives, orbits FROM noise_tables
                   WHERE m = ? AND coherence_hash = ? AND tol = ? AND schema_version = ?""",
                (m, coherence_hash(c), float(tol), SCHEMA_VERSION)
            ).fetchone()

        if row is None:
            return None

        c_bytes, o_bytes, d_bytes, orbits = row
        kappa = 4 ** m
        return NoiseTables(
            m=m,
            c=np.frombuffer(c_bytes, dtype=np.float64).reshape(2 * m, 2 * m).copy(),
            o=np.frombuffer(o_bytes, dtype=np.float64).copy(),
            d=np.frombuffer(d_bytes, dtype=np.float64).reshape(kappa, 2 * m).copy(),
            orbits=json.loads(orbits),
            tol=tol,
        )

    def get_stats(self) -> Dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            Dictionary with entry count, per-m breakdown and database size
        """
        with sqlite3.connect(str(self.db_path)) as conn:
            count = conn.execute("SELECT COUNT(*) FROM noise_tables").fetchone()[0]
            per_m = conn.execute(
                "SELECT m, COUNT(*) FROM noise_tables GROUP BY m"
            ).fetchall()

        return {
            "total_tables": count,
            "per_m": {m: n for m, n in per_m},
            "database_size_bytes": self.db_path.stat().st_size if self.db_path.exists() else 0,
        }

    def clear(self):
        """Remove all entries from the store."""
        with sqlite3.connect(str(self.db_path)) as conn:
            conn.execute("DELETE FROM noise_tables")
            conn.commit()
