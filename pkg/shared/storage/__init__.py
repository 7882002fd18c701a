"""
Storage Package
Persistent caches reused across simulator runs.
"""

from shared.storage.table_store import TableStore

__all__ = ["TableStore"]
