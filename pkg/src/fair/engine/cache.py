"""In-memory table cache: materialized blocks keyed by table name.

A cached table's blocks are exactly what read_block would return, so a
scan served from cache is indistinguishable from a storage scan except
for the read counters it never touches.
"""
from __future__ import annotations

import threading

from ..records import FacultyRecord
from ..storage import Cluster

Blocks = tuple[tuple[FacultyRecord, ...], ...]


class TableCache:
    def __init__(self) -> None:
        self._blocks: dict[str, Blocks] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, table: str) -> Blocks | None:
        with self._lock:
            blocks = self._blocks.get(table)
            if blocks is None:
                self.misses += 1
            else:
                self.hits += 1
            return blocks

    def put(self, table: str, blocks: Blocks) -> None:
        with self._lock:
            self._blocks[table] = blocks

    def invalidate(self, table: str) -> None:
        with self._lock:
            self._blocks.pop(table, None)

    def cached_tables(self) -> list[str]:
        with self._lock:
            return sorted(self._blocks)

    def block_count(self, table: str) -> int | None:
        with self._lock:
            blocks = self._blocks.get(table)
            return None if blocks is None else len(blocks)

    def __contains__(self, table: str) -> bool:
        with self._lock:
            return table in self._blocks


def cache_table(cache: TableCache, cluster: Cluster, file_name: str) -> int:
    """Materialize every block of a stored file; returns the block count.

    Idempotent: a table already in cache is not re-read.
    """
    existing = cache.block_count(file_name)
    if existing is not None:
        return existing
    blocks = tuple(cluster.read_block(b) for b in cluster.block_ids(file_name))
    cache.put(file_name, blocks)
    return len(blocks)
