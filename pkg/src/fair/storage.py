"""Simulated distributed block store.

A single-process stand-in for an HDFS-style cluster: a name node's
metadata (file -> ordered blocks -> replica nodes) plus data nodes that
hold row blocks and serve reads. Files are split into fixed-capacity
row blocks, each placed on `replication_factor` distinct nodes by a
deterministic hash rule, so the same file always lands the same way.

Blocks are the unit of everything downstream: placement, failover,
re-replication, per-block map tasks, and the read instrumentation the
cache tests rely on.
"""
from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field

from .errors import BlockUnavailable, FileExists, NoCapacity, NoSuchFile, NoSuchNode
from .records import FacultyRecord

DEFAULT_REPLICATION = 3
DEFAULT_BLOCK_ROW_CAPACITY = 64
DEFAULT_NODE_COUNT = 4


@dataclass(frozen=True)
class StorageConfig:
    replication_factor: int = DEFAULT_REPLICATION
    block_row_capacity: int = DEFAULT_BLOCK_ROW_CAPACITY
    node_count: int = DEFAULT_NODE_COUNT

    def __post_init__(self) -> None:
        for name in ("replication_factor", "block_row_capacity", "node_count"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass
class DataNode:
    node_id: int
    alive: bool = True
    replicas: dict[str, tuple[FacultyRecord, ...]] = field(default_factory=dict)
    reads_served: int = 0


@dataclass(frozen=True)
class ReplicationReport:
    replicas_created: int
    lost_blocks: tuple[str, ...]


def _draw(file_name: str, block_index: int, attempt: int, modulus: int) -> int:
    key = f"{file_name}:{block_index}:{attempt}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big") % modulus


def place_replicas(
    file_name: str, block_index: int, candidates: list[int], count: int
) -> list[int]:
    """Pick `count` distinct nodes from `candidates`, deterministically.

    Hash draws indexed by (file, block, attempt); a draw that lands on
    an already-chosen node is discarded and the attempt counter moves
    on. A bounded number of draws keeps pathological hash streaks from
    looping, after which remaining slots fill by scanning candidates in
    order — still deterministic, just less scattered.
    """
    chosen: list[int] = []
    attempt = 0
    budget = 8 * count + 32
    while len(chosen) < count and attempt < budget:
        node = candidates[_draw(file_name, block_index, attempt, len(candidates))]
        attempt += 1
        if node not in chosen:
            chosen.append(node)
    for node in candidates:
        if len(chosen) >= count:
            break
        if node not in chosen:
            chosen.append(node)
    return chosen


class Cluster:
    """Name-node metadata plus data nodes, with read instrumentation.

    Thread safety: block reads may run concurrently (the query engine
    schedules one map task per block); the read counter is locked.
    Metadata writes (store/fail/re-replicate) assume a single writer.
    """

    def __init__(self, config: StorageConfig | None = None) -> None:
        self.config = config or StorageConfig()
        self.nodes = [DataNode(i) for i in range(self.config.node_count)]
        self._file_blocks: dict[str, list[str]] = {}
        self._block_replicas: dict[str, list[int]] = {}
        self._counter_lock = threading.Lock()

    # -- inspection ----------------------------------------------------

    def live_node_ids(self) -> list[int]:
        return [n.node_id for n in self.nodes if n.alive]

    def files(self) -> list[str]:
        return sorted(self._file_blocks)

    def block_ids(self, file_name: str) -> list[str]:
        if file_name not in self._file_blocks:
            raise NoSuchFile(f"no such file: {file_name!r}")
        return list(self._file_blocks[file_name])

    def replica_nodes(self, block_id: str) -> list[int]:
        if block_id not in self._block_replicas:
            raise BlockUnavailable(f"unknown block: {block_id!r}")
        return list(self._block_replicas[block_id])

    def live_replica_count(self, block_id: str) -> int:
        return sum(1 for n in self.replica_nodes(block_id) if self.nodes[n].alive)

    @property
    def degraded(self) -> bool:
        """True when any block has fewer live replicas than the target factor."""
        return any(
            self.live_replica_count(b) < self.config.replication_factor
            for b in self._block_replicas
        )

    def read_counters(self) -> dict[int, int]:
        return {n.node_id: n.reads_served for n in self.nodes}

    def total_reads(self) -> int:
        return sum(n.reads_served for n in self.nodes)

    def metadata_snapshot(self) -> dict:
        """Serializable copy of the name-node state (the backup role)."""
        return {
            "files": {f: list(bs) for f, bs in self._file_blocks.items()},
            "replicas": {b: list(ns) for b, ns in self._block_replicas.items()},
            "degraded": self.degraded,
        }

    # -- writes --------------------------------------------------------

    def store_file(self, file_name: str, records: list[FacultyRecord]) -> dict:
        """Split records into blocks, place replicas, return the manifest."""
        if file_name in self._file_blocks:
            raise FileExists(f"file already stored: {file_name!r}")
        live = self.live_node_ids()
        if not live:
            raise NoCapacity("no live nodes to store on")
        capacity = self.config.block_row_capacity
        target = min(self.config.replication_factor, len(live))
        block_ids = []
        for index in range(0, len(records), capacity):
            block_index = len(block_ids)
            block_id = f"{file_name}:{block_index}"
            rows = tuple(records[index : index + capacity])
            placed = place_replicas(file_name, block_index, live, target)
            for node_id in placed:
                self.nodes[node_id].replicas[block_id] = rows
            self._block_replicas[block_id] = placed
            block_ids.append(block_id)
        self._file_blocks[file_name] = block_ids
        return self.manifest(file_name)

    def remove_file(self, file_name: str) -> None:
        for block_id in self.block_ids(file_name):
            for node in self.nodes:
                node.replicas.pop(block_id, None)
            del self._block_replicas[block_id]
        del self._file_blocks[file_name]

    def read_block(self, block_id: str) -> tuple[FacultyRecord, ...]:
        """Serve rows from the first live replica in placement order."""
        for node_id in self.replica_nodes(block_id):
            node = self.nodes[node_id]
            if node.alive:
                with self._counter_lock:
                    node.reads_served += 1
                return node.replicas[block_id]
        raise BlockUnavailable(f"all replicas of {block_id!r} are on dead nodes")

    def read_file(self, file_name: str) -> list[FacultyRecord]:
        rows: list[FacultyRecord] = []
        for block_id in self.block_ids(file_name):
            rows.extend(self.read_block(block_id))
        return rows

    def fail_node(self, node_id: int) -> None:
        self._node(node_id).alive = False

    def revive_node(self, node_id: int) -> None:
        self._node(node_id).alive = True

    def re_replicate(self) -> ReplicationReport:
        """Copy under-replicated blocks onto fresh live nodes.

        Blocks with no live replica at all cannot be copied and are
        reported lost (their metadata stays, in case nodes come back).
        """
        live = self.live_node_ids()
        created = 0
        lost: list[str] = []
        for file_name, block_ids in self._file_blocks.items():
            for block_index, block_id in enumerate(block_ids):
                holders = self._block_replicas[block_id]
                live_holders = [n for n in holders if self.nodes[n].alive]
                if not live_holders:
                    lost.append(block_id)
                    continue
                target = min(self.config.replication_factor, len(live))
                deficit = target - len(live_holders)
                if deficit <= 0:
                    continue
                fresh = [n for n in live if n not in holders]
                if not fresh:
                    continue
                rows = self.nodes[live_holders[0]].replicas[block_id]
                for node_id in place_replicas(file_name, block_index, fresh, min(deficit, len(fresh))):
                    self.nodes[node_id].replicas[block_id] = rows
                    holders.append(node_id)
                    created += 1
        return ReplicationReport(created, tuple(lost))

    def manifest(self, file_name: str) -> dict:
        """JSON-style description: block ids, row counts, replica nodes."""
        blocks = [
            {
                "id": block_id,
                "rows": len(self._first_copy(block_id)),
                "replicas": list(self._block_replicas[block_id]),
            }
            for block_id in self.block_ids(file_name)
        ]
        return {"file": file_name, "blocks": blocks, "degraded": self.degraded}

    # -- helpers -------------------------------------------------------

    def _node(self, node_id: int) -> DataNode:
        if not 0 <= node_id < len(self.nodes):
            raise NoSuchNode(f"no such node: {node_id}")
        return self.nodes[node_id]

    def _first_copy(self, block_id: str) -> tuple[FacultyRecord, ...]:
        for node_id in self._block_replicas[block_id]:
            if block_id in self.nodes[node_id].replicas:
                return self.nodes[node_id].replicas[block_id]
        return ()


def create_cluster(config: StorageConfig | None = None) -> Cluster:
    return Cluster(config)
