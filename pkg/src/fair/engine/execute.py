"""MapReduce-style plan execution over stored blocks.

One map task per block applies filter + project and emits key/value
pairs; tasks are dealt round-robin to a fixed worker pool and their
outputs merged back in block order, so results never depend on thread
timing. Shuffle groups pairs by exact key; reduce either counts per
group or merges pre-sorted runs. The scan pulls blocks from the table
cache when present, otherwise reads them from storage and caches them.

Every ordering the engine produces is total: ORDER BY ties are broken
by ascending record id (row queries) or by the group key (aggregates),
and grouped output is emitted in ascending key order. That is what
makes results identical across block sizes, node counts, and worker
pools.
"""
from __future__ import annotations

import heapq
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cmp_to_key

from ..query.ast import (
    And,
    ColumnRef,
    Comparison,
    CountColumn,
    CountStar,
    Like,
    Not,
    Or,
    Predicate,
    StringLit,
)
from ..query.like import like_match
from ..records import FacultyRecord, FieldValue, value_compare, value_sort_key
from ..storage import Cluster
from .cache import TableCache
from .plan import Aggregate, Filter, Limit, PhysicalPlan, Project, Scan, Shuffle, Sort
from .result import ResultTable

DEFAULT_WORKERS = 4

Key = tuple  # shuffle key: tuple of FieldValue
Row = tuple  # projected row: tuple of FieldValue


@dataclass(frozen=True)
class KeyValueBatch:
    """Output of one map task; pair order follows record_id within the block."""

    block_index: int
    pairs: tuple[tuple[Key, Row, int], ...]  # (key, row, record_id)


# -- predicate evaluation ------------------------------------------------


def eval_predicate(record: FacultyRecord, node: Predicate) -> bool:
    """Boolean predicate semantics; see fair.query.ast for the contract."""
    if isinstance(node, Like):
        assert isinstance(node.pattern, StringLit), "predicate must be constant-folded"
        return like_match(record.field(node.column), node.pattern.value)
    if isinstance(node, Comparison):
        value = record.field(node.column)
        if value is None:
            return False
        if isinstance(node.literal, str):
            equal = isinstance(value, str) and value == node.literal
        else:
            equal = isinstance(value, (int, float)) and value == node.literal
        return equal if node.op == "=" else not equal
    if isinstance(node, And):
        return eval_predicate(record, node.left) and eval_predicate(record, node.right)
    if isinstance(node, Or):
        return eval_predicate(record, node.left) or eval_predicate(record, node.right)
    if isinstance(node, Not):
        return not eval_predicate(record, node.child)
    raise TypeError(f"unknown predicate node: {node!r}")


# -- map / shuffle / reduce ----------------------------------------------


def map_task(
    block_index: int,
    rows: tuple[FacultyRecord, ...],
    predicate: Predicate | None,
    project_columns: tuple[str, ...],
    key_columns: tuple[str, ...],
) -> KeyValueBatch:
    pairs = []
    for record in rows:
        if predicate is not None and not eval_predicate(record, predicate):
            continue
        key = tuple(record.field(c) for c in key_columns)
        projected = tuple(record.field(c) for c in project_columns)
        pairs.append((key, projected, record.record_id))
    return KeyValueBatch(block_index, tuple(pairs))


def shuffle(batches: list[KeyValueBatch]) -> dict[Key, list[Row]]:
    """Group pair values by exact key.

    Within each group, values are ordered by (block index, position in
    batch) — equivalent to ascending record_id — regardless of the
    order the batches arrived in.
    """
    groups: dict[Key, list[Row]] = {}
    for batch in sorted(batches, key=lambda b: b.block_index):
        for key, row, _record_id in batch.pairs:
            groups.setdefault(key, []).append(row)
    return groups


def _order_cmp(sort_keys: tuple[tuple[int, str], ...]):
    """Comparator over (key, row, tiebreak) triples from the sort keys."""

    def compare(a, b) -> int:
        for index, direction in sort_keys:
            c = value_compare(a[1][index], b[1][index])
            if c:
                return c if direction == "asc" else -c
        ta, tb = a[2], b[2]
        return (ta > tb) - (ta < tb)

    return compare


def execute(
    plan: PhysicalPlan,
    cluster: Cluster,
    cache: TableCache,
    workers: int = DEFAULT_WORKERS,
) -> ResultTable:
    started = time.perf_counter()

    scan = plan.stages[0]
    assert isinstance(scan, Scan)
    filter_stage = plan.first_of(Filter)
    project_stage = plan.first_of(Project)
    shuffle_stage = plan.first_of(Shuffle)
    aggregate_stage = plan.first_of(Aggregate)
    sort_stage = plan.first_of(Sort)
    limit_stage = plan.first_of(Limit)

    predicate = filter_stage.predicate if filter_stage else None
    project_columns = project_stage.columns
    key_columns = shuffle_stage.key_columns if shuffle_stage else ()

    batches = _run_map_phase(
        scan, cluster, cache, predicate, project_columns, key_columns, workers
    )

    if aggregate_stage is not None:
        rows = _reduce_aggregate(batches, aggregate_stage, key_columns)
    else:
        rows = _collect_rows(batches, sort_stage)

    if sort_stage is not None and aggregate_stage is not None:
        rows.sort(key=cmp_to_key(_order_cmp(sort_stage.keys)))
    if limit_stage is not None:
        rows = rows[: limit_stage.count]

    final = tuple(row for _key, row, _tiebreak in rows)
    elapsed = time.perf_counter() - started
    return ResultTable(
        columns=plan.output_columns,
        rows=final,
        rows_selected=len(final),
        elapsed_seconds=elapsed,
    )


def _run_map_phase(
    scan: Scan,
    cluster: Cluster,
    cache: TableCache,
    predicate: Predicate | None,
    project_columns: tuple[str, ...],
    key_columns: tuple[str, ...],
    workers: int,
) -> list[KeyValueBatch]:
    cached = cache.get(scan.file_name)
    if cached is None:
        block_ids = cluster.block_ids(scan.file_name)
        fetch = lambda i: cluster.read_block(block_ids[i])  # noqa: E731
        n_blocks = len(block_ids)
    else:
        fetch = lambda i: cached[i]  # noqa: E731
        n_blocks = len(cached)

    if n_blocks == 0:
        return []

    def run_lane(indices: list[int]) -> list[tuple[int, tuple, KeyValueBatch]]:
        out = []
        for i in indices:
            rows = fetch(i)
            out.append((i, rows, map_task(i, rows, predicate, project_columns, key_columns)))
        return out

    lanes = [list(range(w, n_blocks, workers)) for w in range(min(workers, n_blocks))]
    results: list[tuple[int, tuple, KeyValueBatch]] = []
    with ThreadPoolExecutor(max_workers=len(lanes)) as pool:
        for chunk in pool.map(run_lane, lanes):
            results.extend(chunk)
    results.sort(key=lambda item: item[0])

    if cached is None:
        cache.put(scan.file_name, tuple(rows for _i, rows, _b in results))
    return [batch for _i, _rows, batch in results]


def _collect_rows(
    batches: list[KeyValueBatch], sort_stage: Sort | None
) -> list[tuple[Key, Row, int]]:
    """Row-query pipeline: concatenate, or merge per-batch sorted runs."""
    batches = sorted(batches, key=lambda b: b.block_index)
    if sort_stage is None:
        return [pair for batch in batches for pair in batch.pairs]
    compare = _order_cmp(sort_stage.keys)
    runs = [sorted(batch.pairs, key=cmp_to_key(compare)) for batch in batches]
    return list(heapq.merge(*runs, key=cmp_to_key(compare)))


def _reduce_aggregate(
    batches: list[KeyValueBatch],
    aggregate: Aggregate,
    key_columns: tuple[str, ...],
) -> list[tuple[Key, Row, tuple]]:
    """COUNT per group; emits groups in ascending key order.

    The tiebreak element is the group key's sort tuple, giving ORDER BY
    over aggregate output a deterministic total order too.
    """
    groups = shuffle(batches)
    if not key_columns and not groups:
        groups = {(): []}  # a global COUNT over no rows still emits one row

    counted_order = [
        item.name for item in aggregate.items if isinstance(item, CountColumn)
    ]

    def output_row(key: Key, values: list[Row]) -> Row:
        row: list[FieldValue] = []
        for item in aggregate.items:
            if isinstance(item, ColumnRef):
                row.append(key[key_columns.index(item.name)])
            elif isinstance(item, CountStar):
                row.append(len(values))
            else:
                index = len(key_columns) + counted_order.index(item.name)
                row.append(sum(1 for v in values if v[index] is not None))
        return tuple(row)

    ordered_keys = sorted(groups, key=lambda k: tuple(value_sort_key(v) for v in k))
    return [
        (key, output_row(key, groups[key]), tuple(value_sort_key(v) for v in key))
        for key in ordered_keys
    ]
