"""Query engine: planner, MapReduce-style executor, table cache.

The :class:`Engine` façade owns a storage cluster, a catalog, and a
cache, and turns query text into :class:`ResultTable`s.
"""
from __future__ import annotations

from ..query import fold_constants, parse
from ..records import FACULTY_SCHEMA, FacultyRecord
from ..storage import Cluster, StorageConfig
from .cache import TableCache, cache_table
from .catalog import Catalog, TableInfo
from .execute import DEFAULT_WORKERS, KeyValueBatch, eval_predicate, execute, map_task, shuffle
from .plan import PhysicalPlan, plan
from .result import ResultTable

__all__ = [
    "Catalog",
    "DEFAULT_WORKERS",
    "Engine",
    "KeyValueBatch",
    "PhysicalPlan",
    "ResultTable",
    "TableCache",
    "TableInfo",
    "cache_table",
    "eval_predicate",
    "execute",
    "map_task",
    "plan",
    "shuffle",
]


class Engine:
    def __init__(self, cluster: Cluster | None = None, workers: int = DEFAULT_WORKERS) -> None:
        if workers < 1:
            raise ValueError(f"workers must be positive, got {workers}")
        self.cluster = cluster or Cluster(StorageConfig())
        self.cache = TableCache()
        self.catalog = Catalog()
        self.workers = workers

    def create_table(self, name: str, records: list[FacultyRecord]) -> dict:
        """Store records as a new table; returns the placement manifest."""
        Catalog.check_name(name)  # before storage so a bad name leaves no file
        manifest = self.cluster.store_file(name, records)
        self.catalog.register(TableInfo(name, name, FACULTY_SCHEMA, len(records)))
        return manifest

    def replace_table(self, name: str, records: list[FacultyRecord]) -> dict:
        if name in self.catalog:
            self.drop_table(name)
        return self.create_table(name, records)

    def drop_table(self, name: str) -> None:
        info = self.catalog.lookup(name)
        self.cluster.remove_file(info.file_name)
        self.cache.invalidate(info.file_name)
        self.catalog.drop(name)

    def table_names(self) -> list[str]:
        return self.catalog.names()

    def table_info(self, name: str) -> TableInfo:
        return self.catalog.lookup(name)

    def plan_sql(self, text: str) -> PhysicalPlan:
        ast = fold_constants(parse(text))
        return plan(ast, self.catalog)

    def run_sql(self, text: str) -> ResultTable:
        return execute(self.plan_sql(text), self.cluster, self.cache, self.workers)

    def explain_sql(self, text: str) -> str:
        return self.plan_sql(text).describe()

    def cache_table(self, name: str) -> int:
        info = self.catalog.lookup(name)
        return cache_table(self.cache, self.cluster, info.file_name)

    def manifest(self, name: str) -> dict:
        info = self.catalog.lookup(name)
        return self.cluster.manifest(info.file_name)
