"""Table catalog: names, schemas, and where each table's file lives."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import NoSuchColumn, NoSuchTable
from ..records import Schema

_NAME_RE = re.compile(r"[A-Za-z_]\w*")


@dataclass(frozen=True)
class TableInfo:
    name: str
    file_name: str
    schema: Schema
    row_count: int


class Catalog:
    def __init__(self) -> None:
        self._tables: dict[str, TableInfo] = {}

    @staticmethod
    def check_name(name: str) -> str:
        # names are spliced into query text by reports and the REPL,
        # so they must lex as one identifier
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"table name must be identifier-shaped, got {name!r}")
        return name

    def register(self, info: TableInfo) -> None:
        self.check_name(info.name)
        self._tables[info.name] = info

    def drop(self, name: str) -> None:
        self._tables.pop(name, None)

    def names(self) -> list[str]:
        return sorted(self._tables)

    def __contains__(self, name: str) -> bool:
        return name in self._tables

    def lookup(self, name: str) -> TableInfo:
        try:
            return self._tables[name]
        except KeyError:
            raise NoSuchTable(f"no such table: {name!r}") from None

    def resolve_column(self, table: str, column: str) -> str:
        info = self.lookup(table)
        if not info.schema.has_column(column):
            raise NoSuchColumn(f"no such column: {column!r} in table {table!r}")
        return column
