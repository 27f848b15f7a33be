"""Physical planning: AST + catalog -> ordered pipeline stages.

Stage order is fixed: Scan -> Filter -> Project -> (Shuffle ->
Aggregate) -> Sort -> Limit, with the optional stages present only
when the query asks for them. All column validation happens here, so
execution can assume every name resolves.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySemanticError
from ..query.ast import (
    And,
    ColumnRef,
    Comparison,
    CountColumn,
    Like,
    Not,
    Or,
    Predicate,
    QueryAst,
    SelectItem,
    StringLit,
    predicate_sql,
)
from .catalog import Catalog


@dataclass(frozen=True)
class Scan:
    table: str
    file_name: str

    def describe(self) -> str:
        return f"Scan({self.table})"


@dataclass(frozen=True)
class Filter:
    predicate: Predicate

    def describe(self) -> str:
        return f"Filter({predicate_sql(self.predicate)})"


@dataclass(frozen=True)
class Project:
    columns: tuple[str, ...]  # source column names, in output order

    def describe(self) -> str:
        return f"Project({', '.join(self.columns)})"


@dataclass(frozen=True)
class Shuffle:
    key_columns: tuple[str, ...]

    def describe(self) -> str:
        return f"Shuffle({', '.join(self.key_columns) or 'global'})"


@dataclass(frozen=True)
class Aggregate:
    items: tuple[SelectItem, ...]  # full select list: keys and counts

    def describe(self) -> str:
        return f"Aggregate({', '.join(i.output_name for i in self.items)})"


@dataclass(frozen=True)
class Sort:
    keys: tuple[tuple[int, str], ...]  # (output column index, asc|desc)
    output_names: tuple[str, ...]

    def describe(self) -> str:
        keys = ", ".join(
            f"{self.output_names[i]} {direction.upper()}" for i, direction in self.keys
        )
        return f"Sort({keys})"


@dataclass(frozen=True)
class Limit:
    count: int

    def describe(self) -> str:
        return f"Limit({self.count})"


Stage = Scan | Filter | Project | Shuffle | Aggregate | Sort | Limit


@dataclass(frozen=True)
class PhysicalPlan:
    stages: tuple[Stage, ...]
    output_columns: tuple[str, ...]

    def describe(self) -> str:
        return " -> ".join(stage.describe() for stage in self.stages)

    def first_of(self, kind) -> Stage | None:
        return next((s for s in self.stages if isinstance(s, kind)), None)


def plan(ast: QueryAst, catalog: Catalog) -> PhysicalPlan:
    """Validate names against the catalog and lay out the stage pipeline."""
    info = catalog.lookup(ast.table)
    check = lambda column: catalog.resolve_column(ast.table, column)  # noqa: E731

    if ast.where is not None:
        _check_predicate_columns(ast.where, check)

    if ast.star:
        select_items: tuple[SelectItem, ...] = tuple(
            ColumnRef(name) for name in info.schema.names
        )
    else:
        select_items = ast.select_items
    for item in select_items:
        if isinstance(item, (ColumnRef, CountColumn)):
            check(item.name)
    for column in ast.group_by:
        check(column)

    output_names = tuple(item.output_name for item in select_items)
    stages: list[Stage] = [Scan(ast.table, info.file_name)]
    if ast.where is not None:
        stages.append(Filter(ast.where))

    if ast.is_aggregate:
        counted = tuple(
            item.name for item in select_items if isinstance(item, CountColumn)
        )
        stages.append(Project(ast.group_by + counted))
        stages.append(Shuffle(ast.group_by))
        stages.append(Aggregate(select_items))
    else:
        stages.append(Project(tuple(item.name for item in select_items)))

    if ast.order_by:
        by_name = {name: i for i, name in enumerate(output_names)}
        keys = []
        for name, direction in ast.order_by:
            if name not in by_name:  # star queries are validated only here
                raise QuerySemanticError(
                    f"ORDER BY column {name!r} is not in the select output"
                )
            keys.append((by_name[name], direction))
        stages.append(Sort(tuple(keys), output_names))
    if ast.limit is not None:
        stages.append(Limit(ast.limit))
    return PhysicalPlan(tuple(stages), output_names)


def _check_predicate_columns(node: Predicate, check) -> None:
    if isinstance(node, Like):
        check(node.column)
        if not isinstance(node.pattern, StringLit):
            raise AssertionError("plan() requires a constant-folded AST")
    elif isinstance(node, Comparison):
        check(node.column)
    elif isinstance(node, (And, Or)):
        _check_predicate_columns(node.left, check)
        _check_predicate_columns(node.right, check)
    elif isinstance(node, Not):
        _check_predicate_columns(node.child, check)
