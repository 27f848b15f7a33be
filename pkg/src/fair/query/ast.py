"""Query AST: node types, canonical printing, constant folding.

The dialect is deliberately closed: SELECT / FROM / WHERE / GROUP BY /
ORDER BY / LIMIT, the COUNT aggregate, AND / OR / NOT, =, <>, LIKE,
and concat() of string literals. Nothing else parses.

Comparison semantics (shared by the engine and by the reference
evaluator used in tests — keep them in sync):

* `=`  — a string literal equals Text values byte-wise; a numeric
  literal equals Number values numerically; a Missing value equals
  nothing, and values of the other type never equal the literal
* `<>` — true exactly when the value is not Missing and `=` is false
* NOT  — plain boolean negation (no three-valued logic)
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import QuerySemanticError, UnsupportedExpression

ASC = "asc"
DESC = "desc"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


# -- select items -------------------------------------------------------


@dataclass(frozen=True)
class ColumnRef:
    name: str
    alias: str | None = None

    @property
    def output_name(self) -> str:
        return self.alias or self.name


@dataclass(frozen=True)
class CountStar:
    alias: str | None = None

    @property
    def output_name(self) -> str:
        return self.alias or "count(*)"


@dataclass(frozen=True)
class CountColumn:
    name: str
    alias: str | None = None

    @property
    def output_name(self) -> str:
        return self.alias or f"count({self.name})"


SelectItem = ColumnRef | CountStar | CountColumn


# -- pattern expressions (right-hand side of LIKE) ----------------------


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class ColumnArg:
    """A bare identifier inside concat(); folding rejects it."""

    name: str


@dataclass(frozen=True)
class Concat:
    parts: tuple["PatternExpr", ...]


PatternExpr = StringLit | ColumnArg | Concat


# -- predicates ----------------------------------------------------------


@dataclass(frozen=True)
class Like:
    column: str
    pattern: PatternExpr


@dataclass(frozen=True)
class Comparison:
    op: str  # "=" or "<>"
    column: str
    literal: str | float


@dataclass(frozen=True)
class And:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Or:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Not:
    child: "Predicate"


Predicate = Like | Comparison | And | Or | Not


@dataclass(frozen=True)
class QueryAst:
    table: str
    star: bool = False
    select_items: tuple[SelectItem, ...] = ()
    where: Predicate | None = None
    group_by: tuple[str, ...] = ()
    order_by: tuple[tuple[str, str], ...] = ()  # (output column, asc|desc)
    limit: int | None = None

    @property
    def aggregates(self) -> tuple[SelectItem, ...]:
        return tuple(i for i in self.select_items if isinstance(i, (CountStar, CountColumn)))

    @property
    def plain_columns(self) -> tuple[ColumnRef, ...]:
        return tuple(i for i in self.select_items if isinstance(i, ColumnRef))

    @property
    def is_aggregate(self) -> bool:
        return bool(self.group_by) or bool(self.aggregates)

    def output_names(self) -> list[str]:
        """Result column names for a non-star query (aliases win)."""
        return [item.output_name for item in self.select_items]


def validate(ast: QueryAst) -> QueryAst:
    """Check catalog-independent shape rules; returns the AST unchanged.

    Column existence is the planner's job — this only enforces what the
    grammar alone cannot: grouping coverage, order-by targets, limits.
    """
    if ast.star and ast.is_aggregate:
        raise QuerySemanticError("SELECT * cannot be combined with GROUP BY or COUNT")
    if ast.group_by:
        keys = set(ast.group_by)
        for item in ast.plain_columns:
            if item.name not in keys:
                raise QuerySemanticError(
                    f"column {item.name!r} must appear in GROUP BY to be selected"
                )
    elif ast.aggregates and ast.plain_columns:
        raise QuerySemanticError("plain columns cannot mix with COUNT without GROUP BY")
    outputs = set(ast.output_names())
    for name, _ in ast.order_by:
        if not _IDENT_RE.fullmatch(name):
            # "count(*)" is not referencable by the grammar's order keys;
            # keeps canonical text re-parseable to the same AST
            raise QuerySemanticError(
                f"ORDER BY target {name!r} needs an AS alias to be referencable"
            )
        if not ast.star and name not in outputs:
            raise QuerySemanticError(
                f"ORDER BY column {name!r} is not in the select output"
            )
    if ast.limit is not None and ast.limit < 1:
        raise QuerySemanticError(f"LIMIT must be positive, got {ast.limit}")
    if len(set(ast.output_names())) != len(ast.select_items):
        raise QuerySemanticError("duplicate output column names; use AS to disambiguate")
    return ast


def fold_constants(ast: QueryAst) -> QueryAst:
    """Replace every concat() of literals by its joined literal.

    Idempotent. A non-literal argument (a column name inside concat)
    is unsupported and raises rather than folding.
    """
    if ast.where is None:
        return ast
    return QueryAst(
        table=ast.table,
        star=ast.star,
        select_items=ast.select_items,
        where=_fold_predicate(ast.where),
        group_by=ast.group_by,
        order_by=ast.order_by,
        limit=ast.limit,
    )


def _fold_predicate(node: Predicate) -> Predicate:
    if isinstance(node, Like):
        return Like(node.column, StringLit(_fold_pattern(node.pattern)))
    if isinstance(node, And):
        return And(_fold_predicate(node.left), _fold_predicate(node.right))
    if isinstance(node, Or):
        return Or(_fold_predicate(node.left), _fold_predicate(node.right))
    if isinstance(node, Not):
        return Not(_fold_predicate(node.child))
    return node


def _fold_pattern(pattern: PatternExpr) -> str:
    if isinstance(pattern, StringLit):
        return pattern.value
    if isinstance(pattern, Concat):
        return "".join(_fold_pattern(part) for part in pattern.parts)
    raise UnsupportedExpression(
        f"concat() arguments must be string literals, got column {pattern.name!r}"
    )


# -- canonical text ------------------------------------------------------


def to_sql(ast: QueryAst) -> str:
    """Print the AST as canonical query text (re-parses to the same AST)."""
    if ast.star:
        select = "*"
    else:
        select = ", ".join(_item_sql(i) for i in ast.select_items)
    parts = [f"SELECT {select} FROM {ast.table}"]
    if ast.where is not None:
        parts.append(f"WHERE {_predicate_sql(ast.where)}")
    if ast.group_by:
        parts.append("GROUP BY " + ", ".join(ast.group_by))
    if ast.order_by:
        keys = ", ".join(f"{name} {direction.upper()}" for name, direction in ast.order_by)
        parts.append("ORDER BY " + keys)
    if ast.limit is not None:
        parts.append(f"LIMIT {ast.limit}")
    return " ".join(parts)


def _item_sql(item: SelectItem) -> str:
    if isinstance(item, ColumnRef):
        base = item.name
    elif isinstance(item, CountStar):
        base = "COUNT(*)"
    else:
        base = f"COUNT({item.name})"
    return f"{base} AS {item.alias}" if item.alias else base


def _string_sql(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def _pattern_sql(pattern: PatternExpr) -> str:
    if isinstance(pattern, StringLit):
        return _string_sql(pattern.value)
    if isinstance(pattern, ColumnArg):
        return pattern.name
    return "concat(" + ", ".join(_pattern_sql(p) for p in pattern.parts) + ")"


_PRECEDENCE = {Or: 1, And: 2, Not: 3}


def _predicate_sql(node: Predicate, min_prec: int = 1) -> str:
    """Print with parentheses only where re-parsing needs them.

    Precedence NOT > AND > OR; AND/OR parse left-associative, so a
    right operand of the same operator must be parenthesized to keep
    the tree shape through a round trip.
    """
    if isinstance(node, Like):
        return f"{node.column} LIKE {_pattern_sql(node.pattern)}"
    if isinstance(node, Comparison):
        if isinstance(node.literal, str):
            lit = _string_sql(node.literal)
        else:
            lit = repr(node.literal)
        return f"{node.column} {node.op} {lit}"
    if isinstance(node, Not):
        text = f"NOT {_predicate_sql(node.child, 4)}"
    elif isinstance(node, And):
        text = f"{_predicate_sql(node.left, 2)} AND {_predicate_sql(node.right, 3)}"
    else:
        text = f"{_predicate_sql(node.left, 1)} OR {_predicate_sql(node.right, 2)}"
    if _PRECEDENCE[type(node)] < min_prec:
        return f"({text})"
    return text


def predicate_sql(node: Predicate) -> str:
    """Canonical text of a predicate alone (used by EXPLAIN output)."""
    return _predicate_sql(node)
