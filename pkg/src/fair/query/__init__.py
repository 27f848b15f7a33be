"""Query dialect: parser, AST, constant folding, LIKE semantics."""

from .ast import (
    And,
    ColumnArg,
    ColumnRef,
    Comparison,
    Concat,
    CountColumn,
    CountStar,
    Like,
    Not,
    Or,
    PatternExpr,
    Predicate,
    QueryAst,
    SelectItem,
    StringLit,
    fold_constants,
    to_sql,
    validate,
)
from .like import like_match
from .parser import parse

__all__ = [
    "And",
    "ColumnArg",
    "ColumnRef",
    "Comparison",
    "Concat",
    "CountColumn",
    "CountStar",
    "Like",
    "Not",
    "Or",
    "PatternExpr",
    "Predicate",
    "QueryAst",
    "SelectItem",
    "StringLit",
    "fold_constants",
    "like_match",
    "parse",
    "to_sql",
    "validate",
]
