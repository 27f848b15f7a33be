"""Hand-written lexer and recursive-descent parser for the query dialect.

Keywords are case-insensitive (source queries freely mix `SELECT` and
`where`); identifiers are case-sensitive. String literals are
single-quoted with `''` escaping a quote. A trailing semicolon is
allowed and ignored. Syntax errors carry a 1-based character position.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import QuerySyntaxError
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
    validate,
)

KEYWORDS = {
    "SELECT", "FROM", "WHERE", "GROUP", "ORDER", "BY", "LIMIT",
    "AND", "OR", "NOT", "LIKE", "COUNT", "CONCAT", "AS", "ASC", "DESC",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>'(?:[^']|'')*')
  | (?P<neq><>)
  | (?P<punct>[(),;*=])
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD, IDENT, NUMBER, STRING, or the punctuation itself
    text: str
    position: int  # 1-based character offset

    def keyword(self) -> str | None:
        return self.text.upper() if self.kind == "KEYWORD" else None


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            snippet = text[pos]
            if snippet == "'":
                raise QuerySyntaxError("unterminated string literal", position=pos + 1)
            raise QuerySyntaxError(f"unexpected character {snippet!r}", position=pos + 1)
        group = match.lastgroup
        value = match.group()
        if group == "ident":
            kind = "KEYWORD" if value.upper() in KEYWORDS else "IDENT"
            tokens.append(Token(kind, value, pos + 1))
        elif group == "number":
            tokens.append(Token("NUMBER", value, pos + 1))
        elif group == "string":
            tokens.append(Token("STRING", value, pos + 1))
        elif group == "neq":
            tokens.append(Token("<>", value, pos + 1))
        elif group == "punct":
            tokens.append(Token(value, value, pos + 1))
        pos = match.end()
    tokens.append(Token("EOF", "", len(text) + 1))
    return tokens


def _unquote(text: str) -> str:
    return text[1:-1].replace("''", "'")


class Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    # -- token plumbing -------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def at_keyword(self, *names: str) -> bool:
        return self.current.keyword() in names

    def take_keyword(self, name: str) -> Token:
        if not self.at_keyword(name):
            self.fail(name)
        return self.advance()

    def take(self, kind: str) -> Token:
        if self.current.kind != kind:
            self.fail(kind)
        return self.advance()

    def fail(self, expected: str) -> None:
        token = self.current
        found = token.text or "end of input"
        raise QuerySyntaxError(
            f"expected {expected}, found {found!r}", position=token.position
        )

    # -- grammar --------------------------------------------------------

    def parse(self) -> QueryAst:
        self.take_keyword("SELECT")
        star, items = self.select_list()
        self.take_keyword("FROM")
        table = self.take("IDENT").text
        where = None
        group_by: tuple[str, ...] = ()
        order_by: tuple[tuple[str, str], ...] = ()
        limit = None
        if self.at_keyword("WHERE"):
            self.advance()
            where = self.predicate()
        if self.at_keyword("GROUP"):
            self.advance()
            self.take_keyword("BY")
            group_by = tuple(self.column_list())
        if self.at_keyword("ORDER"):
            self.advance()
            self.take_keyword("BY")
            order_by = tuple(self.order_list())
        if self.at_keyword("LIMIT"):
            self.advance()
            limit = self.positive_int()
        if self.current.kind == ";":
            self.advance()
        if self.current.kind != "EOF":
            self.fail("end of query")
        return validate(
            QueryAst(
                table=table,
                star=star,
                select_items=tuple(items),
                where=where,
                group_by=group_by,
                order_by=order_by,
                limit=limit,
            )
        )

    def select_list(self) -> tuple[bool, list[SelectItem]]:
        if self.current.kind == "*":
            self.advance()
            return True, []
        items = [self.select_item()]
        while self.current.kind == ",":
            self.advance()
            items.append(self.select_item())
        return False, items

    def select_item(self) -> SelectItem:
        if self.at_keyword("COUNT"):
            self.advance()
            self.take("(")
            if self.current.kind == "*":
                self.advance()
                self.take(")")
                return CountStar(alias=self.alias())
            name = self.take("IDENT").text
            self.take(")")
            return CountColumn(name, alias=self.alias())
        name = self.take("IDENT").text
        return ColumnRef(name, alias=self.alias())

    def alias(self) -> str | None:
        if self.at_keyword("AS"):
            self.advance()
            return self.take("IDENT").text
        return None

    def column_list(self) -> list[str]:
        names = [self.take("IDENT").text]
        while self.current.kind == ",":
            self.advance()
            names.append(self.take("IDENT").text)
        return names

    def order_list(self) -> list[tuple[str, str]]:
        keys = [self.order_key()]
        while self.current.kind == ",":
            self.advance()
            keys.append(self.order_key())
        return keys

    def order_key(self) -> tuple[str, str]:
        name = self.take("IDENT").text
        direction = "asc"
        if self.at_keyword("ASC", "DESC"):
            direction = self.advance().text.lower()
        return name, direction

    def positive_int(self) -> int:
        token = self.take("NUMBER")
        try:
            value = int(token.text)
        except ValueError:
            raise QuerySyntaxError(
                f"LIMIT must be an integer, found {token.text!r}", position=token.position
            ) from None
        return value

    # predicate := conjunction ( OR conjunction )*
    def predicate(self) -> Predicate:
        node = self.conjunction()
        while self.at_keyword("OR"):
            self.advance()
            node = Or(node, self.conjunction())
        return node

    # conjunction := negation ( AND negation )*
    def conjunction(self) -> Predicate:
        node = self.negation()
        while self.at_keyword("AND"):
            self.advance()
            node = And(node, self.negation())
        return node

    # negation := NOT negation | atom
    def negation(self) -> Predicate:
        if self.at_keyword("NOT"):
            self.advance()
            return Not(self.negation())
        return self.atom()

    # atom := '(' predicate ')' | column (LIKE pattern | = literal | <> literal)
    def atom(self) -> Predicate:
        if self.current.kind == "(":
            self.advance()
            node = self.predicate()
            self.take(")")
            return node
        column = self.take("IDENT").text
        if self.at_keyword("LIKE"):
            self.advance()
            return Like(column, self.pattern())
        if self.current.kind == "=":
            self.advance()
            return Comparison("=", column, self.literal())
        if self.current.kind == "<>":
            self.advance()
            return Comparison("<>", column, self.literal())
        self.fail("LIKE, = or <>")
        raise AssertionError("unreachable")

    def pattern(self) -> PatternExpr:
        if self.current.kind == "STRING":
            return StringLit(_unquote(self.advance().text))
        if self.at_keyword("CONCAT"):
            self.advance()
            self.take("(")
            parts = [self.concat_argument()]
            while self.current.kind == ",":
                self.advance()
                parts.append(self.concat_argument())
            self.take(")")
            return Concat(tuple(parts))
        self.fail("string literal or concat(...)")
        raise AssertionError("unreachable")

    def concat_argument(self) -> PatternExpr:
        if self.current.kind == "STRING":
            return StringLit(_unquote(self.advance().text))
        if self.at_keyword("CONCAT"):
            return self.pattern()
        if self.current.kind == "IDENT":
            # accepted here so constant folding can reject it with a
            # clearer error than a syntax failure would give
            return ColumnArg(self.advance().text)
        self.fail("string literal")
        raise AssertionError("unreachable")

    def literal(self) -> str | float:
        if self.current.kind == "STRING":
            return _unquote(self.advance().text)
        if self.current.kind == "NUMBER":
            return float(self.advance().text)
        self.fail("literal")
        raise AssertionError("unreachable")


def parse(text: str) -> QueryAst:
    """Parse query text to a validated AST."""
    return Parser(text).parse()
