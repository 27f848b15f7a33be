"""Error types shared across the warehouse.

Every error carries a stable ``code`` string so the CLI and the HTTP
service can map failures to exit codes / status codes without matching
on message text.
"""
from __future__ import annotations


class FairError(Exception):
    """Base class for all user-facing errors."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class HeaderMismatch(FairError):
    """CSV header does not match the expected schema columns."""

    code = "HEADER_MISMATCH"


class FileExists(FairError):
    """A file with this name is already stored on the cluster."""

    code = "FILE_EXISTS"


class NoCapacity(FairError):
    """No live node is available to hold a block replica."""

    code = "NO_CAPACITY"


class BlockUnavailable(FairError):
    """Every replica of the requested block is on a dead node."""

    code = "BLOCK_UNAVAILABLE"


class NoSuchNode(FairError):
    code = "NO_SUCH_NODE"


class NoSuchFile(FairError):
    code = "NO_SUCH_FILE"


class QuerySyntaxError(FairError):
    """Raised by the query parser; ``position`` is a 1-based character offset."""

    code = "SYNTAX_ERROR"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class QuerySemanticError(FairError):
    """Structurally valid query that violates a query-shape rule."""

    code = "INVALID_QUERY"


class UnsupportedExpression(FairError):
    """Expression outside the supported closed grammar (e.g. non-literal concat)."""

    code = "UNSUPPORTED_EXPRESSION"


class NoSuchTable(FairError):
    code = "NO_SUCH_TABLE"


class NoSuchColumn(FairError):
    code = "NO_SUCH_COLUMN"


class TooFewPoints(FairError):
    code = "TOO_FEW_POINTS"


class InvalidK(FairError):
    code = "INVALID_K"


class InvalidPoint(FairError):
    """Geo point with out-of-range or non-finite coordinates."""

    code = "INVALID_POINT"
