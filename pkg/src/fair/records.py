"""Faculty record schema and field-value semantics.

A field value is one of three things:

* ``str``   -- text
* ``float`` -- a finite number (latitude / longitude)
* ``None``  -- missing; the canonical form of the source literal ``"NA"``
  and of empty cells

Everything downstream (sorting, LIKE matching, grouping, rendering)
builds on the ordering and rendering rules defined here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

FieldValue = str | int | float | None
# Stored record fields only ever hold str, float, or None; int appears
# in derived values (COUNT outputs) and is treated as a number by the
# comparison and rendering helpers below.

#: Source literal that ingestion canonicalizes to a missing value.
NA_LITERAL = "NA"

# Validation codes, see validate_record().
REQUIRED_MISSING = "REQUIRED_MISSING"
NA_TEXT = "NA_TEXT"
NOT_TEXT = "NOT_TEXT"
NOT_NUMBER = "NOT_NUMBER"
NOT_FINITE = "NOT_FINITE"
LAT_RANGE = "LAT_RANGE"
LON_RANGE = "LON_RANGE"
NEGATIVE_RECORD_ID = "NEGATIVE_RECORD_ID"

TEXT = "text"
NUMBER = "number"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # "text" | "number"


@dataclass(frozen=True)
class Schema:
    """Ordered column list for one table."""

    columns: tuple[Column, ...]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names in schema")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def kind_of(self, name: str) -> str:
        for c in self.columns:
            if c.name == name:
                return c.kind
        raise KeyError(name)

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)


#: The fixed nine-column faculty schema. ``record_id`` is synthetic
#: (assigned at ingest) and is deliberately not part of the schema.
FACULTY_SCHEMA = Schema(
    (
        Column("university", TEXT),
        Column("faculty_name", TEXT),
        Column("designation", TEXT),
        Column("research_area", TEXT),
        Column("qualification", TEXT),
        Column("email", TEXT),
        Column("department", TEXT),
        Column("latitude", NUMBER),
        Column("longitude", NUMBER),
    )
)

#: Fields that must never be missing; rows violating this are rejected at ingest.
REQUIRED_FIELDS = ("university", "faculty_name")


@dataclass(frozen=True)
class FacultyRecord:
    """One faculty row. ``record_id`` is dense ingestion order, starting at 0."""

    record_id: int
    university: str
    faculty_name: str
    designation: FieldValue = None
    research_area: FieldValue = None
    qualification: FieldValue = None
    email: FieldValue = None
    department: FieldValue = None
    latitude: FieldValue = None
    longitude: FieldValue = None

    def field(self, column: str) -> FieldValue:
        """Value of a schema column by name."""
        if not FACULTY_SCHEMA.has_column(column):
            raise KeyError(column)
        return getattr(self, column)

    def cells(self) -> list[str]:
        """CSV cell texts in schema order (missing renders as ``NA``)."""
        return [render_cell(self.field(n)) for n in FACULTY_SCHEMA.names]


def render_cell(value: FieldValue) -> str:
    """Canonical text form of a value: ``NA`` for missing, shortest repr for numbers."""
    if value is None:
        return NA_LITERAL
    if isinstance(value, (int, float)):
        return str(value)
    return value


def value_to_json(value: FieldValue) -> str | float | None:
    """JSON form: missing maps to null, numbers and text map to themselves."""
    return value


def validate_record(record: FacultyRecord) -> list[str]:
    """Check every per-record invariant; returns violation codes, never raises.

    An empty report guarantees the record survives a CSV round trip
    (serialize with :meth:`FacultyRecord.cells`, re-parse, compare equal).
    """
    report: list[str] = []
    if not isinstance(record.record_id, int) or record.record_id < 0:
        report.append(NEGATIVE_RECORD_ID)
    for name in REQUIRED_FIELDS:
        value = getattr(record, name)
        if not isinstance(value, str) or value in ("", NA_LITERAL):
            report.append(REQUIRED_MISSING)
    for name in ("designation", "research_area", "qualification", "email", "department"):
        value = getattr(record, name)
        if value is None:
            continue
        if not isinstance(value, str):
            report.append(NOT_TEXT)
        elif value in ("", NA_LITERAL):
            # these spellings must be stored as missing, not as text
            report.append(NA_TEXT)
    report.extend(_check_coord(record.latitude, 90.0, LAT_RANGE))
    report.extend(_check_coord(record.longitude, 180.0, LON_RANGE))
    return report


def _check_coord(value: FieldValue, bound: float, range_code: str) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, float):
        return [NOT_NUMBER]
    if not math.isfinite(value):
        return [NOT_FINITE]
    if not -bound <= value <= bound:
        return [range_code]
    return []


def _rank(value: FieldValue) -> int:
    if value is None:
        return 0
    if isinstance(value, (int, float)):
        return 1
    return 2


def value_compare(a: FieldValue, b: FieldValue) -> int:
    """Total order over field values: missing < any number < any text.

    Numbers compare numerically; text compares byte-wise over its UTF-8
    encoding (deliberately collation-free). Returns -1, 0 or 1.
    """
    ra, rb = _rank(a), _rank(b)
    if ra != rb:
        return -1 if ra < rb else 1
    if ra == 0:
        return 0
    if ra == 1:
        return (a > b) - (a < b)
    ab = a.encode("utf-8")
    bb = b.encode("utf-8")
    return (ab > bb) - (ab < bb)


def value_sort_key(value: FieldValue) -> tuple:
    """Ascending sort key consistent with :func:`value_compare`."""
    if value is None:
        return (0, 0.0)
    if isinstance(value, (int, float)):
        return (1, value)
    return (2, value.encode("utf-8"))


RECORD_FIELD_NAMES = tuple(f.name for f in fields(FacultyRecord))


def record_to_json(record: FacultyRecord) -> dict:
    return {name: value_to_json(getattr(record, name)) for name in RECORD_FIELD_NAMES}


def record_from_json(obj: dict) -> FacultyRecord:
    kwargs = {}
    for name in RECORD_FIELD_NAMES:
        value = obj[name]
        if name in ("latitude", "longitude") and value is not None:
            value = float(value)
        kwargs[name] = value
    return FacultyRecord(**kwargs)
