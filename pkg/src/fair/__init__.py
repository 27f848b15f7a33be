"""fair — a miniature faculty-information warehouse.

Single-process simulation of a small analytics stack: tolerant CSV
ingest, a replicated block store, a SQL-subset query engine with an
in-memory table cache, geographic k-means clustering, and summary
reports. Exposed as a Python API, a CLI, and an HTTP service.
"""

from .errors import FairError
from .ingest import IngestReport, IngestWarning, ingest_bytes, ingest_file
from .records import FACULTY_SCHEMA, FacultyRecord, FieldValue, Schema

__version__ = "0.1.0"

__all__ = [
    "FACULTY_SCHEMA",
    "FacultyRecord",
    "FairError",
    "FieldValue",
    "IngestReport",
    "IngestWarning",
    "Schema",
    "__version__",
    "ingest_bytes",
    "ingest_file",
]
