"""One warehouse session: storage cluster + engine + ingested tables.

Sessions are in-memory. `save`/`load` round-trip the whole session —
storage shape and every table's records — through a single JSON file,
which is the only persistence the command-line tools offer. Loading
re-stores each table, so block placement is recomputed by the same
deterministic rule that placed it originally.
"""
from __future__ import annotations

import importlib.resources
import json
import pathlib
from dataclasses import asdict, dataclass

from .engine import Engine
from .ingest import IngestReport, ingest_bytes
from .records import record_from_json, record_to_json
from .storage import Cluster, StorageConfig

DEFAULT_TABLE = "faculty1"
BUNDLED_DATA = "nit_faculty.csv"


@dataclass(frozen=True)
class SessionConfig:
    block_row_capacity: int = 64
    node_count: int = 4
    replication_factor: int = 3
    workers: int = 4

    def storage(self) -> StorageConfig:
        return StorageConfig(
            replication_factor=self.replication_factor,
            block_row_capacity=self.block_row_capacity,
            node_count=self.node_count,
        )


class SessionState:
    def __init__(self, config: SessionConfig | None = None) -> None:
        self.config = config or SessionConfig()
        self.engine = Engine(cluster=Cluster(self.config.storage()),
                             workers=self.config.workers)

    def ingest_csv_bytes(self, data: bytes, table: str) -> IngestReport:
        records, report = ingest_bytes(data)
        self.engine.create_table(table, records)
        return report

    def ingest_csv_file(self, path: str | pathlib.Path, table: str) -> IngestReport:
        return self.ingest_csv_bytes(pathlib.Path(path).read_bytes(), table)

    def load_bundled_fixture(self, table: str = DEFAULT_TABLE) -> IngestReport:
        data = importlib.resources.files("fair").joinpath("data", BUNDLED_DATA)
        return self.ingest_csv_bytes(data.read_bytes(), table)

    # -- persistence ------------------------------------------------------

    def save(self, path: str | pathlib.Path) -> None:
        payload = {
            "config": asdict(self.config),
            "tables": {
                name: [
                    record_to_json(record)
                    for record in self.engine.cluster.read_file(
                        self.engine.table_info(name).file_name)
                ]
                for name in self.engine.table_names()
            },
        }
        pathlib.Path(path).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | pathlib.Path) -> "SessionState":
        payload = json.loads(pathlib.Path(path).read_text(encoding="utf-8"))
        session = cls(SessionConfig(**payload["config"]))
        for name, rows in payload["tables"].items():
            session.engine.create_table(
                name, [record_from_json(row) for row in rows])
        return session
