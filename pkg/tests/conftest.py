import pathlib

import pytest

from fair.engine import Engine
from fair.ingest import ingest_file
from fair.storage import Cluster, StorageConfig

FIXTURE_PATH = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "nit_faculty.csv"


@pytest.fixture(scope="session")
def faculty_records():
    records, _report = ingest_file(FIXTURE_PATH)
    return records


@pytest.fixture()
def faculty_engine(faculty_records):
    engine = Engine()
    engine.create_table("faculty1", faculty_records)
    return engine


def make_engine(records, *, capacity=64, nodes=4, replication=3, workers=4,
                table="t"):
    cluster = Cluster(StorageConfig(replication_factor=replication,
                                    block_row_capacity=capacity,
                                    node_count=nodes))
    engine = Engine(cluster=cluster, workers=workers)
    engine.create_table(table, list(records))
    return engine
