"""HTTP front end over a shared warehouse session.

All handlers are synchronous and serialized by one lock — the session
mutates shared storage/cache state, and this service is a teaching
artifact, not a throughput play. The CLI can run against it with
`--server`; responses mirror what the library calls return so both
paths are interchangeable.
"""
from __future__ import annotations

import re
import threading

from fastapi import FastAPI, Query, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.requests import Request

from .. import __version__
from ..errors import (
    BlockUnavailable,
    FairError,
    FileExists,
    NoSuchColumn,
    NoSuchFile,
    NoSuchNode,
    NoSuchTable,
)
from ..kmeans import GeoPoint, fit, model_to_json
from ..report import (
    counts_to_json,
    faculty_counts,
    geo_export,
    geo_to_csv,
    geo_to_json,
    render_bar_chart,
)
from ..session import SessionConfig, SessionState
from .models import (
    CacheResponse,
    ChartResponse,
    ClusterRequest,
    ClusterResponse,
    CountsResponse,
    CreateTableRequest,
    ExplainResponse,
    GeoResponse,
    HealthResponse,
    IngestResponse,
    NodeStateResponse,
    QueryRequest,
    QueryResponse,
    ReReplicateResponse,
    TableSummary,
    TablesResponse,
    WarningOut,
)

_NOT_FOUND = (NoSuchTable, NoSuchFile, NoSuchNode, NoSuchColumn)


def _error_code(exc: Exception) -> str:
    name = re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).upper()
    return name.removesuffix("_ERROR")


def _status_for(exc: Exception) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, FileExists):
        return 409
    if isinstance(exc, BlockUnavailable):
        return 503
    return 400


def create_app(config: SessionConfig | None = None, preload: bool = True) -> FastAPI:
    app = FastAPI(title="faculty warehouse", version=__version__)
    session = SessionState(config)
    if preload:
        session.load_bundled_fixture()
    app.state.session = session
    lock = threading.RLock()
    engine = session.engine

    @app.exception_handler(FairError)
    async def _fair_error(_request: Request, exc: FairError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": _error_code(exc), "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": "INVALID_ARGUMENT", "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(version=__version__)

    @app.get("/tables", response_model=TablesResponse)
    def tables():
        with lock:
            return TablesResponse(tables=[
                TableSummary(name=name, rows=engine.table_info(name).row_count)
                for name in engine.table_names()
            ])

    @app.post("/tables", response_model=IngestResponse, status_code=201)
    def create_table(request: CreateTableRequest):
        with lock:
            if request.replace and request.name in engine.catalog:
                engine.drop_table(request.name)
            report = session.ingest_csv_bytes(request.csv_base64, request.name)
        return IngestResponse(
            table=request.name,
            rows_read=report.rows_read,
            records_produced=report.records_produced,
            rows_rejected=report.rows_rejected,
            warnings=[WarningOut(line_number=w.line_number, code=w.code,
                                 message=w.message)
                      for w in report.warnings],
        )

    @app.delete("/tables/{name}", status_code=204)
    def drop_table(name: str):
        with lock:
            engine.drop_table(name)
        return Response(status_code=204)

    @app.post("/tables/{name}/cache", response_model=CacheResponse)
    def cache(name: str):
        with lock:
            return CacheResponse(table=name, blocks=engine.cache_table(name))

    @app.post("/query", response_model=None)
    def query(request: QueryRequest):
        with lock:
            if request.explain:
                return ExplainResponse(plan=engine.explain_sql(request.sql))
            result = engine.run_sql(request.sql)
        return QueryResponse(
            columns=list(result.columns),
            rows=[list(row) for row in result.rows],
            rows_selected=result.rows_selected,
            elapsed_seconds=result.elapsed_seconds,
        )

    @app.post("/cluster", response_model=ClusterResponse)
    def cluster(request: ClusterRequest):
        with lock:
            export = geo_export(engine, request.table)
            points = [GeoPoint(u, lat, lon) for u, lat, lon in export.points]
            model = fit(points, k=request.k, seed=request.seed,
                        max_iters=request.max_iters, tol=request.tol)
        return ClusterResponse(**model_to_json(points, model))

    @app.get("/reports/counts", response_model=CountsResponse,
             response_model_exclude_none=True)
    def counts(table: str = "faculty1",
               by: str = Query("university", pattern="^(university|department)$")):
        with lock:
            return counts_to_json(faculty_counts(engine, table, by))

    @app.get("/reports/counts/chart", response_model=ChartResponse)
    def counts_chart(table: str = "faculty1",
                     by: str = Query("university", pattern="^(university|department)$"),
                     width: int = Query(40, ge=10)):
        with lock:
            report = faculty_counts(engine, table, by)
        return ChartResponse(chart=render_bar_chart(report, width))

    @app.get("/exports/geo", response_model=None)
    def export_geo(table: str = "faculty1",
                   format: str = Query("json", pattern="^(json|csv)$")):
        with lock:
            export = geo_export(engine, table)
        if format == "csv":
            return PlainTextResponse(geo_to_csv(export), media_type="text/csv")
        return GeoResponse(**geo_to_json(export))

    @app.get("/storage/manifest/{table}")
    def manifest(table: str):
        with lock:
            return engine.manifest(table)

    @app.post("/storage/nodes/{node_id}/fail", response_model=NodeStateResponse)
    def fail_node(node_id: int):
        with lock:
            engine.cluster.fail_node(node_id)
            return NodeStateResponse(node=node_id, alive=False,
                                     degraded=engine.cluster.degraded)

    @app.post("/storage/nodes/{node_id}/revive", response_model=NodeStateResponse)
    def revive_node(node_id: int):
        with lock:
            engine.cluster.revive_node(node_id)
            return NodeStateResponse(node=node_id, alive=True,
                                     degraded=engine.cluster.degraded)

    @app.post("/storage/re-replicate", response_model=ReReplicateResponse)
    def re_replicate():
        with lock:
            report = engine.cluster.re_replicate()
            return ReReplicateResponse(
                replicas_created=report.replicas_created,
                lost_blocks=list(report.lost_blocks),
                degraded=engine.cluster.degraded,
            )

    return app
