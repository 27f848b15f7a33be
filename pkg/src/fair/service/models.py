"""Request/response schemas for the HTTP service."""
from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import Base64Bytes, BaseModel, Field

FieldOut = Union[None, int, float, str]


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    version: str


class TableSummary(BaseModel):
    name: str
    rows: int


class TablesResponse(BaseModel):
    tables: list[TableSummary]


class CreateTableRequest(BaseModel):
    name: str = Field(pattern=r"^[A-Za-z_]\w*$")
    csv_base64: Base64Bytes
    replace: bool = False


class WarningOut(BaseModel):
    line_number: int
    code: str
    message: str


class IngestResponse(BaseModel):
    table: str
    rows_read: int
    records_produced: int
    rows_rejected: int
    warnings: list[WarningOut]


class CacheResponse(BaseModel):
    table: str
    blocks: int


class QueryRequest(BaseModel):
    sql: str = Field(min_length=1)
    explain: bool = False


class QueryResponse(BaseModel):
    columns: list[str]
    rows: list[list[FieldOut]]
    rows_selected: int
    elapsed_seconds: float


class ExplainResponse(BaseModel):
    plan: str


class ClusterRequest(BaseModel):
    table: str = "faculty1"
    k: int = Field(default=3, ge=1)
    seed: int = 42
    max_iters: int = Field(default=100, ge=1)
    tol: float = Field(default=1e-6, ge=0.0)


class ClusterOut(BaseModel):
    index: int
    members: list[str]


class ClusterResponse(BaseModel):
    k: int
    centroids: list[list[float]]
    clusters: list[ClusterOut]
    cost: float
    iterations: int


class CountRowOut(BaseModel):
    university: str
    department: Optional[str] = None
    count: int


class CountsResponse(BaseModel):
    grouping: list[str]
    rows: list[CountRowOut]
    total: int


class ChartResponse(BaseModel):
    chart: str


class GeoPointOut(BaseModel):
    university: str
    lat: float
    lon: float


class GeoResponse(BaseModel):
    points: list[GeoPointOut]
    skipped: list[str]


class NodeStateResponse(BaseModel):
    node: int
    alive: bool
    degraded: bool


class ReReplicateResponse(BaseModel):
    replicas_created: int
    lost_blocks: list[str]
    degraded: bool


class ErrorResponse(BaseModel):
    error: str
    detail: str
