"""Command-line front door: ingest, query, REPL, clustering, reports.

Runs against an in-process session by default; `--server URL` switches
every subcommand to the HTTP service instead, with identical output.
Single-shot commands that read a table preload the bundled campus
dataset as table `faculty1` unless `--load-manifest` restores a saved
session. Exit codes: 0 success, 1 user error (bad query, missing
table, malformed input), 2 I/O or internal error.
"""
from __future__ import annotations

import argparse
import base64
import json
import sys
from dataclasses import dataclass

from .engine import ResultTable
from .errors import FairError
from .kmeans import GeoPoint, fit, model_to_json
from .report import (
    CountReport,
    GeoExport,
    counts_to_csv,
    counts_to_json,
    faculty_counts,
    geo_export,
    geo_to_csv,
    geo_to_json,
    render_bar_chart,
)
from .session import DEFAULT_TABLE, SessionConfig, SessionState

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2

#: subcommands that read an existing table and so get the bundled
#: fixture preloaded when no saved session is supplied
TABLE_READERS = {"query", "repl", "cluster", "report", "export"}


class RemoteError(Exception):
    def __init__(self, message: str, exit_code: int) -> None:
        super().__init__(message)
        self.exit_code = exit_code


@dataclass(frozen=True)
class IngestSummary:
    rows_read: int
    records_produced: int
    rows_rejected: int
    warnings: tuple[tuple[int, str, str], ...]  # (line, code, message)

    def text(self) -> str:
        return (
            f"{self.rows_read} rows read, {self.records_produced} records produced, "
            f"{self.rows_rejected} rejected, {len(self.warnings)} warnings"
        )


class LocalBackend:
    """Direct library calls against an in-process session."""

    def __init__(self, session: SessionState) -> None:
        self.session = session
        self.engine = session.engine

    def tables(self) -> list[str]:
        return self.engine.table_names()

    def ingest_csv(self, path: str, table: str) -> IngestSummary:
        report = self.session.ingest_csv_file(path, table)
        return IngestSummary(
            report.rows_read, report.records_produced, report.rows_rejected,
            tuple((w.line_number, w.code, w.message) for w in report.warnings),
        )

    def run_query(self, sql: str) -> ResultTable:
        return self.engine.run_sql(sql)

    def explain(self, sql: str) -> str:
        return self.engine.explain_sql(sql)

    def cache_table(self, table: str) -> int:
        return self.engine.cache_table(table)

    def counts(self, table: str, by: str) -> CountReport:
        return faculty_counts(self.engine, table, by)

    def geo(self, table: str) -> GeoExport:
        return geo_export(self.engine, table)

    def cluster(self, table: str, k: int, seed: int, max_iters: int,
                tol: float) -> dict:
        export = self.geo(table)
        for warning in export.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        points = [GeoPoint(u, lat, lon) for u, lat, lon in export.points]
        model = fit(points, k=k, seed=seed, max_iters=max_iters, tol=tol)
        return model_to_json(points, model)


class HttpBackend:
    """The same operations via the HTTP service (thin-client mode)."""

    def __init__(self, base_url: str) -> None:
        import httpx  # deferred: not needed for local work

        self.client = httpx.Client(base_url=base_url, timeout=60.0)

    def _call(self, method: str, path: str, **kwargs):
        import httpx

        try:
            response = self.client.request(method, path, **kwargs)
        except httpx.HTTPError as exc:
            raise RemoteError(f"cannot reach server: {exc}", EXIT_INTERNAL) from exc
        if response.status_code >= 400:
            try:
                payload = response.json()
                message = f"{payload['error']}: {payload['detail']}"
            except Exception:
                message = f"server returned {response.status_code}"
            code = EXIT_USER if response.status_code < 500 else EXIT_INTERNAL
            raise RemoteError(message, code)
        return response

    def tables(self) -> list[str]:
        payload = self._call("GET", "/tables").json()
        return [t["name"] for t in payload["tables"]]

    def ingest_csv(self, path: str, table: str) -> IngestSummary:
        with open(path, "rb") as handle:
            encoded = base64.b64encode(handle.read()).decode("ascii")
        payload = self._call(
            "POST", "/tables", json={"name": table, "csv_base64": encoded}
        ).json()
        return IngestSummary(
            payload["rows_read"], payload["records_produced"],
            payload["rows_rejected"],
            tuple((w["line_number"], w["code"], w["message"])
                  for w in payload["warnings"]),
        )

    def run_query(self, sql: str) -> ResultTable:
        payload = self._call("POST", "/query", json={"sql": sql}).json()
        return ResultTable(
            columns=tuple(payload["columns"]),
            rows=tuple(tuple(row) for row in payload["rows"]),
            rows_selected=payload["rows_selected"],
            elapsed_seconds=payload["elapsed_seconds"],
        )

    def explain(self, sql: str) -> str:
        return self._call("POST", "/query",
                          json={"sql": sql, "explain": True}).json()["plan"]

    def cache_table(self, table: str) -> int:
        return self._call("POST", f"/tables/{table}/cache").json()["blocks"]

    def counts(self, table: str, by: str) -> CountReport:
        payload = self._call("GET", "/reports/counts",
                             params={"table": table, "by": by}).json()
        grouping = tuple(payload["grouping"])
        rows = tuple(
            (tuple(row[field] for field in grouping), row["count"])
            for row in payload["rows"]
        )
        return CountReport(grouping=grouping, rows=rows, total=payload["total"])

    def geo(self, table: str) -> GeoExport:
        payload = self._call("GET", "/exports/geo",
                             params={"table": table, "format": "json"}).json()
        return GeoExport(
            points=tuple((p["university"], p["lat"], p["lon"])
                         for p in payload["points"]),
            skipped=tuple(payload["skipped"]),
            warnings=(),  # surfaced server-side only
        )

    def cluster(self, table: str, k: int, seed: int, max_iters: int,
                tol: float) -> dict:
        return self._call("POST", "/cluster", json={
            "table": table, "k": k, "seed": seed,
            "max_iters": max_iters, "tol": tol,
        }).json()


# -- argument parsing ------------------------------------------------------


#: defaults for the shared session flags, applied after parsing —
#: argparse set_defaults would mutate the parent actions shared with
#: every subparser and clobber values given before the subcommand
SESSION_DEFAULTS = {
    "partitions_capacity": 64,
    "nodes": 4,
    "replication": 3,
    "load_manifest": None,
    "save_manifest": None,
    "server": None,
}


def build_parser() -> argparse.ArgumentParser:
    # the session flags live in a parent parser with SUPPRESS defaults so
    # they are accepted both before and after the subcommand; real
    # defaults come from SESSION_DEFAULTS
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("session options")
    group.add_argument("--partitions-capacity", type=int, metavar="ROWS",
                       default=argparse.SUPPRESS,
                       help="rows per storage block (default 64)")
    group.add_argument("--nodes", type=int, default=argparse.SUPPRESS,
                       help="simulated data nodes (default 4)")
    group.add_argument("--replication", type=int, default=argparse.SUPPRESS,
                       help="replicas per block (default 3)")
    group.add_argument("--load-manifest", metavar="PATH",
                       default=argparse.SUPPRESS,
                       help="restore a saved session before running")
    group.add_argument("--save-manifest", metavar="PATH",
                       default=argparse.SUPPRESS,
                       help="save the session to PATH after running")
    group.add_argument("--server", metavar="URL", default=argparse.SUPPRESS,
                       help="run against a fair HTTP service instead of in-process")

    parser = argparse.ArgumentParser(
        prog="fair",
        description="Miniature distributed faculty-information warehouse.",
        parents=[common],
    )

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    ingest = sub.add_parser("ingest", parents=[common],
                            help="load a CSV file into a table")
    ingest.add_argument("csv", help="path to the CSV file")
    ingest.add_argument("--table", default=DEFAULT_TABLE)

    query = sub.add_parser("query", parents=[common],
                           help="run one query and print the result")
    query.add_argument("sql")
    query.add_argument("--format", choices=("text", "json"), default="text")

    sub.add_parser("repl", parents=[common], help="interactive query shell")

    cluster = sub.add_parser("cluster", parents=[common],
                             help="k-means over campus coordinates")
    cluster.add_argument("--k", type=int, required=True)
    cluster.add_argument("--seed", type=int, required=True)
    cluster.add_argument("--max-iters", type=int, default=100)
    cluster.add_argument("--tol", type=float, default=1e-6)
    cluster.add_argument("--table", default=DEFAULT_TABLE)

    report = sub.add_parser("report", parents=[common], help="aggregate reports")
    report.add_argument("kind", choices=("counts",))
    report.add_argument("--by", choices=("university", "department"),
                        default="university")
    report.add_argument("--chart", action="store_true",
                        help="render a text bar chart instead of data")
    report.add_argument("--chart-width", type=int, default=40)
    report.add_argument("--format", choices=("json", "csv"), default="json")
    report.add_argument("--table", default=DEFAULT_TABLE)

    export = sub.add_parser("export", parents=[common], help="data exports")
    export.add_argument("kind", choices=("geo",))
    export.add_argument("--format", choices=("json", "csv"), default="json")
    export.add_argument("--table", default=DEFAULT_TABLE)

    serve = sub.add_parser("serve", parents=[common],
                           help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def make_backend(args) -> LocalBackend | HttpBackend:
    if args.server:
        if args.load_manifest or args.save_manifest:
            raise ValueError("session manifests need a local session, not --server")
        return HttpBackend(args.server)
    if args.load_manifest:
        session = SessionState.load(args.load_manifest)
    else:
        session = SessionState(SessionConfig(
            block_row_capacity=args.partitions_capacity,
            node_count=args.nodes,
            replication_factor=args.replication,
        ))
        if args.command in TABLE_READERS:
            session.load_bundled_fixture()
    return LocalBackend(session)


# -- subcommand bodies -----------------------------------------------------


def cmd_ingest(backend, args) -> int:
    summary = backend.ingest_csv(args.csv, args.table)
    print(f"ingested {args.csv} as table {args.table!r}: {summary.text()}",
          file=sys.stderr)
    for line_number, code, message in summary.warnings:
        print(f"  line {line_number} [{code}]: {message}", file=sys.stderr)
    return EXIT_OK


def cmd_query(backend, args) -> int:
    result = backend.run_query(args.sql)
    if args.format == "json":
        print(json.dumps(result.to_json(), indent=2, ensure_ascii=False))
    else:
        print(result.to_text())
    return EXIT_OK


def cmd_cluster(backend, args) -> int:
    model = backend.cluster(args.table, args.k, args.seed, args.max_iters, args.tol)
    print(json.dumps(model, indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_report(backend, args) -> int:
    report = backend.counts(args.table, args.by)
    if args.chart:
        print(render_bar_chart(report, args.chart_width))
    elif args.format == "csv":
        print(counts_to_csv(report), end="")
    else:
        print(json.dumps(counts_to_json(report), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_export(backend, args) -> int:
    export = backend.geo(args.table)
    for warning in export.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.format == "csv":
        print(geo_to_csv(export), end="")
    else:
        print(json.dumps(geo_to_json(export), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(SessionConfig(
        block_row_capacity=args.partitions_capacity,
        node_count=args.nodes,
        replication_factor=args.replication,
    ))
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# -- REPL -------------------------------------------------------------------


def repl(backend, stdin=None, stdout=None, stderr=None) -> int:
    """Beeline-style loop: statements end with `;`, metas start with `!`."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    interactive = hasattr(stdin, "isatty") and stdin.isatty()
    buffer: list[str] = []

    while True:
        if interactive:
            stdout.write("fair> " if not buffer else "   -> ")
            stdout.flush()
        line = stdin.readline()
        if line == "":  # EOF
            return EXIT_OK
        stripped = line.strip()
        if not buffer and not stripped:
            continue
        if not buffer and stripped.startswith("!"):
            if not _run_meta(backend, stripped, stdout, stderr):
                return EXIT_OK
            continue
        buffer.append(line)
        if stripped.endswith(";"):
            statement = "".join(buffer)
            buffer = []
            try:
                result = backend.run_query(statement)
            except (FairError, RemoteError) as exc:
                print(f"error: {exc}", file=stderr)
            else:
                print(result.to_text(), file=stdout)


def _run_meta(backend, command: str, stdout, stderr) -> bool:
    """Handle a `!` meta-command; returns False to leave the loop."""
    name, _, argument = command.partition(" ")
    argument = argument.strip().rstrip(";")
    if name in ("!quit", "!q"):
        return False
    if name == "!tables":
        for table in backend.tables():
            print(table, file=stdout)
        return True
    if name == "!explain":
        if not argument:
            print("usage: !explain <query>", file=stderr)
            return True
        try:
            print(backend.explain(argument), file=stdout)
        except (FairError, RemoteError) as exc:
            print(f"error: {exc}", file=stderr)
        return True
    if name == "!cache":
        if not argument:
            print("usage: !cache <table>", file=stderr)
            return True
        try:
            blocks = backend.cache_table(argument)
        except (FairError, RemoteError) as exc:
            print(f"error: {exc}", file=stderr)
        else:
            print(f"cached {argument}: {blocks} blocks", file=stdout)
        return True
    print(f"unknown command {name}; try !tables !explain !cache !quit",
          file=stderr)
    return True


# -- entry point ------------------------------------------------------------


def parse_cli(argv: list[str] | None = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    for key, value in SESSION_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    return args


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parse_cli(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return EXIT_OK if exc.code == 0 else EXIT_USER
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USER
    if args.command == "serve":
        return cmd_serve(args)

    try:
        backend = make_backend(args)
        if args.command == "ingest":
            code = cmd_ingest(backend, args)
        elif args.command == "query":
            code = cmd_query(backend, args)
        elif args.command == "repl":
            code = repl(backend)
        elif args.command == "cluster":
            code = cmd_cluster(backend, args)
        elif args.command == "report":
            code = cmd_report(backend, args)
        elif args.command == "export":
            code = cmd_export(backend, args)
        else:
            parser.print_usage(sys.stderr)
            return EXIT_USER
        if args.save_manifest and isinstance(backend, LocalBackend):
            backend.session.save(args.save_manifest)
        return code
    except RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FairError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_command())
