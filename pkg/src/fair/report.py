"""Aggregate reports and exports over ingested tables.

Counting is delegated to the query engine (GROUP BY ... COUNT(*)), so
these reports exercise the same execution path as ad-hoc queries; this
module only reshapes results, maps Missing group keys to the literal
"NA", and renders text bars.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .engine import Engine

MIN_CHART_WIDTH = 10

GroupKey = tuple[str, ...]


@dataclass(frozen=True)
class CountReport:
    grouping: tuple[str, ...]
    rows: tuple[tuple[GroupKey, int], ...]
    total: int


@dataclass(frozen=True)
class GeoExport:
    points: tuple[tuple[str, float, float], ...]  # (university, lat, lon)
    skipped: tuple[str, ...]  # universities with no usable coordinates
    warnings: tuple[str, ...]  # coordinate conflicts (first row won)


def faculty_counts(engine: Engine, table: str, by: str = "university") -> CountReport:
    """Counts per university, or per (university, department)."""
    if by == "university":
        grouping: tuple[str, ...] = ("university",)
    elif by == "department":
        grouping = ("university", "department")
    else:
        raise ValueError(f"unknown grouping {by!r}; use university or department")

    columns = ", ".join(grouping)
    result = engine.run_sql(
        f"SELECT {columns}, COUNT(*) AS n FROM {table} GROUP BY {columns}"
    )
    rows = tuple(
        (tuple("NA" if value is None else value for value in row[:-1]), row[-1])
        for row in result.rows
    )
    return CountReport(grouping=grouping, rows=rows,
                       total=sum(count for _, count in rows))


def geo_export(engine: Engine, table: str) -> GeoExport:
    """One (university, lat, lon) per distinct university.

    The first record (lowest record id) carrying both coordinates wins;
    later rows that disagree produce a warning, and universities with
    no usable coordinates at all are listed in `skipped`.
    """
    result = engine.run_sql(f"SELECT university, latitude, longitude FROM {table}")
    chosen: dict[str, tuple[float, float]] = {}
    seen: list[str] = []
    warnings: list[str] = []
    for university, lat, lon in result.rows:
        if university not in chosen:
            if university not in seen:
                seen.append(university)
            if lat is not None and lon is not None:
                chosen[university] = (lat, lon)
        elif lat is not None and lon is not None and chosen[university] != (lat, lon):
            warnings.append(
                f"{university}: conflicting coordinates ({lat}, {lon}) ignored; "
                f"keeping first-seen {chosen[university]}"
            )
    points = tuple(
        (university, chosen[university][0], chosen[university][1])
        for university in sorted(chosen)
    )
    skipped = tuple(sorted(u for u in seen if u not in chosen))
    return GeoExport(points=points, skipped=skipped, warnings=tuple(warnings))


def render_bar_chart(report: CountReport, width: int = 40) -> str:
    """Monospace horizontal bars, widest bar = `width` cells.

    Rows are ordered by count descending, ties by key ascending.
    """
    if width < MIN_CHART_WIDTH:
        raise ValueError(f"chart width must be at least {MIN_CHART_WIDTH}, got {width}")
    header = f"faculty count by {', '.join(report.grouping)} — total {report.total}"
    if not report.rows:
        return header
    ordered = sorted(report.rows, key=lambda item: (-item[1], item[0]))
    labels = [" / ".join(key) for key, _ in ordered]
    label_width = max(len(label) for label in labels)
    peak = ordered[0][1]
    lines = [header]
    for label, (_, count) in zip(labels, ordered):
        bar = "#" * max(1, round(count * width / peak))
        lines.append(f"{label.ljust(label_width)} | {bar} {count}")
    return "\n".join(lines)


# -- serialization --------------------------------------------------------


def counts_to_json(report: CountReport) -> dict:
    return {
        "grouping": list(report.grouping),
        "rows": [
            {**dict(zip(report.grouping, key)), "count": count}
            for key, count in report.rows
        ],
        "total": report.total,
    }


def counts_to_csv(report: CountReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([*report.grouping, "count"])
    for key, count in report.rows:
        writer.writerow([*key, count])
    return out.getvalue()


def geo_to_json(export: GeoExport) -> dict:
    return {
        "points": [
            {"university": u, "lat": lat, "lon": lon}
            for u, lat, lon in export.points
        ],
        "skipped": list(export.skipped),
    }


def geo_to_csv(export: GeoExport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["university", "latitude", "longitude"])
    for university, lat, lon in export.points:
        writer.writerow([university, lat, lon])
    return out.getvalue()
