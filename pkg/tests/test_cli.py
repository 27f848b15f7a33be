"""CLI behaviour: parsing, subcommands, session flags, exit codes, REPL."""
import contextlib
import io
import json
import re
import subprocess
import sys

import pytest

from fair.cli import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USER,
    SESSION_DEFAULTS,
    make_backend,
    parse_cli,
    repl,
    run_command,
)
from fair.ingest import ingest_file
from fair.kmeans import GeoPoint, fit, model_to_json
from fair.report import geo_export

from .conftest import FIXTURE_PATH

TIMING = re.compile(r"\(\d+\.\d{3} seconds\)")


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run_command(argv)
    return code, out.getvalue(), err.getvalue()


def strip_timing(text):
    return TIMING.sub("(T seconds)", text)


class TestParsing:
    def test_defaults_filled_when_flags_absent(self):
        args = parse_cli(["query", "SELECT 1 FROM t"])
        for key, value in SESSION_DEFAULTS.items():
            assert getattr(args, key) == value

    def test_session_flags_before_subcommand(self):
        args = parse_cli(["--nodes", "2", "--partitions-capacity", "7",
                          "query", "x"])
        assert args.nodes == 2
        assert args.partitions_capacity == 7

    def test_session_flags_after_subcommand(self):
        args = parse_cli(["query", "x", "--nodes", "8", "--replication", "2"])
        assert args.nodes == 8
        assert args.replication == 2

    def test_flag_after_subcommand_wins_over_before(self):
        args = parse_cli(["--nodes", "2", "query", "x", "--nodes", "8"])
        assert args.nodes == 8

    def test_no_command_prints_usage_and_fails(self):
        code, out, err = run_cli([])
        assert code == EXIT_USER
        assert "usage:" in err

    def test_unknown_subcommand_fails(self):
        code, _out, _err = run_cli(["frobnicate"])
        assert code == EXIT_USER

    def test_help_exits_zero(self):
        code, _out, _err = run_cli(["--help"])
        assert code == EXIT_OK

    def test_server_rejects_manifest_flags(self):
        code, _out, err = run_cli([
            "--server", "http://localhost:1", "--save-manifest", "/tmp/x.json",
            "query", "SELECT COUNT(*) FROM faculty1",
        ])
        assert code == EXIT_USER
        assert "manifest" in err


class TestIngest:
    def test_summary_matches_library_report(self, tmp_path):
        _records, report = ingest_file(FIXTURE_PATH)
        code, out, err = run_cli(["ingest", str(FIXTURE_PATH)])
        assert code == EXIT_OK
        assert out == ""
        first = err.splitlines()[0]
        assert f"as table 'faculty1'" in first
        assert f"{report.rows_read} rows read" in first
        assert f"{report.records_produced} records produced" in first
        assert f"{report.rows_rejected} rejected" in first
        assert f"{len(report.warnings)} warnings" in first

    def test_warning_lines_listed(self):
        _records, report = ingest_file(FIXTURE_PATH)
        _code, _out, err = run_cli(["ingest", str(FIXTURE_PATH)])
        lines = err.splitlines()[1:]
        assert len(lines) == len(report.warnings)
        for line, warning in zip(lines, report.warnings):
            assert line.startswith(f"  line {warning.line_number} [{warning.code}]:")

    def test_missing_file_is_io_error(self):
        code, _out, err = run_cli(["ingest", "/nonexistent/nope.csv"])
        assert code == EXIT_INTERNAL
        assert err.startswith("error:")

    def test_malformed_header_is_user_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nope,header\n1,2\n", encoding="utf-8")
        code, _out, err = run_cli(["ingest", str(path)])
        assert code == EXIT_USER
        assert "error:" in err


class TestQuery:
    def test_count_star_text(self):
        code, out, _err = run_cli(["query", "SELECT COUNT(*) FROM faculty1"])
        assert code == EXIT_OK
        assert "| 310" in out
        assert "1 rows selected" in out

    def test_json_format_round_trips(self, faculty_engine):
        sql = "SELECT university, COUNT(*) AS n FROM faculty1 GROUP BY university"
        code, out, _err = run_cli(["query", sql, "--format", "json"])
        assert code == EXIT_OK
        payload = json.loads(out)
        expected = faculty_engine.run_sql(sql)
        assert payload["columns"] == list(expected.columns)
        assert [tuple(row) for row in payload["rows"]] == list(expected.rows)
        assert payload["rows_selected"] == expected.rows_selected

    def test_text_matches_engine_rendering(self, faculty_engine):
        sql = ("SELECT university, faculty_name FROM faculty1 "
               "WHERE department = 'Computer Science Engineering' "
               "ORDER BY faculty_name LIMIT 4")
        code, out, _err = run_cli(["query", sql])
        assert code == EXIT_OK
        expected = faculty_engine.run_sql(sql).to_text()
        assert strip_timing(out.rstrip("\n")) == strip_timing(expected)

    def test_syntax_error_exits_one(self):
        code, _out, err = run_cli(["query", "SELEC nope"])
        assert code == EXIT_USER
        assert err.startswith("error:")
        assert "SELEC" in err

    def test_unknown_table_exits_one(self):
        code, _out, err = run_cli(["query", "SELECT * FROM missing_table"])
        assert code == EXIT_USER
        assert "missing_table" in err


class TestSessionFlags:
    def test_partitioning_flags_do_not_change_results(self):
        sql = ("SELECT university, COUNT(*) AS n FROM faculty1 "
               "GROUP BY university ORDER BY n desc LIMIT 5")
        _c, base, _e = run_cli(["query", sql, "--format", "json"])
        _c, tuned, _e = run_cli(["--partitions-capacity", "7", "--nodes", "2",
                                 "--replication", "2", "query", sql,
                                 "--format", "json"])
        a, b = json.loads(base), json.loads(tuned)
        assert a["rows"] == b["rows"]

    def test_save_then_load_manifest_round_trip(self, tmp_path):
        manifest = tmp_path / "session.json"
        code, _out, _err = run_cli([
            "ingest", str(FIXTURE_PATH), "--table", "campus",
            "--save-manifest", str(manifest),
        ])
        assert code == EXIT_OK
        saved = json.loads(manifest.read_text(encoding="utf-8"))
        assert "campus" in saved["tables"]

        # regression: the session flag must work *before* the subcommand too
        for argv in (
            ["--load-manifest", str(manifest), "query",
             "SELECT COUNT(*) FROM campus", "--format", "json"],
            ["query", "SELECT COUNT(*) FROM campus", "--format", "json",
             "--load-manifest", str(manifest)],
        ):
            code, out, _err = run_cli(argv)
            assert code == EXIT_OK
            assert json.loads(out)["rows"] == [[310]]

    def test_loaded_session_skips_fixture_preload(self, tmp_path):
        manifest = tmp_path / "session.json"
        run_cli(["ingest", str(FIXTURE_PATH), "--table", "campus",
                 "--save-manifest", str(manifest)])
        code, _out, err = run_cli([
            "--load-manifest", str(manifest),
            "query", "SELECT COUNT(*) FROM faculty1",
        ])
        assert code == EXIT_USER
        assert "faculty1" in err

    def test_load_manifest_missing_file(self):
        code, _out, err = run_cli([
            "--load-manifest", "/nonexistent/sess.json",
            "query", "SELECT COUNT(*) FROM faculty1",
        ])
        assert code == EXIT_INTERNAL
        assert err.startswith("error:")


class TestCluster:
    def test_matches_library_model(self, faculty_engine):
        code, out, _err = run_cli(["cluster", "--k", "3", "--seed", "42"])
        assert code == EXIT_OK
        export = geo_export(faculty_engine, "faculty1")
        points = [GeoPoint(u, lat, lon) for u, lat, lon in export.points]
        expected = model_to_json(points, fit(points, k=3, seed=42))
        assert json.loads(out) == expected

    def test_bad_k_exits_one(self):
        code, _out, err = run_cli(["cluster", "--k", "0", "--seed", "1"])
        assert code == EXIT_USER
        assert err.startswith("error:")

    def test_k_and_seed_are_required(self):
        code, _out, _err = run_cli(["cluster", "--k", "3"])
        assert code == EXIT_USER


class TestReportAndExport:
    def test_counts_json_and_csv_agree(self):
        _c, out_json, _e = run_cli(["report", "counts", "--by", "department"])
        _c, out_csv, _e = run_cli(["report", "counts", "--by", "department",
                                   "--format", "csv"])
        payload = json.loads(out_json)
        csv_lines = out_csv.splitlines()
        assert csv_lines[0] == "university,department,count"
        assert len(csv_lines) - 1 == len(payload["rows"])
        assert payload["total"] == 310

    def test_chart_renders_every_group(self):
        code, out, _err = run_cli(["report", "counts", "--chart"])
        assert code == EXIT_OK
        lines = out.rstrip("\n").splitlines()
        assert lines[0].startswith("faculty count by university")
        assert len(lines) == 1 + 31
        assert all("#" in line for line in lines[1:])

    def test_chart_width_floor(self):
        code, _out, err = run_cli(["report", "counts", "--chart",
                                   "--chart-width", "3"])
        assert code == EXIT_USER
        assert "width" in err

    def test_geo_export_json(self):
        code, out, _err = run_cli(["export", "geo"])
        assert code == EXIT_OK
        payload = json.loads(out)
        assert len(payload["points"]) == 31
        assert payload["skipped"] == []

    def test_geo_export_csv(self):
        code, out, _err = run_cli(["export", "geo", "--format", "csv"])
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "university,latitude,longitude"
        assert len(lines) == 1 + 31

    def test_unknown_report_kind(self):
        code, _out, _err = run_cli(["report", "totals"])
        assert code == EXIT_USER


class TestRepl:
    def make(self, argv=("repl",)):
        return make_backend(parse_cli(list(argv)))

    def run_script(self, script, backend=None):
        out, err = io.StringIO(), io.StringIO()
        code = repl(backend or self.make(), stdin=io.StringIO(script),
                    stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()

    def test_eof_exits_zero(self):
        code, out, err = self.run_script("")
        assert (code, out, err) == (EXIT_OK, "", "")

    def test_no_prompt_when_not_a_tty(self):
        _code, out, _err = self.run_script("!tables\n!quit\n")
        assert "fair>" not in out

    def test_statement_runs_on_semicolon(self, faculty_engine):
        sql = "SELECT COUNT(*) AS n FROM faculty1"
        code, out, err = self.run_script(sql + ";\n")
        assert code == EXIT_OK
        assert err == ""
        expected = faculty_engine.run_sql(sql).to_text()
        assert strip_timing(out.rstrip("\n")) == strip_timing(expected)

    def test_multi_line_statement_buffers(self, faculty_engine):
        script = "SELECT COUNT(*) AS n\nFROM faculty1\n;\n"
        _code, out, _err = self.run_script(script)
        expected = faculty_engine.run_sql("SELECT COUNT(*) AS n FROM faculty1")
        assert strip_timing(out.rstrip("\n")) == strip_timing(expected.to_text())

    def test_blank_lines_ignored(self):
        code, out, err = self.run_script("\n\n   \n!quit\n")
        assert (code, out, err) == (EXIT_OK, "", "")

    def test_error_keeps_loop_alive(self):
        script = "SELECT nope FROM faculty1;\nSELECT COUNT(*) FROM faculty1;\n"
        code, out, err = self.run_script(script)
        assert code == EXIT_OK
        assert err.startswith("error:")
        assert "| 310" in out  # the second statement still ran

    def test_meta_tables(self):
        _code, out, _err = self.run_script("!tables\n!quit\n")
        assert out == "faculty1\n"

    def test_meta_explain(self):
        _code, out, _err = self.run_script(
            "!explain SELECT university FROM faculty1 LIMIT 2\n!quit\n")
        assert out == "Scan(faculty1) -> Project(university) -> Limit(2)\n"

    def test_meta_explain_usage(self):
        _code, _out, err = self.run_script("!explain\n!quit\n")
        assert err == "usage: !explain <query>\n"

    def test_meta_explain_error_continues(self):
        code, _out, err = self.run_script("!explain SELEC x\n!tables\n")
        assert code == EXIT_OK
        assert err.startswith("error:")

    def test_meta_cache(self):
        _code, out, _err = self.run_script("!cache faculty1\n!quit\n")
        assert out == "cached faculty1: 5 blocks\n"

    def test_meta_cache_unknown_table(self):
        code, _out, err = self.run_script("!cache ghost\n!quit\n")
        assert code == EXIT_OK
        assert "ghost" in err

    def test_meta_quit_short_form(self):
        code, _out, _err = self.run_script("!q\nSELECT 1;\n")
        assert code == EXIT_OK

    def test_unknown_meta_suggests_commands(self):
        _code, _out, err = self.run_script("!nope\n!quit\n")
        assert "unknown command !nope" in err
        assert "!tables" in err


class TestConsoleScript:
    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-c",
             "import fair.cli, sys; sys.exit(fair.cli.run_command("
             "['query', 'SELECT COUNT(*) FROM faculty1']))"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert "| 310" in proc.stdout

    def test_fair_script_on_path(self):
        proc = subprocess.run(
            ["fair", "query", "SELECT COUNT(*) FROM faculty1", "--format",
             "json"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["rows"] == [[310]]
