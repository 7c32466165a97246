import csv
import io

import pytest

from surgkit.services.core import FamilyError
from surgkit.services.families import STATUS_FAIL, STATUS_PASS
from surgkit.services.sweep import (
    SweepOptions, build_options, build_report, parameter_grid, report_to_csv, run_sweep, summarize,
)

SETTINGS = {
    "bound": 1,
    "max_search_length": 12,
    "workers": 1,
    "ranges": {"2": {"l": [-3, 3]}, "s": {"param": [1, 2], "max_multiplicity": 7}, "graph": {"l": [1, 1], "m": [1, 1], "pq_bound": 4}},
}


def test_build_options_layers(monkeypatch):
    opts = build_options("2", settings=SETTINGS)
    assert opts.ranges == {"l": (-3, 3)}
    assert opts.workers == 1
    opts = build_options("2", overrides={"l": (1, 2)}, bound=2, settings=SETTINGS)
    assert opts.ranges == {"l": (1, 2)}
    assert opts.bound == 2
    monkeypatch.setenv("SURGKIT_WORKERS", "3")
    assert build_options("2", settings=SETTINGS).workers == 3
    assert build_options("2", workers=2, settings=SETTINGS).workers == 2


def test_build_options_scalars():
    opts = build_options("s", settings=SETTINGS)
    assert opts.ranges == {"param": (1, 2)}
    assert opts.max_multiplicity == 7
    assert build_options("graph", settings=SETTINGS).pq_bound == 4
    assert build_options("graph", pq_bound=9, settings=SETTINGS).pq_bound == 9


def test_build_options_rejects():
    with pytest.raises(FamilyError):
        build_options("2", overrides={"l": (3, 1)}, settings=SETTINGS)
    with pytest.raises(FamilyError):
        build_options("7", settings=SETTINGS)


def test_parameter_grid():
    grid = parameter_grid(["l", "sigma"], {"l": (-1, 1)})
    assert grid == [{"l": -1, "sigma": -1}, {"l": -1, "sigma": 1}, {"l": 1, "sigma": -1}, {"l": 1, "sigma": 1}]
    with pytest.raises(FamilyError):
        parameter_grid(["n"], {})


def test_table2_sweep_is_sorted_and_clean(catalog):
    opts = SweepOptions(table="2", ranges={"l": (1, 2)})
    entries = run_sweep(opts, catalog)
    assert entries == sorted(entries, key=lambda e: e.sort_key())
    assert summarize(entries)[STATUS_FAIL] == 0
    rows = {e.row for e in entries}
    assert "T2.A1" in rows and "T2.K" in rows


def test_parallel_matches_serial(catalog):
    serial = run_sweep(SweepOptions(table="2", ranges={"l": (1, 1)}), catalog)
    parallel = run_sweep(SweepOptions(table="2", ranges={"l": (1, 1)}, workers=2), catalog)
    assert [e.to_json() for e in serial] == [e.to_json() for e in parallel]


def test_berge_table(catalog):
    entries = run_sweep(SweepOptions(table="1", ranges={"l": (1, 2), "k": (2, 6)}), catalog)
    checks = {e.check for e in entries}
    assert {"berge_classify", "berge_identity"} <= checks
    assert summarize(entries)[STATUS_FAIL] == 0


def test_square_entries(catalog):
    entries = run_sweep(SweepOptions(table="3", ranges={"l": (-1, 1)}), catalog)
    squares = [e for e in entries if e.check == "square"]
    assert squares
    assert all(e.status == STATUS_PASS for e in squares)


def test_seifert_table():
    entries = run_sweep(SweepOptions(table="s", ranges={"param": (1, 2)}, max_multiplicity=7))
    assert entries
    assert all(e.status == STATUS_PASS for e in entries)
    assert any(e.row == "S.A" for e in entries)


def test_graph_table(catalog):
    opts = SweepOptions(table="graph", ranges={"l": (-2, 2), "m": (1, 2)}, variant=1, pq_bound=3)
    entries = run_sweep(opts, catalog)
    checks = {(e.check, e.status) for e in entries}
    assert ("diophantine", STATUS_PASS) in checks
    assert ("ambient", STATUS_PASS) in checks
    assert ("dual", STATUS_PASS) in checks
    assert not any(e.status == STATUS_FAIL for e in entries)
    # m = 1 只有丢番图与 ambient 两条
    degenerate = [e for e in entries if dict(e.params).get("m") == 1]
    assert degenerate
    assert {e.check for e in degenerate} == {"diophantine", "ambient"}


def test_report_and_csv(catalog):
    opts = SweepOptions(table="2", ranges={"l": (1, 1)})
    entries = run_sweep(opts, catalog)
    report = build_report(opts, entries, catalog)
    assert report["meta"]["table"] == "2"
    assert report["meta"]["catalog_version"] == catalog.version
    assert "workers" not in report["meta"]
    assert report["summary"]["total"] == len(entries)

    rows = list(csv.reader(io.StringIO(report_to_csv(report))))
    assert rows[0] == ["row", "params", "check", "status", "witness"]
    assert len(rows) == len(entries) + 1
    first = report["entries"][0]
    assert rows[1][0] == first["row"]
    assert rows[1][3] == first["status"]
