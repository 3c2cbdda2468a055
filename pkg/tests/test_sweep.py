from mzv.ffield import FieldCtx
from mzv.sweep import COLUMNS, run_cell, run_sweep


def test_sweep_rows_and_determinism(tmp_path):
    F = FieldCtx(3)
    serial = run_sweep(F, [2, 3], range(1, 13))
    pooled = run_sweep(F, [3, 2], range(12, 0, -1), jobs=2, cache_dir=str(tmp_path))
    assert serial.to_csv() == pooled.to_csv()
    assert serial.to_csv().splitlines()[0] == ",".join(COLUMNS)
    assert serial.totals()["MATCH"] == 24
    assert serial.match_rate() == 1.0
    assert serial.even_violations() == 0
    assert serial.ok()
    summary = serial.summary()
    assert summary["mismatches"] == []
    assert summary["p_divides_b"]["MATCH"] == 8  # b in {3, 6, 9, 12} for both a


def test_partial_cells_are_excluded_from_the_rate():
    F = FieldCtx(5)
    report = run_sweep(F, [2], [3, 4], recipe="q4")
    assert report.totals()["PARTIAL"] == 2
    assert report.match_rate() is None


def test_run_cell_never_raises():
    row = run_cell(((5, 1, (0, 1)), 0, 3, "auto", {}, False))
    assert row.match == "ERROR"
    assert "InvalidIndex" in row.warnings
    timed = run_cell(((5, 1, (0, 1)), 2, 3, "auto", {}, True))
    assert isinstance(timed.time_ms, int)
