"""
Command line verbs, run through the Typer test runner.
"""

import json
from pathlib import Path
import tempfile

from typer.testing import CliRunner

from tscycles.cli import app, parse_overrides


runner = CliRunner()


def test_describe_stdout():
    result = runner.invoke(app, ["describe", "--column", "PMN"])
    assert result.exit_code == 0, result.output
    out = json.loads(result.stdout)
    assert list(out) == ["PMN"]
    assert round(out["PMN"]["mean"], 2) == 296.11


def test_breaks_to_file():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "breaks.json"
        result = runner.invoke(app, ["breaks", "-c", "pma", "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
    assert data["PMA"]["breakpoints"]["break_indices"] == [81, 348, 428]
    assert len(data["PMA"]["efp"]) == 4


def test_decompose_csv():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "dec.json"
        result = runner.invoke(
            app,
            [
                "decompose",
                "--method",
                "rmaf",
                "-c",
                "TotalMD",
                "--emit-csv",
                tmp,
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        csv = Path(tmp) / "TotalMD_rmaf.csv"
        assert data["TotalMD"]["file"] == str(csv)
        header = csv.read_text().splitlines()[0]
    assert header == "month,trend,seasonal,remainder"


def test_peaks_override():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "peaks.json"
        result = runner.invoke(
            app, ["peaks", "-c", "total", "--min-height", "440", "-o", str(out)]
        )
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
    sep = data["TotalMD"]["separation"]
    assert sep["period_years"] == 24.25
    assert sep["classification"]["band"] == "kuznets"


def test_exit_codes():
    result = runner.invoke(app, ["unitroot", "--set", "unitroot.max_lag=99"])
    assert result.exit_code == 2

    result = runner.invoke(app, ["describe", "--column", "510k"])
    assert result.exit_code == 2

    result = runner.invoke(app, ["describe", "--start", "1980-01"])
    assert result.exit_code == 2

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "short.csv"
        path.write_text("PMN,PMA,TotalMD\n1,2,3\n")
        result = runner.invoke(app, ["describe", "--input", str(path)])
        assert result.exit_code == 3

        result = runner.invoke(app, ["describe", "--input", str(Path(tmp) / "no")])
        assert result.exit_code == 3


def test_parse_overrides():
    assert parse_overrides(["a.b=1", "a.c=true", "d.e=0.5"]) == {
        "a": {"b": 1, "c": True},
        "d": {"e": 0.5},
    }
    assert parse_overrides(None) == {}


def test_schema():
    result = runner.invoke(app, ["schema"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["title"] == "ReportBundle"
