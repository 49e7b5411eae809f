"""
Command Line Interface to the analysis toolkit.

Every verb accepts the same data options (`--input`, `--column`, `--start`,
`--freq`) and parameter options (`--seed`, `--alpha`, repeatable
`--set group.key=value`). Results are printed as JSON, or written to `--out`.
Table-like results (components, spectra, peaks) are written as CSV files into the
`--emit-csv` directory.
"""

from functools import wraps
import json
import logging
import math
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
import typer
import yaml

import tscycles.conf as tsconf
from tscycles import main, report
from tscycles.analysis import spectral
from tscycles.exceptions import ConfigError, TscyclesError
from tscycles.models import AnalysisConfig


app = typer.Typer(
    help="Periodicity and cycle analysis of monthly application counts.",
    no_args_is_help=True,
    add_completion=False,
)

InputOpt = typer.Option(None, "--input", "-i", help="CSV file (default: bundled)")
ColumnOpt = typer.Option(None, "--column", "-c", help="Series (default: all)")
StartOpt = typer.Option(None, "--start", help="First month, YYYY-MM")
FreqOpt = typer.Option(None, "--freq", help="Samples per year")
SeedOpt = typer.Option(None, "--seed", help="Random seed")
AlphaOpt = typer.Option(None, "--alpha", help="Significance level")
OutOpt = typer.Option(None, "--out", "-o", help="Write the JSON output here")
CsvOpt = typer.Option(None, "--emit-csv", help="Directory for CSV side files")
SetOpt = typer.Option(None, "--set", help="Parameter override group.key=value")
VerboseOpt = typer.Option(False, "--verbose", "-v", help="Debug logging")


def info(msg: str):
    typer.echo(f"[info] {msg}", err=True)


def handle_errors(func):
    """
    Print our errors in a single line and exit with the error code.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TscyclesError as e:
            typer.echo(f"  [Error] {e}", err=True)
            raise typer.Exit(code=e.exit_code)

    return wrapper


def parse_overrides(items: Optional[List[str]]) -> dict:
    """
    `["unitroot.max_lag=4", ...]` to `{"unitroot": {"max_lag": 4}}`.
    """
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        group, dot, name = key.partition(".")
        if not sep or not dot or not group or not name:
            raise ConfigError(f"Override `{item}` should look like group.key=value.")
        out.setdefault(group, {})[name] = yaml.safe_load(value)
    return out


def load(input, column, start, freq, seed=None, alpha=None, overrides=None):
    """
    Merged parameters plus the selected series.
    """
    try:
        config = AnalysisConfig(
            input=str(input) if input else None,
            start=start,
            frequency=freq,
            seed=seed,
            alpha=alpha,
            parameters=parse_overrides(overrides),
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid options: {e.errors()[0]['msg']}")
    if input is None and (start or freq):
        raise ConfigError("--start and --freq only apply to an --input file.")
    params, bundle, seed, alpha = report.resolve(config)
    selected = [bundle[column]] if column else list(bundle)
    return config, params, selected, seed, alpha


def emit(result, out: Optional[Path]):
    text = json.dumps(result, indent=2, ensure_ascii=False)
    if out:
        report.write_atomic(Path(out), text)
        info(f"Output written to {out}")
    else:
        typer.echo(text)


def dump(model):
    return model.model_dump(mode="json")


def setup(verbose: bool):
    tsconf.setup_logging(logging.DEBUG if verbose else None)


def write_csv(csv_dir: Optional[Path], fname: str, df) -> Optional[str]:
    if csv_dir is None:
        return None
    path = Path(csv_dir) / fname
    report.write_atomic(path, df.to_csv(index=False, lineterminator="\n"))
    return str(path)


@app.command()
@handle_errors
def describe(
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    Summary statistics.
    """
    setup(verbose)
    _, params, selected, _, _ = load(input, column, start, freq)
    result = {}
    for s in selected:
        with report.context("describe", s.name):
            result[s.name] = dump(report.run_describe(s, params))
    emit(result, out)


@app.command()
@handle_errors
def tests(
    suite: str = typer.Option(
        "all", "--suite", help="normality, seasonality, nonlinearity or all"
    ),
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    seed: Optional[int] = SeedOpt,
    alpha: Optional[float] = AlphaOpt,
    overrides: Optional[List[str]] = SetOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    Distribution, seasonality and nonlinearity test suites.
    """
    setup(verbose)
    _, params, selected, seed, alpha = load(
        input, column, start, freq, seed, alpha, overrides
    )
    suites = report.SUITES if suite == "all" else (suite,)
    result = {}
    for s in selected:
        result[s.name] = {}
        for name in suites:
            with report.context("tests", s.name):
                res = report.run_tests(s, name, params, seed, alpha)
            result[s.name][name] = {k: dump(v) for k, v in res.items()}
    emit(result, out)


@app.command()
@handle_errors
def unitroot(
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    overrides: Optional[List[str]] = SetOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    ADF, KPSS and PP tables.
    """
    setup(verbose)
    _, params, selected, _, _ = load(
        input, column, start, freq, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("unitroot", s.name):
            tables = report.run_unitroot(s, params)
        result[s.name] = {k: dump(v) for k, v in tables.items()}
    emit(result, out)


@app.command()
@handle_errors
def longmemory(
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    overrides: Optional[List[str]] = SetOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    GPH and Hurst exponent estimates.
    """
    setup(verbose)
    _, params, selected, _, _ = load(
        input, column, start, freq, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("longmemory", s.name):
            result[s.name] = dump(report.run_longmemory(s, params))
    emit(result, out)


@app.command()
@handle_errors
def breaks(
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    overrides: Optional[List[str]] = SetOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    Fluctuation tests and mean-shift dating with confidence intervals.
    """
    setup(verbose)
    _, params, selected, _, _ = load(
        input, column, start, freq, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("breaks", s.name):
            efp, bps = report.run_breaks(s, params)
        result[s.name] = {
            "efp": [dump(e) for e in efp],
            "breakpoints": dump(bps),
        }
    emit(result, out)


@app.command()
@handle_errors
def decompose(
    method: str = typer.Option("stl", "--method", help="stl, rmaf or ceemdan"),
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    seed: Optional[int] = SeedOpt,
    overrides: Optional[List[str]] = SetOpt,
    emit_csv: Optional[Path] = CsvOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    STL, RMAF or CEEMDAN decomposition. Components go to CSV.
    """
    setup(verbose)
    _, params, selected, seed, _ = load(
        input, column, start, freq, seed, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("decompose", s.name):
            dec = report.run_decompose(s, method, params, seed)
        if method == "ceemdan":
            df = dec.to_frame(s)
            periods = [
                p / s.frequency if math.isfinite(p) else None
                for p in dec.mean_periods()
            ]
            summary = {
                "columns": dec.n_columns,
                "terminated_early": dec.terminated_early,
                "mean_periods_years": periods,
            }
        else:
            df = dec.to_frame()
            summary = {
                "trend_range": [float(dec.trend.min()), float(dec.trend.max())],
                "seasonal_amplitude": float(dec.seasonal.max() - dec.seasonal.min()),
            }
        summary["file"] = write_csv(emit_csv, f"{s.name}_{method}.csv", df)
        result[s.name] = {"method": method, **summary}
    emit(result, out)


@app.command()
@handle_errors
def spectrum(
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    overrides: Optional[List[str]] = SetOpt,
    emit_csv: Optional[Path] = CsvOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    Morlet wavelet power and dominant AR-spectrum period.
    """
    setup(verbose)
    _, params, selected, _, _ = load(
        input, column, start, freq, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("spectrum", s.name):
            dominant = spectral.find_frequency(s)
            spec = report.run_spectrum(s, params)
            periods = report.wavelet_periods(spec)
        result[s.name] = {
            "dominant_period": dominant,
            "wavelet_periods": periods,
            "files": {
                "power": write_csv(emit_csv, f"{s.name}_wavelet.csv", spec.to_frame()),
                "avg_power": write_csv(
                    emit_csv, f"{s.name}_wavelet_avg.csv", spec.avg_frame()
                ),
            },
        }
    emit(result, out)


@app.command()
@handle_errors
def peaks(
    min_height: Optional[float] = typer.Option(
        None, "--min-height", help="Minimum trend value of a peak"
    ),
    input: Optional[Path] = InputOpt,
    column: Optional[str] = ColumnOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    overrides: Optional[List[str]] = SetOpt,
    emit_csv: Optional[Path] = CsvOpt,
    out: Optional[Path] = OutOpt,
    verbose: bool = VerboseOpt,
):
    """
    Peaks of the RMAF trend and the distance from the highest one to its partner
    across the main trough.
    """
    setup(verbose)
    _, params, selected, _, _ = load(
        input, column, start, freq, overrides=overrides
    )
    result = {}
    for s in selected:
        with report.context("peaks", s.name):
            found, trend = report.run_peaks(s, params, min_height)
            separation = (
                dump(report.peak_finding(s, found, trend)) if len(found) >= 2 else None
            )
        result[s.name] = {
            "peaks": [dump(p) for p in found],
            "separation": separation,
            "file": write_csv(
                emit_csv, f"{s.name}_peaks.csv", spectral.peaks_frame(found)
            ),
        }
    emit(result, out)


@app.command(name="report")
@handle_errors
def full_report(
    input: Optional[Path] = InputOpt,
    start: Optional[str] = StartOpt,
    freq: Optional[int] = FreqOpt,
    seed: Optional[int] = SeedOpt,
    alpha: Optional[float] = AlphaOpt,
    overrides: Optional[List[str]] = SetOpt,
    emit_csv: Optional[Path] = CsvOpt,
    out: Optional[Path] = typer.Option(
        Path(tsconf.MAIN_CONF["report"]["filename"]), "--out", "-o"
    ),
    verbose: bool = VerboseOpt,
):
    """
    Run every module on the three series and write the JSON report.
    """
    setup(verbose)
    if input is None and (start or freq):
        raise ConfigError("--start and --freq only apply to an --input file.")
    try:
        config = AnalysisConfig(
            input=str(input) if input else None,
            start=start,
            frequency=freq,
            seed=seed,
            alpha=alpha,
            parameters=parse_overrides(overrides),
            out=str(out),
            emit_csv=str(emit_csv) if emit_csv else None,
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid options: {e.errors()[0]['msg']}")
    bundle = report.run_report(config)
    for name, rep in bundle.series.items():
        found = ", ".join(
            f"{p.source} {p.period_years:.2f}y ({p.classification.band})"
            for p in rep.periods
        )
        info(f"{name}: {rep.breakpoints.chosen_m} breaks; periods: {found}")


@app.command()
@handle_errors
def schema(out: Optional[Path] = OutOpt):
    """
    JSON Schema of the report.
    """
    emit(report.report_schema(), out)


@app.command()
def serve(host: str = "0.0.0.0", port: int = 8080):
    """
    Serve the HTTP API.
    """
    main.run(host=host, port=port)


def run():
    typer.run(main.run)


if __name__ == "__main__":
    app()
