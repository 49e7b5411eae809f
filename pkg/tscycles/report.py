"""
Run the analysis modules with the user parameters and assemble the report.

The `run_*` helpers take a series plus the merged parameter groups (see
`utils.analysis_conf`) and are shared by the CLI verbs, the API routes and the full
report run.
"""

from contextlib import contextmanager
from datetime import datetime, timezone
from importlib import metadata
import json
import logging
import math
import os
from pathlib import Path
import tempfile
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from tscycles import __version__
import tscycles.conf as tsconf
from tscycles import utils
from tscycles.analysis import (
    cycles,
    decomposition,
    descriptive,
    distribution,
    emd,
    memory,
    series as tsseries,
    spectral,
    structural,
    unitroot,
)
from tscycles.exceptions import DegenerateError, ParameterError, TscyclesError
from tscycles.models import (
    AnalysisConfig,
    LongMemoryEstimates,
    Peak,
    PeriodFinding,
    ReportBundle,
    ReportMetadata,
    SeriesReport,
    TestResult,
    UnitRootTable,
)


logger = logging.getLogger(__name__)

FIX = tsconf.FIXTURE

SUITES = ("normality", "seasonality", "nonlinearity")
DECOMPOSITIONS = ("stl", "rmaf", "ceemdan")

NOTES = [
    "The Juglar band is widened to [4.5, 11) years so that the observed 5-6 year "
    "cycles fall in it; the canonical range is 7-11 years.",
    "The CEEMDAN trend is the mode with the longest mean zero-crossing period, not "
    "a fixed column; all modes are exported.",
    "Skewness and excess kurtosis divide the 1/n central moments by powers of the "
    "n-1 standard deviation.",
]


@contextmanager
def context(module: str, name: str = ""):
    """
    Attach `module/series` to errors raised inside the block.
    """
    try:
        yield
    except TscyclesError as e:
        raise e.with_context(f"{module}/{name}" if name else module)


# Single module runs


def run_describe(series, params):
    return descriptive.basic_stats(series)


def run_tests(series, suite, params, seed, alpha) -> Dict[str, TestResult]:
    dist = params["distribution"]
    if suite == "normality":
        return distribution.normality_suite(series, alpha)
    if suite == "seasonality":
        return distribution.seasonality_suite(
            series, series.frequency, alpha, max_order=dist["seasonal_ar_order"]
        )
    if suite == "nonlinearity":
        return distribution.nonlinearity_suite(
            series,
            seed,
            alpha,
            max_order=dist["max_ar_order"],
            hidden=dist["white_hidden"],
            lag=dist["mcleod_li_lag"],
        )
    raise ParameterError(f"Unknown test suite `{suite}`, use one of {SUITES}.")


def run_unitroot(series, params) -> Dict[str, UnitRootTable]:
    return {
        "adf": unitroot.adf_test(series, params["unitroot"]["max_lag"]),
        "kpss": unitroot.kpss_test(series),
        "pp": unitroot.pp_test(series),
    }


def run_longmemory(series, params) -> LongMemoryEstimates:
    p = params["memory"]
    return memory.long_memory(
        series, gph_power=p["gph_power"], min_block=p["rs_min_block"]
    )


def run_breaks(series, params):
    p = params["structural"]
    efp = structural.efp_tests(series, p["bandwidth"])
    bps = structural.breakpoints(
        series,
        min_seg_frac=p["min_seg_frac"],
        max_breaks=p["max_breaks"],
        level=p["level"],
    )
    return efp, bps


def run_decompose(series, method, params, seed):
    p = params["decomposition"]
    if method == "stl":
        return decomposition.stl_decompose(series, p["s_window"])
    if method == "rmaf":
        return decomposition.rmaf_decompose(series, p["period"], p["rmaf_half_width"])
    if method == "ceemdan":
        c = params["ceemdan"]
        return emd.ceemdan(
            series,
            ensemble_size=c["ensemble_size"],
            noise_strength=c["noise_strength"],
            s_number=c["s_number"],
            max_siftings=c["max_siftings"],
            seed=seed,
            workers=c["workers"],
        )
    raise ParameterError(
        f"Unknown decomposition `{method}`, use one of {DECOMPOSITIONS}."
    )


def run_spectrum(series, params) -> spectral.WaveletSpectrum:
    p = params["spectral"]
    return spectral.morlet_power(
        series,
        dt=1 / series.frequency,
        dj=p["dj"],
        detrend=p["loess_span"],
        rectify=p["rectify"],
        mask_coi=p["mask_coi"],
    )


def wavelet_periods(spec: spectral.WaveletSpectrum) -> Dict[str, float]:
    out = {
        "global": spec.dominant_period(),
        "annual": spec.dominant_period(0.5, 2.0),
    }
    if spec.periods[-1] > 2.0:
        out["multi_year"] = spec.dominant_period(2.0)
    return out


def run_peaks(series, params, min_height=None) -> Tuple[List[Peak], np.ndarray]:
    """
    Peaks of the RMAF trend, and the trend itself. `min_height` defaults to the
    configured one for the total series and to no bound otherwise.
    """
    if min_height is None:
        if series.name == tsseries.COLUMNS[2]:
            min_height = params["spectral"]["min_peak_height"]
        else:
            min_height = -math.inf
    rmaf = run_decompose(series, "rmaf", params, seed=None)
    labels = [series.month_label(i) for i in range(len(series))]
    peaks = spectral.find_peaks(rmaf.trend, min_height=min_height, labels=labels)
    return peaks, rmaf.trend


def _finding(source, years, detail="") -> PeriodFinding:
    return PeriodFinding(
        source=source,
        period_years=years,
        classification=cycles.classify_cycles(years),
        detail=detail,
    )


def peak_finding(series, peaks, trend) -> PeriodFinding:
    first, second, months = spectral.peak_separation(peaks, trend)
    years, rest = divmod(months, series.frequency)
    return _finding(
        "rmaf_peaks",
        months / series.frequency,
        f"{first.label} to {second.label}: {years} years {rest} months",
    )


# Full report


def analyze_series(series, params, seed, alpha, files: Dict[str, pd.DataFrame]):
    """
    Every module on one series. Side tables are added to `files`, keyed by file
    name.
    """
    name = series.name
    freq = series.frequency
    with context("describe", name):
        summary = run_describe(series, params)
        acf = tsseries.acf(series, min(3 * freq, len(series) - 1))
    tests = {}
    for suite in SUITES:
        with context("tests", name):
            tests[suite] = run_tests(series, suite, params, seed, alpha)
    with context("unitroot", name):
        ur = run_unitroot(series, params)
    with context("longmemory", name):
        lm = run_longmemory(series, params)
    with context("breaks", name):
        efp, bps = run_breaks(series, params)

    with context("decompose", name):
        stl = run_decompose(series, "stl", params, seed)
        rmaf = run_decompose(series, "rmaf", params, seed)
        imfs = run_decompose(series, "ceemdan", params, seed)
    files[f"{name}_stl.csv"] = stl.to_frame()
    files[f"{name}_rmaf.csv"] = rmaf.to_frame()
    files[f"{name}_ceemdan.csv"] = imfs.to_frame(series)

    with context("spectrum", name):
        dominant = spectral.find_frequency(series)
        spec = run_spectrum(series, params)
        wp = wavelet_periods(spec)
    files[f"{name}_wavelet.csv"] = spec.to_frame()
    files[f"{name}_wavelet_avg.csv"] = spec.avg_frame()

    with context("peaks", name):
        peaks, trend = run_peaks(series, params)
    files[f"{name}_peaks.csv"] = spectral.peaks_frame(peaks)

    periods = [
        _finding("ar_spectrum", dominant / freq, f"{dominant} samples"),
        _finding("wavelet_annual", wp["annual"]),
    ]
    if "multi_year" in wp:
        periods.append(_finding("wavelet_multi_year", wp["multi_year"]))
    if len(peaks) >= 2:
        periods.append(peak_finding(series, peaks, trend))
    try:
        col = imfs.trend_column()
        periods.append(
            _finding(
                "ceemdan_trend",
                imfs.mean_periods()[col] / freq,
                f"imf{col + 1}",
            )
        )
    except DegenerateError:
        logger.warning("No oscillating CEEMDAN mode for `%s`", name)

    return SeriesReport(
        name=name,
        length=len(series),
        start=series.month_label(0),
        end=series.month_label(len(series) - 1),
        summary=summary,
        acf=acf.rho.tolist(),
        tests=tests,
        unitroot=ur,
        long_memory=lm,
        efp=efp,
        breakpoints=bps,
        dominant_period=dominant,
        wavelet_periods=wp,
        peaks=peaks,
        periods=periods,
        files={},
    )


def resolve(config: AnalysisConfig):
    """
    Merged parameters, the loaded series bundle, seed and alpha of a config.
    """
    overrides = {k: dict(v) for k, v in config.parameters.items()}
    general = overrides.setdefault("general", {})
    for k in ("seed", "alpha", "frequency"):
        if getattr(config, k) is not None:
            general[k] = getattr(config, k)
    params = utils.analysis_conf(overrides)
    g = params["general"]

    if config.input is None:
        bundle = tsseries.load_fixture()
    else:
        if config.start:
            year, month = tsseries.parse_start(config.start)
        else:
            year, month = FIX["start_year"], FIX["start_month"]
        bundle = tsseries.load_csv(
            config.input, start_year=year, start_month=month, frequency=g["frequency"]
        )
    return params, bundle, g["seed"], g["alpha"]


def _versions():
    out = {}
    for pkg in ("numpy", "scipy", "statsmodels", "pandas", "pydantic"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = "unknown"
    return out


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def run_report(config: AnalysisConfig) -> ReportBundle:
    """
    Analyse the three series and, when `config.out` / `config.emit_csv` are set,
    write the JSON report and the CSV side files. Nothing is written unless every
    module succeeded.
    """
    params, bundle, seed, alpha = resolve(config)

    files: Dict[str, pd.DataFrame] = {}
    reports = {}
    for s in bundle:
        logger.info("Analysing `%s` (%d values)", s.name, len(s))
        reports[s.name] = analyze_series(s, params, seed, alpha, files)

    csv_dir = Path(config.emit_csv) if config.emit_csv else None
    if csv_dir is not None:
        for name, rep in reports.items():
            rep.files = {
                f.rsplit(".", 1)[0][len(name) + 1 :]: str(csv_dir / f)
                for f in files
                if f.startswith(f"{name}_")
            }

    first = next(iter(bundle))
    report = ReportBundle(
        metadata=ReportMetadata(
            version=__version__,
            created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            input=config.input or FIX["path"].name,
            start=first.start,
            frequency=first.frequency,
            seed=seed,
            alpha=alpha,
            parameters=params,
            versions=_versions(),
        ),
        series=reports,
        notes=NOTES,
    )

    if csv_dir is not None:
        for fname, df in files.items():
            write_atomic(csv_dir / fname, df.to_csv(index=False, lineterminator="\n"))
    if config.out:
        write_atomic(Path(config.out), dump(report))
        logger.info("Report written to %s", config.out)
    return report


def dump(report: ReportBundle) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False)


def report_schema() -> dict:
    return ReportBundle.model_json_schema()
