"""
Periodicity of the bundled series: decompositions, wavelet spectrum, dominant
frequency, trend peaks and cycle classification.
"""

import math
from typing import Optional

from cachetools import cached, LRUCache
from fastapi import APIRouter, Query

from tscycles import report, utils
from tscycles.analysis import cycles, spectral
from tscycles.routers.v1.series import default_params, get_series


router = APIRouter(
    prefix="/periodicity",
    tags=["Periodicity"],
    responses={404: {"description": "Not found"}},
)


def _finite(values):
    return [v if math.isfinite(v) else None for v in values]


@cached(cache=LRUCache(maxsize=16))
@utils.raise_for_status
def decompose(name: str, method: str):
    s = get_series(name)
    params = default_params()
    with report.context("decompose", s.name):
        dec = report.run_decompose(s, method, params, params["general"]["seed"])
    if method == "ceemdan":
        return {
            "method": method,
            "terminated_early": dec.terminated_early,
            "mean_periods_years": _finite(p / s.frequency for p in dec.mean_periods()),
            "trend_column": dec.trend_column(),
            "columns": dec.to_frame().to_dict(orient="list"),
        }
    return {
        "method": method,
        "months": [s.month_label(i) for i in range(len(s))],
        "trend": dec.trend.tolist(),
        "seasonal": dec.seasonal.tolist(),
        "remainder": dec.remainder.tolist(),
    }


@router.get("/cycles")
@utils.raise_for_status
def get_cycle(period_years: float = Query(gt=0)):
    """
    Canonical economic cycle family of a period given in years.
    """
    return cycles.classify_cycles(period_years)


@router.get("/{name}/decompose")
def get_decomposition(
    name: str,
    method: str = Query(default="stl", pattern="^(stl|rmaf|ceemdan)$"),
):
    """
    STL, RMAF or CEEMDAN components. CEEMDAN runs the full ensemble and takes a
    while on the first call.
    """
    return decompose(get_series(name).name, method)


@cached(cache=LRUCache(maxsize=16))
@utils.raise_for_status
def spectrum(name: str):
    s = get_series(name)
    with report.context("spectrum", s.name):
        spec = report.run_spectrum(s, default_params())
        return {
            "periods": spec.periods.tolist(),
            "avg_power": spec.avg_power.tolist(),
            "dominant": report.wavelet_periods(spec),
        }


@router.get("/{name}/spectrum")
@utils.raise_for_status
def get_spectrum(
    name: str,
    lower: Optional[float] = Query(default=None, gt=0),
    upper: Optional[float] = Query(default=None, gt=0),
):
    """
    Time-averaged Morlet wavelet power by period (years), its dominant periods, and
    the dominant period within [lower, upper] years when a band is given.
    """
    out = dict(spectrum(get_series(name).name))
    if lower is not None or upper is not None:
        periods = out["periods"]
        lower = periods[0] if lower is None else lower
        upper = periods[-1] if upper is None else upper
        band = [
            (p, a)
            for p, a in zip(periods, out["avg_power"])
            if lower <= p <= upper
        ]
        if not band:
            return {**out, "band_dominant": None}
        out["band_dominant"] = max(band, key=lambda t: t[1])[0]
    return out


@router.get("/{name}/frequency")
@utils.raise_for_status
def get_frequency(name: str):
    """
    Dominant period (samples and years) of the AR spectral density.
    """
    s = get_series(name)
    with report.context("spectrum", s.name):
        period = spectral.find_frequency(s)
    return {"period": period, "period_years": period / s.frequency}


@router.get("/{name}/peaks")
@utils.raise_for_status
def get_peaks(
    name: str,
    min_height: Optional[float] = None,
):
    """
    Peaks of the RMAF trend, plus the distance from the highest one to its partner
    across the main trough and its cycle family.
    """
    s = get_series(name)
    with report.context("peaks", s.name):
        found, trend = report.run_peaks(s, default_params(), min_height)
        separation = (
            report.peak_finding(s, found, trend) if len(found) >= 2 else None
        )
    return {"peaks": found, "separation": separation}
