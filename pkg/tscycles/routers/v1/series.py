"""
Bundled series: listing, values, summary statistics and autocorrelation.

Implementation notes:
=====================
The fixture is loaded once (and at startup) and every analysis of it runs with the
default parameters, so results are cached by `cachetools` with tuple keys.
"""

from cachetools import cached, LRUCache
from fastapi import APIRouter, HTTPException, Query

from tscycles import report, utils
from tscycles.analysis import series as tsseries
from tscycles.exceptions import ParameterError


router = APIRouter(
    prefix="/series",
    tags=["Series"],
    responses={404: {"description": "Not found"}},
)


def get_bundle():
    return tsseries.load_fixture()


def get_series(name: str):
    """
    Fixture series by (case insensitive) name, 404 if unknown.
    """
    try:
        return get_bundle()[name]
    except ParameterError as e:
        raise HTTPException(status_code=404, detail=str(e))


def default_params():
    return utils.analysis_conf()


@router.get("")
def get_series_list():
    """
    Bundled series with their length and calendar span.
    """
    return [
        {
            "name": s.name,
            "length": len(s),
            "start": s.month_label(0),
            "end": s.month_label(len(s) - 1),
            "frequency": s.frequency,
        }
        for s in get_bundle()
    ]


@router.get("/{name}")
def get_series_values(name: str):
    s = get_series(name)
    return {
        "name": s.name,
        "months": [s.month_label(i) for i in range(len(s))],
        "values": s.values.tolist(),
    }


@cached(cache=LRUCache(maxsize=16))
@utils.raise_for_status
def _describe(name: str):
    s = get_series(name)
    with report.context("describe", s.name):
        return report.run_describe(s, default_params())


@router.get("/{name}/describe")
def get_summary(name: str):
    """
    Summary statistics (location, spread, shape and mean confidence interval).
    """
    return _describe(get_series(name).name)


@router.get("/{name}/acf")
@utils.raise_for_status
def get_acf(
    name: str,
    max_lag: int = Query(default=36, ge=0),
):
    """
    Sample autocorrelation up to `max_lag`, with the white noise 95% band.
    """
    s = get_series(name)
    res = tsseries.acf(s, max_lag)
    return {
        "max_lag": res.max_lag,
        "rho": res.rho.tolist(),
        "ci_halfwidth": res.ci_halfwidth,
    }
