"""
Characteristics of the bundled series: test suites, unit roots, long memory and
structural breaks.
"""

from cachetools import cached, LRUCache
from fastapi import APIRouter, Query

from tscycles import report, utils
from tscycles.routers.v1.series import default_params, get_series


router = APIRouter(
    prefix="/characteristics",
    tags=["Characteristics"],
    responses={404: {"description": "Not found"}},
)


@cached(cache=LRUCache(maxsize=64))
@utils.raise_for_status
def analyse(module: str, name: str, option: str = ""):
    """
    Cached analysis of a fixture series with the default parameters.
    """
    s = get_series(name)
    params = default_params()
    g = params["general"]
    with report.context(module, s.name):
        if module == "tests":
            return report.run_tests(s, option, params, g["seed"], g["alpha"])
        if module == "unitroot":
            return report.run_unitroot(s, params)
        if module == "longmemory":
            return report.run_longmemory(s, params)
        if module == "breaks":
            efp, bps = report.run_breaks(s, params)
            return {"efp": efp, "breakpoints": bps}
    raise ValueError(f"Unknown module {module}")


@router.get("/{name}/tests")
def get_tests(
    name: str,
    suite: str = Query(
        default="normality",
        pattern="^(normality|seasonality|nonlinearity)$",
    ),
):
    """
    Run a test suite: `normality` (Anderson-Darling, Cramer-von Mises, Lilliefors),
    `seasonality` (QS, Friedman, Kruskal-Wallis, Welch, WO) or `nonlinearity`
    (Teraesvirta, White, Keenan, Tsay, McLeod-Li).
    """
    return analyse("tests", get_series(name).name, suite)


@router.get("/{name}/unitroot")
def get_unitroot(name: str):
    """
    ADF (lags 0..max_lag), KPSS and PP tables for the three deterministic types.
    """
    return analyse("unitroot", get_series(name).name)


@router.get("/{name}/longmemory")
def get_longmemory(name: str):
    """
    GPH fractional differencing order and Hurst exponents.
    """
    return analyse("longmemory", get_series(name).name)


@router.get("/{name}/breaks")
def get_breaks(name: str):
    """
    CUSUM/MOSUM fluctuation tests and BIC-selected mean shifts with confidence
    intervals.
    """
    return analyse("breaks", get_series(name).name)
