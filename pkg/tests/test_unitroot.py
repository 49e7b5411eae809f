"""
ADF, KPSS and PP tables of the bundled series.
"""

import numpy as np
import pytest

from tscycles.analysis import series as tsseries, tables, unitroot
from tscycles.exceptions import InsufficientDataError


bundle = tsseries.load_fixture()


def test_kpss():
    expected = {
        "PMN": (7.2248, 1.8495, 0.9544),
        "PMA": (3.3038, 3.8850, 1.3767),
        "TotalMD": (6.2859, 2.1613, 0.6548),
    }
    for s in bundle:
        table = unitroot.kpss_test(s)
        assert table.alternative == "nonstationary"
        for t, stat in zip(unitroot.TYPES, expected[s.name]):
            row = table.get(t)
            assert row.lag == 5
            assert row.statistic == pytest.approx(stat, rel=1e-3)
            assert row.p_value == 0.01
            assert row.clamp == "lower"


def test_pp():
    expected = {
        "PMN": (-2.620, -145.069, -155.538),
        "PMA": (-4.606, -17.960, -152.103),
        "TotalMD": (-1.967, -150.551, -226.713),
    }
    for s in bundle:
        table = unitroot.pp_test(s)
        for t, stat in zip(unitroot.TYPES, expected[s.name]):
            assert table.get(t).statistic == pytest.approx(stat, abs=2e-3)
            assert table.get(t).lag == 6
        assert table.get("trend").clamp == "lower"


def test_adf():
    table = unitroot.adf_test(bundle.pmn, max_lag=5)
    assert len(table.rows) == 18
    assert table.alternative == "stationary"

    row = table.get("none", 0)
    assert row.statistic == pytest.approx(-2.189, abs=1e-3)
    assert row.p_value == pytest.approx(0.0287, abs=5e-4)

    row = table.get("drift", 0)
    assert row.statistic == pytest.approx(-9.46, abs=0.01)
    assert (row.p_value, row.clamp) == (0.01, "lower")

    assert table.get("drift", 5).statistic == pytest.approx(-3.06, abs=0.01)
    assert table.get("drift", 5).p_value == pytest.approx(0.0313, abs=1e-3)
    assert table.get("trend", 4).statistic == pytest.approx(-3.89, abs=0.01)
    assert table.get("trend", 4).p_value == pytest.approx(0.0140, abs=1e-3)

    pma = unitroot.adf_test(bundle.pma, max_lag=1).get("drift", 1)
    assert pma.statistic == pytest.approx(-2.928, abs=1e-3)
    assert pma.p_value == pytest.approx(0.0444, abs=1e-3)


ADF_FIXTURE = {
    "PMN": {
        "none": (-2.189, -1.508, -1.051, -0.929, -0.798, -0.685),
        "drift": (-9.46, -6.73, -4.67, -4.03, -3.50, -3.06),
        "trend": (-9.85, -7.09, -5.04, -4.40, -3.89, -3.48),
    },
    "PMA": {
        "none": (-2.906, -1.640, -0.890, -0.186, 0.111, 0.352),
        "drift": (-4.605, -2.928, -2.025, -1.304, -1.051, -0.863),
        "trend": (-9.40, -6.23, -4.49, -3.14, -2.70, -2.41),
    },
    "TotalMD": {
        "none": (-2.030, -1.288, -0.788, -0.570, -0.442, -0.297),
        "drift": (-9.73, -6.86, -4.88, -4.10, -3.71, -3.39),
        "trend": (-11.25, -7.90, -5.43, -4.46, -3.96, -3.51),
    },
}


def test_adf_all_rows():
    for s in bundle:
        table = unitroot.adf_test(s, max_lag=5)
        for t, stats in ADF_FIXTURE[s.name].items():
            for lag, stat in enumerate(stats):
                row = table.get(t, lag)
                assert row.statistic == pytest.approx(stat, abs=0.01), (s.name, t, lag)
                assert 0.01 <= row.p_value <= 0.99
                if row.clamp == "lower":
                    assert row.p_value == 0.01


def test_random_walk_not_rejected():
    kept = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        walk = bundle.pmn.with_values(np.cumsum(rng.normal(size=500)))
        kept += unitroot.adf_test(walk, max_lag=0).get("none", 0).p_value > 0.01
    assert kept >= 95


def test_pvalue_clamps():
    table = tables.ADF_TAU["drift"]
    assert tables.lower_tail_pvalue(-50.0, table, 500) == (0.01, "lower")
    assert tables.lower_tail_pvalue(50.0, table, 500) == (0.99, "upper")
    p, clamp = tables.lower_tail_pvalue(-2.87, table, 500)
    assert clamp is None
    assert p == pytest.approx(0.05, abs=0.01)
    assert tables.kpss_pvalue(0.01, "drift") == (0.10, "upper")


def test_too_short():
    with pytest.raises(InsufficientDataError):
        unitroot.kpss_test(bundle.pmn.with_values(np.arange(20.0)))
