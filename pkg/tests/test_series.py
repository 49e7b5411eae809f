"""
Calendar anchoring, CSV ingestion and autocorrelation.
"""

import numpy as np
import pytest

from tscycles.analysis import series as tsseries
from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import (
    ConfigError,
    ConsistencyError,
    DegenerateError,
    InputError,
    InsufficientDataError,
    ParameterError,
    ParseError,
)


def _table(n=30, header="PMN,PMA,TotalMD"):
    rows = [header] + [f"{i + 10},{i % 3},{i + 10 + i % 3}" for i in range(n)]
    return "\n".join(rows) + "\n"


def test_fixture_shape():
    bundle = tsseries.load_fixture()
    assert bundle.names == ("PMN", "PMA", "TotalMD")
    assert len(bundle) == 536
    pmn = bundle["pmn"]
    assert pmn.start == "1976-05"
    assert pmn.month_label(0) == "May 1976"
    assert pmn.month_label(535) == "Dec 2020"
    assert bundle["total"] is bundle.total
    np.testing.assert_array_equal(
        bundle.total.values, bundle.pmn.values + bundle.pma.values
    )


def test_unknown_series():
    with pytest.raises(ParameterError):
        tsseries.load_fixture()["510k"]


def test_calendar():
    s = tsseries.load_fixture().total
    assert s.month_label(191) == "Apr 1992"
    assert s.month_label(482) == "Jul 2016"
    assert s.decimal_year(0) == pytest.approx(1976 + 4 / 12)
    assert s.decimal_year(81) == pytest.approx(1983.0833, abs=1e-4)
    assert s.times()[12] == pytest.approx(s.decimal_year(12))
    with pytest.raises(ParameterError):
        s.month_label(536)

    quarterly = MonthlySeries("q", np.arange(10.0), 2000, 1, frequency=4)
    assert quarterly.month_label(2) == "2000.500"


def test_parse_start():
    assert tsseries.parse_start("1976-05") == (1976, 5)
    assert tsseries.parse_start(" 2001-1 ") == (2001, 1)
    for bad in ("1976/05", "1976-13", "76-05"):
        with pytest.raises(ConfigError):
            tsseries.parse_start(bad)


def test_ingest_roundtrip():
    bundle = tsseries.ingest_csv(_table())
    again = tsseries.ingest_csv(tsseries.to_csv(bundle))
    for a, b in zip(bundle, again):
        np.testing.assert_array_equal(a.values, b.values)
        assert a.name == b.name


def test_ingest_date_column():
    rows = ["date,PMN,PMA,TotalMD"]
    months = [f"{1976 + (4 + i) // 12}-{(4 + i) % 12 + 1:02d}" for i in range(30)]
    rows += [f"{m},{i},1,{i + 1}" for i, m in enumerate(months)]
    bundle = tsseries.ingest_csv("\n".join(rows))
    assert len(bundle) == 30

    rows[3] = "1999-01,2,1,3"
    with pytest.raises(ConsistencyError) as e:
        tsseries.ingest_csv("\n".join(rows))
    assert e.value.row == 3


def test_ingest_errors():
    with pytest.raises(ParseError):
        tsseries.ingest_csv(_table(header="A,B,C"))

    text = _table().replace("12,2,14", "12,x,14")
    with pytest.raises(ParseError) as e:
        tsseries.ingest_csv(text)
    assert e.value.row == 3
    assert e.value.column == "PMA"

    with pytest.raises(ParseError):
        tsseries.ingest_csv(_table().replace("12,2,14", "12,-2,10"))

    with pytest.raises(ConsistencyError) as e:
        tsseries.ingest_csv(_table().replace("12,2,14", "12,2,15"))
    assert e.value.row == 3

    with pytest.raises(InsufficientDataError):
        tsseries.ingest_csv(_table(n=10))

    with pytest.raises(InputError):
        tsseries.load_csv("/nonexistent/table.csv")


def test_acf():
    s = tsseries.load_fixture().pmn
    res = tsseries.acf(s, 36)
    assert res.max_lag == 36
    assert len(res.rho) == 37
    assert res.rho[0] == 1.0
    assert np.all(np.abs(res.rho) <= 1)
    assert res.ci_halfwidth == pytest.approx(1.96 / np.sqrt(536))

    with pytest.raises(ParameterError):
        tsseries.acf(s, 536)
    with pytest.raises(DegenerateError):
        tsseries.acf(s.with_values(np.ones(100)), 5)


def test_acf_affine_invariance():
    s = tsseries.load_fixture().pma
    a = tsseries.acf(s, 24).rho
    b = tsseries.acf(s.with_values(4 * s.values - 7), 24).rho
    np.testing.assert_allclose(a, b, atol=1e-12)
