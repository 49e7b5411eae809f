import math

import pytest

from tscycles.analysis.cycles import UNCLASSIFIED, classify_cycles
from tscycles.exceptions import ParameterError


def test_bands():
    cases = {
        24.25: "kuznets",
        25: "kuznets",
        5.5: "juglar",
        4.5: "juglar",
        1.0: "seasonal/yearly",
        3.0: "kitchin",
        50: "kondratieff",
        60: "kondratieff",
        1.5: UNCLASSIFIED,
        13: UNCLASSIFIED,
        100: UNCLASSIFIED,
    }
    for period, band in cases.items():
        assert classify_cycles(period).band == band, period


def test_band_range():
    res = classify_cycles(24.25)
    assert res.band_range == (15, 25)
    assert classify_cycles(100).band_range is None


def test_custom_bands():
    bands = [{"name": "short", "lower": 0, "upper": 2, "closed": False}]
    assert classify_cycles(1.0, bands).band == "short"
    assert classify_cycles(2.0, bands).band == UNCLASSIFIED


def test_invalid_period():
    for bad in (0, -3, math.inf, math.nan):
        with pytest.raises(ParameterError):
            classify_cycles(bad)
