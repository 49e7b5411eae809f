"""
Map cycle lengths to the canonical economic cycle families.
"""

import math

import tscycles.conf as tsconf
from tscycles.exceptions import ParameterError
from tscycles.models import CycleClassification


UNCLASSIFIED = "unclassified"


def classify_cycles(period_years: float, bands=None) -> CycleClassification:
    """
    Band of `period_years` in the cycle table. Bands are half-open `[lower, upper)`
    unless flagged `closed`. Periods outside every band are unclassified.
    """
    if not math.isfinite(period_years) or period_years <= 0:
        raise ParameterError(f"Cycle period should be positive, got {period_years}.")
    for b in bands or tsconf.CYCLE_BANDS:
        above = period_years >= b["lower"]
        below = period_years <= b["upper"] if b["closed"] else period_years < b["upper"]
        if above and below:
            return CycleClassification(
                period_years=period_years,
                band=b["name"],
                band_range=(b["lower"], b["upper"]),
            )
    return CycleClassification(period_years=period_years, band=UNCLASSIFIED)
