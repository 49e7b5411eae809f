"""
Result models shared by the library, the CLI report and the API.

Heavy numeric containers (decompositions, wavelet matrices, IMFs) live next to the
code that builds them as frozen dataclasses holding numpy arrays. The models here
are the JSON-facing summaries, so they are pydantic models.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, computed_field, field_validator


DeterministicType = Literal["none", "drift", "trend"]
Clamp = Optional[Literal["lower", "upper"]]


class TestResult(BaseModel):
    test_name: str
    statistic: float
    p_value: float
    null_hypothesis: str
    auxiliary: Dict[str, float] = {}
    alpha: float = 0.01

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "test_name": "Anderson-Darling",
                    "statistic": 2.5753,
                    "p_value": 1.665e-06,
                    "null_hypothesis": "the series is normally distributed",
                    "auxiliary": {},
                    "alpha": 0.01,
                }
            ]
        }
    }

    @field_validator("p_value")
    @classmethod
    def check_p_value(cls, v):
        if not 0 <= v <= 1:
            raise ValueError(f"p-value {v} outside [0, 1]")
        return v

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha

    @computed_field
    @property
    def reject(self) -> bool:
        return self.rejects(self.alpha)


class UnitRootRow(BaseModel):
    type: DeterministicType
    lag: int
    statistic: float
    p_value: float
    clamp: Clamp = None


class UnitRootTable(BaseModel):
    test_name: str
    alternative: Literal["stationary", "nonstationary"]
    rows: List[UnitRootRow]

    def get(self, type: str, lag: int = None) -> UnitRootRow:
        for r in self.rows:
            if r.type == type and (lag is None or r.lag == lag):
                return r
        raise KeyError(f"No row for type `{type}` and lag {lag}.")


class LongMemoryEstimates(BaseModel):
    gph_d: float
    bandwidth_m: int
    rs_simple: float
    rs_corrected: float
    rs_empirical: float
    rs_corrected_empirical: float
    rs_theoretical: float
    rs_block_sizes: List[int] = []
    ml_hurst: Optional[float] = None


class SummaryStats(BaseModel):
    nobs: int
    na_count: int
    minimum: float
    maximum: float
    q1: float
    q3: float
    mean: float
    median: float
    sum: float
    se_mean: float
    lcl_mean: float
    ucl_mean: float
    variance: float
    stdev: float
    skewness: Optional[float] = Field(
        description="None when the series has zero variance."
    )
    kurtosis_excess: Optional[float] = Field(
        description="None when the series has zero variance."
    )


class EfpResult(BaseModel):
    process_type: Literal["OLS-CUSUM", "OLS-MOSUM", "Rec-CUSUM", "Rec-MOSUM"]
    path: List[float]
    statistic: float
    p_value: float
    clamp: Clamp = None
    bandwidth: Optional[float] = None


class BreakInterval(BaseModel):
    lower_index: int
    index: int
    upper_index: int
    lower: float
    point: float
    upper: float
    label: str


class BreakpointSet(BaseModel):
    chosen_m: int
    break_indices: List[int]
    break_dates: List[float]
    conf_intervals: List[BreakInterval] = []
    rss_by_m: List[float]
    bic_by_m: List[float]
    breaks_by_m: List[List[int]]
    min_segment: int


class Peak(BaseModel):
    value: float
    index: int
    left: int
    right: int
    label: Optional[str] = None


class CycleClassification(BaseModel):
    period_years: float
    band: str
    band_range: Optional[Tuple[float, float]] = None


class PeriodFinding(BaseModel):
    source: str
    period_years: float
    classification: CycleClassification
    detail: str = ""


class SeriesReport(BaseModel):
    name: str
    length: int
    start: str
    end: str
    summary: SummaryStats
    acf: List[float]
    tests: Dict[str, Dict[str, TestResult]]
    unitroot: Dict[str, UnitRootTable]
    long_memory: LongMemoryEstimates
    efp: List[EfpResult]
    breakpoints: BreakpointSet
    dominant_period: int
    wavelet_periods: Dict[str, float]
    peaks: List[Peak]
    periods: List[PeriodFinding]
    files: Dict[str, str] = {}


class ReportMetadata(BaseModel):
    version: str
    created: str
    input: str
    start: str
    frequency: int
    seed: int
    alpha: float
    parameters: Dict[str, Dict[str, object]]
    versions: Dict[str, str] = {}


class ReportBundle(BaseModel):
    metadata: ReportMetadata
    series: Dict[str, SeriesReport]
    notes: List[str] = []


class AnalysisConfig(BaseModel):
    """
    Inputs of a full report run. `input=None` analyses the bundled fixture;
    `seed`, `alpha` and `frequency` default to the `general` parameter group.
    """

    input: Optional[str] = None
    start: Optional[str] = None
    frequency: Optional[int] = None
    seed: Optional[int] = None
    alpha: Optional[float] = None
    parameters: Dict[str, Dict[str, Any]] = {}
    out: Optional[str] = None
    emit_csv: Optional[str] = None

    @field_validator("alpha")
    @classmethod
    def check_alpha(cls, v):
        if v is not None and not 0 < v < 0.5:
            raise ValueError(f"alpha {v} outside (0, 0.5)")
        return v
