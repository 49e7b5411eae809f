"""
Full report with user parameters.
"""

from typing import Any, Dict, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from tscycles import report, utils
import tscycles.conf as tsconf
from tscycles.models import AnalysisConfig, ReportBundle


router = APIRouter(
    prefix="/report",
    tags=["Report"],
    responses={404: {"description": "Not found"}},
)


class ReportRequest(BaseModel):
    seed: Optional[int] = None
    alpha: Optional[float] = Field(default=None, gt=0, lt=0.5)
    parameters: Dict[str, Dict[str, Any]] = {}


@router.post("", response_model=ReportBundle)
@utils.raise_for_status
def create_report(conf: ReportRequest):
    """
    Run every module on the bundled series. `parameters` overrides the defaults of
    `GET /v1/report/parameters`, group by group.
    """
    config = AnalysisConfig(
        seed=conf.seed,
        alpha=conf.alpha,
        parameters=conf.parameters,
    )
    return report.run_report(config)


@router.get("/parameters")
def get_parameters():
    """
    User customizable parameters with their defaults, ranges and descriptions.
    """
    return tsconf.ANALYSIS["full"]


@router.get("/schema")
def get_schema():
    """
    JSON Schema of the report.
    """
    return report.report_schema()
