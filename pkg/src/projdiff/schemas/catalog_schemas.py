"""Variety summaries."""

from pydantic import Field

from .common import ReportModel


class VarietyInfo(ReportModel):
    """Basic numerical data of a parametrized variety."""

    variety: str = Field(description="Variety spec or derived name")
    n: int = Field(description="Dimension")
    N: int = Field(description="Ambient projective dimension")
    a: int = Field(description="Codimension")
    max_degree: int = Field(description="Largest degree of a chart coordinate")
    expected_smooth: bool
    quadric_cut: bool
    jacobian_rank: int = Field(description="Generic rank of the chart Jacobian")
    seed: int
