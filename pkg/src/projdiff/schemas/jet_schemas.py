"""Fundamental form reports."""

from pydantic import Field

from .common import ReportModel


class ProlongationReport(ReportModel):
    """Comparison of the cubic fundamental form with the prolongation of ``|II|``."""

    ff3_dim: int = Field(description="Dimension of the span of FF^3")
    prolongation_dim: int = Field(description="Dimension of |II|^(1)")
    contained: bool = Field(description="Whether FF^3 lies inside |II|^(1)")


class FundamentalFormReport(ReportModel):
    """Jet tower summary at a general point."""

    variety: str
    n: int
    a: int
    order: int
    point: list[str]
    filtration: list[int] = Field(description="(n, a_1, a_2, ...)")
    ff_dims: dict[str, int] = Field(description="Dimension of |FF^k| keyed by k")
    second_ff: list[list[list[str]]] = Field(description="Hessians of II per normal index")
    generic_quadric_rank: int
    singloc_dim: int
    prolongation: ProlongationReport | None = None
    seed: int


class RefinedCubicReport(ReportModel):
    """Refined third fundamental form data at an II-generic vector."""

    variety: str
    v: list[str]
    ii_v_dim: int
    ann_dim: int
    ker_ii_v_dim: int
    sa_dim: int
    iii_value: list[str]
    iii_nonzero: bool
