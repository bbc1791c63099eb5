"""Defect reports.

The JSON layout is ``{"variety", "n", "N", "secant", "tangential", "dual",
"gauss", "checks", "seed"}``.
"""

from pydantic import Field

from .common import ReportModel


class SecantReport(ReportModel):
    """Dimension of the k-th secant variety."""

    k: int
    dim: int
    defect: int = Field(description="k(n+1) - 1 - dim")
    refined_dim: int | None = Field(
        default=None, description="n + dim II_v(T) + [III^v(v,v,v) != 0] (k = 2)"
    )


class TangentialReport(ReportModel):
    """Dimension of the tangential variety by two methods."""

    dim: int
    defect: int = Field(description="2n - dim")
    method_a: int = Field(description="n + dim II_v(T)")
    method_b: int = Field(description="Jacobian rank of the tangent-line map minus one")


class DualReport(ReportModel):
    """Dimension of the dual variety by two methods."""

    dim: int
    defect: int = Field(description="N - 1 - dim")
    method_a: int = Field(description="N - 1 - (n - generic rank of |II|)")
    method_b: int = Field(description="Jacobian rank of the conormal map minus one")
    method_b_path: str = Field(description="cramer (polynomial minors) or cramer_jet (minor jets at the point)")
    agree: bool


class GaussReport(ReportModel):
    """Fiber dimension of the Gauss map."""

    defect: int = Field(description="dim singloc |II|")
    plucker_rank: int = Field(description="Rank of the Gauss map differential")


class DefectChecks(ReportModel):
    """Classical inequalities evaluated on computed values; ``None`` when not applicable."""

    linear_normality: bool | None = None
    dual_bound: bool | None = None
    landman_parity: bool | None = None
    superadditivity: bool | None = None
    tau_sigma_sandwich: bool | None = None
    tau_sigma_coincide: bool | None = None
    refined_secant: bool | None = None
    iii_nonzero_nondegenerate: bool | None = None
    rank_restriction: bool | None = None
    large_codim_nondefective: bool | None = None

    @property
    def failed(self) -> list[str]:
        return [name for name, value in self.model_dump().items() if value is False]


class DefectReport(ReportModel):
    """All defect data of one variety."""

    variety: str
    n: int
    N: int
    secant: SecantReport
    tangential: TangentialReport
    dual: DualReport
    gauss: GaussReport
    checks: DefectChecks
    seed: int


class DualSecondFFReport(ReportModel):
    """Second fundamental form of the dual variety at a generic tangent hyperplane."""

    variety: str
    quadric_count: int
    size: int
    projective_dim: int = Field(description="Projective dimension of the quadric system")
    generic_rank: int
    observed_ranks: dict[str, int] = Field(description="Rank census over random combinations")
    constant_rank: bool
    quadrics: list[list[list[str]]]
    seed: int


class JoinReport(ReportModel):
    """Dimension of the join of two varieties in the same projective space."""

    first: str
    second: str
    dim: int
    seed: int
