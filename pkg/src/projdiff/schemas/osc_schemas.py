"""Osculation, Monge and syzygy reports."""

from typing import Literal

from pydantic import Field

from .common import ReportModel


class OscReport(ReportModel):
    """Degree-d forms osculating to a given order at a point."""

    variety: str
    degree: int
    order: int
    affine_dim: int
    projective_dim: int
    formula_dim: int | None = Field(
        default=None, description="C(N+d, d) - C(n+p, p), valid when order <= degree"
    )
    basis: list[list[str]] = Field(description="Coefficient vectors over degree-d monomials")
    seed: int


class MongeSolution(ReportModel):
    """Solvability of the generalized Monge system for quadrics."""

    variety: str
    verdict: str = Field(description="holds, fails-at-order-k or precondition-failed")
    preconditions: dict[str, bool]
    solvable: dict[str, bool] = Field(description="Per order 3, 4, 5")
    a_constants: list[list[list[str]]] | None = Field(default=None, description="a[mu][nu][gamma]")
    b_constants: list[list[list[str]]] | None = Field(default=None, description="b[mu][nu][tau]")
    syzygy_dim: int
    osc_order3: int = Field(description="Projective dim of quadrics osculating to order 3")
    osc_order4: int = Field(description="Projective dim of quadrics osculating to order 4")
    bound_order3: int = Field(description="a + C(a+1, 2) - 1")
    bound_order4: int = Field(description="a - 1")
    seed: int


class SyzygyReport(ReportModel):
    """Linear syzygies of a quadric system."""

    system_dim: int
    n: int
    syzygy_dim: int
    witness: list[list[str]] | None = Field(
        default=None, description="Linear forms l_i with sum l_i Q_i = 0"
    )
    witness_pairs: int | None = None
    witness_quadrics: list[list[list[str]]] | None = Field(
        default=None, description="Quadrics paired with the independent witness forms"
    )
    witness_generic_rank: int | None = Field(
        default=None, description="Rank of a generic combination of the witness quadrics"
    )
    rank_bound_holds: bool | None = None


class LineReport(ReportModel):
    """Osculation order and containment of the line in a tangent direction."""

    variety: str
    direction: list[str]
    maxk: int
    osculation_order: int
    contained: Literal["true", "false", "undecidable"]
    seed: int


class MaximalRankLevel(ReportModel):
    j: int
    rank: int
    domain: int
    target: int
    maximal: bool


class MaximalRankReport(ReportModel):
    """Ranks of the maximal-rank maps attached to a tangent plane."""

    variety: str
    k: int
    m: int
    osculates: bool = Field(description="The plane lies in the base of all conditions through order m")
    levels: list[MaximalRankLevel]
    cumulative_rank: int
    inequality_lhs: int
    inequality_rhs: int
    inequality_holds: bool
    seed: int
