"""Constant-rank matrix space reports."""

from pydantic import Field

from .common import ReportModel


class RankCertificate(ReportModel):
    """Certificate or refutation of constant rank for a matrix space.

    ``certified`` is false exactly when ``refutation`` holds a parameter point
    whose matrix has a rank different from ``claimed_rank``.
    """

    space: str
    rows: int
    cols: int
    symmetry: str
    dim: int
    claimed_rank: int
    mode: str = Field(description="randomized or symbolic")
    certified: bool
    witness: list[str] | None = Field(default=None, description="Parameters of rank claimed_rank")
    trials: int | None = None
    sample_height: int | None = None
    failure_bound_log2: float | None = Field(
        default=None, description="Failure probability is below 2^-value"
    )
    stratum_checks: int | None = None
    minors_checked: int | None = None
    refutation: list[str] | None = None
    refutation_rank: int | None = None
    seed: int


class PencilRefutation(ReportModel):
    """A parameter point of a symmetric pencil where its rank drops, if one exists.

    The drops at ``s = 1`` are the roots of ``form``, the gcd of the principal
    ``r``-minors of ``Q(1, t)``. A rational root is given directly; otherwise
    ``point`` is ``(1, t)`` with ``t`` a root of ``minimal_polynomial`` and the
    rank is computed exactly in the field it generates.
    """

    pencil: int
    regular_size: int | None = Field(default=None, description="Size of the regular Kronecker block")
    singular_blocks: list[int] = Field(default_factory=list, description="Indices e of the singular blocks")
    form: list[str] = Field(description="Coefficients of the principal-minor gcd by ascending power of t")
    factor: str = Field(
        description="Irreducible factor of the gcd, 's' for the point (0, 1), empty when no drop exists"
    )
    point: list[str] | None = None
    minimal_polynomial: str | None = None
    rank: int | None = None


class OddRankReport(ReportModel):
    """Search for two-dimensional symmetric spaces of constant rank."""

    m: int
    r: int
    trials: int
    refuted: int
    constant_rank_found: bool
    examples: list[PencilRefutation] = Field(default_factory=list)
    seed: int


class DoublingReport(ReportModel):
    """Block structure ``[[0, B], [+-B^T, 0]]`` of a space, when present."""

    space: str
    found: bool
    status: str
    kind: str | None = None
    first_block: list[int] | None = None
    second_block: list[int] | None = None


class MatchReport(ReportModel):
    """Signed permutation carrying one matrix space onto another."""

    source: str
    target: str
    found: bool
    row_perm: list[int] | None = None
    col_perm: list[int] | None = None
    param_perm: list[int] | None = None
    row_signs: list[int] | None = None
    col_signs: list[int] | None = None
    param_signs: list[int] | None = None
    nodes: int


class RankBounds(ReportModel):
    """Dimension bounds for spaces of constant and bounded rank."""

    r: int
    m: int
    n: int
    general_upper: int = Field(description="l(r,m,n) <= m + n - 2r + 1")
    general_lower: int = Field(description="l(r,m,n) >= n - r + 1")
    general_exact: int | None = Field(default=None, description="Exact l(r,m,n) when known")
    bounded_below_general: int = Field(description="(m - r)(n - r)")
    bounded_below_symmetric: int = Field(description="C(m - r + 1, 2)")
    bounded_below_skew: int | None = Field(default=None, description="C(m - r, 2) for even r")
    symmetric_lower: int | None = Field(default=None, description="c(r,m) >= m - r + 1 for even r")
    skew_lower: int | None = Field(default=None, description="lambda(r,m) >= m - r + 1 for even r")
    symmetric_exact: int = Field(description="c(r,m): 1 for odd r, m - r + 1 for even r")
