"""Osculating hypersurfaces, the Monge system for quadrics and linear syzygies."""

from collections.abc import Sequence
from itertools import combinations_with_replacement
from math import comb
from typing import Any

from sympy.polys.domains import QQ

from ..config import RunConfig
from ..exact.linalg import (
    Vector,
    combine,
    complement_basis,
    coordinates,
    independent_subset,
    kernel_basis,
    rank_exact,
    rank_of_vectors,
    solve_linear,
    transpose_rows,
)
from ..exact.polys import (
    MPoly,
    coefficient_vector,
    directional,
    evaluate,
    gens,
    monomials,
    multilinear_value,
    poly_ring,
    quadratic_form,
    shift,
)
from ..exact.series import compose, trunc_mul
from ..exceptions import InputValidationException, LabException
from ..logging_config import get_logger, timed_computation
from ..models.jets import JetTower, QuadricSystem
from ..models.variety import ParamVariety
from ..schemas.common import fmt_matrix, fmt_vector
from ..schemas.osc_schemas import (
    LineReport,
    MaximalRankLevel,
    MaximalRankReport,
    MongeSolution,
    OscReport,
    SyzygyReport,
)
from .jet_service import JetService, PointNotGeneralError

logger = get_logger("osc_service")

MONGE_ORDER = 5


class OscServiceError(LabException):
    """Base exception for osculation computations."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, error_code="osc_error", details=details)


def _monomial_value(exps: Sequence[int], z: Sequence[Any]) -> Any:
    value = QQ.one
    for e, x in zip(exps, z, strict=True):
        if e:
            value *= x**e
    return value


def quadric_value(coeffs: Sequence[Any], z: Sequence[Any]) -> Any:
    """Degree-2 form with ``coeffs`` over ``monomials(len(z), 2)`` evaluated at ``z``."""
    return sum(
        (c * _monomial_value(m, z) for c, m in zip(coeffs, monomials(len(z), 2), strict=True) if c),
        QQ.zero,
    )


class OscService:
    """Service for osculation and quadric-cut tests."""

    def __init__(self, config: RunConfig, jets: JetService | None = None) -> None:
        self.config = config
        self.jets = jets or JetService(config)

    def _point(self, variety: ParamVariety, point: Sequence[Any] | None, stream: int) -> Vector:
        if point is not None:
            rank = rank_exact(variety.jacobian_at(point), variety.n)
            if rank < variety.n:
                raise PointNotGeneralError(variety.name, rank=rank)
            return tuple(point)
        return self.jets.random_general_point(variety, self.config.sampler(stream=stream))

    def _condition_matrix(self, variety: ParamVariety, point: Vector, d: int, p_ord: int) -> tuple[list[list[Any]], int]:
        """Rows: Taylor coefficients of ``P o phi_hat`` through ``p_ord``; columns: degree-``d`` monomials."""
        n, N = variety.n, variety.N
        ring = poly_ring(n)
        lift = [ring.one, *(shift(p, point) for p in variety.chart)]
        columns_monos = monomials(N + 1, d)
        products: dict[tuple[int, ...], MPoly] = {tuple([0] * (N + 1)): ring.one}

        def product_of(exps: tuple[int, ...]) -> MPoly:
            if exps not in products:
                i = max(j for j, e in enumerate(exps) if e)
                lower = list(exps)
                lower[i] -= 1
                products[exps] = trunc_mul(product_of(tuple(lower)), lift[i], p_ord)
            return products[exps]

        row_monos = [m for k in range(p_ord + 1) for m in monomials(n, k)]
        columns = [coefficient_vector(product_of(tuple(m)), row_monos) for m in columns_monos]
        return transpose_rows(columns, len(row_monos)), len(columns_monos)

    def osculating_space(
        self, variety: ParamVariety, d: int, p_ord: int, point: Sequence[Any] | None = None
    ) -> OscReport:
        """Degree-``d`` forms whose restriction vanishes through order ``p_ord`` at the point."""
        if d < 1 or p_ord < 0:
            raise InputValidationException("degree must be positive and order nonnegative", field="d", value=d)
        point = self._point(variety, point, stream=40)
        with timed_computation("osculating_space", variety.name, d=d, p_ord=p_ord):
            rows, ncols = self._condition_matrix(variety, point, d, p_ord)
            basis = kernel_basis(rows, ncols)
            formula = comb(variety.N + d, d) - comb(variety.n + p_ord, p_ord) if p_ord <= d else None
            if formula is not None and formula != len(basis):
                logger.warning(
                    "Osculating count differs from the closed form",
                    extra={"variety": variety.name, "observed": len(basis), "formula": formula},
                )
            return OscReport(
                variety=variety.name,
                degree=d,
                order=p_ord,
                affine_dim=len(basis),
                projective_dim=len(basis) - 1,
                formula_dim=formula,
                basis=fmt_matrix(basis),
                seed=self.config.seed,
            )

    def quadric_basis(self, variety: ParamVariety, p_ord: int, point: Sequence[Any] | None = None) -> list[Vector]:
        point = self._point(variety, point, stream=40)
        rows, ncols = self._condition_matrix(variety, point, 2, p_ord)
        return kernel_basis(rows, ncols)

    def vanish_on_samples(self, variety: ParamVariety, quadrics: Sequence[Vector], samples: int = 20) -> bool:
        """Whether every quadric vanishes at ``samples`` random points of the variety."""
        sampler = self.config.sampler(stream=41)
        for _ in range(samples):
            z = variety.lift_at(sampler.vector(variety.n))
            if any(quadric_value(q, z) for q in quadrics):
                return False
        return True

    @staticmethod
    def _cubic(linear: Sequence[Any], quadric: Sequence[Sequence[Any]], n: int) -> MPoly:
        xs = gens(n)
        ell = sum((c * x for c, x in zip(linear, xs, strict=True) if c), poly_ring(n).zero)
        return ell * quadratic_form(quadric, n)

    def linear_syzygies(self, system: QuadricSystem) -> SyzygyReport:
        """Kernel of ``(l_i) -> sum l_i Q_i`` from ``T* (x) A`` to cubics, with a checked witness."""
        basis = system.basis()
        n, p = basis.n, len(basis)
        with timed_computation("linear_syzygies", f"{p}x{n}"):
            cubic_monos = monomials(n, 3)
            columns = []
            for q in basis.matrices:
                for i in range(n):
                    unit = [QQ.zero] * n
                    unit[i] = QQ.one
                    columns.append(coefficient_vector(self._cubic(unit, q, n), cubic_monos))
            kernel = kernel_basis(transpose_rows(columns, len(cubic_monos)), p * n) if columns else []
            if not kernel:
                return SyzygyReport(system_dim=p, n=n, syzygy_dim=0)

            witness = [tuple(kernel[0][i * n : (i + 1) * n]) for i in range(p)]
            keep = independent_subset(witness, n)
            independent = [witness[i] for i in keep]
            reduced_quadrics = [[[QQ.zero] * n for _ in range(n)] for _ in independent]
            for ell, q in zip(witness, basis.matrices, strict=True):
                c = coordinates(independent, ell, n)
                if c is None:
                    raise OscServiceError("witness forms leave their own span")
                for j, cj in enumerate(c):
                    if cj:
                        for r in range(n):
                            for s in range(n):
                                reduced_quadrics[j][r][s] += cj * q[r][s]
            span = QuadricSystem(n, tuple(tuple(tuple(row) for row in q) for q in reduced_quadrics))
            generic_rank = self.jets.generic_quadric_rank(span, self.config.sampler(stream=45))
            pairs = len(independent)
            holds = generic_rank <= 2 * (pairs - 1)
            if not holds:
                logger.warning(
                    "Syzygy rank bound failed", extra={"pairs": pairs, "generic_rank": generic_rank, "n": n}
                )
            return SyzygyReport(
                system_dim=p,
                n=n,
                syzygy_dim=len(kernel),
                witness=fmt_matrix(witness),
                witness_pairs=pairs,
                witness_quadrics=[fmt_matrix(q) for q in span.matrices],
                witness_generic_rank=generic_rank,
                rank_bound_holds=holds,
            )

    @staticmethod
    def _monge_columns(tower: JetTower, degree: int) -> tuple[list[Vector], list[Vector]]:
        """Coefficient columns of the ``a`` and ``b`` unknowns at one degree, and the targets."""
        n, a = tower.n, tower.a
        xs = gens(n)
        monos = monomials(n, degree)
        f2 = tower.form(2)
        lower = tower.form(degree - 1)
        ring = poly_ring(n)
        columns = [coefficient_vector(x * lower[nu], monos) for nu in range(a) for x in xs]
        for nu in range(a):
            for tau in range(nu, a):
                if degree == 3:
                    poly = ring.zero
                elif degree == 4:
                    poly = f2[nu] * f2[tau] * (1 if nu == tau else 2)
                else:
                    f3 = tower.form(3)
                    poly = 2 * f2[nu] * f3[nu] if nu == tau else 2 * (f2[nu] * f3[tau] + f2[tau] * f3[nu])
                columns.append(coefficient_vector(poly, monos))
        targets = [coefficient_vector(f, monos) for f in tower.form(degree)]
        return columns, targets

    def monge_check(self, variety: ParamVariety, point: Sequence[Any] | None = None) -> MongeSolution:
        """Solve ``F3 = A F2``, ``F4 = A F3 + B(F2, F2)``, ``F5 = A F4 + 2 B(F2, F3)`` exactly.

        Each normal index is an independent linear system in ``a^mu`` and
        ``b^mu``; lines are added one order at a time.
        """
        point = self._point(variety, point, stream=42)
        tower = self.jets.jet_tower(variety, point, order=MONGE_ORDER)
        n, a = tower.n, tower.a
        with timed_computation("monge_check", variety.name):
            syzygies = self.linear_syzygies(tower.second_ff())
            preconditions = {
                "third_order_vanishes": (tower.filtration[2] if len(tower.filtration) > 2 else 0) == 0,
                "nondegenerate": (tower.filtration[1] if len(tower.filtration) > 1 else 0) == a,
                "no_linear_syzygies": syzygies.syzygy_dim == 0,
            }

            per_degree = {k: self._monge_columns(tower, k) for k in (3, 4, 5)}
            unknowns = a * n + comb(a + 1, 2)
            solvable: dict[str, bool] = {}
            solutions: list[Vector] | None = None
            for top in (3, 4, 5):
                found = []
                for mu in range(a):
                    rows: list[list[Any]] = []
                    rhs: list[Any] = []
                    for k in range(3, top + 1):
                        columns, targets = per_degree[k]
                        rows.extend(transpose_rows(columns, len(targets[mu])))
                        rhs.extend(targets[mu])
                    x = solve_linear(rows, rhs, unknowns) if rows else tuple([QQ.zero] * unknowns)
                    if x is None:
                        break
                    found.append(x)
                solvable[str(top)] = len(found) == a
                if len(found) == a and top == 5:
                    solutions = found

            failing = next((k for k in ("3", "4", "5") if not solvable[k]), None)
            if not all(preconditions.values()):
                verdict = "precondition-failed"
            elif failing:
                verdict = f"fails-at-order-{failing}"
            else:
                verdict = "holds"

            osc3 = len(self.quadric_basis(variety, 3, point)) - 1
            osc4 = len(self.quadric_basis(variety, 4, point)) - 1
            bound3, bound4 = a + comb(a + 1, 2) - 1, a - 1
            if verdict == "holds" and (osc3, osc4) != (bound3, bound4):
                logger.warning(
                    "Osculating quadric counts differ from the Monge bounds",
                    extra={"variety": variety.name, "osc3": osc3, "osc4": osc4},
                )

            a_constants = b_constants = None
            if solutions is not None:
                a_constants = [
                    fmt_matrix([[x[nu * n + g] for g in range(n)] for nu in range(a)]) for x in solutions
                ]
                b_constants = []
                for x in solutions:
                    b = [[QQ.zero] * a for _ in range(a)]
                    idx = a * n
                    for nu in range(a):
                        for tau in range(nu, a):
                            b[nu][tau] = b[tau][nu] = x[idx]
                            idx += 1
                    b_constants.append(fmt_matrix(b))

            return MongeSolution(
                variety=variety.name,
                verdict=verdict,
                preconditions=preconditions,
                solvable=solvable,
                a_constants=a_constants,
                b_constants=b_constants,
                syzygy_dim=syzygies.syzygy_dim,
                osc_order3=osc3,
                osc_order4=osc4,
                bound_order3=bound3,
                bound_order4=bound4,
                seed=self.config.seed,
            )

    def _check_maxk(self, maxk: int) -> None:
        if not 2 <= maxk <= self.config.max_jet_order:
            raise InputValidationException(
                f"order must lie in [2, {self.config.max_jet_order}]", field="maxk", value=maxk
            )

    def line_osculation_order(
        self, variety: ParamVariety, v: Sequence[Any], maxk: int, point: Sequence[Any] | None = None
    ) -> int:
        """Largest ``k <= maxk`` with ``F_j(v, ..., v) = 0`` for ``2 <= j <= k`` (1 if none)."""
        self._check_maxk(maxk)
        if len(v) != variety.n or not any(v):
            raise InputValidationException("direction must be a nonzero tangent vector", field="direction")
        point = self._point(variety, point, stream=43)
        tower = self.jets.jet_tower(variety, point, order=maxk)
        order = 1
        for j in range(2, maxk + 1):
            if any(evaluate(f, v) for f in tower.form(j)):
                break
            order = j
        return order

    def line_contained(self, variety: ParamVariety, v: Sequence[Any], point: Sequence[Any] | None = None) -> str:
        """``"true"``/``"false"`` from the quadrics of the variety, ``"undecidable"`` if it is not quadric-cut."""
        if not variety.quadric_cut:
            return "undecidable"
        point = self._point(variety, point, stream=43)
        quadrics = self.quadric_basis(variety, 2 * variety.max_degree + 1, point)
        z0 = variety.lift_at(point)
        z1 = combine(v, variety.lift_partials_at(point), variety.N + 1)
        z01 = tuple(x + y for x, y in zip(z0, z1, strict=True))
        for q in quadrics:
            p0, p1 = quadric_value(q, z0), quadric_value(q, z1)
            if p0 or p1 or quadric_value(q, z01) - p0 - p1:
                return "false"
        return "true"

    def line_report(
        self, variety: ParamVariety, v: Sequence[Any], maxk: int, point: Sequence[Any] | None = None
    ) -> LineReport:
        point = self._point(variety, point, stream=43)
        with timed_computation("line_report", variety.name, maxk=maxk):
            order = self.line_osculation_order(variety, v, maxk, point)
            contained = self.line_contained(variety, v, point)
            if contained == "true" and order != maxk:
                logger.warning(
                    "Contained line with finite osculation order",
                    extra={"variety": variety.name, "order": order, "maxk": maxk},
                )
            return LineReport(
                variety=variety.name,
                direction=fmt_vector(v),
                maxk=maxk,
                osculation_order=order,
                contained=contained,
                seed=self.config.seed,
            )

    def maximal_rank_report(
        self, variety: ParamVariety, plane: Sequence[Sequence[Any]], m: int, point: Sequence[Any] | None = None
    ) -> MaximalRankReport:
        """Ranks of ``R_j : Hom(L, T/L) -> S^j L* (x) N``, ``phi -> F_j(y^(j-1), phi(y))``, for ``2 <= j <= m-1``.

        Levels are cumulative: level ``j`` stacks ``R_2, ..., R_j``.
        """
        self._check_maxk(m)
        n, a = variety.n, variety.a
        if not plane or rank_of_vectors(plane, n) != len(plane) or any(len(y) != n for y in plane):
            raise InputValidationException("plane must be spanned by independent tangent vectors", field="plane")
        k = len(plane)
        point = self._point(variety, point, stream=44)
        tower = self.jets.jet_tower(variety, point, order=m)
        complement = complement_basis(plane, n)
        sub_ring = poly_ring(k)
        ts = sub_ring.gens[:k]
        subs = [sum((y[i] * t for y, t in zip(plane, ts, strict=True) if y[i]), sub_ring.zero) for i in range(n)]

        with timed_computation("maximal_rank_report", variety.name, k=k, m=m):
            osculates = all(
                not multilinear_value(f, [plane[i] for i in combo])
                for j in range(2, m + 1)
                for f in tower.form(j)
                for combo in combinations_with_replacement(range(k), j)
            )
            domain = k * (n - k)
            stacked: list[list[Any]] = [[] for _ in range(domain)]
            levels = []
            target = 0
            for j in range(2, m):
                monos = monomials(k, j)
                target += a * len(monos)
                for idx, (i, c) in enumerate((i, c) for i in range(k) for c in range(len(complement))):
                    for f in tower.form(j):
                        restricted = compose(directional(f, complement[c]), subs, j) * ts[i]
                        stacked[idx].extend(coefficient_vector(restricted, monos))
                rank = rank_of_vectors(stacked, target) if domain and target else 0
                levels.append(
                    MaximalRankLevel(j=j, rank=rank, domain=domain, target=target, maximal=rank == min(domain, target))
                )
            lhs = a * (comb(k + m - 1, m - 1) - k - 1)
            rhs = k * (n - k)
            return MaximalRankReport(
                variety=variety.name,
                k=k,
                m=m,
                osculates=osculates,
                levels=levels,
                cumulative_rank=levels[-1].rank if levels else 0,
                inequality_lhs=lhs,
                inequality_rhs=rhs,
                inequality_holds=lhs >= rhs,
                seed=self.config.seed,
            )

