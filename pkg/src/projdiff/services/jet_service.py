"""Jet towers and fundamental forms at general points.

This module recenters a chart at a point, moves to graph coordinates
``w = f(u)`` adapted to the tangent space, and extracts the second
fundamental form, the higher fundamental forms, the osculating filtration
and the refined cubic form at an II-generic tangent vector.
"""

from collections.abc import Sequence
from dataclasses import replace
from typing import Any

from sympy.polys.domains import QQ

from ..config import RunConfig
from ..exact.linalg import (
    EchelonBasis,
    Vector,
    dot,
    independent_subset,
    inverse,
    kernel_basis,
    left_kernel_basis,
    rank_exact,
    to_rat,
    unit_vector,
)
from ..exact.polys import (
    MPoly,
    coefficient_vector,
    from_coefficients,
    linear_coefficients,
    multilinear_value,
    monomials,
    partial,
    quadratic_form,
    shift,
)
from ..exact.sampling import RationalSampler
from ..exact.series import compose, series_invert_map
from ..exceptions import ConsistencyException, InputValidationException, LabException
from ..logging_config import get_logger, timed_computation
from ..models.jets import JetTower, QuadricSystem, RefinedCubic
from ..models.variety import ParamVariety
from ..schemas.common import fmt_matrix, fmt_vector
from ..schemas.jet_schemas import FundamentalFormReport, ProlongationReport, RefinedCubicReport

logger = get_logger("jet_service")


class JetServiceError(LabException):
    """Base exception for jet computations."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, error_code="jet_error", details=details)


class PointNotGeneralError(JetServiceError):
    """Raised when the chart Jacobian drops rank at the chosen point."""

    def __init__(self, variety: str, rank: int | None = None, attempts: int | None = None) -> None:
        details: dict[str, Any] = {"variety": variety}
        if rank is not None:
            details["rank"] = rank
        if attempts is not None:
            details["attempts"] = attempts
        super().__init__("point not general", **details)


class VectorNotGenericError(JetServiceError):
    """Raised when a supplied tangent vector is not II-generic."""

    def __init__(self, dim: int, generic_dim: int) -> None:
        super().__init__("vector not generic", ii_v_dim=dim, generic_dim=generic_dim)


def _positive_part(p: MPoly, top: int) -> MPoly:
    """Terms of degree 1 through ``top``."""
    return p.ring.from_dict({m: c for m, c in p.iterterms() if 1 <= sum(m) <= top})


def _span_dim(vectors: Sequence[Vector], size: int) -> int:
    return rank_exact(list(vectors), size) if vectors else 0


class JetService:
    """Service computing Taylor data of varieties in graph coordinates."""

    def __init__(self, config: RunConfig) -> None:
        """Initialize jet service with run configuration.

        Args:
            config: Run configuration supplying seeds, trial counts and the order cap
        """
        self.config = config

    def random_general_point(
        self, variety: ParamVariety, sampler: RationalSampler | None = None
    ) -> Vector:
        """Random source point where the chart Jacobian has full rank.

        Raises:
            PointNotGeneralError: If every retry lands on a special point
        """
        sampler = sampler or self.config.sampler(stream=1)
        rank = 0
        for _ in range(self.config.retries):
            point = sampler.vector(variety.n)
            rank = rank_exact(variety.jacobian_at(point), variety.n) if variety.n else 0
            if rank == variety.n:
                return point
        raise PointNotGeneralError(variety.name, rank=rank, attempts=self.config.retries)

    def jet_tower(
        self, variety: ParamVariety, point: Sequence[Any] | None = None, order: int = 3
    ) -> JetTower:
        """Graph-frame jets of ``variety`` at ``point`` through total degree ``order``.

        Args:
            variety: Parametrized variety
            point: Source point (a random general point when omitted)
            order: Truncation order ``K``

        Returns:
            JetTower with graph, filtration and fundamental forms

        Raises:
            InputValidationException: If the order is outside [2, max_jet_order]
            PointNotGeneralError: If the Jacobian has rank below ``n`` at the point
            NonInvertibleJetError: If the tangent projection cannot be inverted
        """
        if not 2 <= order <= self.config.max_jet_order:
            raise InputValidationException(
                f"jet order must lie in [2, {self.config.max_jet_order}]", field="order", value=order
            )
        if variety.n < 1:
            raise InputValidationException("jets need a positive-dimensional variety", field="variety", value=variety.name)
        if point is None:
            point = self.random_general_point(variety)
        point = tuple(to_rat(c) for c in point)

        with timed_computation("jet_tower", variety.name, order=order):
            return self._tower(variety, point, order)

    def _tower(self, variety: ParamVariety, point: Vector, order: int) -> JetTower:
        n, N, a = variety.n, variety.N, variety.a
        z = [_positive_part(shift(p, point), order) for p in variety.chart]
        jac = [linear_coefficients(p, n) for p in z]
        rank = rank_exact(jac, n)
        if rank < n:
            raise PointNotGeneralError(variety.name, rank=rank)

        tangent_rows = tuple(independent_subset(jac, n))
        e_inv = inverse([jac[i] for i in tangent_rows])
        normal_rows = left_kernel_basis(jac, n)

        ring = z[0].ring
        u = []
        for alpha in range(n):
            acc = ring.zero
            for c, i in zip(e_inv[alpha], tangent_rows, strict=True):
                if c:
                    acc += z[i] * c
            u.append(acc)
        w = []
        for ell in normal_rows:
            acc = ring.zero
            for c, p in zip(ell, z, strict=True):
                if c:
                    acc += p * c
            w.append(acc)

        g = [s.poly for s in series_invert_map(u, order)]
        graph = tuple(compose(p, g, order) for p in w)

        frame_tangent = []
        for alpha in range(n):
            row = [QQ.zero] * N
            for c, i in zip(e_inv[alpha], tangent_rows, strict=True):
                row[i] = c
            frame_tangent.append(tuple(row))
        frame = (*frame_tangent, *(tuple(r) for r in normal_rows))

        draft = JetTower(
            variety=variety.name,
            n=n,
            a=a,
            point=point,
            order=order,
            frame=frame,
            tangent_rows=tangent_rows,
            graph=graph,
            filtration=(n,),
            fundamental_forms={},
        )
        filtration, forms = self._filtration(draft)
        tower = replace(draft, filtration=filtration, fundamental_forms=forms)
        logger.debug(
            "Jet tower computed",
            extra={"variety": variety.name, "order": order, "filtration": list(filtration)},
        )
        return tower

    @staticmethod
    def _filtration(tower: JetTower) -> tuple[tuple[int, ...], dict[int, tuple[MPoly, ...]]]:
        """Incremental ranks of order-k normal vectors and the forms ``xi . f_k``."""
        n, a = tower.n, tower.a
        echelon = EchelonBasis(a)
        lower: list[Vector] = []
        dims = [n]
        forms: dict[int, tuple[MPoly, ...]] = {}
        for k in range(2, tower.order + 1):
            parts = tower.form(k)
            covectors = kernel_basis(lower, a) if lower else [unit_vector(a, mu) for mu in range(a)]
            candidates = [
                sum((p * c for c, p in zip(xi, parts, strict=True) if c), parts[0].ring.zero)
                for xi in covectors
            ] if parts else []
            basis = monomials(n, k)
            vectors = [coefficient_vector(f, basis) for f in candidates]
            keep = independent_subset(vectors, len(basis))
            forms[k] = tuple(candidates[i] for i in keep)

            added = 0
            for vec in tower.normal_vectors(k):
                if echelon.add(vec):
                    lower.append(vec)
                    added += 1
            dims.append(added)
        return tuple(dims), forms

    def second_ff(self, variety: ParamVariety, point: Sequence[Any] | None = None) -> QuadricSystem:
        """Hessians of the quadratic graph terms, one per normal index."""
        return self.jet_tower(variety, point, order=2).second_ff()

    @staticmethod
    def singloc(system: QuadricSystem) -> list[Vector]:
        """Common kernel of every quadric in the system."""
        rows = [row for m in system.matrices for row in m]
        if not rows:
            return [unit_vector(system.n, i) for i in range(system.n)]
        return kernel_basis(rows, system.n)

    def generic_quadric_rank(
        self, system: QuadricSystem, sampler: RationalSampler | None = None
    ) -> int:
        """Largest rank of a random combination over ``quadric_rank_trials`` draws."""
        if not len(system):
            return 0
        sampler = sampler or self.config.sampler(stream=2)
        best = 0
        for _ in range(self.config.quadric_rank_trials):
            coeffs = sampler.vector(len(system))
            best = max(best, rank_exact(system.combination(coeffs), system.n))
            if best == system.n:
                break
        return best

    def ii_generic_vector(
        self, system: QuadricSystem, sampler: RationalSampler | None = None
    ) -> tuple[Vector, int]:
        """First sampled tangent vector maximizing ``dim II_v(T)``."""
        sampler = sampler or self.config.sampler(stream=3)
        best_v: Vector = unit_vector(system.n, 0)
        best = -1
        for _ in range(self.config.generic_vector_samples):
            v = sampler.nonzero_vector(system.n)
            dim = _span_dim(system.contract(v), system.n) if len(system) else 0
            if dim > best:
                best_v, best = v, dim
        return best_v, best

    def refined_cubic(
        self,
        variety: ParamVariety,
        point: Sequence[Any] | None = None,
        v: Sequence[Any] | None = None,
        tower: JetTower | None = None,
    ) -> RefinedCubic:
        """``Ann(v)``, ``ker II_v``, ``SA(v)`` and ``III^v(v, v, v)`` at an II-generic ``v``.

        Raises:
            VectorNotGenericError: If a supplied ``v`` has ``dim II_v(T)`` below the sampled maximum
            ConsistencyException: If ``v`` is missing from ``SA(v)``
        """
        if tower is None or tower.order < 3:
            tower = self.jet_tower(variety, point, order=3)
        with timed_computation("refined_cubic", variety.name):
            system = tower.second_ff()
            n = system.n
            generic_v, generic_dim = self.ii_generic_vector(system)
            if v is None:
                v = generic_v
            else:
                v = tuple(to_rat(c) for c in v)
                dim = _span_dim(system.contract(v), n) if len(system) else 0
                if dim < generic_dim:
                    raise VectorNotGenericError(dim, generic_dim)
            v = tuple(v)
            contracted = system.contract(v)
            ii_v_dim = _span_dim(contracted, n) if contracted else 0
            annihilators = left_kernel_basis(contracted, n) if contracted else []
            ann = QuadricSystem(
                n, tuple(system.combination(h) for h in annihilators), tuple(f"h{i}" for i in range(len(annihilators)))
            ).basis()
            ker = kernel_basis(contracted, n) if contracted else [unit_vector(n, i) for i in range(n)]
            sa = self.singloc(ann)
            if rank_exact([*sa, v], n) != len(sa):
                raise ConsistencyException("tangent vector missing from the singular locus of Ann(v)", variety=variety.name)
            f3 = tower.form(3)
            cubic_value = tuple(multilinear_value(f, [v, v, v]) for f in f3)
            iii_value = tuple(dot(h, cubic_value) for h in annihilators)
            return RefinedCubic(
                v=v,
                ii_v_dim=ii_v_dim,
                annihilators=tuple(annihilators),
                ann=ann,
                ker_ii_v=tuple(ker),
                sa=tuple(sa),
                iii_value=iii_value,
            )

    @staticmethod
    def _quadric_annihilators(system: QuadricSystem) -> tuple[list[tuple[int, ...]], list[Vector]]:
        basis = monomials(system.n, 2)
        rows = [coefficient_vector(quadratic_form(m, system.n), basis) for m in system.matrices]
        if not rows:
            return basis, [unit_vector(len(basis), i) for i in range(len(basis))]
        return basis, kernel_basis(rows, len(basis))

    def prolongation_dim(self, system: QuadricSystem) -> tuple[int, list[MPoly]]:
        """``dim A^(1)`` for ``A^(1) = S^3 T* cap (A tensor T*)`` with a cubic witness basis."""
        n = system.n
        quad_basis, etas = self._quadric_annihilators(system)
        index = {m: i for i, m in enumerate(quad_basis)}
        cubic_basis = monomials(n, 3)
        rows = []
        for alpha in range(n):
            for eta in etas:
                row = []
                for m in cubic_basis:
                    if m[alpha]:
                        lowered = list(m)
                        lowered[alpha] -= 1
                        row.append(eta[index[tuple(lowered)]] * m[alpha])
                    else:
                        row.append(QQ.zero)
                rows.append(row)
        kernel = kernel_basis(rows, len(cubic_basis)) if rows else [
            unit_vector(len(cubic_basis), i) for i in range(len(cubic_basis))
        ]
        witnesses = [from_coefficients(c, cubic_basis, n) for c in kernel]
        return len(kernel), witnesses

    def prolongation_contains(self, system: QuadricSystem, cubic: MPoly) -> bool:
        """Whether every first partial of ``cubic`` lies in the span of the system."""
        quad_basis, etas = self._quadric_annihilators(system)
        for alpha in range(system.n):
            coeffs = coefficient_vector(partial(cubic, alpha), quad_basis)
            if any(dot(eta, coeffs) for eta in etas):
                return False
        return True

    def fundamental_form_check(
        self, variety: ParamVariety, point: Sequence[Any] | None = None, tower: JetTower | None = None
    ) -> ProlongationReport:
        """Compare ``|FF^3|`` with ``|II|^(1)``."""
        if tower is None or tower.order < 3:
            tower = self.jet_tower(variety, point, order=3)
        system = tower.second_ff()
        cubics = tower.fundamental_forms.get(3, ())
        pdim, _ = self.prolongation_dim(system)
        contained = all(self.prolongation_contains(system, c) for c in cubics)
        if not contained:
            logger.warning(
                "FF^3 outside the prolongation of |II|",
                extra={"variety": variety.name, "ff3_dim": len(cubics)},
            )
        return ProlongationReport(ff3_dim=len(cubics), prolongation_dim=pdim, contained=contained)

    def singloc_with_base_plane(
        self, n: int, k: int, a: int, sampler: RationalSampler | None = None
    ) -> QuadricSystem:
        """Random system of ``a`` quadrics vanishing on ``span(e_1..e_k)``.

        When ``a(n - k) < k`` the singular locus is nonzero.
        """
        if not 0 < k <= n or a < 1:
            raise InputValidationException("need 0 < k <= n and a >= 1", field="k", value=k)
        sampler = sampler or self.config.sampler(stream=4)
        matrices = []
        for _ in range(a):
            m = [[QQ.zero] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    if i < k and j < k:
                        continue
                    c = sampler.rat()
                    m[i][j] = m[j][i] = c
            matrices.append(tuple(tuple(row) for row in m))
        return QuadricSystem(n, tuple(matrices))

    def random_system(self, n: int, a: int, sampler: RationalSampler | None = None) -> QuadricSystem:
        """``a`` random quadrics on an ``n``-dimensional space."""
        if n < 1 or a < 1:
            raise InputValidationException("need n >= 1 and a >= 1", field="n", value=f"{n},{a}")
        sampler = sampler or self.config.sampler(stream=5)
        matrices = []
        for _ in range(a):
            m = [[QQ.zero] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    m[i][j] = m[j][i] = sampler.rat()
            matrices.append(tuple(tuple(row) for row in m))
        return QuadricSystem(n, tuple(matrices))

    def report(
        self, variety: ParamVariety, point: Sequence[Any] | None = None, order: int = 3
    ) -> FundamentalFormReport:
        """Fundamental form summary used by the ``ff`` command."""
        tower = self.jet_tower(variety, point, order=order)
        system = tower.second_ff()
        prolongation = self.fundamental_form_check(variety, tower=tower) if order >= 3 else None
        return FundamentalFormReport(
            variety=variety.name,
            n=tower.n,
            a=tower.a,
            order=order,
            point=fmt_vector(tower.point),
            filtration=list(tower.filtration),
            ff_dims={str(k): len(v) for k, v in sorted(tower.fundamental_forms.items())},
            second_ff=[fmt_matrix(m) for m in system.matrices],
            generic_quadric_rank=self.generic_quadric_rank(system),
            singloc_dim=len(self.singloc(system)),
            prolongation=prolongation,
            seed=self.config.seed,
        )

    def refined_report(self, variety: ParamVariety, point: Sequence[Any] | None = None) -> RefinedCubicReport:
        data = self.refined_cubic(variety, point)
        return RefinedCubicReport(
            variety=variety.name,
            v=fmt_vector(data.v),
            ii_v_dim=data.ii_v_dim,
            ann_dim=len(data.ann),
            ker_ii_v_dim=len(data.ker_ii_v),
            sa_dim=len(data.sa),
            iii_value=fmt_vector(data.iii_value),
            iii_nonzero=data.iii_nonzero,
        )

