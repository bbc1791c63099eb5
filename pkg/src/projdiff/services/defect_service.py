"""Secant, tangential, dual and Gauss defects.

Every dimension is the generic rank of an explicit polynomial map evaluated
at random rational points, with the maximum taken over retries. Where two
independent methods exist both are computed and compared.
"""

from collections import Counter
from collections.abc import Sequence
from math import comb
from typing import Any

from sympy.polys.domains import QQ

from ..config import RunConfig
from ..exact.linalg import (
    Vector,
    complement_basis,
    cramer_kernel_jet,
    dot,
    independent_subset,
    kernel_basis,
    mat_vec,
    rank_exact,
    rank_of_vectors,
    transpose_rows,
)
from ..exact.polys import cramer_kernel_vectors, evaluate, multilinear_value, partial
from ..exact.sampling import RationalSampler
from ..exceptions import ConsistencyException, GenericityException, InputValidationException
from ..logging_config import get_logger, timed_computation
from ..models.jets import JetTower, QuadricSystem
from ..models.variety import ParamVariety
from ..schemas.common import fmt_matrix
from ..schemas.defect_schemas import (
    DefectChecks,
    DefectReport,
    DualReport,
    DualSecondFFReport,
    GaussReport,
    SecantReport,
    TangentialReport,
)
from .catalog_service import is_nondegenerate
from .jet_service import JetService

logger = get_logger("defect_service")

# Up to this dimension the Cramer minors are expanded as polynomials; beyond it
# their first jets are evaluated at the sampled point.
CRAMER_SYMBOLIC_MAX_N = 3


class MethodDisagreementError(GenericityException):
    """Raised when the two tangential-dimension methods disagree."""

    def __init__(self, method_a: int, method_b: int) -> None:
        super().__init__("genericity failure, re-seed")
        self.details.update({"method_a": method_a, "method_b": method_b})


class DualMismatchError(ConsistencyException):
    """Raised when the dual-dimension methods disagree on an expected-smooth variety."""

    def __init__(self, variety: str, method_a: int, method_b: int) -> None:
        super().__init__(
            "dual dimension methods disagree", variety=variety, method_a=method_a, method_b=method_b
        )


class GaussMismatchError(ConsistencyException):
    """Raised when the singular locus of |II| and the Gauss map rank disagree."""

    def __init__(self, variety: str, singloc_dim: int, plucker_rank: int) -> None:
        super().__init__(
            "Gauss defect cross-check failed",
            variety=variety,
            singloc_dim=singloc_dim,
            plucker_rank=plucker_rank,
        )


class HyperplaneNotGenericError(GenericityException):
    """Raised when no sampled tangent hyperplane reaches the generic rank."""

    def __init__(self, attempts: int) -> None:
        super().__init__("tangent hyperplane not generic", attempts=attempts)


def _pivot_column_sets(m: Sequence[Sequence[Any]], size: int) -> list[tuple[int, ...]]:
    """Independent columns of ``m`` plus one further column, for each remaining column."""
    pivots = tuple(independent_subset(transpose_rows(m, size), len(m)))
    return [(*pivots, c) for c in range(size) if c not in set(pivots)]


class DefectService:
    """Service computing dimensions of auxiliary varieties."""

    def __init__(self, config: RunConfig, jets: JetService | None = None) -> None:
        """Initialize defect service.

        Args:
            config: Run configuration
            jets: Jet service shared with other services
        """
        self.config = config
        self.jets = jets or JetService(config)

    @staticmethod
    def _tangent_rows(variety: ParamVariety, point: Sequence[Any]) -> list[Vector]:
        return [variety.lift_at(point), *variety.lift_partials_at(point)]

    def _second_lift_rows(self, variety: ParamVariety, point: Sequence[Any], beta: int) -> list[Vector]:
        """Rows of ``d/dx_beta [phi_hat; d phi_hat]``."""
        return [
            variety.lift_partials_at(point)[beta],
            *(variety.lift_second_at(point, alpha, beta) for alpha in range(variety.n)),
        ]

    def secant_dim(self, variety: ParamVariety, k: int = 2) -> int:
        """Projective dimension of the span of ``k`` embedded tangent spaces at random points."""
        if k < 1:
            raise InputValidationException("secant order must be positive", field="k", value=k)
        cap = min(k * (variety.n + 1) - 1, variety.N)
        sampler = self.config.sampler(stream=10)
        with timed_computation("secant_dim", variety.name, k=k):
            best = -1
            for _ in range(self.config.retries):
                rows: list[Vector] = []
                for _ in range(k):
                    point = self.jets.random_general_point(variety, sampler)
                    rows.extend(self._tangent_rows(variety, point))
                best = max(best, rank_of_vectors(rows, variety.N + 1) - 1)
                if best == cap:
                    break
            return best

    def join_dim(self, first: ParamVariety, second: ParamVariety) -> int:
        """Projective dimension of the join of two varieties in the same ``P^N``."""
        if first.N != second.N:
            raise InputValidationException(
                "joined varieties must share the ambient space", field="N", value=f"{first.N},{second.N}"
            )
        sampler = self.config.sampler(stream=11)
        cap = min(first.n + second.n + 1, first.N)
        with timed_computation("join_dim", f"{first.name}+{second.name}"):
            best = -1
            for _ in range(self.config.retries):
                p = self.jets.random_general_point(first, sampler)
                q = self.jets.random_general_point(second, sampler)
                rows = self._tangent_rows(first, p) + self._tangent_rows(second, q)
                best = max(best, rank_of_vectors(rows, first.N + 1) - 1)
                if best == cap:
                    break
            return best

    def tangential_dim(self, variety: ParamVariety, tower: JetTower | None = None) -> TangentialReport:
        """Dimension of the tangential variety by ``n + dim II_v(T)`` and by a Jacobian rank.

        Raises:
            MethodDisagreementError: If the two methods differ
        """
        n, N = variety.n, variety.N
        tower = tower or self.jets.jet_tower(variety, order=2)
        with timed_computation("tangential_dim", variety.name):
            _, ii_dim = self.jets.ii_generic_vector(tower.second_ff())
            method_a = n + max(ii_dim, 0)

            sampler = self.config.sampler(stream=13)
            method_b = -1
            for _ in range(self.config.retries):
                x = self.jets.random_general_point(variety, sampler)
                u = sampler.vector(n)
                lift = variety.lift_at(x)
                partials = variety.lift_partials_at(x)
                psi = list(lift)
                for c, d in zip(u, partials, strict=True):
                    psi = [p + c * q for p, q in zip(psi, d, strict=True)]
                columns = [tuple(psi), *partials]
                for beta in range(n):
                    col = list(partials[beta])
                    for alpha, c in enumerate(u):
                        if c:
                            second = variety.lift_second_at(x, alpha, beta)
                            col = [p + c * q for p, q in zip(col, second, strict=True)]
                    columns.append(tuple(col))
                method_b = max(method_b, rank_of_vectors(columns, N + 1) - 1)
                if method_b == min(2 * n, N):
                    break

            if method_a != method_b:
                raise MethodDisagreementError(method_a, method_b)
            return TangentialReport(
                dim=method_a, defect=2 * n - method_a, method_a=method_a, method_b=method_b
            )

    def _conormal_frame(
        self, variety: ParamVariety, x: Sequence[Any], with_partials: bool
    ) -> list[tuple[Vector, list[Vector]]]:
        """Cramer vectors spanning the tangent hyperplanes at ``x``, with their partials.

        Column sets are the pivot columns of ``[phi_hat; d phi_hat]`` at ``x``
        plus one further column each, so every vector is nonzero there.
        """
        m = self._tangent_rows(variety, x)
        derivatives = [self._second_lift_rows(variety, x, beta) for beta in range(variety.n)] if with_partials else []
        column_sets = _pivot_column_sets(m, variety.N + 1)
        return cramer_kernel_jet(m, derivatives, column_sets) if column_sets else []

    def _conormal_rank_jet(self, variety: ParamVariety, x: Vector, lam: Vector) -> int:
        frame = self._conormal_frame(variety, x, with_partials=True)
        size = variety.N + 1
        columns = [value for value, _ in frame]
        for beta in range(variety.n):
            acc = [QQ.zero] * size
            for weight, (_, partials) in zip(lam, frame, strict=True):
                if weight:
                    acc = [s + weight * p for s, p in zip(acc, partials[beta], strict=True)]
            columns.append(tuple(acc))
        return rank_of_vectors(columns, size)

    def _conormal_rank_polynomial(self, variety: ParamVariety, x: Vector, lam: Vector) -> int:
        ring = variety.ring
        poly_rows = [
            [ring.one, *variety.chart],
            *([ring.zero, *row] for row in variety.partials),
        ]
        column_sets = _pivot_column_sets(self._tangent_rows(variety, x), variety.N + 1)
        vectors = cramer_kernel_vectors(poly_rows, ring, column_sets)
        size = variety.N + 1
        columns = [tuple(evaluate(p, x) for p in v) for v in vectors]
        for beta in range(variety.n):
            acc = [QQ.zero] * size
            for weight, v in zip(lam, vectors, strict=True):
                if weight:
                    acc = [s + weight * evaluate(partial(p, beta), x) for s, p in zip(acc, v, strict=True)]
            columns.append(tuple(acc))
        return rank_of_vectors(columns, size)

    def dual_dim(self, variety: ParamVariety, tower: JetTower | None = None) -> DualReport:
        """Dimension of the dual variety by the generic rank of |II| and by the conormal map.

        Raises:
            DualMismatchError: If the methods disagree on an expected-smooth variety
        """
        n, N = variety.n, variety.N
        tower = tower or self.jets.jet_tower(variety, order=2)
        with timed_computation("dual_dim", variety.name):
            rank = self.jets.generic_quadric_rank(tower.second_ff())
            method_a = N - 1 - (n - rank)

            symbolic = n <= CRAMER_SYMBOLIC_MAX_N
            sampler = self.config.sampler(stream=14)
            method_b = -1
            for _ in range(self.config.retries):
                x = self.jets.random_general_point(variety, sampler)
                lam = sampler.vector(N - n)
                if symbolic:
                    r = self._conormal_rank_polynomial(variety, x, lam)
                else:
                    r = self._conormal_rank_jet(variety, x, lam)
                method_b = max(method_b, r - 1)
                if method_b == N - 1:
                    break

            agree = method_a == method_b
            if not agree:
                if variety.expected_smooth:
                    raise DualMismatchError(variety.name, method_a, method_b)
                logger.warning(
                    "Dual dimension methods disagree on a singular variety",
                    extra={"variety": variety.name, "method_a": method_a, "method_b": method_b},
                )
            dim = method_b
            return DualReport(
                dim=dim,
                defect=N - 1 - dim,
                method_a=method_a,
                method_b=method_b,
                method_b_path="cramer" if symbolic else "cramer_jet",
                agree=agree,
            )

    def gauss_defect(self, variety: ParamVariety, tower: JetTower | None = None) -> GaussReport:
        """Gauss fiber dimension as ``dim singloc |II|``, cross-checked on the Plucker chart.

        Raises:
            GaussMismatchError: If the two computations disagree
        """
        tower = tower or self.jets.jet_tower(variety, order=2)
        with timed_computation("gauss_defect", variety.name):
            fiber = len(self.jets.singloc(tower.second_ff()))
            x = tower.point
            # The Gauss differential along x_beta pairs the conormal frame with d/dx_beta of the tangent rows.
            conormals = [value for value, _ in self._conormal_frame(variety, x, with_partials=False)]
            flats = []
            for beta in range(variety.n):
                dm = self._second_lift_rows(variety, x, beta)
                flats.append(tuple(dot(w, row) for w in conormals for row in dm))
            size = (variety.n + 1) * len(conormals)
            plucker_rank = rank_of_vectors(flats, size) if size else 0
            if fiber != variety.n - plucker_rank:
                raise GaussMismatchError(variety.name, fiber, plucker_rank)
            return GaussReport(defect=fiber, plucker_rank=plucker_rank)

    def dual_second_ff(
        self, variety: ParamVariety, point: Sequence[Any] | None = None
    ) -> QuadricSystem:
        """Second fundamental form of the dual variety at a generic tangent hyperplane ``h``.

        On the tangent space ``span(eps_lambda) + span(e_j)`` of the dual (``e_j``
        complementing ``ker q`` for ``q = h . II``) the system is ``Q_0 =
        [[0, 0], [0, q]]`` and, for each ``e_s`` in ``ker q``, ``Q_s =
        [[0, eps.II(e_s, e_j)], [., D^3(h . F_3)(e_s, e_j, e_k)]]``.

        Raises:
            InputValidationException: If the variety is not expected-smooth or is linear
            HyperplaneNotGenericError: If no sampled hyperplane reaches the generic rank
        """
        if not variety.expected_smooth:
            raise InputValidationException(
                "dual second fundamental form needs an expected-smooth variety", field="variety", value=variety.name
            )
        if variety.a < 1:
            raise InputValidationException("dual of a projective space is empty", field="variety", value=variety.name)
        tower = self.jets.jet_tower(variety, point, order=3)
        with timed_computation("dual_second_ff", variety.name):
            system = tower.second_ff()
            n, a = tower.n, tower.a
            generic = self.jets.generic_quadric_rank(system)
            sampler = self.config.sampler(stream=15)
            for _ in range(self.config.retries):
                h = sampler.nonzero_vector(a)
                q = system.combination(h)
                if rank_exact(q, n) == generic:
                    break
            else:
                raise HyperplaneNotGenericError(self.config.retries)

            kernel = kernel_basis(q, n)
            tangent = complement_basis(kernel, n)
            others = complement_basis([h], a)
            cubic = sum((f * c for c, f in zip(h, tower.form(3), strict=True) if c), tower.graph[0].ring.zero)
            r, size = len(tangent), a - 1 + len(tangent)

            def block(upper: list[list[Any]], lower: list[list[Any]]) -> tuple[tuple[Any, ...], ...]:
                m = [[QQ.zero] * size for _ in range(size)]
                for lam in range(a - 1):
                    for j in range(r):
                        m[lam][a - 1 + j] = m[a - 1 + j][lam] = upper[lam][j]
                for j in range(r):
                    for k in range(r):
                        m[a - 1 + j][a - 1 + k] = lower[j][k]
                return tuple(tuple(row) for row in m)

            zero_upper = [[QQ.zero] * r for _ in range(a - 1)]
            q0 = block(zero_upper, [[dot(ej, mat_vec(q, ek)) for ek in tangent] for ej in tangent])
            matrices = [q0]
            for es in kernel:
                ii_s = [system.bilinear(es, ej) for ej in tangent]
                upper = [[dot(eps, ii_s[j]) for j in range(r)] for eps in others]
                lower = [[multilinear_value(cubic, [es, ej, ek]) for ek in tangent] for ej in tangent]
                matrices.append(block(upper, lower))
            labels = ("q0", *(f"s{i + 1}" for i in range(len(kernel))))
            return QuadricSystem(size, tuple(matrices), labels)

    def dual_ff_rank_census(
        self, system: QuadricSystem, samples: int = 100, sampler: RationalSampler | None = None
    ) -> dict[int, int]:
        """Ranks of random nonzero combinations, counted."""
        sampler = sampler or self.config.sampler(stream=16)
        census: Counter[int] = Counter()
        for _ in range(samples):
            coeffs = sampler.nonzero_vector(len(system))
            census[rank_exact(system.combination(coeffs), system.n)] += 1
        return dict(sorted(census.items()))

    def dual_second_ff_report(self, variety: ParamVariety, samples: int = 100) -> DualSecondFFReport:
        system = self.dual_second_ff(variety)
        census = self.dual_ff_rank_census(system, samples)
        return DualSecondFFReport(
            variety=variety.name,
            quadric_count=len(system),
            size=system.n,
            projective_dim=system.span_dim() - 1,
            generic_rank=max(census, default=0),
            observed_ranks={str(k): v for k, v in census.items()},
            constant_rank=len(census) == 1,
            quadrics=[fmt_matrix(m) for m in system.matrices],
            seed=self.config.seed,
        )

    def checks(
        self,
        variety: ParamVariety,
        secant: SecantReport,
        sigma2: int,
        tangential: TangentialReport,
        dual: DualReport,
        refined_dim: int | None = None,
        third_order_dim: int = 0,
        ann_rank: int | None = None,
    ) -> DefectChecks:
        """Evaluate the classical inequalities on computed values.

        Args:
            variety: The variety
            secant: Secant report for the requested ``k``
            sigma2: Dimension of the secant variety of lines
            tangential: Tangential report
            dual: Dual report
            refined_dim: ``n + dim II_v(T) + [III^v(v,v,v) != 0]`` when computed
            third_order_dim: ``a_2``, the dimension of ``|FF^3|``
            ann_rank: Largest rank of a quadric annihilating an II-generic vector
        """
        n, N, a = variety.n, variety.N, variety.a
        smooth = variety.expected_smooth
        classical = smooth and is_nondegenerate(variety)
        expected = min(2 * n + 1, N)
        delta_star = dual.defect
        tau = tangential.dim

        flags = DefectChecks(
            linear_normality=(sigma2 == N or 2 * a >= n + 4) if classical else None,
            dual_bound=delta_star <= a - 1 if classical else None,
            landman_parity=(delta_star == 0 or (n - delta_star) % 2 == 0) if classical else None,
            superadditivity=(
                secant.dim <= n + (secant.k - 1) * (n + 1 - (2 * n + 1 - sigma2)) if smooth else None
            ),
            tau_sigma_sandwich=tau <= sigma2 <= tau + 1,
            tau_sigma_coincide=(tau == sigma2) if sigma2 < 2 * n + 1 else None,
            refined_secant=(refined_dim == sigma2) if smooth and refined_dim is not None else None,
            iii_nonzero_nondegenerate=(sigma2 == expected) if smooth and third_order_dim > 0 else None,
            rank_restriction=(
                ann_rank >= n - a + 2 if smooth and ann_rank is not None and sigma2 == N - 1 else None
            ),
            large_codim_nondefective=(sigma2 == expected) if smooth and a > comb(n + 1, 2) else None,
        )
        for name in flags.failed:
            logger.warning("Defect check failed", extra={"variety": variety.name, "check": name})
        return flags

    def report(self, variety: ParamVariety, k: int = 2) -> DefectReport:
        """Assemble the full defect report of ``variety``."""
        with timed_computation("defect_report", variety.name, k=k):
            tower = self.jets.jet_tower(variety, order=3)
            sigma_k = self.secant_dim(variety, k)
            sigma2 = sigma_k if k == 2 else self.secant_dim(variety, 2)

            refined_dim = None
            ann_rank = None
            if variety.expected_smooth:
                refined = self.jets.refined_cubic(variety, tower=tower)
                refined_dim = variety.n + refined.ii_v_dim + (1 if refined.iii_nonzero else 0)
                ann_rank = self.jets.generic_quadric_rank(refined.ann)

            secant = SecantReport(
                k=k,
                dim=sigma_k,
                defect=k * (variety.n + 1) - 1 - sigma_k,
                refined_dim=refined_dim if k == 2 else None,
            )
            tangential = self.tangential_dim(variety, tower)
            dual = self.dual_dim(variety, tower)
            gauss = self.gauss_defect(variety, tower)
            third = tower.filtration[2] if len(tower.filtration) > 2 else 0
            checks = self.checks(
                variety,
                secant,
                sigma2,
                tangential,
                dual,
                refined_dim=refined_dim,
                third_order_dim=third,
                ann_rank=ann_rank,
            )
            return DefectReport(
                variety=variety.name,
                n=variety.n,
                N=variety.N,
                secant=secant,
                tangential=tangential,
                dual=dual,
                gauss=gauss,
                checks=checks,
                seed=self.config.seed,
            )
