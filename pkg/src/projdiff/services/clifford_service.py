"""Clifford algebras on the exterior algebra and Clifford modules from |II|.

The product is ``x o alpha = x ^ alpha + i_x alpha`` for vectors ``x``,
extended to blades through ``e_S = e_s1 o e_rest - i_{e_s1} e_rest``. With
this orientation ``x o x = Q(x, x)``.
"""

from collections.abc import Sequence
from itertools import product
from typing import Any

from sympy.polys.domains import QQ

from ..config import RunConfig
from ..exact.linalg import (
    EchelonBasis,
    Vector,
    complement_basis,
    coordinates,
    dot,
    in_span,
    kernel_basis,
    left_kernel_basis,
    mat_vec,
    rank_of_vectors,
)
from ..exact.sampling import RationalSampler
from ..exceptions import ConsistencyException, InputValidationException, LabException
from ..logging_config import get_logger, timed_computation
from ..models.clifford import Blade, CliffordElem
from ..models.jets import QuadricSystem, RatGrid
from ..models.variety import ParamVariety
from ..schemas.clifford_schemas import CliffordCheckReport, CliffordModuleData
from ..schemas.common import fmt_matrix, fmt_rat, fmt_vector
from .jet_service import JetService

logger = get_logger("clifford_service")

FORMS = ("hyperbolic", "diagonal")


class CliffordServiceError(LabException):
    """Base exception for Clifford computations."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, error_code="clifford_error", details=details)


class NotInPinError(CliffordServiceError):
    def __init__(self, grades: Sequence[int]) -> None:
        super().__init__("not in Pin", grades=sorted(grades))


class NoCriticalDefectError(CliffordServiceError):
    def __init__(self, ann_dim: int) -> None:
        super().__init__("no critical tangential defect", ann_dim=ann_dim)


class CliffordRelationError(ConsistencyException):
    def __init__(self, i: int, j: int, entry: tuple[int, int], expected: Any, found: Any) -> None:
        super().__init__(
            "Clifford relation violated",
            pair=[i, j],
            entry=list(entry),
            expected=fmt_rat(expected),
            found=fmt_rat(found),
        )


class QuadricNotSingleValuedError(ConsistencyException):
    def __init__(self, i: int, j: int) -> None:
        super().__init__("Q_v not single-valued", pair=[i, j])


def quadratic_form(m: int, form: str = "hyperbolic") -> RatGrid:
    """``[[0, I], [I, 0]]`` (plus ``1`` in the last slot for odd ``m``) or the identity."""
    if form not in FORMS:
        raise InputValidationException(f"unknown quadratic form '{form}'", field="form", value=form)
    q = [[QQ.zero] * m for _ in range(m)]
    if form == "diagonal":
        for i in range(m):
            q[i][i] = QQ.one
    else:
        h = m // 2
        for i in range(h):
            q[i][h + i] = q[h + i][i] = QQ.one
        if m % 2:
            q[m - 1][m - 1] = QQ.one
    return tuple(tuple(row) for row in q)


class CliffordService:
    """Service for Clifford products and Clifford modules."""

    def __init__(self, config: RunConfig, jets: JetService | None = None) -> None:
        self.config = config
        self.jets = jets or JetService(config)
        self._blade_cache: dict[tuple[RatGrid, Blade, Blade], dict[Blade, Any]] = {}

    @staticmethod
    def _check_form(q: RatGrid, m: int) -> None:
        if len(q) != m or any(len(row) != m for row in q):
            raise InputValidationException("quadratic form has the wrong size", field="form", value=len(q))
        if any(q[i][j] != q[j][i] for i in range(m) for j in range(i)):
            raise InputValidationException("quadratic form is not symmetric", field="form")

    @staticmethod
    def _vector_left(i: int, terms: dict[Blade, Any], q: RatGrid) -> dict[Blade, Any]:
        """``e_i ^ alpha + i_{e_i} alpha`` on a term dictionary."""
        out: dict[Blade, Any] = {}
        for blade, c in terms.items():
            if i not in blade:
                pos = sum(1 for t in blade if t < i)
                target = blade[:pos] + (i,) + blade[pos:]
                out[target] = out.get(target, QQ.zero) + (-c if pos % 2 else c)
            for j, t in enumerate(blade):
                if q[i][t]:
                    target = blade[:j] + blade[j + 1 :]
                    value = q[i][t] * c
                    out[target] = out.get(target, QQ.zero) + (-value if j % 2 else value)
        return {b: c for b, c in out.items() if c}

    def _blade_mul(self, s: Blade, t: Blade, q: RatGrid) -> dict[Blade, Any]:
        key = (q, s, t)
        if key in self._blade_cache:
            return self._blade_cache[key]
        if not s:
            result = {t: QQ.one}
        else:
            first, rest = s[0], s[1:]
            result = self._vector_left(first, self._blade_mul(rest, t, q), q)
            for j, r in enumerate(rest):
                if not q[first][r]:
                    continue
                coeff = q[first][r] if j % 2 == 0 else -q[first][r]
                for blade, c in self._blade_mul(rest[:j] + rest[j + 1 :], t, q).items():
                    result[blade] = result.get(blade, QQ.zero) - coeff * c
            result = {b: c for b, c in result.items() if c}
        self._blade_cache[key] = result
        return result

    def clifford_mul(self, a: CliffordElem, b: CliffordElem, q: RatGrid) -> CliffordElem:
        """Clifford product of two elements of ``Lambda^* V`` for the form ``q``."""
        if a.m != b.m:
            raise InputValidationException("Clifford factors live over different spaces", field="m", value=f"{a.m},{b.m}")
        self._check_form(q, a.m)
        out: dict[Blade, Any] = {}
        for s, x in a.terms.items():
            for t, y in b.terms.items():
                for blade, c in self._blade_mul(s, t, q).items():
                    out[blade] = out.get(blade, QQ.zero) + x * y * c
        return CliffordElem(a.m, out)

    @staticmethod
    def reverse(a: CliffordElem) -> CliffordElem:
        """Conjugation ``(u_1 o ... o u_r)~ = (-1)^r u_r o ... o u_1``, i.e. ``(-1)^(r(r+1)/2)`` on ``Lambda^r``."""
        return CliffordElem(
            a.m, {b: (-c if (len(b) * (len(b) + 1) // 2) % 2 else c) for b, c in a.terms.items()}
        )

    def rho(self, g: CliffordElem, v: Sequence[Any], q: RatGrid) -> Vector:
        """``g v g~`` divided by the scalar ``g g~``.

        Raises:
            NotInPinError: If ``g g~`` is not a nonzero scalar or the image leaves ``V``
        """
        g_rev = self.reverse(g)
        norm = self.clifford_mul(g, g_rev, q)
        if norm.grades() != {0}:
            raise NotInPinError(sorted(norm.grades()))
        image = self.clifford_mul(self.clifford_mul(g, CliffordElem.vector(v), q), g_rev, q)
        if image and image.grades() != {1}:
            raise NotInPinError(sorted(image.grades()))
        scale = norm.scalar_part()
        return tuple(x / scale for x in image.vector_part())

    def spin_action(
        self, v: Sequence[Any], alpha: CliffordElem, q: RatGrid, null_indices: Sequence[int] | None = None
    ) -> CliffordElem:
        """Projection of ``v o alpha`` onto ``Lambda^odd U`` for the coordinate null subspace ``U``.

        Raises:
            InputValidationException: If ``U`` is not null or ``alpha`` leaves ``Lambda^even U``
        """
        m = alpha.m
        u = tuple(null_indices) if null_indices is not None else tuple(range(m // 2))
        if any(q[i][j] for i in u for j in u):
            raise InputValidationException("subspace U is not null", field="null_indices", value=list(u))
        if not alpha.is_even or any(not set(b) <= set(u) for b in alpha.terms):
            raise InputValidationException("spinor must be an even element over U", field="alpha")
        full = self.clifford_mul(CliffordElem.vector(v), alpha, q)
        return CliffordElem(m, {b: c for b, c in full.terms.items() if len(b) % 2 and set(b) <= set(u)})

    def _random_element(self, sampler: RationalSampler, m: int, terms: int = 4) -> CliffordElem:
        out = {}
        for _ in range(terms):
            k = sampler.integer(0, m)
            out[sampler.subset(m, k)] = sampler.nonzero_rat()
        return CliffordElem(m, out)

    def _random_nonnull_vector(self, sampler: RationalSampler, q: RatGrid) -> Vector:
        while True:
            u = sampler.nonzero_vector(len(q))
            if dot(u, mat_vec(q, u)):
                return u

    def check(self, m: int, form: str = "hyperbolic", trials: int = 100, rho_trials: int = 50) -> CliffordCheckReport:
        """Relation, associativity, parity and orthogonality suite for ``Cl(Q^m, Q)``."""
        if m < 1:
            raise InputValidationException("dimension must be positive", field="m", value=m)
        q = quadratic_form(m, form)
        sampler = self.config.sampler(stream=30)
        with timed_computation("clifford_check", f"{form}:{m}", trials=trials):
            relation = True
            for i, j in product(range(m), repeat=2):
                ei, ej = CliffordElem.blade(m, (i,)), CliffordElem.blade(m, (j,))
                anti = self.clifford_mul(ei, ej, q) + self.clifford_mul(ej, ei, q)
                if anti != CliffordElem.scalar(m, 2 * q[i][j]):
                    logger.warning("Clifford relation failed", extra={"i": i, "j": j, "m": m})
                    relation = False

            associative = True
            parity = True
            for _ in range(trials):
                a, b, c = (self._random_element(sampler, m) for _ in range(3))
                left = self.clifford_mul(self.clifford_mul(a, b, q), c, q)
                right = self.clifford_mul(a, self.clifford_mul(b, c, q), q)
                associative &= left == right
                ea, eb = (CliffordElem(m, {bl: x for bl, x in e.terms.items() if len(bl) % 2 == 0}) for e in (a, b))
                parity &= self.clifford_mul(ea, eb, q).is_even

            preserves = True
            for _ in range(rho_trials):
                factors = 2 * sampler.integer(1, 2)
                g = CliffordElem.scalar(m)
                for _ in range(factors):
                    g = self.clifford_mul(g, CliffordElem.vector(self._random_nonnull_vector(sampler, q)), q)
                v = sampler.vector(m)
                w = self.rho(g, v, q)
                preserves &= dot(w, mat_vec(q, w)) == dot(v, mat_vec(q, v))

            return CliffordCheckReport(
                m=m,
                form=form,
                relation_pairs=m * m,
                relation_holds=relation,
                associativity_trials=trials,
                associativity_holds=associative,
                parity_holds=parity,
                rho_trials=rho_trials,
                rho_preserves_q=preserves,
                seed=self.config.seed,
            )

    def clifford_module_from_ii(
        self,
        system: QuadricSystem,
        v: Sequence[Any] | None = None,
        variety: str | None = None,
    ) -> CliffordModuleData:
        """Clifford module structure on ``T / P_sing`` over ``(ker II_v, Q_v)``.

        Tangent frame: ``v``, a basis ``e_eps`` of ``ker II_v``, vectors
        ``e_s`` completing ``P_sing`` and ``e_j`` completing ``T``. Normal
        frame: ``II(v, v)``, ``II(v, e_s)``, ``II(v, e_j)`` and a vector on
        which the annihilating covector ``h`` is one. ``Q_v(eps, delta)`` is
        the ``II(v, v)`` coordinate of ``II(eps, delta)``; ``M(eps)[j][k]`` is
        the ``II(v, e_j)`` coordinate of ``II(eps, e_k)``.

        Raises:
            NoCriticalDefectError: If ``Ann(v)`` is not one-dimensional
            CliffordRelationError: If ``M(eps) M(delta) + M(delta) M(eps) != -2 Q_v(eps, delta) I``
            QuadricNotSingleValuedError: If ``II(ker, ker)`` leaves ``span II(v, v)``
        """
        n, a = system.n, len(system)
        if v is None:
            v, _ = self.jets.ii_generic_vector(system, self.config.sampler(stream=31))
        v = tuple(v)
        with timed_computation("clifford_module", variety or "system"):
            contract = system.contract(v)
            annihilators = left_kernel_basis(contract, n)
            if len(annihilators) != 1:
                raise NoCriticalDefectError(len(annihilators))
            h = annihilators[0]
            p = system.combination(h)
            p_sing = kernel_basis(p, n)
            ker = kernel_basis(contract, n)
            kernel_in_p_sing = all(in_span(p_sing, w, n) for w in ker)
            if not kernel_in_p_sing:
                raise ConsistencyException("ker II_v is not contained in the singular locus of Ann(v)")

            echelon = EchelonBasis(n)
            for w in (v, *ker):
                echelon.add(w)
            e_s = [w for w in p_sing if echelon.add(w)]
            sing_frame = [v, *ker, *e_s]
            e_j = complement_basis(sing_frame, n)

            normal = [system.bilinear(v, v), *(system.bilinear(v, w) for w in e_s), *(system.bilinear(v, w) for w in e_j)]
            if rank_of_vectors(normal, a) != len(normal):
                raise ConsistencyException("II_v(T) frame is not independent", size=len(normal))
            n_h = next(w for w in complement_basis(normal, a) if dot(h, w))
            frame = [*normal, n_h]
            j0 = 1 + len(e_s)

            def coords(x: Vector, y: Vector) -> Vector:
                c = coordinates(frame, system.bilinear(x, y), a)
                if c is None:
                    raise ConsistencyException("normal frame does not span")
                return c

            bertini = all(
                not any(coords(x, y)[j0:]) for x in sing_frame for y in sing_frame
            )
            if not bertini:
                raise ConsistencyException("II(P_sing, P_sing) leaves II(v, P_sing)")

            q_v = [[QQ.zero] * len(ker) for _ in ker]
            for i, x in enumerate(ker):
                for k, y in enumerate(ker):
                    c = coords(x, y)
                    if any(c[1:]):
                        raise QuadricNotSingleValuedError(i, k)
                    q_v[i][k] = c[0]

            maps = [[[coords(eps, ek)[j0 + j] for ek in e_j] for j in range(len(e_j))] for eps in ker]
            self._check_relation(maps, q_v)

            sa = self.jets.singloc(QuadricSystem(n, (p,)))
            return CliffordModuleData(
                variety=variety,
                v=fmt_vector(v),
                ann_dim=1,
                p_sing_dim=len(p_sing),
                ker_ii_v_dim=len(ker),
                sa_dim=len(sa),
                q_v=fmt_matrix(q_v),
                module_maps=[fmt_matrix(mat) for mat in maps],
                relation_holds=True,
                kernel_in_p_sing=kernel_in_p_sing,
                bertini_inclusion=bertini,
                single_quadric=True,
                seed=self.config.seed,
            )

    @staticmethod
    def _check_relation(maps: list[list[list[Any]]], q_v: list[list[Any]]) -> None:
        """``M(eps) M(delta) + M(delta) M(eps) = -2 Q_v(eps, delta) I`` with ``II(v, v)`` as the unit normal."""
        size = len(maps[0]) if maps else 0

        def anti(x: list[list[Any]], y: list[list[Any]]) -> list[list[Any]]:
            return [
                [sum((x[i][k] * y[k][j] + y[i][k] * x[k][j] for k in range(size)), QQ.zero) for j in range(size)]
                for i in range(size)
            ]

        for i, x in enumerate(maps):
            for k in range(i, len(maps)):
                ac = anti(x, maps[k])
                target = -2 * q_v[i][k]
                for r in range(size):
                    for c in range(size):
                        expected = target if r == c else QQ.zero
                        if ac[r][c] != expected:
                            raise CliffordRelationError(i, k, (r, c), expected, ac[r][c])

    def module_for_variety(self, variety: ParamVariety, points: int = 1) -> list[CliffordModuleData]:
        """Run the construction on ``|II|`` at ``points`` random general points."""
        sampler = self.config.sampler(stream=32)
        out = []
        for _ in range(points):
            point = self.jets.random_general_point(variety, sampler)
            tower = self.jets.jet_tower(variety, point, order=2)
            v, _ = self.jets.ii_generic_vector(tower.second_ff(), sampler)
            out.append(self.clifford_module_from_ii(tower.second_ff(), v, variety.name))
        return out
