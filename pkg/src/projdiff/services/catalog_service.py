"""Catalog of parametrized varieties and composition algebras.

This module builds the homogeneous varieties of the laboratory (Veronese,
Segre, Grassmannian, spinor and Severi varieties), derived constructions
(graphs, tangent developables, cones, linear spaces, affine changes) and the
variety-spec mini-language used by the command line.
"""

import json
from collections.abc import Sequence
from itertools import combinations, product
from math import comb
from pathlib import Path
from typing import Any

from ..config import RunConfig
from ..exact.linalg import rank_exact, to_rat
from ..exact.polys import (
    MPoly,
    constant,
    embed,
    from_coefficients,
    gens,
    monomials,
    order,
    parse_poly,
    partial,
    pfaffians,
    poly_det,
    poly_ring,
)
from ..exact.sampling import RationalSampler
from ..exceptions import InputValidationException, LabException
from ..logging_config import get_logger, timed_computation
from ..models.variety import CompAlgebra, ParamVariety
from ..schemas.catalog_schemas import VarietyInfo

logger = get_logger("catalog_service")

JACOBIAN_CHECK_POINTS = 10


class CatalogServiceError(LabException):
    """Base exception for catalog construction errors."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, error_code="catalog_error", details=details)


class DegenerateImageError(CatalogServiceError):
    """Raised when a chart's image has smaller dimension than its source."""

    def __init__(self, name: str, rank: int, n: int) -> None:
        super().__init__("image dimension deficient", variety=name, rank=rank, n=n)


class InvalidVarietySpecError(InputValidationException):
    """Raised for malformed variety specs and constructor arguments."""

    def __init__(self, message: str, value: Any | None = None) -> None:
        super().__init__(message, field="variety", value=value)


def _cayley_dickson_mul(p: list[int], q: list[int]) -> list[int]:
    """``(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`` on integer vectors."""
    if len(p) == 1:
        return [p[0] * q[0]]
    h = len(p) // 2
    a, b, c, d = p[:h], p[h:], q[:h], q[h:]
    left = [x - y for x, y in zip(_cayley_dickson_mul(a, c), _cayley_dickson_mul(_cayley_dickson_conj(d), b), strict=True)]
    right = [x + y for x, y in zip(_cayley_dickson_mul(d, a), _cayley_dickson_mul(b, _cayley_dickson_conj(c)), strict=True)]
    return left + right


def _cayley_dickson_conj(p: list[int]) -> list[int]:
    if len(p) == 1:
        return list(p)
    h = len(p) // 2
    return _cayley_dickson_conj(p[:h]) + [-x for x in p[h:]]


class CatalogService:
    """Service constructing parametrized varieties.

    Every constructed chart passes the Jacobian rank check: its generic
    rank over sampled points equals the source dimension.
    """

    def __init__(self, config: RunConfig) -> None:
        """Initialize catalog service with run configuration.

        Args:
            config: Run configuration supplying the seeded sampler
        """
        self.config = config

    def _finish(self, variety: ParamVariety) -> ParamVariety:
        rank = self.check_jacobian_rank(variety, self.config.sampler(stream=90))
        if rank != variety.n:
            raise DegenerateImageError(variety.name, rank, variety.n)
        logger.debug(
            "Variety constructed",
            extra={"variety": variety.name, "n": variety.n, "N": variety.N},
        )
        return variety

    def check_jacobian_rank(
        self, variety: ParamVariety, sampler: RationalSampler, points: int = JACOBIAN_CHECK_POINTS
    ) -> int:
        """Largest rank of the chart Jacobian over random points."""
        if variety.n == 0:
            return 0
        best = 0
        for _ in range(points):
            point = sampler.vector(variety.n)
            best = max(best, rank_exact(variety.jacobian_at(point), variety.n))
            if best == variety.n:
                break
        return best

    def veronese(self, n: int, d: int) -> ParamVariety:
        """Dehomogenized ``v_d``: all nonconstant monomials of degree at most ``d``."""
        if n < 1 or d < 1:
            raise InvalidVarietySpecError("veronese needs n >= 1 and d >= 1", f"{n},{d}")
        ring = poly_ring(n)
        chart = tuple(
            ring.from_dict({m: 1}) for k in range(1, d + 1) for m in monomials(n, k)
        )
        variety = ParamVariety(f"veronese:{n},{d}", n, comb(n + d, d) - 1, chart, quadric_cut=True)
        return self._finish(variety)

    def segre(self, dims: Sequence[int]) -> ParamVariety:
        """Kronecker-product chart of ``P^d1 x ... x P^dr``."""
        if not dims or any(d < 1 for d in dims):
            raise InvalidVarietySpecError("segre needs positive factor dimensions", list(dims))
        n = sum(dims)
        xs = gens(n)
        factors: list[list[MPoly]] = []
        start = 0
        one = constant(n, 1)
        for d in dims:
            factors.append([one, *xs[start : start + d]])
            start += d
        chart = []
        for combo in product(*(range(d + 1) for d in dims)):
            if not any(combo):
                continue
            term = one
            for f, i in zip(factors, combo, strict=True):
                term = term * f[i]
            chart.append(term)
        N = 1
        for d in dims:
            N *= d + 1
        name = "segre:" + ",".join(str(d) for d in dims)
        return self._finish(ParamVariety(name, n, N - 1, tuple(chart), quadric_cut=True))

    def grassmannian(self, k: int, m: int) -> ParamVariety:
        """Plucker chart: ``k x k`` minors of ``[I_k | A]`` except the leading one."""
        if not 1 <= k < m:
            raise InvalidVarietySpecError("grassmannian needs 1 <= k < m", f"{k},{m}")
        w = m - k
        n = k * w
        ring = poly_ring(n)
        xs = gens(n)
        rows = []
        for i in range(k):
            ident = [ring.one if j == i else ring.zero for j in range(k)]
            rows.append(ident + [xs[i * w + j] for j in range(w)])
        chart = []
        for cols in combinations(range(m), k):
            if cols == tuple(range(k)):
                continue
            chart.append(poly_det([[row[c] for c in cols] for row in rows], ring))
        return self._finish(
            ParamVariety(f"grassmannian:{k},{m}", n, comb(m, k) - 1, tuple(chart), quadric_cut=True)
        )

    def spinor(self, m: int) -> ParamVariety:
        """Sub-Pfaffians of a generic skew ``m x m`` matrix over even subsets."""
        if m < 3:
            raise InvalidVarietySpecError("spinor needs m >= 3", m)
        n = comb(m, 2)
        ring = poly_ring(n)
        xs = gens(n)
        entries = {pair: xs[i] for i, pair in enumerate(combinations(range(m), 2))}
        memo = pfaffians(entries, ring, m)
        chart = tuple(
            memo[subset]
            for size in range(2, m + 1, 2)
            for subset in combinations(range(m), size)
        )
        return self._finish(
            ParamVariety(f"spinor:{m}", n, 2 ** (m - 1) - 1, chart, quadric_cut=True)
        )

    def comp_algebra(self, d: int) -> CompAlgebra:
        """Cayley-Dickson algebra of dimension ``d`` in {1, 2, 4, 8}."""
        if d not in (1, 2, 4, 8):
            raise InvalidVarietySpecError("composition algebras have dimension 1, 2, 4 or 8", d)
        units = [[1 if j == i else 0 for j in range(d)] for i in range(d)]
        table = tuple(
            tuple(tuple(_cayley_dickson_mul(units[i], units[j])) for j in range(d))
            for i in range(d)
        )
        signs = tuple(1 if i == 0 else -1 for i in range(d))
        return CompAlgebra(d, table, signs)

    def severi(self, d: int) -> ParamVariety:
        """Chart ``(u1, u2, conj(u2) u1, N(u1), N(u2))`` over the algebra of dimension ``d``."""
        algebra = self.comp_algebra(d)
        n = 2 * d
        xs = list(gens(n))
        u1, u2 = xs[:d], xs[d:]
        u3 = algebra.mul(algebra.conj(u2), u1)
        chart = (*u1, *u2, *u3, algebra.norm(u1), algebra.norm(u2))
        variety = ParamVariety(
            f"severi:{d}", n, 3 * d + 2, tuple(chart), quadric_cut=True, metadata={"algebra": algebra}
        )
        return self._finish(variety)

    def graph_variety(self, n: int, polys: Sequence[MPoly | str], name: str | None = None) -> ParamVariety:
        """Graph ``x -> (x, f(x))`` of polynomials vanishing to order two."""
        if n < 1:
            raise InvalidVarietySpecError("graph needs n >= 1", n)
        fs = [parse_poly(p, n) if isinstance(p, str) else embed(p, n) for p in polys]
        for f in fs:
            low = order(f)
            if low is not None and low < 2:
                raise InvalidVarietySpecError("graph polynomials need zero constant and linear terms", str(f))
        chart = (*gens(n), *fs)
        label = name or f"graph:{n};" + ";".join(str(f) for f in fs)
        return self._finish(ParamVariety(label, n, n + len(fs), chart))

    def random_graph(
        self, n: int, count: int, degree: int = 2, sampler: RationalSampler | None = None
    ) -> ParamVariety:
        """Graph of ``count`` random polynomials with terms of degrees ``2..degree``."""
        if degree < 2 or count < 1:
            raise InvalidVarietySpecError("random graph needs degree >= 2 and count >= 1", f"{n},{count},{degree}")
        sampler = sampler or self.config.sampler(stream=92)
        basis = [m for d in range(2, degree + 1) for m in monomials(n, d)]
        polys = [from_coefficients(sampler.vector(len(basis)), basis, n) for _ in range(count)]
        return self.graph_variety(n, polys, name=f"randgraph:{n},{count},{degree}")

    def tangent_developable(self, curve: ParamVariety) -> ParamVariety:
        """Surface ``(t, s) -> c(t) + s c'(t)`` swept by tangent lines of a curve."""
        if curve.n != 1:
            raise InvalidVarietySpecError("tangent developable needs a curve", curve.name)
        s = gens(2)[1]
        chart = tuple(embed(c, 2) + s * embed(partial(c, 0), 2) for c in curve.chart)
        variety = ParamVariety(f"tandev:{curve.name}", 2, curve.N, chart, expected_smooth=False)
        return self._finish(variety)

    def cone_over(self, variety: ParamVariety) -> ParamVariety:
        """Cone with vertex a new ambient coordinate point."""
        n = variety.n + 1
        chart = (*(embed(c, n) for c in variety.chart), gens(n)[-1])
        cone = ParamVariety(
            f"cone:{variety.name}",
            n,
            variety.N + 1,
            chart,
            expected_smooth=False,
            quadric_cut=variety.quadric_cut,
        )
        return self._finish(cone)

    def linear_space(
        self,
        N: int,
        base: Sequence[Any] | None = None,
        directions: Sequence[Sequence[Any]] = (),
        name: str | None = None,
    ) -> ParamVariety:
        """Affine plane ``base + sum t_i d_i`` in the chart of ``P^N``; ``n = 0`` is a point."""
        n = len(directions)
        base = [to_rat(b) for b in (base if base is not None else [0] * N)]
        if len(base) != N or any(len(d) != N for d in directions):
            raise InvalidVarietySpecError("linear space vectors must have length N", N)
        if rank_exact([list(d) for d in directions], N) != n:
            raise InvalidVarietySpecError("linear space directions are dependent", n)
        ts = gens(n)
        chart = []
        for i in range(N):
            p = constant(n, base[i])
            for t, d in zip(ts, directions, strict=True):
                c = to_rat(d[i])
                if c:
                    p += t * c
            chart.append(p)
        label = name or f"linear:{n},{N}"
        return self._finish(ParamVariety(label, n, N, tuple(chart), quadric_cut=True))

    def affine_transform(
        self, variety: ParamVariety, matrix: Sequence[Sequence[Any]], shift: Sequence[Any] | None = None
    ) -> ParamVariety:
        """Chart ``t + A phi`` for an invertible ``N x N`` matrix ``A``."""
        N = variety.N
        if len(matrix) != N or rank_exact(matrix, N) != N:
            raise InvalidVarietySpecError("affine transform needs an invertible N x N matrix", N)
        shift = [to_rat(c) for c in (shift if shift is not None else [0] * N)]
        chart = []
        for i in range(N):
            p = constant(variety.n, shift[i])
            for j, c in enumerate(matrix[i]):
                c = to_rat(c)
                if c:
                    p += variety.chart[j] * c
            chart.append(p)
        return self._finish(
            ParamVariety(
                f"affine:{variety.name}",
                variety.n,
                N,
                tuple(chart),
                expected_smooth=variety.expected_smooth,
                quadric_cut=variety.quadric_cut,
            )
        )

    def parse_spec(self, text: str) -> ParamVariety:
        """Build a variety from the mini-language (``segre:2,2``, ``cone:veronese:1,2``, ...)."""
        with timed_computation("parse_spec", text):
            return self._parse(text.strip())

    def _parse(self, text: str) -> ParamVariety:
        kind, sep, rest = text.partition(":")
        if not sep:
            raise InvalidVarietySpecError("variety spec must look like kind:args", text)
        if kind == "tandev":
            return self.tangent_developable(self._parse(rest))
        if kind == "cone":
            return self.cone_over(self._parse(rest))
        if kind == "graph":
            return self._parse_graph(rest)
        args = self._int_args(rest, text)
        if kind == "veronese" and len(args) == 2:
            return self.veronese(*args)
        if kind == "segre":
            return self.segre(args)
        if kind == "grassmannian" and len(args) == 2:
            return self.grassmannian(*args)
        if kind == "spinor" and len(args) == 1:
            return self.spinor(args[0])
        if kind == "severi" and len(args) == 1:
            return self.severi(args[0])
        if kind == "randgraph" and len(args) in (2, 3):
            return self.random_graph(*args)
        if kind == "linear" and len(args) == 2:
            n, N = args
            if not 0 <= n <= N:
                raise InvalidVarietySpecError("linear needs 0 <= n <= N", text)
            dirs = [[1 if j == i else 0 for j in range(N)] for i in range(n)]
            return self.linear_space(N, None, dirs)
        raise InvalidVarietySpecError(f"unknown variety spec '{text}'", text)

    @staticmethod
    def _int_args(rest: str, text: str) -> list[int]:
        try:
            return [int(part) for part in rest.split(",") if part.strip()]
        except ValueError as e:
            raise InvalidVarietySpecError(f"non-integer argument in '{text}'", text) from e

    def _parse_graph(self, rest: str) -> ParamVariety:
        """``graph:<file.json>`` or inline ``graph:n;poly;poly``."""
        path = Path(rest)
        if rest.endswith(".json"):
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
                n = int(data["n"])
                polys = [str(p) for p in data["polys"]]
            except (OSError, ValueError, KeyError, TypeError) as e:
                raise InvalidVarietySpecError(f"cannot read graph file: {e}", rest) from e
        else:
            head, *polys = rest.split(";")
            try:
                n = int(head)
            except ValueError as e:
                raise InvalidVarietySpecError("inline graph spec must start with n", rest) from e
        try:
            return self.graph_variety(n, polys, name=f"graph:{rest}")
        except LabException:
            raise
        except Exception as e:
            raise InvalidVarietySpecError(f"cannot parse graph polynomial: {e}", rest) from e

    def info(self, variety: ParamVariety) -> VarietyInfo:
        """Summary of ``variety`` including its measured Jacobian rank."""
        rank = self.check_jacobian_rank(variety, self.config.sampler(stream=91))
        return VarietyInfo(
            variety=variety.name,
            n=variety.n,
            N=variety.N,
            a=variety.a,
            max_degree=variety.max_degree,
            expected_smooth=variety.expected_smooth,
            quadric_cut=variety.quadric_cut,
            jacobian_rank=rank,
            seed=self.config.seed,
        )


def is_nondegenerate(variety: ParamVariety) -> bool:
    """Whether ``1, phi_1, ..., phi_N`` are linearly independent (X spans P^N)."""
    polys = [constant(variety.n, 1), *variety.chart]
    support = sorted({m for p in polys for m in p.itermonoms()})
    rows = [[dict(p.iterterms()).get(m, 0) for m in support] for p in polys]
    return rank_exact(rows, len(support)) == len(polys)

