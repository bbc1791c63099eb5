"""Parametrized varieties and composition algebras."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from sympy.polys.domains import QQ

from ..exact.linalg import Vector
from ..exact.polys import MPoly, degree, evaluate, partial, poly_ring


@dataclass(frozen=True, eq=False)
class ParamVariety:
    """Affine chart ``x -> phi(x)`` of ``X^n`` in ``P^N`` with lift ``[1 : phi(x)]``.

    Attributes:
        name: Catalog spec string (``segre:2,2``) or a derived name
        n: Source dimension
        N: Ambient projective dimension
        chart: ``N`` polynomials in ``QQ[x1..xn]``
        expected_smooth: Whether general points are smooth points
        quadric_cut: Whether the variety is cut out by quadrics
    """

    name: str
    n: int
    N: int
    chart: tuple[MPoly, ...]
    expected_smooth: bool = True
    quadric_cut: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.chart) != self.N:
            raise ValueError(f"chart has {len(self.chart)} coordinates, expected N={self.N}")
        if self.N < self.n:
            raise ValueError("ambient dimension below source dimension")
        ring = poly_ring(self.n)
        if any(p.ring != ring for p in self.chart):
            raise ValueError("chart polynomials live in the wrong ring")

    @property
    def a(self) -> int:
        """Codimension ``N - n``."""
        return self.N - self.n

    @property
    def ring(self):
        return poly_ring(self.n)

    @property
    def max_degree(self) -> int:
        return max((degree(p) for p in self.chart), default=0)

    @cached_property
    def partials(self) -> tuple[tuple[MPoly, ...], ...]:
        """``partials[alpha][i] = d phi_i / d x_alpha``."""
        return tuple(tuple(partial(p, alpha) for p in self.chart) for alpha in range(self.n))

    @cached_property
    def _second(self) -> dict[tuple[int, int], tuple[MPoly, ...]]:
        out = {}
        for alpha in range(self.n):
            for beta in range(alpha, self.n):
                out[(alpha, beta)] = tuple(partial(p, beta) for p in self.partials[alpha])
        return out

    def lift_at(self, point: Sequence[Any]) -> Vector:
        return (QQ.one, *(evaluate(p, point) for p in self.chart))

    def lift_partials_at(self, point: Sequence[Any]) -> list[Vector]:
        return [(QQ.zero, *(evaluate(p, point) for p in row)) for row in self.partials]

    def lift_second_at(self, point: Sequence[Any], alpha: int, beta: int) -> Vector:
        key = (alpha, beta) if alpha <= beta else (beta, alpha)
        return (QQ.zero, *(evaluate(p, point) for p in self._second[key]))

    def jacobian_at(self, point: Sequence[Any]) -> list[list[Any]]:
        """``N x n`` matrix of first partials of the chart."""
        cols = [[evaluate(p, point) for p in row] for row in self.partials]
        return [[cols[alpha][i] for alpha in range(self.n)] for i in range(self.N)]


@dataclass(frozen=True)
class CompAlgebra:
    """Composition algebra of dimension 1, 2, 4 or 8 given by structure constants.

    ``table[i][j]`` is the coefficient vector of ``e_i e_j``; ``e_0`` is the unit.
    """

    dim: int
    table: tuple[tuple[tuple[int, ...], ...], ...]
    conj_signs: tuple[int, ...]

    def mul(self, u: Sequence[Any], v: Sequence[Any]) -> list[Any]:
        zero = u[0] - u[0]
        out = [zero] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                prod = ui * vj
                for k, c in enumerate(self.table[i][j]):
                    if c:
                        out[k] = out[k] + prod * c
        return out

    def conj(self, u: Sequence[Any]) -> list[Any]:
        return [x if s == 1 else -x for x, s in zip(u, self.conj_signs, strict=True)]

    def norm(self, u: Sequence[Any]) -> Any:
        """Scalar part of ``u * conj(u)``."""
        return self.mul(u, self.conj(u))[0]

    def associator(self, u: Sequence[Any], v: Sequence[Any], w: Sequence[Any]) -> list[Any]:
        left = self.mul(self.mul(u, v), w)
        right = self.mul(u, self.mul(v, w))
        return [x - y for x, y in zip(left, right, strict=True)]

    def unit(self, index: int) -> list[Any]:
        e = [QQ.zero] * self.dim
        e[index] = QQ.one
        return e
