"""Truncated multivariate power series.

A ``TruncSeries`` is a polynomial together with a truncation order ``K``;
all arithmetic discards terms of total degree above ``K``.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from ..exceptions import LabException
from .linalg import inverse
from .polys import MPoly, homogeneous_part, linear_coefficients, truncate


class SeriesError(LabException):
    """Base exception for truncated-series failures."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, error_code="series_error", details=details)


class NonInvertibleJetError(SeriesError):
    """Raised when a map's linear part is singular."""

    def __init__(self) -> None:
        super().__init__("non-invertible jet")


def graded_parts(p: MPoly, top: int) -> dict[int, MPoly]:
    parts: dict[int, dict] = {}
    for monom, coeff in p.iterterms():
        k = sum(monom)
        if k <= top:
            parts.setdefault(k, {})[monom] = coeff
    return {k: p.ring.from_dict(terms) for k, terms in parts.items()}


def trunc_mul(p: MPoly, q: MPoly, order: int) -> MPoly:
    """``p * q`` with every term of degree above ``order`` dropped."""
    if not p or not q:
        return p.ring.zero
    pp = graded_parts(p, order)
    qq = graded_parts(q, order)
    out = p.ring.zero
    for i, a in pp.items():
        for j, b in qq.items():
            if i + j <= order:
                out += a * b
    return out


def compose(p: MPoly, subs: Sequence[MPoly], order: int) -> MPoly:
    """``p(subs)`` truncated at ``order``; each substitute has zero constant term."""
    ring = subs[0].ring if subs else p.ring
    powers: list[list[MPoly]] = [[ring.one] for _ in subs]

    def power(i: int, e: int) -> MPoly:
        table = powers[i]
        while len(table) <= e:
            table.append(trunc_mul(table[-1], subs[i], order))
        return table[e]

    out = ring.zero
    for monom, coeff in p.iterterms():
        if sum(monom) > order:
            continue
        term = ring(coeff)
        for i, e in enumerate(monom):
            if e:
                term = trunc_mul(term, power(i, e), order)
                if not term:
                    break
        out += term
    return out


@dataclass(frozen=True)
class TruncSeries:
    """Polynomial part of a power series through total degree ``order``."""

    poly: MPoly
    order: int

    @classmethod
    def of(cls, p: MPoly, order: int) -> "TruncSeries":
        return cls(truncate(p, order), order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self.poly + other.poly, min(self.order, other.order))

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return TruncSeries(self.poly - other.poly, min(self.order, other.order))

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        k = min(self.order, other.order)
        return TruncSeries(trunc_mul(self.poly, other.poly, k), k)

    def scale(self, c: Any) -> "TruncSeries":
        return TruncSeries(self.poly * c, self.order)

    def part(self, k: int) -> MPoly:
        return homogeneous_part(self.poly, k)

    def compose(self, subs: Sequence["TruncSeries"]) -> "TruncSeries":
        k = min([self.order, *(s.order for s in subs)])
        return TruncSeries(compose(self.poly, [s.poly for s in subs], k), k)


def series_invert_map(
    f: Sequence[TruncSeries | MPoly], order: int
) -> tuple[TruncSeries, ...]:
    """Compositional inverse ``g`` with ``f(g(y)) = y`` modulo degree ``order + 1``.

    Fixed-point iteration ``g <- L^-1 (y - h(g))`` where ``f = L y + h``; each
    pass fixes one more order.
    """
    polys = [s.poly if isinstance(s, TruncSeries) else s for s in f]
    polys = [truncate(p, order) for p in polys]
    n = len(polys)
    if n == 0:
        return ()
    ring = polys[0].ring
    ys = ring.gens[:n]
    if any(p.coeff(1) for p in polys if p):
        raise SeriesError("series must have zero constant term")

    linear = [linear_coefficients(p, n) for p in polys]
    try:
        l_inv = inverse(linear)
    except ValueError:
        raise NonInvertibleJetError()

    higher = [p - sum((ys[j] * c for j, c in enumerate(row) if c), ring.zero) for p, row in zip(polys, linear, strict=True)]

    def apply_inverse(vec: list[MPoly]) -> list[MPoly]:
        out = []
        for row in l_inv:
            acc = ring.zero
            for c, v in zip(row, vec, strict=True):
                if c and v:
                    acc += v * c
            out.append(acc)
        return out

    g = apply_inverse(list(ys))
    if any(higher):
        for _ in range(order - 1):
            hg = [compose(h, g, order) for h in higher]
            g = apply_inverse([y - v for y, v in zip(ys, hg, strict=True)])
    return tuple(TruncSeries(truncate(p, order), order) for p in g)
