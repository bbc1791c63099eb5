"""Multivariate polynomials over QQ.

``MPoly`` is sympy's sparse ``PolyElement`` in a ring ``QQ[x1, ..., xn]``.
Rings are cached per variable count so charts built independently share
one ring and can be combined.
"""

from collections.abc import Sequence
from functools import cache
from itertools import combinations, combinations_with_replacement
from typing import Any

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from .linalg import Vector, to_rat

MPoly = PolyElement


@cache
def poly_ring(n: int) -> PolyRing:
    """``QQ[x1..xn]``; a zero-dimensional chart still gets one variable."""
    names = [f"x{i}" for i in range(1, max(n, 1) + 1)]
    return PolyRing(names, QQ)


def gens(n: int) -> tuple[MPoly, ...]:
    return poly_ring(n).gens[:n]


def embed(p: MPoly, n: int) -> MPoly:
    """View ``p`` inside ``QQ[x1..xn]`` (``n`` at least the current count)."""
    target = poly_ring(n)
    if p.ring == target:
        return p
    return p.set_ring(target)


def constant(n: int, value: Any) -> MPoly:
    return poly_ring(n)(to_rat(value))


def parse_poly(text: str, n: int) -> MPoly:
    """Parse ``"x1*x2 - 3/2*x3**2"`` into the ring of ``n`` variables."""
    ring = poly_ring(n)
    local = {str(s): Symbol(str(s)) for s in ring.symbols}
    expr = parse_expr(text, local_dict=local)
    return ring.from_expr(expr)


def degree(p: MPoly) -> int:
    return max((sum(m) for m in p.itermonoms()), default=0)


def order(p: MPoly) -> int | None:
    """Lowest total degree of a nonzero term (``None`` for the zero poly)."""
    return min((sum(m) for m in p.itermonoms()), default=None)


def evaluate(p: MPoly, point: Sequence[Any]) -> Any:
    total = QQ.zero
    for monom, coeff in p.iterterms():
        term = coeff
        for e, a in zip(monom, point, strict=False):
            if e:
                term *= a**e
        total += term
    return total


def homogeneous_part(p: MPoly, k: int) -> MPoly:
    return p.ring.from_dict({m: c for m, c in p.iterterms() if sum(m) == k})


def truncate(p: MPoly, k: int) -> MPoly:
    """Drop all terms of total degree above ``k``."""
    return p.ring.from_dict({m: c for m, c in p.iterterms() if sum(m) <= k})


def linear_coefficients(p: MPoly, n: int) -> Vector:
    coeffs = [QQ.zero] * n
    for monom, c in p.iterterms():
        if sum(monom) == 1:
            coeffs[monom.index(1)] = c
    return tuple(coeffs)


def shift(p: MPoly, point: Sequence[Any]) -> MPoly:
    """``p(point + x)``."""
    ring = p.ring
    subs = [(g, g + to_rat(a)) for g, a in zip(ring.gens, point, strict=False) if a]
    if not subs:
        return p
    return p.compose(subs)


def partial(p: MPoly, index: int) -> MPoly:
    return p.diff(p.ring.gens[index])


def directional(p: MPoly, v: Sequence[Any]) -> MPoly:
    """``sum_a v_a d/dx_a p``."""
    out = p.ring.zero
    for a, c in enumerate(v):
        if c:
            out += partial(p, a) * c
    return out


def hessian(q: MPoly, n: int) -> tuple[tuple[Any, ...], ...]:
    """Matrix of second partials of a quadratic form (constant entries)."""
    rows = []
    for a in range(n):
        da = partial(q, a)
        rows.append(tuple(evaluate(partial(da, b), [QQ.zero] * n) for b in range(n)))
    return tuple(rows)


def quadratic_form(matrix: Sequence[Sequence[Any]], n: int) -> MPoly:
    """``1/2 x^T S x`` so that ``hessian(quadratic_form(S)) == S``."""
    xs = gens(n)
    half = QQ(1, 2)
    out = poly_ring(n).zero
    for a in range(n):
        for b in range(n):
            c = matrix[a][b]
            if c:
                out += xs[a] * xs[b] * (c * half)
    return out


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree exactly ``k`` in ``n`` variables, graded lex."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def coefficient_vector(p: MPoly, basis: Sequence[tuple[int, ...]]) -> Vector:
    table = dict(p.iterterms())
    return tuple(table.get(m, QQ.zero) for m in basis)


def from_coefficients(
    coeffs: Sequence[Any], basis: Sequence[tuple[int, ...]], n: int
) -> MPoly:
    ring = poly_ring(n)
    return ring.from_dict({m: to_rat(c) for m, c in zip(basis, coeffs, strict=True) if c})


def multilinear_value(p: MPoly, vectors: Sequence[Sequence[Any]]) -> Any:
    """Full polarization ``D_{w1} ... D_{wk} p`` evaluated at the origin."""
    q = p
    for w in vectors:
        q = directional(q, w)
        if not q:
            return QQ.zero
    return evaluate(q, [QQ.zero] * len(p.ring.gens))


def poly_det(rows: Sequence[Sequence[MPoly]], ring: PolyRing) -> MPoly:
    """Determinant of a square polynomial matrix (Bareiss over the ring)."""
    k = len(rows)
    if k == 0:
        return ring.one
    domain = ring.to_domain()
    m = DomainMatrix([[ring(x) for x in row] for row in rows], (k, k), domain)
    return m.det()


def cramer_kernel_vectors(
    m: Sequence[Sequence[MPoly]],
    ring: PolyRing,
    column_sets: Sequence[Sequence[int]] | None = None,
) -> list[tuple[MPoly, ...]]:
    """Signed maximal-minor vectors annihilating a wide polynomial matrix.

    For each choice ``S`` of ``rows + 1`` columns the vector with entry
    ``(-1)^j det(m[:, S minus S_j])`` at column ``S_j`` (zero elsewhere) satisfies
    ``m v = 0`` identically: it expands a determinant with a repeated row.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    if ncols <= nrows:
        raise ValueError("cramer_kernel_vectors needs more columns than rows")
    sets = column_sets if column_sets is not None else list(combinations(range(ncols), nrows + 1))
    minors: dict[tuple[int, ...], MPoly] = {}
    out = []
    for cols in sets:
        cols = tuple(sorted(cols))
        v = [ring.zero] * ncols
        for j, c in enumerate(cols):
            rest = cols[:j] + cols[j + 1 :]
            if rest not in minors:
                minors[rest] = poly_det([[row[i] for i in rest] for row in m], ring)
            v[c] = minors[rest] if j % 2 == 0 else -minors[rest]
        out.append(tuple(v))
    return out


def pfaffians(entries: dict[tuple[int, int], MPoly], ring: PolyRing, size: int) -> dict[tuple[int, ...], MPoly]:
    """Sub-Pfaffians of a skew matrix for every even subset of ``range(size)``.

    ``entries[(i, j)]`` holds the entry above the diagonal. Expansion along
    the first index: ``Pf(S) = sum_j (-1)^(j+1) a_{s0 sj} Pf(S - {s0, sj})``.
    """
    memo: dict[tuple[int, ...], MPoly] = {(): ring.one}

    def pf(subset: tuple[int, ...]) -> MPoly:
        if subset in memo:
            return memo[subset]
        first = subset[0]
        total = ring.zero
        for j in range(1, len(subset)):
            a = entries[(first, subset[j])]
            if not a:
                continue
            rest = subset[1:j] + subset[j + 1 :]
            term = a * pf(rest)
            total = total + term if j % 2 == 1 else total - term
        memo[subset] = total
        return total

    for k in range(2, size + 1, 2):
        for subset in combinations(range(size), k):
            pf(subset)
    return memo


def rank_mod(rows: Sequence[Sequence[Poly]], modulus: Poly) -> int:
    """Rank of a matrix of univariate polynomials over ``QQ[t]/(modulus)``.

    ``modulus`` must be irreducible, so the quotient is the field generated by
    one of its roots and the result is the rank at that root.
    """
    work = [[entry.rem(modulus) for entry in row] for row in rows]
    ncols = len(work[0]) if work else 0
    rank = 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(work)) if not work[i][c].is_zero), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = work[rank][c].invert(modulus)
        for i in range(rank + 1, len(work)):
            if not work[i][c].is_zero:
                scale = (work[i][c] * inv).rem(modulus)
                work[i] = [(a - scale * b).rem(modulus) for a, b in zip(work[i], work[rank], strict=True)]
        rank += 1
    return rank
