"""Exact linear algebra over the rationals.

Matrices are sympy ``DomainMatrix`` objects over ``QQ`` (sparse format);
vectors are tuples of ``QQ`` elements. Ranks and kernels are computed with
fraction-free row reduction over ``ZZ`` after clearing row denominators.
"""

import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any

from sympy import Rational
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

Rat = QQ.dtype
MatRat = DomainMatrix
Vector = tuple[Any, ...]


def to_rat(value: Any) -> Any:
    """Convert ints, fractions, strings and sympy rationals to ``QQ``."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        frac = Fraction(value)
        return QQ(frac.numerator, frac.denominator)
    if isinstance(value, Rational):
        return QQ(int(value.p), int(value.q))
    return QQ.convert(value)


def matrix(rows: Sequence[Sequence[Any]], ncols: int | None = None) -> MatRat:
    """Sparse QQ matrix from a list of rows."""
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if nrows else 0
    data: dict[int, dict[int, Any]] = {}
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ValueError("ragged matrix rows")
        entries = {j: to_rat(x) for j, x in enumerate(row) if x}
        if entries:
            data[i] = entries
    return DomainMatrix(data, (nrows, ncols), QQ)


def as_matrix(m: MatRat | Sequence[Sequence[Any]], ncols: int | None = None) -> MatRat:
    if isinstance(m, DomainMatrix):
        return m.convert_to(QQ).to_sparse()
    return matrix(m, ncols)


def entries(m: MatRat) -> dict[int, dict[int, Any]]:
    """Nonzero entries as ``{row: {col: value}}``."""
    return {i: dict(row) for i, row in m.to_sparse().rep.items()}


def to_rows(m: MatRat) -> list[list[Any]]:
    rows, cols = m.shape
    dense = [[QQ.zero] * cols for _ in range(rows)]
    for i, row in entries(m).items():
        for j, v in row.items():
            dense[i][j] = v
    return dense


def identity(n: int) -> MatRat:
    return DomainMatrix({i: {i: QQ.one} for i in range(n)}, (n, n), QQ)


def _integer_rows(m: MatRat) -> DomainMatrix:
    """Scale every row by the lcm of its denominators and move to ZZ."""
    data: dict[int, dict[int, Any]] = {}
    for i, row in entries(m).items():
        lcm = math.lcm(*(int(QQ.denom(v)) for v in row.values()))
        data[i] = {
            j: ZZ(int(QQ.numer(v)) * (lcm // int(QQ.denom(v)))) for j, v in row.items()
        }
    return DomainMatrix(data, m.shape, ZZ)


def _rref_den(m: MatRat) -> tuple[dict[int, dict[int, Any]], Any, tuple[int, ...]]:
    reduced, den, pivots = _integer_rows(m).rref_den()
    return {i: dict(row) for i, row in reduced.to_sparse().rep.items()}, den, pivots


def rank_exact(m: MatRat | Sequence[Sequence[Any]], ncols: int | None = None) -> int:
    """Rank over QQ via fraction-free elimination."""
    m = as_matrix(m, ncols)
    rows, cols = m.shape
    if rows == 0 or cols == 0 or not entries(m):
        return 0
    _, _, pivots = _rref_den(m)
    return len(pivots)


def kernel_basis(
    m: MatRat | Sequence[Sequence[Any]], ncols: int | None = None
) -> list[Vector]:
    """Basis of the right kernel; ``len`` equals cols minus rank."""
    m = as_matrix(m, ncols)
    rows, cols = m.shape
    if cols == 0:
        return []
    if rows == 0 or not entries(m):
        return [unit_vector(cols, j) for j in range(cols)]
    reduced, den, pivots = _rref_den(m)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [QQ.zero] * cols
        v[free] = QQ(int(den))
        for i, p in enumerate(pivots):
            coeff = reduced.get(i, {}).get(free)
            if coeff:
                v[p] = -QQ(int(coeff))
        basis.append(tuple(v))
    return basis


def transpose_rows(rows: Sequence[Sequence[Any]], ncols: int) -> list[list[Any]]:
    return [[row[j] for row in rows] for j in range(ncols)]


def left_kernel_basis(rows: Sequence[Sequence[Any]], ncols: int) -> list[Vector]:
    """Vectors ``h`` with ``h . rows == 0`` (kernel of the transpose)."""
    if not rows:
        return []
    return kernel_basis(transpose_rows(rows, ncols), len(rows))


def rank_of_vectors(vectors: Sequence[Sequence[Any]], size: int) -> int:
    if not vectors:
        return 0
    return rank_exact(vectors, size)


def independent_subset(vectors: Sequence[Sequence[Any]], size: int) -> list[int]:
    """Indices of a maximal independent subset, earliest first."""
    basis = EchelonBasis(size)
    return [i for i, v in enumerate(vectors) if basis.add(v)]


def solve_linear(m: MatRat | Sequence[Sequence[Any]], b: Sequence[Any], ncols: int | None = None) -> Vector | None:
    """One exact solution of ``m x = b`` or ``None`` when inconsistent."""
    m = as_matrix(m, ncols)
    rows, cols = m.shape
    dense = to_rows(m)
    augmented = [[*dense[i], to_rat(b[i])] for i in range(rows)]
    if rows == 0:
        return tuple([QQ.zero] * cols)
    aug = matrix(augmented, cols + 1)
    if not entries(aug):
        return tuple([QQ.zero] * cols)
    reduced, den, pivots = _rref_den(aug)
    if cols in pivots:
        return None
    x = [QQ.zero] * cols
    for i, p in enumerate(pivots):
        rhs = reduced.get(i, {}).get(cols)
        if rhs:
            x[p] = QQ(int(rhs), int(den))
    return tuple(x)


def inverse(m: MatRat | Sequence[Sequence[Any]]) -> list[list[Any]]:
    """Exact inverse as dense rows; raises ``ValueError`` when singular."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    try:
        inv = m.to_dense().inv()
    except DMNonInvertibleMatrixError as e:
        raise ValueError("matrix is singular") from e
    return to_rows(inv)


def det(m: MatRat | Sequence[Sequence[Any]]) -> Any:
    m = as_matrix(m)
    if m.shape[0] == 0:
        return QQ.one
    return m.to_dense().det()


def mat_vec(rows: Sequence[Sequence[Any]], v: Sequence[Any]) -> Vector:
    return tuple(dot(row, v) for row in rows)


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> list[list[Any]]:
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [QQ.zero] * cols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def dot(u: Sequence[Any], v: Sequence[Any]) -> Any:
    total = QQ.zero
    for x, y in zip(u, v, strict=True):
        if x and y:
            total += x * y
    return total


def combine(coeffs: Sequence[Any], vectors: Sequence[Sequence[Any]], size: int) -> Vector:
    """``sum(c_i * v_i)``."""
    acc = [QQ.zero] * size
    for c, v in zip(coeffs, vectors, strict=True):
        if c:
            for j, x in enumerate(v):
                if x:
                    acc[j] += c * x
    return tuple(acc)


def unit_vector(size: int, index: int) -> Vector:
    v = [QQ.zero] * size
    v[index] = QQ.one
    return tuple(v)


def complement_basis(vectors: Sequence[Sequence[Any]], size: int) -> list[Vector]:
    """Coordinate vectors completing ``span(vectors)`` to the whole space."""
    basis = EchelonBasis(size)
    for v in vectors:
        basis.add(v)
    extra = []
    for j in range(size):
        e = unit_vector(size, j)
        if basis.add(e):
            extra.append(e)
    return extra


def coordinates(basis: Sequence[Sequence[Any]], v: Sequence[Any], size: int) -> Vector | None:
    """Coefficients expressing ``v`` in ``basis`` (``None`` if not in the span)."""
    if not basis:
        return () if not any(v) else None
    return solve_linear(transpose_rows(basis, size), v, len(basis))


def in_span(basis: Sequence[Sequence[Any]], v: Sequence[Any], size: int) -> bool:
    reducer = EchelonBasis(size)
    for b in basis:
        reducer.add(b)
    return not any(reducer.reduce(v))


class EchelonBasis:
    """Incrementally grown row-echelon basis of a subspace of QQ^size."""

    def __init__(self, size: int) -> None:
        self.size = size
        self._pivots: dict[int, list[Any]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: Iterable[Any]) -> list[Any]:
        """Remainder of ``v`` modulo the current span."""
        w = [to_rat(x) for x in v]
        for col, row in self._pivots.items():
            c = w[col]
            if c:
                for j, x in enumerate(row):
                    if x:
                        w[j] -= c * x
        return w

    def add(self, v: Iterable[Any]) -> bool:
        """Add ``v``; ``True`` when it enlarged the span."""
        w = self.reduce(v)
        col = next((j for j, x in enumerate(w) if x), None)
        if col is None:
            return False
        lead = w[col]
        w = [x / lead for x in w]
        for row in self._pivots.values():
            c = row[col]
            if c:
                for j, x in enumerate(w):
                    if x:
                        row[j] -= c * x
        self._pivots[col] = w
        return True

    def contains(self, v: Iterable[Any]) -> bool:
        return not any(self.reduce(v))


def cramer_kernel_jet(
    rows: Sequence[Sequence[Any]],
    row_derivatives: Sequence[Sequence[Sequence[Any]]],
    column_sets: Sequence[Sequence[int]],
) -> list[tuple[Vector, list[Vector]]]:
    """Values and first partials of signed maximal-minor kernel vectors at a point.

    ``rows`` is a wide matrix ``M(x)`` and ``row_derivatives[b]`` is
    ``dM/dx_b`` at the same point. A minor is multilinear in its rows, so its
    partial is the sum of the minors with one row replaced by its derivative.
    The result agrees with evaluating ``polys.cramer_kernel_vectors`` and
    their partials at ``x``.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if ncols <= nrows:
        raise ValueError("cramer_kernel_jet needs more columns than rows")
    minors: dict[tuple[int, ...], tuple[Any, list[Any]]] = {}

    def minor_jet(cols: tuple[int, ...]) -> tuple[Any, list[Any]]:
        if cols not in minors:
            sub = [[to_rat(row[c]) for c in cols] for row in rows]
            partials = []
            for dm in row_derivatives:
                total = QQ.zero
                for i in range(nrows):
                    replaced = [to_rat(dm[i][c]) for c in cols]
                    if any(replaced):
                        total += det([*sub[:i], replaced, *sub[i + 1 :]])
                partials.append(total)
            minors[cols] = (det(sub), partials)
        return minors[cols]

    out = []
    for chosen in column_sets:
        cols = tuple(sorted(chosen))
        value = [QQ.zero] * ncols
        partials = [[QQ.zero] * ncols for _ in row_derivatives]
        for j, c in enumerate(cols):
            v, dv = minor_jet(cols[:j] + cols[j + 1 :])
            sign = QQ.one if j % 2 == 0 else -QQ.one
            value[c] = sign * v
            for b, d in enumerate(dv):
                partials[b][c] = sign * d
        out.append((tuple(value), [tuple(p) for p in partials]))
    return out
