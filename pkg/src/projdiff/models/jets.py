"""Jet towers, quadric systems and refined cubic data."""

from collections.abc import Sequence
from dataclasses import dataclass
from math import factorial
from typing import Any

from sympy.polys.domains import QQ

from ..exact.linalg import EchelonBasis, Vector, dot, mat_vec, rank_exact
from ..exact.polys import MPoly, hessian, homogeneous_part, monomials

RatGrid = tuple[tuple[Any, ...], ...]


@dataclass(frozen=True)
class QuadricSystem:
    """Ordered symmetric bilinear forms on an ``n``-dimensional tangent space."""

    n: int
    matrices: tuple[RatGrid, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for m in self.matrices:
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise ValueError("quadric has the wrong size")
            if any(m[i][j] != m[j][i] for i in range(self.n) for j in range(i)):
                raise ValueError("quadric matrix is not symmetric")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"q{i}" for i in range(len(self.matrices))))

    @classmethod
    def from_forms(cls, forms: Sequence[MPoly], n: int, labels: Sequence[str] = ()) -> "QuadricSystem":
        return cls(n, tuple(hessian(q, n) for q in forms), tuple(labels))

    def __len__(self) -> int:
        return len(self.matrices)

    def combination(self, coeffs: Sequence[Any]) -> RatGrid:
        acc = [[QQ.zero] * self.n for _ in range(self.n)]
        for c, m in zip(coeffs, self.matrices, strict=True):
            if not c:
                continue
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    if x:
                        acc[i][j] += c * x
        return tuple(tuple(row) for row in acc)

    def contract(self, v: Sequence[Any]) -> list[Vector]:
        """Rows ``A_mu v``: the matrix whose column span is ``II_v(T)`` (transposed)."""
        return [mat_vec(m, v) for m in self.matrices]

    def bilinear(self, v: Sequence[Any], w: Sequence[Any]) -> Vector:
        """``(v^T A_mu w)_mu``."""
        return tuple(dot(v, mat_vec(m, w)) for m in self.matrices)

    def flattened(self) -> list[list[Any]]:
        return [[x for row in m for x in row] for m in self.matrices]

    def span_dim(self) -> int:
        if not self.matrices:
            return 0
        return rank_exact(self.flattened(), self.n * self.n)

    def basis(self) -> "QuadricSystem":
        """Independent members spanning the same system."""
        echelon = EchelonBasis(self.n * self.n)
        keep = [i for i, flat in enumerate(self.flattened()) if echelon.add(flat)]
        return QuadricSystem(self.n, tuple(self.matrices[i] for i in keep), tuple(self.labels[i] for i in keep))

    def is_zero(self) -> bool:
        return not any(x for m in self.matrices for row in m for x in row)


@dataclass(frozen=True, eq=False)
class JetTower:
    """Graph-frame Taylor data of a variety at a point.

    Near the point, in the adapted ambient frame, the variety is the graph
    ``w_mu = f_mu(u)`` with ``f_mu`` vanishing to order two. ``graph`` holds
    ``f_mu`` through total degree ``order``.

    Attributes:
        variety: Name of the variety
        n: Tangent dimension
        a: Codimension
        point: Source coordinates of the base point
        order: Truncation order ``K``
        frame: ``N`` rows of the ambient change of basis (tangent rows first)
        tangent_rows: Chart coordinates used as tangent coordinates
        graph: ``f_mu`` for each normal index
        filtration: ``(n, a_1, a_2, ...)`` osculating filtration dimensions
        fundamental_forms: ``k -> forms spanning FF^k`` for ``2 <= k <= order``
    """

    variety: str
    n: int
    a: int
    point: Vector
    order: int
    frame: tuple[Vector, ...]
    tangent_rows: tuple[int, ...]
    graph: tuple[MPoly, ...]
    filtration: tuple[int, ...]
    fundamental_forms: dict[int, tuple[MPoly, ...]]

    def form(self, k: int) -> tuple[MPoly, ...]:
        """Degree-``k`` homogeneous parts ``f_k^mu``."""
        if k > self.order:
            raise ValueError(f"jet tower computed only through order {self.order}")
        return tuple(homogeneous_part(f, k) for f in self.graph)

    def tensor(self, k: int, mu: int, indices: Sequence[int]) -> Any:
        """Fully symmetric coefficient ``d^k f^mu / dx_{i1} ... dx_{ik}`` at the point."""
        if len(indices) != k:
            raise ValueError("index count must equal the order")
        exps = [0] * self.n
        for i in indices:
            exps[i] += 1
        coeff = dict(self.form(k)[mu].iterterms()).get(tuple(exps), QQ.zero)
        weight = 1
        for e in exps:
            weight *= factorial(e)
        return coeff * weight

    def normal_vectors(self, k: int) -> list[Vector]:
        """Coefficient vectors in the normal space of all order-``k`` monomials."""
        parts = self.form(k)
        tables = [dict(p.iterterms()) for p in parts]
        return [tuple(t.get(m, QQ.zero) for t in tables) for m in monomials(self.n, k)]

    def second_ff(self) -> QuadricSystem:
        labels = tuple(f"n{mu + 1}" for mu in range(self.a))
        return QuadricSystem.from_forms(self.form(2), self.n, labels)


@dataclass(frozen=True)
class RefinedCubic:
    """Refined third fundamental form data at an II-generic vector ``v``.

    Attributes:
        v: The II-generic tangent vector
        ii_v_dim: ``dim II_v(T)``
        annihilators: Normal covectors ``h`` with ``h . II(v, T) = 0``
        ann: Independent quadrics of ``|II|`` annihilating ``v``
        ker_ii_v: Basis of ``{w : II(v, w) = 0}``
        sa: Basis of the singular locus of ``ann``
        iii_value: Coordinates of ``III^v(v, v, v)`` in ``N / II_v(T)``
    """

    v: Vector
    ii_v_dim: int
    annihilators: tuple[Vector, ...]
    ann: QuadricSystem
    ker_ii_v: tuple[Vector, ...]
    sa: tuple[Vector, ...]
    iii_value: Vector

    @property
    def iii_nonzero(self) -> bool:
        return any(self.iii_value)
