"""Linear spaces of matrices."""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Literal

from sympy.polys.domains import QQ

from ..exact.linalg import rank_exact

Symmetry = Literal["general", "symmetric", "skew"]
RatGrid = tuple[tuple[Any, ...], ...]


@dataclass(frozen=True)
class MatrixSpace:
    """Span of ``basis`` matrices; element ``sum(e_i * basis[i])``.

    Attributes:
        name: Exemplar or constructor name
        rows: Row count
        cols: Column count
        symmetry: general, symmetric or skew
        basis: Matrices multiplying the parameters ``e_0, e_1, ...``
    """

    name: str
    rows: int
    cols: int
    symmetry: Symmetry
    basis: tuple[RatGrid, ...]

    def __post_init__(self) -> None:
        for m in self.basis:
            if len(m) != self.rows or any(len(r) != self.cols for r in m):
                raise ValueError(f"{self.name}: basis matrix has the wrong shape")
            if self.symmetry != "general":
                if self.rows != self.cols:
                    raise ValueError(f"{self.name}: {self.symmetry} space must be square")
                sign = 1 if self.symmetry == "symmetric" else -1
                for i in range(self.rows):
                    for j in range(self.cols):
                        if m[i][j] != sign * m[j][i]:
                            raise ValueError(f"{self.name}: basis matrix is not {self.symmetry}")
        flat = [[x for row in m for x in row] for m in self.basis]
        if flat and rank_exact(flat, self.rows * self.cols) != len(self.basis):
            raise ValueError(f"{self.name}: basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def evaluate(self, params: Sequence[Any]) -> list[list[Any]]:
        acc = [[QQ.zero] * self.cols for _ in range(self.rows)]
        for c, m in zip(params, self.basis, strict=True):
            if not c:
                continue
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    if x:
                        acc[i][j] += c * x
        return acc

    def rank_at(self, params: Sequence[Any]) -> int:
        return rank_exact(self.evaluate(params), self.cols)
