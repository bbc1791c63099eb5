"""Elements of the exterior algebra carrying the Clifford product."""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy.polys.domains import QQ

from ..exact.linalg import to_rat

Blade = tuple[int, ...]


@dataclass(frozen=True)
class CliffordElem:
    """Sparse element of ``Lambda^* V`` indexed by sorted subsets of ``range(m)``."""

    m: int
    terms: Mapping[Blade, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for blade, c in self.terms.items():
            if any(i < 0 or i >= self.m for i in blade) or list(blade) != sorted(set(blade)):
                raise ValueError(f"invalid blade {blade} for dimension {self.m}")
            c = to_rat(c)
            if c:
                clean[tuple(blade)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def scalar(cls, m: int, c: Any = 1) -> "CliffordElem":
        return cls(m, {(): c})

    @classmethod
    def vector(cls, v: Sequence[Any]) -> "CliffordElem":
        return cls(len(v), {(i,): c for i, c in enumerate(v) if c})

    @classmethod
    def blade(cls, m: int, subset: Iterable[int], c: Any = 1) -> "CliffordElem":
        return cls(m, {tuple(sorted(subset)): c})

    def __add__(self, other: "CliffordElem") -> "CliffordElem":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, QQ.zero) + c
        return CliffordElem(self.m, out)

    def __neg__(self) -> "CliffordElem":
        return CliffordElem(self.m, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "CliffordElem") -> "CliffordElem":
        return self + (-other)

    def scale(self, c: Any) -> "CliffordElem":
        c = to_rat(c)
        return CliffordElem(self.m, {b: c * x for b, x in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def grades(self) -> set[int]:
        return {len(b) for b in self.terms}

    @property
    def is_even(self) -> bool:
        return all(len(b) % 2 == 0 for b in self.terms)

    def scalar_part(self) -> Any:
        return self.terms.get((), QQ.zero)

    def vector_part(self) -> tuple[Any, ...]:
        return tuple(self.terms.get((i,), QQ.zero) for i in range(self.m))
