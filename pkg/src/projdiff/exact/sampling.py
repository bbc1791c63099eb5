"""Seeded random rational sampling.

All randomness in the laboratory flows through ``RationalSampler`` instances
built from an explicit seed; nothing touches a global generator.
"""

from collections.abc import Sequence
from typing import Any

import numpy as np
from sympy.polys.domains import QQ


class RationalSampler:
    """Draws rationals with numerators uniform in [-H, H] and denominator 1."""

    def __init__(self, rng: np.random.Generator, height: int = 50) -> None:
        if height <= 0:
            raise ValueError("height must be positive")
        self.rng = rng
        self.height = height

    @classmethod
    def from_seed(cls, seed: int, height: int = 50, stream: int = 0) -> "RationalSampler":
        return cls(np.random.default_rng([seed, stream]), height)

    def integer(self, low: int | None = None, high: int | None = None) -> int:
        """Uniform integer in [low, high] (defaults to [-H, H])."""
        low = -self.height if low is None else low
        high = self.height if high is None else high
        return int(self.rng.integers(low, high + 1))

    def rat(self) -> Any:
        return QQ(self.integer())

    def nonzero_rat(self) -> Any:
        value = 0
        while value == 0:
            value = self.integer()
        return QQ(value)

    def vector(self, size: int) -> tuple[Any, ...]:
        values = self.rng.integers(-self.height, self.height + 1, size=size)
        return tuple(QQ(int(v)) for v in values)

    def nonzero_vector(self, size: int) -> tuple[Any, ...]:
        if size == 0:
            return ()
        while True:
            v = self.vector(size)
            if any(v):
                return v

    def scaled_vector(self, size: int, height: int) -> tuple[Any, ...]:
        """Vector with numerators in [-height, height] (wider Schwartz-Zippel range)."""
        values = self.rng.integers(-height, height + 1, size=size)
        return tuple(QQ(int(v)) for v in values)

    def subset(self, population: int, k: int) -> tuple[int, ...]:
        """Sorted random k-subset of range(population)."""
        chosen = self.rng.choice(population, size=k, replace=False)
        return tuple(sorted(int(i) for i in chosen))

    def choice(self, options: Sequence[Any]) -> Any:
        return options[int(self.rng.integers(0, len(options)))]
