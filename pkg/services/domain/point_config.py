from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from services.errors import InputRejectedError
from services.numerics import random_complex


@dataclass(frozen=True)
class PointConfig:
    """Ordered points x_0, ..., x_{m-1} of C^d, stored as an (m, d) array."""

    points: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.points, dtype=complex)
        if arr.ndim != 2 or arr.shape[1] == 0:
            raise InputRejectedError(f"Points must form an (m, d) array with d > 0, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputRejectedError("Points have non-finite coordinates")
        arr.setflags(write=False)
        object.__setattr__(self, 'points', arr)

    @classmethod
    def of(cls, value) -> 'PointConfig':
        return value if isinstance(value, PointConfig) else cls(value)

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int, count: int = None) -> 'PointConfig':
        count = dim + 1 if count is None else count
        return cls(random_complex(rng, (count, dim)))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return self.points.shape[0]

    def differences(self) -> np.ndarray:
        """Columns x_i − x_0 for i = 1..m−1, as a (d, m−1) matrix."""
        return (self.points[1:] - self.points[0]).T

    def translated(self, offset) -> 'PointConfig':
        return PointConfig(self.points + np.asarray(offset, dtype=complex))

    def reordered(self, order: Sequence[int]) -> 'PointConfig':
        return PointConfig(self.points[list(order)])

    def scale(self) -> float:
        return float(np.max(np.abs(self.points), initial=0.0))
