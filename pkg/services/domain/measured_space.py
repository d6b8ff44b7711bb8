from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from config import Config
from services.errors import InputRejectedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasuredSpace:
    """Finite probability space: K labelled nodes with positive weights summing to one."""

    weights: np.ndarray
    nodes: Tuple[Any, ...] = field(default=None)
    tolerance: float = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.shape[0] < 2:
            raise InputRejectedError(f"A measured space needs at least 2 weighted nodes, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InputRejectedError("Weights must be positive and finite")
        tol = self.tolerance if self.tolerance is not None else Config.tolerance('weights')
        object.__setattr__(self, 'tolerance', tol)
        total = float(np.sum(w))
        if abs(total - 1.0) > tol:
            logger.debug(f"Weights sum to {total!r}, expected 1")
            raise InputRejectedError(f"Weights must sum to 1 within {tol:g}, got {total!r}",
                                     details={'sum': total})
        nodes = tuple(range(w.shape[0])) if self.nodes is None else tuple(self.nodes)
        if len(nodes) != w.shape[0] or len(set(nodes)) != len(nodes):
            raise InputRejectedError(f"Need {w.shape[0]} distinct node labels, got {len(nodes)}")
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)
        object.__setattr__(self, 'nodes', nodes)

    @classmethod
    def uniform(cls, count: int) -> 'MeasuredSpace':
        return cls(np.full(count, 1.0 / count))

    @classmethod
    def normalized(cls, weights: Sequence[float], nodes: Optional[Sequence[Any]] = None) -> 'MeasuredSpace':
        """Rescale positive weights to total mass one."""
        w = np.asarray(weights, dtype=float)
        total = float(np.sum(w)) if w.size else 0.0
        if total <= 0:
            raise InputRejectedError("Weights must have positive total mass")
        return cls(w / total, nodes)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def index_of(self, label) -> int:
        try:
            return self.nodes.index(label)
        except ValueError:
            raise InputRejectedError(f"Unknown node label: {label!r}")

    def indices(self, labels: Sequence[Any]) -> List[int]:
        return [self.index_of(label) for label in labels]


@dataclass(frozen=True)
class WaveFunction:
    """Real wave function with d components sampled on the K nodes (K×d values)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values)
        if np.iscomplexobj(arr):
            raise InputRejectedError("Wave functions are real valued")
        arr = arr.astype(float)
        if arr.ndim != 2 or arr.shape[1] == 0:
            raise InputRejectedError(f"Wave function values must be a K×d matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputRejectedError("Wave function has non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, 'values', arr)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def scale(self) -> float:
        """Largest component norm (unweighted Euclidean over nodes)."""
        return float(np.max(np.linalg.norm(self.values, axis=0)))

    def check_space(self, space: MeasuredSpace) -> None:
        if self.size != space.size:
            raise InputRejectedError(f"Wave function has {self.size} nodes, space has {space.size}")


@dataclass(frozen=True)
class CenteredWaveFunction(WaveFunction):
    """Wave function with its μ-mean removed; ``mean`` keeps ⟨φ⟩."""

    mean: np.ndarray = None

    def __post_init__(self) -> None:
        super().__post_init__()
        mean = np.zeros(self.dim) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (self.dim,):
            raise InputRejectedError(f"Mean must have {self.dim} components, got shape {mean.shape}")
        mean.setflags(write=False)
        object.__setattr__(self, 'mean', mean)

    def residual_mean(self, space: MeasuredSpace) -> float:
        """Largest |⟨φ̃_j⟩| relative to the component norm."""
        means = np.abs(space.weights @ self.values)
        norms = np.maximum(np.linalg.norm(self.values, axis=0), 1.0)
        return float(np.max(means / norms))
