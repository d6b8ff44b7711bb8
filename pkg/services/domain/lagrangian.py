from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from config import Config
from services.errors import InputRejectedError

logger = logging.getLogger(__name__)

SYMPLECTIC_CONVENTION = "omega(p,q;p',q') = sum_i p_i q'_i - q_i p'_i on R^{2n}, (p,q) block order"


def symplectic_matrix(n: int) -> np.ndarray:
    """J with ω(u, v) = uᵀ J v in (p, q) block order."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_form(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = u.shape[0] // 2
    return float(u @ symplectic_matrix(n) @ v)


@dataclass(frozen=True)
class LagrangianTriple:
    """Three Lagrangian subspaces of (R^{2n}, ω), each given by a 2n×n basis matrix."""

    n: int
    bases: Tuple[np.ndarray, np.ndarray, np.ndarray]
    tolerance: float = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise InputRejectedError(f"Half-dimension n must be positive, got {self.n}")
        if len(self.bases) != 3:
            raise InputRejectedError(f"Expected three bases, got {len(self.bases)}")
        tol = self.tolerance if self.tolerance is not None else Config.tolerance('lagrangian')
        object.__setattr__(self, 'tolerance', tol)

        jmat = symplectic_matrix(self.n)
        checked = []
        for label, basis in zip(('L1', 'L2', 'L3'), self.bases):
            arr = np.array(basis, dtype=float)
            if arr.shape != (2 * self.n, self.n):
                raise InputRejectedError(
                    f"{label} must be a {2 * self.n}×{self.n} matrix, got shape {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise InputRejectedError(f"{label} has non-finite entries")
            if np.linalg.matrix_rank(arr) < self.n:
                raise InputRejectedError(f"{label} does not have full column rank {self.n}",
                                         details={'subspace': label})
            gram = arr.T @ jmat @ arr
            norms = np.linalg.norm(arr, axis=0)
            scaled = np.abs(gram) / np.maximum(np.outer(norms, norms), 1.0)
            i, j = np.unravel_index(int(np.argmax(scaled)), scaled.shape)
            if scaled[i, j] > tol:
                logger.debug(f"{label} is not Lagrangian: ω(col {i}, col {j}) = {gram[i, j]:.3e}")
                raise InputRejectedError(
                    f"{label} is not Lagrangian: omega(col {i}, col {j}) = {gram[i, j]:.3e}",
                    details={'subspace': label, 'pair': [int(i), int(j)], 'residual': float(gram[i, j])},
                )
            arr.setflags(write=False)
            checked.append(arr)
        object.__setattr__(self, 'bases', tuple(checked))

    @classmethod
    def from_json(cls, payload: Dict[str, Any], tolerance: Optional[float] = None) -> 'LagrangianTriple':
        try:
            n = int(payload['n'])
            bases = tuple(np.asarray(payload[key], dtype=float) for key in ('L1', 'L2', 'L3'))
        except (KeyError, TypeError, ValueError) as e:
            raise InputRejectedError(f"Malformed Lagrangian triple document: {e}")
        return cls(n=n, bases=bases, tolerance=tolerance)

    def to_json(self) -> Dict[str, Any]:
        return {'n': self.n, **{f'L{k + 1}': b.tolist() for k, b in enumerate(self.bases)}}

    def permuted(self, order: Sequence[int]) -> 'LagrangianTriple':
        return LagrangianTriple(self.n, tuple(self.bases[k] for k in order), self.tolerance)

    def transformed(self, symplectic: np.ndarray) -> 'LagrangianTriple':
        """Image of all three subspaces under a symplectic map S (Sᵀ J S = J)."""
        return LagrangianTriple(self.n, tuple(symplectic @ b for b in self.bases), self.tolerance)

    def rebased(self, changes: List[np.ndarray]) -> 'LagrangianTriple':
        """Same subspaces, bases B_i replaced by B_i G_i with G_i invertible."""
        return LagrangianTriple(self.n, tuple(b @ g for b, g in zip(self.bases, changes)), self.tolerance)
