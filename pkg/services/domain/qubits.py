from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple
import logging

import numpy as np

from services.errors import InputRejectedError
from services.numerics import as_square_matrix, as_vector, random_complex
from services.tensor_core import DenseTensor

logger = logging.getLogger(__name__)

# Slots of C^6 = H_A ⊕ H_B ⊕ H_C owned by each particle
BLOCK_SLOTS = ((0, 1), (2, 3), (4, 5))


@dataclass(frozen=True)
class Triple:
    """Three qubit states a, b, c ∈ C^2 with coordinates (x, y)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        for name in ('a', 'b', 'c'):
            vec = as_vector(getattr(self, name), dim=2, name=f"triple.{name}")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    @classmethod
    def random(cls, rng: np.random.Generator) -> 'Triple':
        a, b, c = random_complex(rng, (3, 2))
        return cls(a, b, c)

    def points(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.a, self.b, self.c

    def scale(self) -> float:
        """Largest coordinate magnitude; sets the size of quadratic quantities."""
        return float(max(np.max(np.abs(v)) for v in self.points()))

    def mapped(self, morphism: 'Morphism2') -> 'Triple':
        m = morphism.matrix
        return Triple(m @ self.a, m @ self.b, m @ self.c)

    def to_dict(self) -> Dict[str, list]:
        return {name: [[z.real, z.imag] for z in vec] for name, vec in zip('abc', self.points())}


@dataclass(frozen=True)
class EmbeddedTriple:
    """a' = a⊕0⊕0, b' = 0⊕b⊕0, c' = 0⊕0⊕c in C^6."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        for block, name in enumerate(('a', 'b', 'c')):
            vec = as_vector(getattr(self, name), dim=6, name=f"embedded.{name}")
            outside = [s for s in range(6) if s not in BLOCK_SLOTS[block]]
            if np.any(vec[outside] != 0):
                raise InputRejectedError(
                    f"embedded.{name} must be supported on slots {BLOCK_SLOTS[block]}"
                )
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    def project(self) -> Triple:
        """Recover (a, b, c) from their blocks."""
        return Triple(self.a[0:2], self.b[2:4], self.c[4:6])


@dataclass(frozen=True)
class LambdaTensor:
    """Antisymmetric degree-2 tensor over C^6 (36 entries)."""

    tensor: DenseTensor

    def __post_init__(self) -> None:
        t = self.tensor
        if t.degree != 2 or t.dim != 6:
            raise InputRejectedError(f"Λ must be a degree-2 tensor over C^6, got {t!r}")
        if np.any(t.array + t.array.T != 0):
            raise InputRejectedError("Λ must be exactly antisymmetric")

    @property
    def matrix(self) -> np.ndarray:
        return self.tensor.array


@dataclass(frozen=True)
class ThetaBlocks:
    """θ(Λ) arranged as the X-part (X'_1, X'_2, X'_3) and Y-part (Y'_1, Y'_2, Y'_3).

    Row r of each array is the C^6 block attached to particle r.
    """

    x_blocks: np.ndarray
    y_blocks: np.ndarray

    def __post_init__(self) -> None:
        for name in ('x_blocks', 'y_blocks'):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != (3, 6):
                raise InputRejectedError(f"{name} must have shape (3, 6), got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def support_residual(self) -> float:
        """Largest entry sitting where the block layout requires a zero.

        Block r vanishes on the slots of particle 2 - r.
        """
        worst = 0.0
        for r in range(3):
            zero_slots = list(BLOCK_SLOTS[2 - r])
            for arr in (self.x_blocks, self.y_blocks):
                worst = max(worst, float(np.max(np.abs(arr[r, zero_slots]))))
        return worst

    def max_entry(self) -> float:
        return float(max(np.max(np.abs(self.x_blocks)), np.max(np.abs(self.y_blocks))))


@dataclass(frozen=True)
class Morphism2:
    """A linear map σ: C^2 -> C^2."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = as_square_matrix(self.matrix, name='morphism')
        if m.shape != (2, 2):
            raise InputRejectedError(f"Morphism must be 2×2, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def identity(cls) -> 'Morphism2':
        return cls(np.eye(2))

    @classmethod
    def random(cls, rng: np.random.Generator) -> 'Morphism2':
        return cls(random_complex(rng, (2, 2)))

    @property
    def det(self) -> complex:
        m = self.matrix
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


@dataclass(frozen=True)
class RhoKernel:
    """Partial-trace kernel of ρ_{A,B,C} with ``arity`` free ket arguments."""

    arity: int
    evaluator: Callable[..., complex]

    def __post_init__(self) -> None:
        if self.arity not in (1, 2):
            raise InputRejectedError(f"Kernel arity must be 1 or 2, got {self.arity}")

    def __call__(self, kets, bras) -> complex:
        if len(kets) != self.arity or len(bras) != self.arity:
            raise InputRejectedError(f"Kernel expects {self.arity} ket and bra arguments")
        return self.evaluator(*kets, *bras)
