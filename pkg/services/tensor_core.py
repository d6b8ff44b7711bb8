"""
Tensor Core Module
Complex linear and exterior algebra primitives over C^d

Dense tensors of degree p are stored as numpy arrays of shape (d,)*p in
row-major multi-index order. Antisymmetrization enumerates S_p explicitly and
uses the normalized convention

    x_1 ∧ ... ∧ x_p = 1/p! Σ_σ ε(σ) x_σ(1) ⊗ ... ⊗ x_σ(p)

All values are immutable after construction; every function is pure.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from config import Config
from services.errors import InputRejectedError, UnsupportedSizeError
from services.numerics import as_vector

logger = logging.getLogger(__name__)


# ========= Permutations =========
@dataclass(frozen=True)
class Permutation:
    """Element of S_p given by its image sequence: i -> mapping[i]."""

    mapping: Tuple[int, ...]

    def __post_init__(self) -> None:
        mapping = tuple(int(i) for i in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise InputRejectedError(f"Not a permutation of 0..{len(mapping) - 1}: {mapping}")
        object.__setattr__(self, 'mapping', mapping)

    @classmethod
    def identity(cls, p: int) -> 'Permutation':
        return cls(tuple(range(p)))

    @classmethod
    def transposition(cls, p: int, i: int, j: int) -> 'Permutation':
        mapping = list(range(p))
        mapping[i], mapping[j] = mapping[j], mapping[i]
        return cls(tuple(mapping))

    @classmethod
    def from_transpositions(cls, p: int, swaps: Iterable[Tuple[int, int]]) -> 'Permutation':
        """τ_1 ∘ τ_2 ∘ ... for the given (i, j) swaps."""
        result = cls.identity(p)
        for i, j in swaps:
            result = result.compose(cls.transposition(p, i, j))
        return result

    @property
    def size(self) -> int:
        return len(self.mapping)

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = [False] * self.size
        result = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = self.mapping[i]
            result.append(tuple(cycle))
        return result

    @property
    def sign(self) -> int:
        """Parity from the cycle decomposition: (-1)^(p - #cycles)."""
        return -1 if (self.size - len(self.cycles())) % 2 else 1

    def transposition_count(self) -> int:
        """Number of swaps a selection sort needs to reach the identity."""
        work = list(self.mapping)
        swaps = 0
        for i in range(len(work)):
            while work[i] != i:
                j = work[i]
                work[i], work[j] = work[j], work[i]
                swaps += 1
        return swaps

    def compose(self, other: 'Permutation') -> 'Permutation':
        """(self ∘ other)(i) = self(other(i))."""
        if other.size != self.size:
            raise InputRejectedError(f"Cannot compose permutations of sizes {self.size} and {other.size}")
        return Permutation(tuple(self.mapping[other.mapping[i]] for i in range(self.size)))

    def inverse(self) -> 'Permutation':
        inv = [0] * self.size
        for i, image in enumerate(self.mapping):
            inv[image] = i
        return Permutation(tuple(inv))

    def apply(self, items: Sequence) -> list:
        """Reorder ``items`` so that position k receives items[mapping[k]]."""
        return [items[self.mapping[k]] for k in range(self.size)]


@lru_cache(maxsize=None)
def _permutations(p: int) -> Tuple[Permutation, ...]:
    return tuple(Permutation(m) for m in itertools.permutations(range(p)))


def all_permutations(p: int) -> List[Permutation]:
    """All elements of S_p in lexicographic order of their mappings."""
    if p < 0:
        raise InputRejectedError(f"Permutation size must be non-negative, got {p}")
    if p > Config.MAX_ANTISYMMETRIZE_DEGREE:
        raise UnsupportedSizeError(
            f"S_{p} enumeration exceeds the supported degree {Config.MAX_ANTISYMMETRIZE_DEGREE}"
        )
    return list(_permutations(p))


# ========= Dense tensors =========
class DenseTensor:
    """Degree-p tensor over C^d with d^p complex entries in row-major order."""

    __slots__ = ('_array',)

    def __init__(self, array) -> None:
        arr = np.array(array, dtype=complex)
        if arr.ndim > 0:
            d = arr.shape[0]
            if d <= 0 or any(s != d for s in arr.shape):
                raise InputRejectedError(f"Tensor must have shape (d,)*p, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputRejectedError("Tensor has non-finite entries")
        arr.setflags(write=False)
        self._array = arr

    @classmethod
    def from_entries(cls, dim: int, degree: int, entries: Iterable) -> 'DenseTensor':
        flat = np.asarray(list(entries), dtype=complex)
        if flat.shape[0] != dim ** degree:
            raise InputRejectedError(
                f"Expected {dim ** degree} entries for dim={dim}, degree={degree}, got {flat.shape[0]}"
            )
        if degree == 0:
            return cls(flat[0])
        return cls(flat.reshape((dim,) * degree))

    @classmethod
    def zeros(cls, dim: int, degree: int) -> 'DenseTensor':
        return cls(np.zeros((dim,) * degree, dtype=complex))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def degree(self) -> int:
        return self._array.ndim

    @property
    def dim(self) -> int:
        """Dimension d of the base space; None for a degree-0 tensor."""
        return self._array.shape[0] if self._array.ndim else None

    @property
    def entries(self) -> np.ndarray:
        return self._array.reshape(-1)

    def entry(self, index: Sequence[int]) -> complex:
        return complex(self._array[tuple(index)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def scaled(self, factor: complex) -> 'DenseTensor':
        return DenseTensor(self._array * factor)

    def __add__(self, other: 'DenseTensor') -> 'DenseTensor':
        _check_same_shape(self, other)
        return DenseTensor(self._array + other._array)

    def __sub__(self, other: 'DenseTensor') -> 'DenseTensor':
        _check_same_shape(self, other)
        return DenseTensor(self._array - other._array)

    def allclose(self, other: 'DenseTensor', atol: float) -> bool:
        return self._array.shape == other._array.shape and bool(
            np.all(np.abs(self._array - other._array) <= atol)
        )

    def __repr__(self) -> str:
        return f"DenseTensor(dim={self.dim}, degree={self.degree})"


def _check_same_shape(s: DenseTensor, t: DenseTensor) -> None:
    if s.array.shape != t.array.shape:
        raise InputRejectedError(f"Tensor shapes differ: {s.array.shape} vs {t.array.shape}")


def scalar_tensor(value: complex) -> DenseTensor:
    return DenseTensor(np.asarray(value, dtype=complex))


def vector_tensor(v) -> DenseTensor:
    return DenseTensor(as_vector(v))


def basis_vector(dim: int, index: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e


# ========= Operations =========
def tensor_product(s: DenseTensor, t: DenseTensor) -> DenseTensor:
    """s ⊗ t with entry (I, J) equal to s[I]·t[J]."""
    if s.degree and t.degree and s.dim != t.dim:
        raise InputRejectedError(f"Dimension mismatch in tensor product: {s.dim} vs {t.dim}")
    return DenseTensor(np.multiply.outer(s.array, t.array))


def permute_slots(t: DenseTensor, sigma: Permutation) -> DenseTensor:
    """Tensor u with u[i_1..i_p] = t[i_σ(1)..i_σ(p)]."""
    if sigma.size != t.degree:
        raise InputRejectedError(f"Permutation of size {sigma.size} cannot act on degree {t.degree}")
    return DenseTensor(np.transpose(t.array, sigma.inverse().mapping))


def antisymmetrize(t: DenseTensor) -> DenseTensor:
    """Projection onto Λ^p: (1/p!) Σ_σ ε(σ) t[i_σ(1)..i_σ(p)]."""
    p = t.degree
    if p > Config.MAX_ANTISYMMETRIZE_DEGREE:
        raise UnsupportedSizeError(
            f"Antisymmetrization of degree {p} is not supported (max {Config.MAX_ANTISYMMETRIZE_DEGREE})"
        )
    if p <= 1:
        return t
    acc = np.zeros_like(t.array)
    for sigma in all_permutations(p):
        acc = acc + sigma.sign * np.transpose(t.array, sigma.inverse().mapping)
    return DenseTensor(acc / math.factorial(p))


def wedge(s: DenseTensor, t: DenseTensor) -> DenseTensor:
    """Exterior product antisymmetrize(s ⊗ t)."""
    return antisymmetrize(tensor_product(s, t))


def wedge_vectors(vs: Sequence) -> DenseTensor:
    """x_1 ∧ ... ∧ x_p as a degree-p tensor."""
    if not vs:
        return scalar_tensor(1.0)
    product = vector_tensor(vs[0])
    for v in vs[1:]:
        product = tensor_product(product, vector_tensor(v))
    return antisymmetrize(product)


def wedge_scalar(vs: Sequence) -> complex:
    """x_1 ∧ ... ∧ x_d for d vectors of C^d: the determinant of the column matrix."""
    vectors = [as_vector(v, name='wedge argument') for v in vs]
    if not vectors:
        raise InputRejectedError("wedge_scalar needs at least one vector")
    d = vectors[0].shape[0]
    if len(vectors) != d or any(v.shape[0] != d for v in vectors):
        raise InputRejectedError(
            f"wedge_scalar needs exactly d={d} vectors of dimension d, got {len(vectors)}"
        )
    return complex(np.linalg.det(np.column_stack(vectors)))


def wedge2(u, v) -> complex:
    """2×2 wedge scalar u_x v_y − u_y v_x."""
    return complex(u[0] * v[1] - u[1] * v[0])


def exterior_dimension(dim: int, degree: int) -> int:
    """Rank of the antisymmetrizer on (C^dim)^{⊗degree}; equals C(dim, degree)."""
    size = dim ** degree
    basis = np.eye(size, dtype=complex).reshape((dim,) * degree + (size,))
    projector = np.zeros_like(basis)
    for sigma in all_permutations(degree):
        axes = sigma.inverse().mapping + (degree,)
        projector = projector + sigma.sign * np.transpose(basis, axes)
    projector = projector.reshape(size, size) / math.factorial(degree)
    rank = int(np.linalg.matrix_rank(projector))
    logger.debug(f"Antisymmetrizer on dim={dim}, degree={degree} has rank {rank}")
    return rank
