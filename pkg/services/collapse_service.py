"""
Collapse Service Module
Distinguishable 3-fermions of spin 1/2 and their collapse to the affine determinant

Pipeline: embed (C^2)^3 into C^6, form Λ = a'∧b' + b'∧c' + c'∧a' in C^36,
reindex it with θ into three C^2 ⊗ C^6 blocks, add the blocks (Tr_1) and
project the resulting C^3 vector onto the line C^3 / ⟨u, v⟩ with the
functional z ↦ z_1 + z_2 + z_3.

Also hosts the three-particle state kernel ρ_{A,B,C} and its partial traces
over the computational basis.
"""

import itertools
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import Config
from services.domain.qubits import (
    BLOCK_SLOTS,
    EmbeddedTriple,
    LambdaTensor,
    Morphism2,
    RhoKernel,
    ThetaBlocks,
    Triple,
)
from services.errors import ConsistencyError
from services.numerics import as_vector, scaled_residual
from services.tensor_core import DenseTensor, vector_tensor, wedge, wedge2

logger = logging.getLogger(__name__)

# Directions spanned by ω_1 on degenerate triples
U_DIRECTION = np.array([0.0, 1.0, -1.0])
V_DIRECTION = np.array([1.0, 0.0, -1.0])
W_DIRECTION = np.array([1.0, -1.0, 0.0])

# Slots of Tr_1(X') holding its non-trivial components; Tr_1(Y') uses the even ones
X_TRACE_SLOTS = (1, 3, 5)
Y_TRACE_SLOTS = (0, 2, 4)


def _build_theta_index_map() -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(i, j) of the 6×6 matrix Λ -> (component r, position in C^2 ⊗ C^6).

    Row i belongs to particle r = i // 2 with coordinate s = i % 2; column j
    to particle block cb = j // 2 with coordinate t = j % 2. Inside component
    r the column blocks are rotated by r - 1 so that the layout is
    (b, -c, 0), (-a, 0, c), (0, a, -b).
    """
    index_map = {}
    for i, j in itertools.product(range(6), repeat=2):
        r, s = divmod(i, 2)
        cb, t = divmod(j, 2)
        new_block = (cb + r - 1) % 3
        index_map[(i, j)] = (r, s * 6 + new_block * 2 + t)
    return index_map


THETA_INDEX_MAP = _build_theta_index_map()


def computational_basis() -> List[np.ndarray]:
    """|0⟩ = (1, 0) and |1⟩ = (0, 1)."""
    return [np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)]


def affine_det2(a, b, c) -> complex:
    """det(b − a, c − a) for three points of C^2."""
    return wedge2(b - a, c - a)


class CollapseService:
    """
    Service implementing the embedding, reindexation, partial trace and
    quotient projection that turn the distinguishable 3-fermion into the
    affine determinant.
    """

    def __init__(self, trace_tolerance: Optional[float] = None):
        """
        Initialize the collapse service.

        Args:
            trace_tolerance: Relative tolerance of the Tr_1(Y') = -Tr_1(X') check
        """
        self.trace_tolerance = trace_tolerance if trace_tolerance is not None else Config.tolerance('trace')

    # ----- pipeline -----
    def embed(self, triple: Triple) -> EmbeddedTriple:
        """a' = a⊕0⊕0, b' = 0⊕b⊕0, c' = 0⊕0⊕c."""
        embedded = []
        for block, vec in enumerate(triple.points()):
            padded = np.zeros(6, dtype=complex)
            padded[list(BLOCK_SLOTS[block])] = vec
            embedded.append(padded)
        return EmbeddedTriple(*embedded)

    def lambda_tensor(self, triple: Triple) -> LambdaTensor:
        """Λ = a'∧b' + b'∧c' + c'∧a' with a'∧b' = ½(a'⊗b' − b'⊗a')."""
        e = self.embed(triple)
        a, b, c = (vector_tensor(v) for v in (e.a, e.b, e.c))
        return LambdaTensor(wedge(a, b) + wedge(b, c) + wedge(c, a))

    def theta(self, lam: LambdaTensor) -> ThetaBlocks:
        """Reindex Λ into the three C^12 components attached to a, b and c.

        The factor 2 undoes the ½ of the wedge convention so that the
        components read a ⊗ (b, −c, 0), b ⊗ (−a, 0, c), c ⊗ (0, a, −b).
        """
        components = np.zeros((3, 12), dtype=complex)
        matrix = lam.matrix
        for (i, j), (r, pos) in THETA_INDEX_MAP.items():
            components[r, pos] = 2.0 * matrix[i, j]
        return ThetaBlocks(x_blocks=components[:, :6], y_blocks=components[:, 6:])

    def theta_closed_form(self, triple: Triple) -> ThetaBlocks:
        """Blocks a ⊗ (b, −c, 0), b ⊗ (−a, 0, c), c ⊗ (0, a, −b) built from coordinates."""
        a, b, c = triple.points()
        zero = np.zeros(2, dtype=complex)
        rows = (
            (a, np.concatenate([b, -c, zero])),
            (b, np.concatenate([-a, zero, c])),
            (c, np.concatenate([zero, a, -b])),
        )
        components = np.array([np.kron(p, row) for p, row in rows])
        return ThetaBlocks(x_blocks=components[:, :6], y_blocks=components[:, 6:])

    def y_trace(self, blocks: ThetaBlocks) -> np.ndarray:
        """Tr_1(Y'_1, Y'_2, Y'_3) = Y'_1 + Y'_2 + Y'_3 in C^6."""
        return blocks.y_blocks.sum(axis=0)

    def tr1(self, blocks: ThetaBlocks) -> np.ndarray:
        """Non-trivial components (slots 1, 3, 5) of X'_1 + X'_2 + X'_3.

        Raises:
            ConsistencyError: if the block layout is violated or
                Tr_1(Y') differs from -Tr_1(X') beyond the trace tolerance
        """
        scale = max(blocks.max_entry(), 1.0)
        support = blocks.support_residual() / scale
        if support > self.trace_tolerance:
            logger.error(f"θ blocks violate the block-support pattern (residual {support:.3e})")
            raise ConsistencyError(f"θ blocks violate the block-support pattern (residual {support:.3e})")

        x_sum = blocks.x_blocks.sum(axis=0)
        y_sum = self.y_trace(blocks)
        x_trivial = scaled_residual(x_sum[list(Y_TRACE_SLOTS)], 0.0, scale)
        y_trivial = scaled_residual(y_sum[list(X_TRACE_SLOTS)], 0.0, scale)
        mismatch = scaled_residual(y_sum[list(Y_TRACE_SLOTS)], -x_sum[list(X_TRACE_SLOTS)], scale)
        worst = max(x_trivial, y_trivial, mismatch)
        if worst > self.trace_tolerance:
            logger.error(f"Tr_1(Y') != -Tr_1(X'): residual {worst:.3e}")
            raise ConsistencyError(f"Tr_1(Y') = -Tr_1(X') check failed with residual {worst:.3e}")
        return x_sum[list(X_TRACE_SLOTS)]

    def omega1(self, triple: Triple) -> np.ndarray:
        """ω_1(a, b, c) = Tr_1 θ(Λ) ∈ C^3; equals (a∧b, c∧a, b∧c)."""
        return self.tr1(self.theta(self.lambda_tensor(triple)))

    def quotient_functional(self, z) -> complex:
        """The rank-1 quotient C^3 -> C^3/⟨u, v⟩ ≅ C, z ↦ z_1 + z_2 + z_3."""
        z = as_vector(z, dim=3, name='tr1 vector')
        return complex(z[0] + z[1] + z[2])

    def quotient_projector(self) -> np.ndarray:
        """Projector π = 𝟙𝟙ᵀ/3 of rank 1 whose kernel is ⟨u, v⟩."""
        ones = np.ones(3)
        return np.outer(ones, ones) / 3.0

    def collapse(self, triple: Triple) -> complex:
        """ω̃(a, b, c): the quotient image of ω_1, equal to det(b − a, c − a)."""
        value = self.quotient_functional(self.omega1(triple))
        logger.debug(f"Collapsed triple to {value}")
        return value

    def collapse_with_morphism(self, triple: Triple, morphism: Morphism2) -> complex:
        """(σ⊗σ)Λ collapsed: every coordinate pair is replaced by σ·(x, y) first."""
        return self.collapse(triple.mapped(morphism))

    @staticmethod
    def degenerate_directions() -> Dict[str, np.ndarray]:
        return {'u': U_DIRECTION.copy(), 'v': V_DIRECTION.copy(), 'w': W_DIRECTION.copy()}

    # ----- state kernels and partial traces -----
    @staticmethod
    def rho(a, b, c, a_bra, b_bra, c_bra) -> complex:
        """ρ_{A,B,C}(a,b,c; a',b',c') = det(b−a, c−a)·det(b'−a', c'−a')."""
        ket = affine_det2(*(as_vector(v, dim=2) for v in (a, b, c)))
        bra = affine_det2(*(as_vector(v, dim=2) for v in (a_bra, b_bra, c_bra)))
        return ket * bra

    @staticmethod
    def rho_trace_A(b, c, b_bra, c_bra) -> complex:
        """Tr_A ρ(b, c; b', c') = Σ_{a ∈ {|0⟩,|1⟩}} det(b−a, c−a)·det(b'−a, c'−a)."""
        b, c, b_bra, c_bra = (as_vector(v, dim=2) for v in (b, c, b_bra, c_bra))
        total = 0j
        for a in computational_basis():
            total += affine_det2(a, b, c) * affine_det2(a, b_bra, c_bra)
        return total

    @staticmethod
    def rho_trace_AC(b, b_bra) -> complex:
        """Tr_{A,C} ρ(b; b') = Σ_{a, c} det(b−a, c−a)·det(b'−a, c−a)."""
        b, b_bra = (as_vector(v, dim=2) for v in (b, b_bra))
        total = 0j
        for a in computational_basis():
            for c in computational_basis():
                total += affine_det2(a, b, c) * affine_det2(a, b_bra, c)
        return total

    @staticmethod
    def rho_trace_AC_closed_form(b, b_bra) -> complex:
        """2(b_1 + b_2 − 1)(b'_1 + b'_2 − 1)."""
        b, b_bra = (as_vector(v, dim=2) for v in (b, b_bra))
        return complex(2.0 * (b[0] + b[1] - 1.0) * (b_bra[0] + b_bra[1] - 1.0))

    def rho_trace_A_matrix(self) -> np.ndarray:
        """Tr_A ρ on basis arguments: rows (b, c), columns (b', c'), 4×4."""
        basis = computational_basis()
        pairs = list(itertools.product(basis, repeat=2))
        matrix = np.zeros((4, 4), dtype=complex)
        for row, (b, c) in enumerate(pairs):
            for col, (b_bra, c_bra) in enumerate(pairs):
                matrix[row, col] = self.rho_trace_A(b, c, b_bra, c_bra)
        return matrix

    def rho_trace_AC_matrix(self) -> np.ndarray:
        """Tr_{A,C} ρ on basis arguments, 2×2."""
        basis = computational_basis()
        return np.array([[self.rho_trace_AC(b, b_bra) for b_bra in basis] for b in basis])

    def trace_A_kernel(self) -> RhoKernel:
        return RhoKernel(arity=2, evaluator=self.rho_trace_A)

    def trace_AC_kernel(self) -> RhoKernel:
        return RhoKernel(arity=1, evaluator=self.rho_trace_AC)


# Global instance
collapse_service = CollapseService()
