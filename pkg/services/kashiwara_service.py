"""
Kashiwara Service Module
Quadratic form Q(x_1, x_2, x_3) = ω(x_1, x_2) + ω(x_2, x_3) + ω(x_3, x_1) on
L_1 ⊕ L_2 ⊕ L_3 and its signature
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import scipy.linalg

from config import Config
from services.domain.lagrangian import SYMPLECTIC_CONVENTION, LagrangianTriple, symplectic_matrix

logger = logging.getLogger(__name__)

# Cyclic pairs (i, j) carrying ω(x_i, x_j)
CYCLIC_PAIRS = ((0, 1), (1, 2), (2, 0))


@dataclass
class SignatureResult:
    """Inertia of the symmetrized Kashiwara form."""

    n_plus: int
    n_minus: int
    n_zero: int
    eigenvalues: List[float]
    convention: str = field(default=SYMPLECTIC_CONVENTION)

    @property
    def signature(self) -> int:
        return self.n_plus - self.n_minus

    def to_dict(self) -> Dict[str, object]:
        return {
            'n_plus': self.n_plus,
            'n_minus': self.n_minus,
            'n_zero': self.n_zero,
            'signature': self.signature,
            'eigenvalues': self.eigenvalues,
            'convention': self.convention,
        }


class KashiwaraService:
    """
    Service computing the Kashiwara form of a Lagrangian triple and its index.
    """

    def __init__(self, zero_tolerance: Optional[float] = None):
        """
        Initialize the Kashiwara service.

        Args:
            zero_tolerance: Eigenvalues below this fraction of the largest
                magnitude count as zero
        """
        self.zero_tolerance = zero_tolerance if zero_tolerance is not None else Config.tolerance('kashiwara')

    def pairing_blocks(self, triple: LagrangianTriple) -> Dict[tuple, np.ndarray]:
        """M_ij = B_iᵀ J B_j for the three cyclic pairs."""
        jmat = symplectic_matrix(triple.n)
        return {(i, j): triple.bases[i].T @ jmat @ triple.bases[j] for i, j in CYCLIC_PAIRS}

    def kashiwara_q(self, triple: LagrangianTriple) -> np.ndarray:
        """
        Symmetric 3n×3n matrix of Q in the coordinates of the given bases.

        Args:
            triple: Validated Lagrangian triple

        Returns:
            ½(B + Bᵀ) where B holds M_12, M_23, M_31 in the cyclic blocks
        """
        n = triple.n
        big = np.zeros((3 * n, 3 * n))
        for (i, j), block in self.pairing_blocks(triple).items():
            big[i * n:(i + 1) * n, j * n:(j + 1) * n] += block
        return 0.5 * (big + big.T)

    def kashiwara_index(self, triple: LagrangianTriple) -> SignatureResult:
        """
        Signature of Q with a zero threshold relative to the largest eigenvalue.

        Args:
            triple: Validated Lagrangian triple

        Returns:
            SignatureResult with sorted eigenvalues and the symplectic convention
        """
        eigenvalues = scipy.linalg.eigh(self.kashiwara_q(triple), eigvals_only=True)
        largest = float(np.max(np.abs(eigenvalues), initial=0.0))
        threshold = self.zero_tolerance * largest
        n_plus = int(np.sum(eigenvalues > threshold))
        n_minus = int(np.sum(eigenvalues < -threshold))
        n_zero = len(eigenvalues) - n_plus - n_minus
        near = np.abs(eigenvalues)[(np.abs(eigenvalues) > threshold) & (np.abs(eigenvalues) < 100 * threshold)]
        if near.size:
            logger.warning(f"{near.size} eigenvalue(s) of Q lie within 100× of the zero threshold")
        logger.debug(f"Kashiwara index n={triple.n}: (+{n_plus}, -{n_minus}, 0:{n_zero})")
        return SignatureResult(
            n_plus=n_plus,
            n_minus=n_minus,
            n_zero=n_zero,
            eigenvalues=[float(v) for v in np.sort(eigenvalues)],
        )


def random_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """exp(J H) for a random symmetric H; satisfies Sᵀ J S = J."""
    h = rng.standard_normal((2 * n, 2 * n))
    h = 0.25 * (h + h.T)
    return scipy.linalg.expm(symplectic_matrix(n) @ h)


def graph_triple(symmetric: np.ndarray) -> LagrangianTriple:
    """(p-plane, q-plane, graph of a symmetric A) in R^{2n}."""
    a = np.asarray(symmetric, dtype=float)
    n = a.shape[0]
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return LagrangianTriple(n, (np.vstack([eye, zero]), np.vstack([zero, eye]), np.vstack([eye, a])))


def random_graph_triple(n: int, rng: np.random.Generator) -> LagrangianTriple:
    a = rng.standard_normal((n, n))
    return graph_triple(0.5 * (a + a.T))


def random_basis_change(n: int, rng: np.random.Generator) -> np.ndarray:
    """A well-conditioned invertible n×n matrix."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q @ np.diag(rng.uniform(0.5, 2.0, size=n))


# Global instance
kashiwara_service = KashiwaraService()
