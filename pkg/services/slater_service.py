"""
Slater Service Module
Affine Slater determinants over a finite measured space

For a real wave function φ = (φ_1, ..., φ_d) on K weighted nodes the affine
Slater determinant is Ψ(x_0, ..., x_d) = det(φ(x_1) − φ(x_0), ..., φ(x_d) − φ(x_0)).
All integrals are exact weighted sums over the nodes, reduced with numpy in
node-index order.

For d = 2, with W_ij = φ(x_i) ∧ φ(x_j), Ψ(x_i, x_j, x_k) = W_ij + W_jk + W_ki.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from config import Config
from services.affine_forms import affine_det
from services.domain.measured_space import CenteredWaveFunction, MeasuredSpace, WaveFunction
from services.errors import InputRejectedError, UnsupportedSizeError
from services.numerics import weighted_sum

logger = logging.getLogger(__name__)

SymmetricTable = Union[np.ndarray, Callable[[int, int, int], float]]

_TUPLE_CHUNK = 100_000


def _wedge_matrix(values: np.ndarray) -> np.ndarray:
    """W_ij = v_i ∧ v_j = v_i[0] v_j[1] − v_i[1] v_j[0]."""
    return np.outer(values[:, 0], values[:, 1]) - np.outer(values[:, 1], values[:, 0])


def _adjugate2(gram: np.ndarray) -> np.ndarray:
    return np.array([[gram[1, 1], -gram[0, 1]], [-gram[1, 0], gram[0, 0]]])


@dataclass(frozen=True)
class NPointResult:
    """⟨Ψ⟩, ⟨Ψ²⟩ and the Gram prediction (d+1)!·det(Gram) for one wave function."""

    dim: int
    one_point: float
    two_point: float
    gram_prediction: float

    def to_dict(self):
        return {
            'd': self.dim,
            'one_point': self.one_point,
            'two_point': self.two_point,
            'gram_prediction': self.gram_prediction,
        }


class Gamma2Kernel:
    """
    γ^(2)(x'_1, x'_2; x_1, x_2) = Σ_{x_0} μ(x_0) Ψ(x_0, x'_1, x'_2) Ψ(x_0, x_1, x_2).

    Entries are evaluated on demand; ``matrix()`` materializes the K²×K² kernel
    with rows (x'_1, x'_2) and columns (x_1, x_2) in row-major node order.
    """

    def __init__(self, phi: WaveFunction, space: MeasuredSpace):
        phi.check_space(space)
        if phi.dim != 2:
            raise InputRejectedError(f"γ^(2) is defined for d = 2, got d = {phi.dim}")
        self.phi = phi
        self.space = space
        self._wedge = _wedge_matrix(phi.values)

    @property
    def size(self) -> int:
        return self.space.size

    def _column(self, p: int, q: int) -> np.ndarray:
        """Ψ(x_0, x_p, x_q) for every x_0."""
        w = self._wedge
        return w[:, p] + w[p, q] + w[q, :]

    def entry(self, p1, p2, q1, q2) -> float:
        """Kernel entry at node labels (x'_1, x'_2; x_1, x_2)."""
        i1, i2, j1, j2 = self.space.indices((p1, p2, q1, q2))
        return float(weighted_sum(self._column(i1, i2) * self._column(j1, j2), self.space.weights))

    def matrix(self) -> np.ndarray:
        if self.size > Config.MAX_MATERIALIZED_NODES:
            raise UnsupportedSizeError(
                f"K = {self.size} exceeds {Config.MAX_MATERIALIZED_NODES} nodes; use entry() instead"
            )
        k = self.size
        w = self._wedge
        # psi[x0, p, q] = W[x0, p] + W[p, q] + W[q, x0]
        psi = w[:, :, None] + w[None, :, :] + w.T[:, None, :]
        flat = psi.reshape(k, k * k)
        return flat.T @ (self.space.weights[:, None] * flat)


class SlaterService:
    """
    Service computing centering, n-point functions and reduced density kernels
    of affine Slater determinants.
    """

    # ----- wave functions -----
    def center(self, phi: WaveFunction, space: MeasuredSpace) -> CenteredWaveFunction:
        """
        Subtract the μ-mean of every component.

        Args:
            phi: Wave function on the nodes of ``space``
            space: Measured space with total mass one

        Returns:
            CenteredWaveFunction carrying the removed mean
        """
        phi.check_space(space)
        mean = weighted_sum(phi.values, space.weights)
        return CenteredWaveFunction(phi.values - mean, mean=mean)

    def gram_matrix(self, phi: WaveFunction, space: MeasuredSpace) -> np.ndarray:
        """G_jl = ⟨φ̃_j φ̃_l⟩ over centered components."""
        centered = self.center(phi, space).values
        return centered.T @ (space.weights[:, None] * centered)

    def gram_determinant(self, phi: WaveFunction, space: MeasuredSpace) -> float:
        return float(np.linalg.det(self.gram_matrix(phi, space)))

    def reduce(self, phi: WaveFunction, space: MeasuredSpace) -> CenteredWaveFunction:
        """
        Reduced centered variables: centered, then whitened so that Gram = I.

        Raises:
            InputRejectedError: if the Gram matrix is singular
        """
        centered = self.center(phi, space)
        gram = self.gram_matrix(phi, space)
        try:
            lower = scipy.linalg.cholesky(gram, lower=True)
        except np.linalg.LinAlgError as e:
            logger.debug(f"Cannot reduce wave function: {e}")
            raise InputRejectedError(f"Gram matrix is singular, components are not independent: {e}")
        whitened = scipy.linalg.solve_triangular(lower, centered.values.T, lower=True).T
        return CenteredWaveFunction(whitened, mean=centered.mean)

    # ----- Ψ -----
    def psi(self, phi: WaveFunction, space: MeasuredSpace, labels: Sequence) -> float:
        """Ψ at d+1 node labels through the generic affine determinant."""
        phi.check_space(space)
        if len(labels) != phi.dim + 1:
            raise InputRejectedError(f"Ψ takes {phi.dim + 1} node labels, got {len(labels)}")
        rows = phi.values[space.indices(labels)]
        return float(affine_det(rows).real)

    def psi_tensor(self, phi: WaveFunction) -> np.ndarray:
        """Ψ on all node triples as a K×K×K array (d = 2)."""
        if phi.dim != 2:
            raise InputRejectedError(f"psi_tensor is defined for d = 2, got d = {phi.dim}")
        if phi.size ** 3 > Config.MAX_TUPLES:
            raise UnsupportedSizeError(f"K³ = {phi.size ** 3} node triples exceed {Config.MAX_TUPLES}")
        w = _wedge_matrix(phi.values)
        return w[:, :, None] + w[None, :, :] + w.T[:, None, :]

    def _triple_weights(self, space: MeasuredSpace) -> np.ndarray:
        w = space.weights
        return w[:, None, None] * w[None, :, None] * w[None, None, :]

    def _require_two_components(self, phi: WaveFunction, space: MeasuredSpace, name: str) -> None:
        phi.check_space(space)
        if phi.dim != 2:
            raise InputRejectedError(f"{name} is defined for d = 2, got d = {phi.dim}")

    def one_point(self, phi: WaveFunction, space: MeasuredSpace) -> float:
        """⟨Ψ⟩ as the full weighted sum over node triples."""
        self._require_two_components(phi, space, 'one_point')
        return float(np.sum(self._triple_weights(space) * self.psi_tensor(phi)))

    def two_point(self, phi: WaveFunction, space: MeasuredSpace) -> float:
        """⟨Ψ²⟩ as the full weighted sum over node triples."""
        self._require_two_components(phi, space, 'two_point')
        return float(np.sum(self._triple_weights(space) * self.psi_tensor(phi) ** 2))

    def n_point(self, phi: WaveFunction, space: MeasuredSpace) -> NPointResult:
        """⟨Ψ⟩ and ⟨Ψ²⟩ for any d over all (d+1)-tuples of nodes."""
        phi.check_space(space)
        d, k = phi.dim, phi.size
        tuples = k ** (d + 1)
        if tuples > Config.MAX_TUPLES:
            raise UnsupportedSizeError(f"K^(d+1) = {tuples} node tuples exceed {Config.MAX_TUPLES}")

        first = 0.0
        second = 0.0
        for start in range(0, tuples, _TUPLE_CHUNK):
            flat = np.arange(start, min(start + _TUPLE_CHUNK, tuples))
            index = np.stack(np.unravel_index(flat, (k,) * (d + 1)), axis=1)
            points = phi.values[index]
            diffs = np.swapaxes(points[:, 1:, :] - points[:, :1, :], 1, 2)
            dets = np.linalg.det(diffs)
            weights = np.prod(space.weights[index], axis=1)
            first += float(np.sum(weights * dets))
            second += float(np.sum(weights * dets ** 2))
        prediction = math.factorial(d + 1) * self.gram_determinant(phi, space)
        logger.debug(f"n-point over {tuples} tuples (d={d}): ⟨Ψ²⟩={second:.6g}, prediction {prediction:.6g}")
        return NPointResult(dim=d, one_point=first, two_point=second, gram_prediction=prediction)

    def estimate_moments(self, phi: WaveFunction, space: MeasuredSpace, samples: int,
                         rng: np.random.Generator) -> Tuple[float, float]:
        """Sampling estimate of (⟨Ψ⟩, ⟨Ψ²⟩) from tuples drawn with the node weights."""
        phi.check_space(space)
        d = phi.dim
        index = rng.choice(space.size, size=(samples, d + 1), p=space.weights / np.sum(space.weights))
        points = phi.values[index]
        dets = np.linalg.det(np.swapaxes(points[:, 1:, :] - points[:, :1, :], 1, 2))
        uniform = np.full(samples, 1.0 / samples)
        return float(weighted_sum(dets, uniform)), float(weighted_sum(dets ** 2, uniform))

    # ----- symmetric M -----
    def symmetric_m_identity(self, phi: WaveFunction, space: MeasuredSpace,
                             table: SymmetricTable, tolerance: Optional[float] = None) -> Tuple[float, float]:
        """
        Both sides of 3∫ ab·M·(ab + bc + ca) = ∫ (ab + bc + ca)·M·(ab + bc + ca).

        Args:
            phi: Two-component wave function
            space: Measured space
            table: K×K×K array or callable (i, j, k) -> M(x_i, x_j, x_k),
                symmetric in its arguments
            tolerance: Relative symmetry tolerance for ``table``

        Returns:
            (lhs, rhs)

        Raises:
            InputRejectedError: if M is not symmetric
        """
        self._require_two_components(phi, space, 'symmetric_m_identity')
        k = space.size
        m = self._tabulate(table, k)
        tolerance = tolerance if tolerance is not None else Config.tolerance('symmetric_m')
        scale = max(float(np.max(np.abs(m))), 1.0)
        for perm in itertools.permutations(range(3)):
            residual = float(np.max(np.abs(m - np.transpose(m, perm)))) / scale
            if residual > tolerance:
                logger.debug(f"M is not symmetric under slot permutation {perm}: residual {residual:.3e}")
                raise InputRejectedError(f"M is not symmetric (permutation {perm}, residual {residual:.3e})",
                                         details={'permutation': list(perm), 'residual': residual})

        centered = self.center(phi, space)
        wedge = _wedge_matrix(centered.values)
        psi = self.psi_tensor(centered)
        weights = self._triple_weights(space)
        lhs = 3.0 * float(np.sum(weights * wedge[:, :, None] * m * psi))
        rhs = float(np.sum(weights * psi * m * psi))
        return lhs, rhs

    @staticmethod
    def _tabulate(table: SymmetricTable, k: int) -> np.ndarray:
        if callable(table):
            m = np.empty((k, k, k))
            for i, j, l in itertools.product(range(k), repeat=3):
                m[i, j, l] = table(i, j, l)
            return m
        m = np.asarray(table, dtype=float)
        if m.shape != (k, k, k):
            raise InputRejectedError(f"M must be a {k}×{k}×{k} table, got shape {m.shape}")
        return m

    # ----- density kernels -----
    def gamma1(self, phi: WaveFunction, space: MeasuredSpace) -> np.ndarray:
        """
        γ^(1) = ½Γ − det(Gram), with Γ(x', x) the double weighted sum over (x_0, x_2).

        Returns:
            K×K symmetric matrix, rows x'_1 and columns x_1
        """
        self._require_two_components(phi, space, 'gamma1')
        psi = self.psi_tensor(phi)
        w = space.weights
        # Γ[p, q] = Σ_{a, c} w_a w_c Ψ(a, p, c) Ψ(a, q, c)
        weighted = psi * w[:, None, None] * w[None, None, :]
        big_gamma = np.einsum('apc,aqc->pq', weighted, psi)
        return 0.5 * big_gamma - self.gram_determinant(phi, space)

    def gamma1_closed_form(self, phi: WaveFunction, space: MeasuredSpace) -> np.ndarray:
        """φ̃(x')ᵀ adj(Gram) φ̃(x); Σ_j φ̃_j(x')φ̃_j(x) for reduced centered variables."""
        self._require_two_components(phi, space, 'gamma1_closed_form')
        centered = self.center(phi, space).values
        return centered @ _adjugate2(self.gram_matrix(phi, space)) @ centered.T

    def gamma2(self, phi: WaveFunction, space: MeasuredSpace) -> Gamma2Kernel:
        self._require_two_components(phi, space, 'gamma2')
        return Gamma2Kernel(phi, space)

    def gamma2_closed_form(self, phi: WaveFunction, space: MeasuredSpace) -> np.ndarray:
        """
        δᵀ adj(Gram) δ' + det[φ̃(x'_1), φ̃(x'_2)]·det[φ̃(x_1), φ̃(x_2)] with δ = φ̃(x'_1) − φ̃(x'_2).

        For reduced centered variables adj(Gram) = I and the first term is the
        pair of difference products of the two components.
        """
        self._require_two_components(phi, space, 'gamma2_closed_form')
        k = space.size
        if k > Config.MAX_MATERIALIZED_NODES:
            raise UnsupportedSizeError(f"K = {k} exceeds {Config.MAX_MATERIALIZED_NODES} nodes")
        centered = self.center(phi, space).values
        adj = _adjugate2(self.gram_matrix(phi, space))
        delta = (centered[:, None, :] - centered[None, :, :]).reshape(k * k, 2)
        wedge = _wedge_matrix(centered).reshape(k * k)
        return delta @ adj @ delta.T + np.outer(wedge, wedge)


def sample_space(count: int, rng: np.random.Generator) -> MeasuredSpace:
    """Random measured space with weights drawn from [0.5, 1.5] and normalized."""
    return MeasuredSpace.normalized(rng.uniform(0.5, 1.5, size=count))


def sample_wave_function(count: int, rng: np.random.Generator, dim: int = 2) -> WaveFunction:
    return WaveFunction(rng.standard_normal((count, dim)))


# Global instance
slater_service = SlaterService()
