"""
Affine Forms Module
Affine determinants in any dimension and antisymmetric multi-affine forms

A multi-affine form of arity m on C^d is stored through its coefficient table
c of shape (d+1,)*m: argument x_k enters through z_k = (1, x_k) and

    ω(x_1, ..., x_m) = Σ_I c[I] z_1[I_1] ... z_m[I_m]

Index 0 of an axis is the constant monomial, index j ≥ 1 the coordinate
x[j-1]. The homogeneity of a monomial is its number of non-constant slots.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from config import Config
from services.domain.point_config import PointConfig
from services.errors import InputRejectedError, UnsupportedSizeError
from services.numerics import as_square_matrix, random_complex
from services.tensor_core import Permutation, all_permutations

logger = logging.getLogger(__name__)


# ========= Affine determinant =========
def affine_det(cfg) -> complex:
    """det(x_1 − x_0, ..., x_d − x_0) for d+1 points of C^d."""
    cfg = PointConfig.of(cfg)
    if cfg.count != cfg.dim + 1:
        raise InputRejectedError(
            f"Affine determinant on C^{cfg.dim} needs {cfg.dim + 1} points, got {cfg.count}"
        )
    return complex(np.linalg.det(cfg.differences()))


def is_affinely_dependent(cfg, rtol: float = None) -> bool:
    """True iff the differences x_i − x_0 have rank < min(m − 1, d).

    Rank is decided by singular values above ``rtol`` times the largest one.
    """
    cfg = PointConfig.of(cfg)
    rtol = rtol if rtol is not None else Config.tolerance('dependence')
    target = min(cfg.count - 1, cfg.dim)
    if target == 0:
        return False
    singular = np.linalg.svd(cfg.differences(), compute_uv=False)
    if singular[0] == 0.0:
        return True
    rank = int(np.sum(singular > rtol * singular[0]))
    return rank < target


# ========= Determinants =========
def laplace_expand(matrix) -> complex:
    """Cofactor expansion along the first column: Σ_i (−1)^i m[i,0] det(minor_i)."""
    m = as_square_matrix(matrix)
    n = m.shape[0]
    if n > Config.MAX_LAPLACE_DIM:
        raise UnsupportedSizeError(f"Laplace expansion supports d ≤ {Config.MAX_LAPLACE_DIM}, got {n}")
    return complex(_laplace(m))


def _laplace(m: np.ndarray) -> complex:
    n = m.shape[0]
    if n == 0:
        return 1.0
    if n == 1:
        return m[0, 0]
    total = 0j
    rows = list(range(n))
    for i in rows:
        if m[i, 0] == 0:
            continue
        minor = m[np.ix_([r for r in rows if r != i], list(range(1, n)))]
        total += (-1) ** i * m[i, 0] * _laplace(minor)
    return total


def elimination_det(matrix) -> complex:
    """Determinant through pivoted LU elimination."""
    return complex(scipy.linalg.det(as_square_matrix(matrix)))


# ========= Multi-affine forms =========
@dataclass(frozen=True)
class MultiAffineForm:
    """Multi-affine form of ``arity`` vector arguments in C^``dim``."""

    dim: int
    arity: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=complex)
        expected = (self.dim + 1,) * self.arity
        if coeffs.shape != expected:
            raise InputRejectedError(f"Coefficient table must have shape {expected}, got {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coefficients', coeffs)

    @classmethod
    def zero(cls, dim: int, arity: int) -> 'MultiAffineForm':
        _check_table_size(dim, arity)
        return cls(dim, arity, np.zeros((dim + 1,) * arity))

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], complex], dim: int, arity: int) -> 'MultiAffineForm':
        """Exact coefficients of a multi-affine callable.

        The callable is evaluated on all choices of points in {0, e_1, ..., e_d};
        along every axis the evaluation matrix is V = [[1, 0], [1, I]], whose
        inverse recovers the coefficients.
        """
        _check_table_size(dim, arity)
        nodes = np.vstack([np.zeros(dim), np.eye(dim)])
        grid = np.zeros((dim + 1,) * arity, dtype=complex)
        for index in itertools.product(range(dim + 1), repeat=arity):
            grid[index] = func(nodes[list(index)])
        v_inv = np.eye(dim + 1)
        v_inv[1:, 0] = -1.0
        coeffs = grid
        for axis in range(arity):
            coeffs = np.moveaxis(np.tensordot(v_inv, coeffs, axes=(1, axis)), 0, axis)
        return cls(dim, arity, coeffs)

    def __call__(self, points) -> complex:
        pts = np.asarray(points, dtype=complex)
        if pts.shape != (self.arity, self.dim):
            raise InputRejectedError(f"Form expects points of shape {(self.arity, self.dim)}, got {pts.shape}")
        acc = self.coefficients
        for x in pts:
            acc = np.tensordot(np.concatenate(([1.0], x)), acc, axes=(0, 0))
        return complex(acc)

    def __add__(self, other: 'MultiAffineForm') -> 'MultiAffineForm':
        self._check_compatible(other)
        return MultiAffineForm(self.dim, self.arity, self.coefficients + other.coefficients)

    def __sub__(self, other: 'MultiAffineForm') -> 'MultiAffineForm':
        self._check_compatible(other)
        return MultiAffineForm(self.dim, self.arity, self.coefficients - other.coefficients)

    def scaled(self, factor: complex) -> 'MultiAffineForm':
        return MultiAffineForm(self.dim, self.arity, self.coefficients * factor)

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coefficients) <= atol))

    def homogeneity_mask(self, degree: int) -> np.ndarray:
        """Boolean table selecting monomials with exactly ``degree`` non-constant slots."""
        counts = np.zeros((self.dim + 1,) * self.arity, dtype=int)
        for axis in range(self.arity):
            shape = [1] * self.arity
            shape[axis] = self.dim + 1
            counts = counts + (np.arange(self.dim + 1) > 0).astype(int).reshape(shape)
        return counts == degree

    def restrict_to_sector(self, degree: int) -> 'MultiAffineForm':
        return MultiAffineForm(self.dim, self.arity, np.where(self.homogeneity_mask(degree), self.coefficients, 0))

    def sector_degrees(self) -> List[int]:
        """Homogeneity degrees carrying non-zero coefficients."""
        return [h for h in range(self.arity + 1) if np.any(self.coefficients[self.homogeneity_mask(h)] != 0)]

    def padded(self, arity: int) -> 'MultiAffineForm':
        """Same form viewed as a function of ``arity`` arguments (extra ones ignored)."""
        if arity < self.arity:
            raise InputRejectedError(f"Cannot pad a form of arity {self.arity} down to {arity}")
        coeffs = self.coefficients
        for _ in range(arity - self.arity):
            extended = np.zeros(coeffs.shape + (self.dim + 1,), dtype=complex)
            extended[..., 0] = coeffs
            coeffs = extended
        return MultiAffineForm(self.dim, arity, coeffs)

    def permuted(self, sigma: Permutation) -> 'MultiAffineForm':
        """The form (x_1..x_m) ↦ ω(x_σ(1), ..., x_σ(m))."""
        if sigma.size != self.arity:
            raise InputRejectedError(f"Permutation of size {sigma.size} cannot act on arity {self.arity}")
        return MultiAffineForm(self.dim, self.arity, np.transpose(self.coefficients, sigma.inverse().mapping))

    def _check_compatible(self, other: 'MultiAffineForm') -> None:
        if (self.dim, self.arity) != (other.dim, other.arity):
            raise InputRejectedError(
                f"Forms differ in shape: (d={self.dim}, m={self.arity}) vs (d={other.dim}, m={other.arity})"
            )

    def nonzero_entries(self, atol: float = 0.0) -> List[Dict[str, object]]:
        """Non-zero coefficients as {"index": [...], "re": .., "im": ..} records."""
        entries = []
        for index in zip(*np.nonzero(np.abs(self.coefficients) > atol)):
            value = self.coefficients[index]
            entries.append({'index': [int(i) for i in index], 're': float(value.real), 'im': float(value.imag)})
        return entries


def _check_table_size(dim: int, arity: int) -> None:
    if dim <= 0 or arity < 0:
        raise InputRejectedError(f"Invalid form shape d={dim}, m={arity}")
    size = (dim + 1) ** arity
    if size > Config.MAX_COEFFICIENT_TABLE:
        raise UnsupportedSizeError(
            f"Coefficient table (d+1)^m = {size} exceeds the limit {Config.MAX_COEFFICIENT_TABLE}"
        )


def determinant_form(dim: int, arity: int, slots: Sequence[int]) -> MultiAffineForm:
    """det(x_{slots[0]}, ..., x_{slots[d-1]}) with the other arguments ignored."""
    if len(slots) != dim or len(set(slots)) != dim or any(s < 0 or s >= arity for s in slots):
        raise InputRejectedError(f"Need {dim} distinct argument slots below {arity}, got {list(slots)}")
    _check_table_size(dim, arity)
    coeffs = np.zeros((dim + 1,) * arity, dtype=complex)
    for sigma in all_permutations(dim):
        index = [0] * arity
        for k, slot in enumerate(slots):
            index[slot] = sigma.mapping[k] + 1
        coeffs[tuple(index)] = sigma.sign
    return MultiAffineForm(dim, arity, coeffs)


def wedge_generator(dim: int, arity: int = None) -> MultiAffineForm:
    """The generator x_1 x_2 ... x_d: determinant of the first d arguments."""
    arity = dim + 1 if arity is None else arity
    return determinant_form(dim, arity, list(range(dim)))


def affine_det_form(dim: int) -> MultiAffineForm:
    """Affine determinant as Σ_k (−1)^k det(x_0, ..., x̂_k, ..., x_d)."""
    form = MultiAffineForm.zero(dim, dim + 1)
    for k in range(dim + 1):
        slots = [s for s in range(dim + 1) if s != k]
        term = determinant_form(dim, dim + 1, slots)
        form = form + term if k % 2 == 0 else form - term
    return form


def antisymmetrize_generator(generator: MultiAffineForm, arity: int = None) -> MultiAffineForm:
    """Σ_{σ ∈ S_m} ε(σ) (generator ∘ σ), the generator padded to ``arity`` arguments."""
    arity = generator.arity if arity is None else arity
    if arity > Config.MAX_GENERATOR_ARITY:
        raise UnsupportedSizeError(
            f"Generator antisymmetrization supports arity ≤ {Config.MAX_GENERATOR_ARITY}, got {arity}"
        )
    _check_table_size(generator.dim, arity)
    base = generator.padded(arity)
    acc = np.zeros_like(base.coefficients)
    for sigma in all_permutations(arity):
        acc = acc + sigma.sign * base.permuted(sigma).coefficients
    logger.debug(f"Antisymmetrized generator over S_{arity} on C^{generator.dim}")
    return MultiAffineForm(generator.dim, arity, acc)


# ========= Non-degeneracy probe =========
@dataclass
class ProbeReport:
    """Outcome of the Monte Carlo non-degeneracy falsifier."""

    dim: int
    trials: int
    accepted: int = 0
    skipped: int = 0
    counterexamples: int = 0
    examples: List[List[List[float]]] = field(default_factory=list)
    degenerate: bool = False

    @property
    def status(self) -> str:
        if self.degenerate:
            return 'degenerate'
        return 'no counterexample found' if self.counterexamples == 0 else 'counterexamples found'

    def to_dict(self) -> Dict[str, object]:
        return {
            'dim': self.dim,
            'trials': self.trials,
            'accepted': self.accepted,
            'skipped': self.skipped,
            'counterexamples': self.counterexamples,
            'examples': self.examples,
            'degenerate': self.degenerate,
            'status': self.status,
        }


def nondegeneracy_probe(form: Union[MultiAffineForm, Callable[[np.ndarray], complex]],
                        dim: int,
                        trials: int,
                        rng: Optional[np.random.Generator] = None,
                        candidates: int = 6,
                        tolerance: float = None,
                        keep_examples: int = 10) -> ProbeReport:
    """Contrapositive probe of non-degeneracy.

    Samples x_1..x_d that do not lie in an affine subspace of dimension d − 2
    and looks for some x_0 among ``candidates`` random points plus the origin
    and the basis vectors with ω(x_0, x_1, ..., x_d) ≠ 0. Each sample without
    such an x_0 is a counterexample. This falsifies, it never proves.
    """
    rng = rng if rng is not None else np.random.default_rng(Config.DEFAULT_SEED)
    tolerance = tolerance if tolerance is not None else Config.tolerance('algebra')
    report = ProbeReport(dim=dim, trials=trials)

    if isinstance(form, MultiAffineForm):
        if form.arity != dim + 1 or form.dim != dim:
            raise InputRejectedError(f"Probe needs a form of arity {dim + 1} on C^{dim}")
        if form.is_zero():
            report.degenerate = True
            report.counterexamples = trials
            logger.info("Zero form flagged degenerate without sampling")
            return report

    fixed_candidates = np.vstack([np.zeros(dim), np.eye(dim)]).astype(complex)
    for _ in range(trials):
        rest = random_complex(rng, (dim, dim))
        if dim >= 2 and is_affinely_dependent(rest):
            report.skipped += 1
            continue
        report.accepted += 1
        pool = np.vstack([fixed_candidates, random_complex(rng, (candidates, dim))])
        scale = max(1.0, float(np.max(np.abs(rest))), float(np.max(np.abs(pool))))
        threshold = tolerance * scale ** (dim + 1)
        if not any(abs(form(np.vstack([x0, rest]))) > threshold for x0 in pool):
            report.counterexamples += 1
            if len(report.examples) < keep_examples:
                report.examples.append([[float(z.real), float(z.imag)] for z in rest.reshape(-1)])
    logger.info(f"Non-degeneracy probe on C^{dim}: {report.status} ({report.accepted} accepted samples)")
    return report


# ========= Conjecture exploration =========
@dataclass
class NullspaceResult:
    """Antisymmetric multi-affine forms of one homogeneity sector."""

    dim: int
    arity: int
    homogeneity: int
    dimension: int
    singular_values: List[float]
    basis: List[MultiAffineForm]
    sector_size: int

    def span_residual(self, form: MultiAffineForm) -> Optional[float]:
        """Relative distance of ``form`` from the span of the basis; None if shapes differ."""
        if (form.dim, form.arity) != (self.dim, self.arity):
            return None
        target = form.coefficients.reshape(-1)
        norm = float(np.linalg.norm(target))
        if norm == 0.0:
            return 0.0
        if not self.basis:
            return 1.0
        matrix = np.column_stack([b.coefficients.reshape(-1) for b in self.basis])
        projection = matrix @ (matrix.conj().T @ target)
        return float(np.linalg.norm(target - projection) / norm)

    def to_dict(self, atol: float = 1e-12) -> Dict[str, object]:
        return {
            'd': self.dim,
            'm': self.arity,
            'homogeneity': self.homogeneity,
            'dimension': self.dimension,
            'sector_size': self.sector_size,
            'singular_values': self.singular_values,
            'basis': [b.nonzero_entries(atol) for b in self.basis],
        }


def _sector_orbits(side: int, arity: int, homogeneity: int) -> Dict[tuple, List[tuple]]:
    """Multi-indices of one sector grouped by content, each group in lexicographic order."""
    orbits: Dict[tuple, List[tuple]] = {}
    for index in itertools.product(range(side), repeat=arity):
        if sum(1 for i in index if i > 0) != homogeneity:
            continue
        orbits.setdefault(tuple(sorted(index)), []).append(index)
    return {content: orbits[content] for content in sorted(orbits)}


def _swap_neighbours(index: tuple) -> List[tuple]:
    out = []
    for k in range(len(index) - 1):
        swapped = list(index)
        swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
        out.append(tuple(swapped))
    return out


def _orbit_svd(members: List[tuple]):
    position = {index: k for k, index in enumerate(members)}
    rows = []
    for index in members:
        for swapped in _swap_neighbours(index):
            row = np.zeros(len(members))
            row[position[index]] += 1.0
            row[position[swapped]] += 1.0
            rows.append(row)
    if not rows:
        return np.zeros(0), np.eye(len(members))
    # n(m-1) rows against n columns, so the economy vh is square
    _, singular, vh = scipy.linalg.svd(np.vstack(rows), full_matrices=False)
    return singular, vh


def _orbit_sign_solutions(members: List[tuple]) -> List[np.ndarray]:
    """Exact nullspace of the rows x_I + x_τI = 0 by sign propagation.

    A connected component contributes one alternating-sign vector unless some
    swap fixes an index (row 2 x_I = 0) or the signs clash.
    """
    position = {index: k for k, index in enumerate(members)}
    sign = np.zeros(len(members))
    solutions = []
    for start in range(len(members)):
        if sign[start]:
            continue
        sign[start] = 1.0
        component = [start]
        stack = [start]
        consistent = True
        while stack:
            i = stack.pop()
            for swapped in _swap_neighbours(members[i]):
                j = position[swapped]
                if j == i:
                    consistent = False
                elif not sign[j]:
                    sign[j] = -sign[i]
                    component.append(j)
                    stack.append(j)
                elif sign[j] != -sign[i]:
                    consistent = False
        if consistent:
            vec = np.zeros(len(members))
            vec[component] = sign[component] / np.sqrt(len(component))
            solutions.append(vec)
    return solutions


def conjecture_nullspace(dim: int, arity: int, homogeneity: int, rtol: float = None,
                         max_svd_block: int = None) -> NullspaceResult:
    """Nullspace of "form ∘ τ_k = −form" over adjacent transpositions τ_k.

    The unknowns are the coefficients of one homogeneity sector. Transpositions
    permute multi-indices without changing their content, so the system splits
    into independent blocks, one per multiset of slot indices, taken in
    lexicographic order. Blocks up to ``max_svd_block`` members are decomposed
    by SVD; larger ones are solved exactly by sign propagation and contribute
    no singular values.
    """
    rtol = rtol if rtol is not None else Config.tolerance('nullspace')
    max_svd_block = max_svd_block if max_svd_block is not None else Config.MAX_SVD_BLOCK
    _check_table_size(dim, arity)
    if not 0 <= homogeneity <= arity:
        raise InputRejectedError(f"Homogeneity must lie in 0..{arity}, got {homogeneity}")

    side = dim + 1
    blocks = []
    for members in _sector_orbits(side, arity, homogeneity).values():
        if len(members) <= max_svd_block:
            blocks.append((members, *_orbit_svd(members)))
        else:
            blocks.append((members, None, _orbit_sign_solutions(members)))
    propagated = sum(1 for _, singular, _ in blocks if singular is None)
    if propagated:
        logger.debug(f"{propagated} orbit block(s) above {max_svd_block} members solved by sign propagation")

    sector_size = sum(len(members) for members, _, _ in blocks)
    decomposed = [s for _, s, _ in blocks if s is not None]
    all_singular = np.concatenate(decomposed) if decomposed else np.zeros(0)
    sigma_max = float(all_singular.max()) if all_singular.size else 0.0
    threshold = rtol * sigma_max
    near = int(np.sum((all_singular > threshold) & (all_singular < 100 * threshold)))
    if near:
        logger.warning(f"{near} singular value(s) lie within 100× of the nullspace threshold {threshold:.3e}")

    basis = []
    for members, singular, vectors in blocks:
        if singular is not None:
            rank = int(np.sum(singular > threshold)) if sigma_max > 0 else 0
            vectors = vectors[rank:]
        for vec in vectors:
            coeffs = np.zeros((side,) * arity, dtype=complex)
            for value, index in zip(vec, members):
                coeffs[index] = value
            basis.append(MultiAffineForm(dim, arity, coeffs))

    singular_values = sorted((float(s) for s in all_singular), reverse=True)
    logger.debug(f"Nullspace d={dim} m={arity} h={homogeneity}: sector {sector_size}, dimension {len(basis)}")
    return NullspaceResult(
        dim=dim,
        arity=arity,
        homogeneity=homogeneity,
        dimension=len(basis),
        singular_values=singular_values,
        basis=basis,
        sector_size=sector_size,
    )


def explore_conjecture(dim: int, arity: int, rtol: float = None) -> List[NullspaceResult]:
    """Nullspaces of every homogeneity sector 0..m."""
    return [conjecture_nullspace(dim, arity, h, rtol) for h in range(arity + 1)]
