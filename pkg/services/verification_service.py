"""
Verification Service Module
Property suites behind the ``verify`` command

Every suite draws its random inputs from a generator seeded with the run
seed, so a suite produces the same records whether it runs alone or with the
others.
"""

import itertools
import logging
import math
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from config import Config
from services.affine_forms import (
    MultiAffineForm,
    affine_det,
    affine_det_form,
    antisymmetrize_generator,
    conjecture_nullspace,
    elimination_det,
    is_affinely_dependent,
    laplace_expand,
    nondegeneracy_probe,
    wedge_generator,
)
from services.collapse_service import (
    U_DIRECTION,
    V_DIRECTION,
    W_DIRECTION,
    CollapseService,
    affine_det2,
    computational_basis,
)
from services.domain.lagrangian import LagrangianTriple
from services.domain.measured_space import MeasuredSpace, WaveFunction
from services.domain.qubits import Morphism2, Triple
from services.errors import ConsistencyError, InputRejectedError
from services.kashiwara_service import (
    KashiwaraService,
    random_basis_change,
    random_graph_triple,
    random_symplectic,
)
from services.numerics import random_complex, relative_residual, scaled_residual
from services.report import Report
from services.slater_service import SlaterService, sample_space, sample_wave_function
from services.spin_operators import (
    affine_slater_state,
    basis_state,
    exchange_operator,
    s_squared_expectation,
    total_spin_operator,
)
from services.tensor_core import (
    DenseTensor,
    Permutation,
    all_permutations,
    antisymmetrize,
    exterior_dimension,
    permute_slots,
    wedge,
    wedge_scalar,
    wedge_vectors,
)

logger = logging.getLogger(__name__)

SUITES = ('tensor', 'collapse', 'traces', 'affine', 'generator', 'conjecture', 'kashiwara', 'slater', 'spin')


def x_vandermonde(points: np.ndarray) -> complex:
    """Π_{i<j} (x_j − x_i) over the first coordinates of the points."""
    xs = points[:, 0]
    value = 1.0 + 0j
    for i, j in itertools.combinations(range(len(xs)), 2):
        value *= xs[j] - xs[i]
    return value


def example_lagrangian_triple(tolerance: Optional[float] = None) -> LagrangianTriple:
    """(x-axis, y-axis, diagonal) in R^2."""
    bases = (np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]), np.array([[1.0], [1.0]]))
    return LagrangianTriple(1, bases, tolerance)


class VerificationService:
    """
    Service running the invariant suites of all library modules.
    """

    def __init__(self, seed: Optional[int] = None, overrides: Optional[Mapping[str, float]] = None):
        """
        Initialize the verification service.

        Args:
            seed: Seed of every suite's generator (Config.DEFAULT_SEED when omitted)
            overrides: Per-run tolerance overrides by name
        """
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        self.overrides = dict(overrides or {})
        for name in self.overrides:
            Config.tolerance(name)
        self.collapse = CollapseService(trace_tolerance=self.tol('trace'))
        self.kashiwara = KashiwaraService(zero_tolerance=self.tol('kashiwara'))
        self.slater = SlaterService()

    def tol(self, name: str) -> float:
        return Config.tolerance(name, self.overrides)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def run(self, suites: Optional[Sequence[str]] = None) -> Report:
        """
        Run the selected suites in canonical order.

        Args:
            suites: Suite names; all suites when omitted

        Returns:
            Report with every record of the selected suites
        """
        selected = list(SUITES) if not suites else list(suites)
        unknown = [s for s in selected if s not in SUITES]
        if unknown:
            raise InputRejectedError(f"Unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        runners: Dict[str, Callable[[Report], None]] = {
            'tensor': self.tensor_suite,
            'collapse': self.collapse_suite,
            'traces': self.traces_suite,
            'affine': self.affine_suite,
            'generator': self.generator_suite,
            'conjecture': self.conjecture_suite,
            'kashiwara': self.kashiwara_suite,
            'slater': self.slater_suite,
            'spin': self.spin_suite,
        }
        report = Report(command='verify')
        report.data['seed'] = self.seed
        report.data['suites'] = [s for s in SUITES if s in selected]
        for name in report.data['suites']:
            before = len(report.records)
            try:
                runners[name](report)
            except ConsistencyError as e:
                logger.error(f"Suite {name} aborted: {e}")
                report.expect(f'{name}.internal_consistency', False, measured=str(e))
            failed = sum(1 for r in report.records[before:] if not r.passed)
            logger.info(f"Suite {name}: {len(report.records) - before} checks, {failed} failed")
        return report

    # ----- tensor_core -----
    def tensor_suite(self, report: Report) -> None:
        rng = self.rng()
        tol = self.tol('algebra')

        worst = 0.0
        for _ in range(Config.TENSOR_TRIALS):
            dim = int(rng.integers(2, 4))
            degree = int(rng.integers(1, 4))
            t = DenseTensor(random_complex(rng, (dim,) * degree))
            once = antisymmetrize(t)
            worst = max(worst, scaled_residual(antisymmetrize(once).array, once.array, max(t.norm(), 1.0)))
        report.check('tensor.antisymmetrize_idempotent', worst, tol,
                     'antisymmetrizing twice equals antisymmetrizing once')

        worst = 0.0
        for degree in range(1, 5):
            t = DenseTensor(random_complex(rng, (3,) * degree))
            anti = antisymmetrize(t)
            for sigma in all_permutations(degree):
                residual = scaled_residual(permute_slots(anti, sigma).array, sigma.sign * anti.array,
                                           max(t.norm(), 1.0))
                worst = max(worst, residual)
        report.check('tensor.slot_permutation_sign', worst, self.tol('exact'),
                     'permuting slots of an antisymmetric tensor multiplies it by the sign')

        worst = 0.0
        for dim in range(2, 5):
            vs = list(random_complex(rng, (dim, dim)))
            via_tensor = wedge_vectors(vs).entry(range(dim)) * math.factorial(dim)
            worst = max(worst, relative_residual(via_tensor, wedge_scalar(vs)))
        report.check('tensor.wedge_scalar_is_top_component', worst, tol,
                     'x_1∧…∧x_d equals the determinant of (x_1, …, x_d)')

        multiplicative = all(
            s.compose(t).sign == s.sign * t.sign
            for p in range(1, 5) for s in all_permutations(p) for t in all_permutations(p)
        )
        parity = all(
            s.sign == (-1) ** s.transposition_count() for p in range(1, 5) for s in all_permutations(p)
        )
        report.expect('tensor.sign_multiplicative', multiplicative and parity,
                      reference='sign(σ∘τ) = sign(σ)·sign(τ) and sign is the transposition parity')

        dims = {f'{d},{p}': exterior_dimension(d, p) for d in range(1, 5) for p in range(0, d + 1)}
        binomial = all(dims[f'{d},{p}'] == math.comb(d, p) for d in range(1, 5) for p in range(0, d + 1))
        report.expect('tensor.exterior_dimensions', binomial, measured=dims,
                      reference='dim Λ^p(C^d) = C(d, p)')

        u, v, x = (random_complex(rng, 3) for _ in range(3))
        s1 = wedge_vectors([u])
        s2 = wedge_vectors([v, x])
        t1 = wedge_vectors([x])
        residual = max(
            scaled_residual(wedge(s1, s2).array, wedge(s2, s1).array, 1.0),
            scaled_residual(wedge(s1, t1).array, -wedge(t1, s1).array, 1.0),
        )
        report.check('tensor.graded_anticommutativity', residual, tol, 's∧t = (−1)^{pq} t∧s')

    # ----- collapse -----
    def collapse_suite(self, report: Report) -> None:
        rng = self.rng()
        svc = self.collapse

        worst = 0.0
        for _ in range(Config.COLLAPSE_TRIALS):
            t = Triple.random(rng)
            worst = max(worst, scaled_residual(svc.collapse(t), affine_det2(*t.points()), t.scale() ** 2))
        report.check('collapse.equals_affine_determinant', worst, self.tol('collapse'),
                     'the collapsed 3-fermion is det(b − a, c − a)')

        worst_theta = 0.0
        worst_tr1 = 0.0
        for _ in range(20):
            t = Triple.random(rng)
            a, b, c = t.points()
            blocks = svc.theta(svc.lambda_tensor(t))
            closed = svc.theta_closed_form(t)
            scale = t.scale() ** 2
            worst_theta = max(worst_theta,
                              scaled_residual(blocks.x_blocks, closed.x_blocks, scale),
                              scaled_residual(blocks.y_blocks, closed.y_blocks, scale))
            expected = [a[0] * b[1] - a[1] * b[0], c[0] * a[1] - c[1] * a[0], b[0] * c[1] - b[1] * c[0]]
            worst_tr1 = max(worst_tr1, scaled_residual(svc.tr1(blocks), expected, scale))
        report.check('collapse.theta_closed_form', worst_theta, self.tol('exact'),
                     'θ(Λ) = (a⊗(b, −c, 0), b⊗(−a, 0, c), c⊗(0, a, −b))')
        report.check('collapse.tr1_components', worst_tr1, self.tol('exact'),
                     'Tr_1 θ(Λ) = (a∧b, c∧a, b∧c)')

        a, b, c = random_complex(rng, (3, 2))
        ab = a[0] * b[1] - a[1] * b[0]
        k_aac = c[0] * a[1] - a[0] * c[1]
        cases = (
            ('aac', Triple(a, a, c), k_aac * U_DIRECTION),
            ('abb', Triple(a, b, b), ab * W_DIRECTION),
            ('aba', Triple(a, b, a), ab * V_DIRECTION),
        )
        for label, triple, expected in cases:
            residual = scaled_residual(svc.omega1(triple), expected, triple.scale() ** 2)
            report.check(f'collapse.degenerate_{label}', residual, self.tol('exact'),
                         'tr1 on a degenerate triple lies on a single direction')
        report.observe('collapse.degenerate_direction_labels',
                       {'aac': 'u', 'abb': 'w', 'aba': 'v'},
                       'direct expansion assigns w to (a,b,b) and v to (a,b,a)')
        report.expect('collapse.w_is_v_minus_u', bool(np.array_equal(W_DIRECTION, V_DIRECTION - U_DIRECTION)),
                      reference='w = v − u')

        projector = svc.quotient_projector()
        residual = max(
            scaled_residual(projector @ projector, projector),
            scaled_residual(projector @ U_DIRECTION, 0.0),
            scaled_residual(projector @ V_DIRECTION, 0.0),
        )
        report.check('collapse.quotient_projector', residual, self.tol('exact'),
                     'rank-1 projector annihilating u and v')
        report.expect('collapse.quotient_projector_rank', int(np.linalg.matrix_rank(projector)) == 1,
                      measured=int(np.linalg.matrix_rank(projector)))

        worst = 0.0
        for _ in range(Config.MORPHISM_TRIALS):
            t = Triple.random(rng)
            sigma = Morphism2.random(rng)
            worst = max(worst, relative_residual(svc.collapse_with_morphism(t, sigma), sigma.det * svc.collapse(t)))
        report.check('collapse.morphism_covariance', worst, self.tol('morphism'),
                     '(σ⊗σ)Λ collapses to det(σ)·det(b − a, c − a)')

    # ----- traces -----
    def traces_suite(self, report: Report) -> None:
        rng = self.rng()
        svc = self.collapse
        basis = computational_basis()

        worst = max(abs(svc.rho_trace_AC(b, bb)) for b in basis for bb in basis)
        report.check('traces.trace_AC_on_basis', worst, self.tol('exact'),
                     'Tr_{A,C} ρ vanishes on computational-basis arguments')

        worst = 0.0
        nonzero = 0
        for _ in range(Config.TRACE_TRIALS):
            b, bb = random_complex(rng, (2, 2))
            worst = max(worst, relative_residual(svc.rho_trace_AC(b, bb), svc.rho_trace_AC_closed_form(b, bb)))
            args = random_complex(rng, (4, 2))
            if abs(svc.rho_trace_A(*args)) > self.tol('exact'):
                nonzero += 1
        report.check('traces.trace_AC_closed_form', worst, self.tol('exact'),
                     'Tr_{A,C} ρ(b; b′) = 2(b_1 + b_2 − 1)(b′_1 + b′_2 − 1)')
        required = math.ceil(0.99 * Config.TRACE_TRIALS)
        report.expect('traces.trace_A_nonzero_generic', nonzero >= required, measured=nonzero,
                      reference='Tr_A ρ is a non-zero kernel')

        example = svc.rho_trace_A([2, 0], [0, 2], [2, 0], [0, 2])
        report.check('traces.trace_A_example', abs(example - 8.0), self.tol('exact'),
                     'Tr_A ρ at b = (2, 0), c = (0, 2) equals 8')

        b, c, bb, cc = rng.standard_normal((4, 2))
        report.expect('traces.trace_A_swap_symmetry', svc.rho_trace_A(b, c, bb, cc) == svc.rho_trace_A(bb, cc, b, c),
                      reference='real kernel is symmetric under ket/bra exchange')

        report.observe('traces.trace_A_basis_matrix_max', float(np.max(np.abs(svc.rho_trace_A_matrix()))),
                       'Tr_A ρ on basis arguments; non-zero only as a continuous kernel')
        report.observe('traces.trace_AC_basis_matrix_max', float(np.max(np.abs(svc.rho_trace_AC_matrix()))),
                       'Tr_{A,C} ρ on basis arguments')

    # ----- affine forms -----
    def affine_suite(self, report: Report) -> None:
        rng = self.rng()
        tol = self.tol('affine')
        dependence = self.tol('dependence')

        worst = 0.0
        for dim in (2, 3, 4):
            points = random_complex(rng, (dim + 1, dim))
            base = affine_det(points)
            for sigma in all_permutations(dim + 1):
                worst = max(worst, relative_residual(affine_det(points[list(sigma.mapping)]), sigma.sign * base))
        report.check('affine.antisymmetry', worst, tol, 'affine determinant is antisymmetric in all arguments')

        worst_shift = 0.0
        worst_expansion = 0.0
        for _ in range(Config.AFFINE_TRIALS):
            dim = int(rng.integers(2, 5))
            points = random_complex(rng, (dim + 1, dim))
            shifted = points + random_complex(rng, dim)
            worst_shift = max(worst_shift, relative_residual(affine_det(shifted), affine_det(points)))
            (xa, ya), (xb, yb), (xc, yc) = random_complex(rng, (3, 2))
            expansion = (xb - xa) * (yc - ya) - (xc - xa) * (yb - ya)
            worst_expansion = max(worst_expansion,
                                  relative_residual(affine_det([[xa, ya], [xb, yb], [xc, yc]]), expansion))
        report.check('affine.translation_invariance', worst_shift, tol, 'translation leaves it unchanged')
        report.check('affine.coordinate_expansion', worst_expansion, tol,
                     '(x_B − x_A)(y_C − y_A) − (x_C − x_A)(y_B − y_A)')

        consistent = 0
        total = 0
        for dim in (2, 3):
            for _ in range(Config.AFFINE_TRIALS // 2):
                anchor = random_complex(rng, dim)
                spread = random_complex(rng, (dim, dim - 1))
                dependent = anchor + (spread @ random_complex(rng, (dim - 1, dim + 1))).T
                independent = random_complex(rng, (dim + 1, dim))
                scale = max(1.0, float(np.max(np.abs(dependent)))) ** dim
                consistent += int(is_affinely_dependent(dependent, dependence)
                                  and abs(affine_det(dependent)) <= tol * scale)
                consistent += int(not is_affinely_dependent(independent, dependence)
                                  and abs(affine_det(independent)) > tol)
                total += 2
        report.expect('affine.zero_iff_dependent', consistent == total, measured=f'{consistent}/{total}',
                      reference='affine determinant vanishes iff the points are affinely dependent')

        worst = 0.0
        for _ in range(Config.LAPLACE_TRIALS):
            dim = int(rng.integers(1, 6))
            matrix = random_complex(rng, (dim, dim))
            worst = max(worst, relative_residual(laplace_expand(matrix), elimination_det(matrix)))
        report.check('affine.laplace_expansion', worst, tol, 'Laplace rule equals the elimination determinant')

        worst = 0.0
        for dim in (2, 3):
            form = affine_det_form(dim)
            extracted = MultiAffineForm.from_callable(affine_det, dim, dim + 1)
            worst = max(worst, scaled_residual(extracted.coefficients, form.coefficients))
            for _ in range(10):
                points = random_complex(rng, (dim + 1, dim))
                worst = max(worst, relative_residual(form(points), affine_det(points)))
        report.check('affine.coefficient_table', worst, tol, 'affine determinant as a multi-affine form')

        probe = nondegeneracy_probe(affine_det_form(2), 2, Config.PROBE_TRIALS, rng, tolerance=self.tol('algebra'))
        report.expect('affine.probe_affine_det', probe.counterexamples == 0 and not probe.degenerate,
                      measured=probe.to_dict(), reference='affine determinant is non-degenerate')
        zero = nondegeneracy_probe(MultiAffineForm.zero(2, 3), 2, 10, rng)
        report.expect('affine.probe_zero_form', zero.degenerate, measured=zero.status)
        vandermonde = nondegeneracy_probe(x_vandermonde, 2, 100, rng, tolerance=self.tol('algebra'))
        report.observe('affine.probe_vandermonde', vandermonde.status,
                       'non-degeneracy probe of the x-coordinate Vandermonde product')

    # ----- generator antisymmetrization -----
    def generator_suite(self, report: Report) -> None:
        tol = self.tol('generator')

        two = antisymmetrize_generator(wedge_generator(2), 3)
        report.check('generator.d2_ab', scaled_residual(two.coefficients, 2.0 * affine_det_form(2).coefficients),
                     tol, 'antisymmetrized ab equals 2·affine determinant')

        three = antisymmetrize_generator(wedge_generator(3), 4)
        report.check('generator.d3_abc', scaled_residual(three.coefficients, -6.0 * affine_det_form(3).coefficients),
                     tol, 'antisymmetrized abc equals 6(abc − bcd + cda − dab) = −6·affine determinant')

        zero = antisymmetrize_generator(MultiAffineForm.zero(3, 4))
        report.expect('generator.zero', zero.is_zero(), reference='linear in the generator')

        worst = 0.0
        for k in range(3):
            swap = Permutation.transposition(4, k, k + 1)
            worst = max(worst, scaled_residual(three.permuted(swap).coefficients, -three.coefficients))
        report.check('generator.adjacent_swaps', worst, tol, 'output changes sign under adjacent swaps')

    # ----- conjecture exploration -----
    def conjecture_suite(self, report: Report) -> None:
        rtol = self.tol('nullspace')
        top = conjecture_nullspace(2, 3, 2, rtol)
        residual = top.span_residual(affine_det_form(2))
        report.expect('conjecture.d2_m3_h2_dimension', top.dimension == 1, measured=top.dimension)
        report.check('conjecture.d2_m3_affine_det_in_span', residual, self.tol('span'),
                     'affine determinant spans the antisymmetric degree-2 sector')
        for h in (1, 0):
            result = conjecture_nullspace(2, 3, h, rtol)
            report.expect(f'conjecture.d2_m3_h{h}_dimension', result.dimension == 0, measured=result.dimension)
        wider = {str(h): conjecture_nullspace(2, 4, h, rtol).dimension for h in range(5)}
        report.observe('conjecture.d2_m4_dimensions', wider,
                       'antisymmetric multi-affine forms in more than d + 1 arguments')

    # ----- Kashiwara index -----
    def kashiwara_suite(self, report: Report) -> None:
        rng = self.rng()
        svc = self.kashiwara
        triple = example_lagrangian_triple(self.tol('lagrangian'))

        expected_q = np.array([[0.0, 0.5, -0.5], [0.5, 0.0, -0.5], [-0.5, -0.5, 0.0]])
        report.check('kashiwara.example_form', scaled_residual(svc.kashiwara_q(triple), expected_q),
                     self.tol('exact'), 'Q(s, t, r) = st − tr − rs')
        index = svc.kashiwara_index(triple)
        report.check('kashiwara.example_eigenvalues', scaled_residual(index.eigenvalues, [-0.5, -0.5, 1.0]),
                     self.tol('kashiwara'), 'eigenvalues {1, −½, −½}')
        report.expect('kashiwara.example_signature', index.signature == -1, measured=index.to_dict())
        swapped = svc.kashiwara_index(triple.permuted((1, 0, 2)))
        report.expect('kashiwara.swap_flips_signature', swapped.signature == 1, measured=swapped.signature)
        repeated = svc.kashiwara_index(triple.permuted((0, 1, 0)))
        report.expect('kashiwara.repeated_subspace_degenerate', repeated.n_zero > 0, measured=repeated.n_zero)

        stable = True
        flipped = True
        signatures = []
        for n in (1, 2):
            for _ in range(Config.SYMPLECTIC_TRIALS):
                generic = random_graph_triple(n, rng)
                reference = svc.kashiwara_index(generic).signature
                moved = generic.transformed(random_symplectic(n, rng))
                rebased = generic.rebased([random_basis_change(n, rng) for _ in range(3)])
                stable &= svc.kashiwara_index(moved).signature == reference
                stable &= svc.kashiwara_index(rebased).signature == reference
                flipped &= svc.kashiwara_index(generic.permuted((0, 2, 1))).signature == -reference
                signatures.append(reference)
        report.expect('kashiwara.symplectic_and_basis_invariance', stable, measured=signatures,
                      reference='index is invariant under symplectic maps and basis changes')
        report.expect('kashiwara.odd_permutation_negates', flipped)

    # ----- Slater determinants -----
    def slater_suite(self, report: Report) -> None:
        rng = self.rng()
        svc = self.slater

        worst_one = 0.0
        worst_two = 0.0
        worst_center = 0.0
        for _ in range(Config.SLATER_TRIALS):
            k = int(rng.integers(3, 13))
            space = sample_space(k, rng)
            phi = sample_wave_function(k, rng)
            scale = max(phi.scale(), 1.0)
            one = svc.one_point(phi, space)
            two = svc.two_point(phi, space)
            worst_one = max(worst_one, abs(one) / scale ** 3)
            worst_two = max(worst_two, relative_residual(two, 6.0 * svc.gram_determinant(phi, space)))
            centered = svc.center(phi, space)
            worst_center = max(worst_center,
                               relative_residual(svc.two_point(centered, space), two),
                               abs(svc.one_point(centered, space)) / scale ** 3)
        report.check('slater.one_point_vanishes', worst_one, self.tol('one_point'), '⟨Ψ⟩ = 0')
        report.check('slater.two_point_gram', worst_two, self.tol('two_point'), '⟨Ψ²⟩ = 6·det(Gram)')
        report.check('slater.centering_invariance', worst_center, self.tol('algebra'),
                     'centering leaves the n-point functions unchanged')

        space = sample_space(6, rng)
        phi = sample_wave_function(6, rng)
        labels = [0, 3, 5]
        base = svc.psi(phi, space, labels)
        worst = max(relative_residual(svc.psi(phi, space, sigma.apply(labels)), sigma.sign * base)
                    for sigma in all_permutations(3))
        report.check('slater.psi_antisymmetry', worst, self.tol('exact'), 'Ψ is antisymmetric in its nodes')
        report.check('slater.psi_repeated_node', abs(svc.psi(phi, space, [1, 1, 4])), self.tol('exact'))

        reduced = svc.reduce(phi, space)
        report.check('slater.orthonormal_two_point', abs(svc.two_point(reduced, space) / 6.0 - 1.0),
                     self.tol('two_point'), '⟨Ψ²⟩/6 = 1 for orthonormal centered components')

        self._symmetric_m_checks(report, rng)
        self._n_point_checks(report, rng)
        self._gamma_checks(report, rng)

    def _symmetric_m_checks(self, report: Report, rng: np.random.Generator) -> None:
        svc = self.slater
        tol = self.tol('symmetric_m')
        k = 6
        space = sample_space(k, rng)
        phi = sample_wave_function(k, rng)
        lhs, rhs = svc.symmetric_m_identity(phi, space, np.ones((k, k, k)), tolerance=tol)
        report.check('slater.symmetric_m_constant',
                     max(relative_residual(lhs, rhs), relative_residual(rhs, svc.two_point(phi, space))), tol,
                     'M ≡ 1 reduces both sides to ⟨Ψ²⟩')

        f = rng.standard_normal(k)
        lhs, rhs = svc.symmetric_m_identity(phi, space, lambda i, j, l: f[i] + f[j] + f[l], tolerance=tol)
        report.check('slater.symmetric_m_additive', relative_residual(lhs, rhs), tol)

        worst = 0.0
        for _ in range(Config.SYMMETRIC_M_TRIALS):
            raw = rng.standard_normal((k, k, k))
            table = sum(np.transpose(raw, p) for p in itertools.permutations(range(3))) / 6.0
            lhs, rhs = svc.symmetric_m_identity(phi, space, table, tolerance=tol)
            worst = max(worst, relative_residual(lhs, rhs))
        report.check('slater.symmetric_m_random', worst, tol,
                     '3∫ab·M·Ψ = ∫Ψ·M·Ψ for symmetric M')

        try:
            svc.symmetric_m_identity(phi, space, rng.standard_normal((k, k, k)), tolerance=tol)
            rejected = False
        except InputRejectedError:
            rejected = True
        report.expect('slater.symmetric_m_rejects_asymmetric', rejected)

    def _n_point_checks(self, report: Report, rng: np.random.Generator) -> None:
        worst = 0.0
        for dim, k in ((1, 8), (2, 7), (3, 6)):
            space = sample_space(k, rng)
            phi = sample_wave_function(k, rng, dim)
            result = self.slater.n_point(phi, space)
            worst = max(worst, relative_residual(result.two_point, result.gram_prediction))
        report.check('slater.n_point_gram', worst, self.tol('two_point'), '⟨Ψ²⟩ = (d+1)!·det(Gram)')

    def _gamma_checks(self, report: Report, rng: np.random.Generator) -> None:
        svc = self.slater
        k = 6
        space = sample_space(k, rng)
        reduced = svc.reduce(sample_wave_function(k, rng), space)
        values = reduced.values
        tol = self.tol('gamma')

        gamma1 = svc.gamma1(reduced, space)
        orbital = values @ values.T
        report.check('slater.gamma1_orbital_sum', relative_residual(gamma1, orbital), tol,
                     'γ^(1)(x′, x) = Σ_j φ̃_j(x′)φ̃_j(x) for reduced centered variables')
        trace = float(np.sum(space.weights * np.diag(gamma1)))
        report.check('slater.gamma1_trace', abs(trace - 2.0), tol, 'weighted trace of γ^(1) is 2')
        report.observe('slater.gamma1_single_component_gap',
                       float(np.max(np.abs(gamma1 - np.outer(values[:, 0], values[:, 0])))),
                       'distance of γ^(1) from the single-component product φ̃_1(x′)φ̃_1(x)')

        raw = sample_wave_function(k, rng)
        report.check('slater.gamma1_closed_form',
                     relative_residual(svc.gamma1(raw, space), svc.gamma1_closed_form(raw, space)), tol)
        flat = WaveFunction(np.column_stack([raw.values[:, 0], np.zeros(k)]))
        report.check('slater.gamma1_vanishing_component', float(np.max(np.abs(svc.gamma1(flat, space)))), tol,
                     'φ_2 = 0 gives γ^(1) = 0')

        kernel = svc.gamma2(reduced, space).matrix()
        report.check('slater.gamma2_closed_form',
                     relative_residual(kernel, svc.gamma2_closed_form(reduced, space)), tol,
                     'difference products plus the product of 2×2 determinants')
        big = kernel.reshape(k, k, k, k)
        scale = max(float(np.max(np.abs(kernel))), 1.0)
        symmetry = max(
            scaled_residual(kernel, kernel.T, scale),
            scaled_residual(big, -np.transpose(big, (1, 0, 2, 3)), scale),
            scaled_residual(big, -np.transpose(big, (0, 1, 3, 2)), scale),
        )
        report.check('slater.gamma2_symmetries', symmetry, self.tol('exact'),
                     'Hermitian and antisymmetric within each pair')
        lowest = float(np.min(np.linalg.eigvalsh(kernel)))
        report.check('slater.gamma2_semidefinite', max(0.0, -lowest), self.tol('psd'),
                     'γ^(2) has no negative eigenvalues')

        oracle_space = sample_space(5, rng)
        oracle_phi = sample_wave_function(5, rng)
        report.check('slater.density_oracle', self._density_oracle_residual(oracle_phi, oracle_space),
                     self.tol('algebra'), 'kernels agree with sums of generic affine determinants')

    def _density_oracle_residual(self, phi: WaveFunction, space: MeasuredSpace) -> float:
        """Compare γ^(1) and γ^(2) against loops over the generic affine determinant."""
        svc = self.slater
        k = space.size
        w = space.weights
        v = phi.values

        def psi(i, j, l):
            return affine_det(v[[i, j, l]]).real

        gamma1 = np.zeros((k, k))
        for p, q in itertools.product(range(k), repeat=2):
            gamma1[p, q] = sum(w[a] * w[c] * psi(a, p, c) * psi(a, q, c)
                               for a, c in itertools.product(range(k), repeat=2))
        gamma1 = 0.5 * gamma1 - svc.gram_determinant(phi, space)

        kernel = svc.gamma2(phi, space)
        scale = max(float(np.max(np.abs(kernel.matrix()))), 1.0)
        worst = relative_residual(svc.gamma1(phi, space), gamma1)
        for p1, p2, q1, q2 in ((0, 1, 2, 3), (4, 2, 1, 0), (3, 3, 0, 1), (1, 4, 4, 2)):
            expected = sum(w[a] * psi(a, p1, p2) * psi(a, q1, q2) for a in range(k))
            worst = max(worst, scaled_residual(kernel.entry(p1, p2, q1, q2), expected, scale))
        return worst

    # ----- spin operators -----
    def spin_suite(self, report: Report) -> None:
        tol = self.tol('spin')
        p = exchange_operator()
        exact = all(
            np.array_equal(p @ basis_state(f'{i}{j}'), basis_state(f'{j}{i}'))
            for i, j in itertools.product('01', repeat=2)
        )
        report.expect('spin.exchange_swaps', exact, reference='P|ij⟩ = |ji⟩')
        report.expect('spin.exchange_involution', bool(np.array_equal(p @ p, np.eye(4))), reference='P² = Id')

        s2 = total_spin_operator(3)
        report.check('spin.s_squared_hermitian', scaled_residual(s2, s2.conj().T), tol)
        report.check('spin.s_squared_quartet', abs(s_squared_expectation(basis_state('000'), tol) - 15.0), tol,
                     '⟨000|S²|000⟩ = 15')
        doublet = (basis_state('010') - basis_state('100')) / math.sqrt(2.0)
        report.check('spin.s_squared_doublet', abs(s_squared_expectation(doublet, tol) - 3.0), tol,
                     'S² = 3 on the antisymmetric doublet')

        amplitudes = affine_slater_state()
        try:
            s_squared_expectation(amplitudes, tol)
            rejected = False
        except InputRejectedError:
            rejected = True
        report.expect('spin.affine_slater_state_rejected', rejected,
                      measured=float(np.max(np.abs(amplitudes))),
                      reference='affine Slater amplitudes on basis points all vanish')


def run_verification(seed: Optional[int] = None, overrides: Optional[Mapping[str, float]] = None,
                     suites: Optional[List[str]] = None) -> Report:
    return VerificationService(seed, overrides).run(suites)
