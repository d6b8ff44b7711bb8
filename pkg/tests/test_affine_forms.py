"""
Test module for affine determinants, multi-affine forms and the nullspace exploration
"""

import math
import os
import sys
import time
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.affine_forms import (
    MultiAffineForm,
    affine_det,
    affine_det_form,
    antisymmetrize_generator,
    conjecture_nullspace,
    determinant_form,
    elimination_det,
    explore_conjecture,
    is_affinely_dependent,
    laplace_expand,
    nondegeneracy_probe,
    wedge_generator,
)
from services.domain.point_config import PointConfig
from services.errors import InputRejectedError, UnsupportedSizeError
from services.tensor_core import Permutation


class TestAffineDeterminant(unittest.TestCase):
    """Test cases for affine_det and affine dependence"""

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_simplex(self):
        self.assertAlmostEqual(affine_det([[0, 0], [1, 0], [0, 1]]), 1.0)
        self.assertAlmostEqual(affine_det([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]), 1.0)

    def test_collinear(self):
        self.assertAlmostEqual(abs(affine_det([[1, 2], [3, 4], [5, 6]])), 0.0)
        self.assertTrue(is_affinely_dependent([[1, 2], [3, 4], [5, 6]]))

    def test_wrong_point_count(self):
        with self.assertRaises(InputRejectedError):
            affine_det([[0, 0], [1, 0]])

    def test_translation_invariance(self):
        for dim in range(1, 5):
            cfg = PointConfig.random(self.rng, dim)
            shifted = cfg.translated(self.rng.standard_normal(dim))
            self.assertLessEqual(abs(affine_det(shifted) - affine_det(cfg)),
                                 1e-9 * max(1.0, shifted.scale() ** dim))

    def test_antisymmetry_under_reordering(self):
        for dim in range(1, 5):
            cfg = PointConfig.random(self.rng, dim)
            base = affine_det(cfg)
            for k in range(dim):
                order = list(range(dim + 1))
                order[k], order[k + 1] = order[k + 1], order[k]
                self.assertLessEqual(abs(affine_det(cfg.reordered(order)) + base),
                                     1e-9 * max(1.0, cfg.scale() ** dim))

    def test_dependence_threshold(self):
        self.assertFalse(is_affinely_dependent(PointConfig.random(self.rng, 3)))
        cfg = PointConfig.random(self.rng, 2, count=2)
        self.assertFalse(is_affinely_dependent(cfg))
        self.assertTrue(is_affinely_dependent([[1.0, 1.0], [1.0, 1.0]]))


class TestDeterminants(unittest.TestCase):
    """Test cases for Laplace expansion against elimination"""

    def test_agreement(self):
        rng = np.random.default_rng(5)
        for n in range(1, 6):
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            self.assertAlmostEqual(abs(laplace_expand(m) - elimination_det(m)), 0.0, places=9)

    def test_envelope(self):
        with self.assertRaises(UnsupportedSizeError):
            laplace_expand(np.eye(7))


class TestMultiAffineForm(unittest.TestCase):
    """Test cases for coefficient tables and their operations"""

    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_affine_det_form_matches_affine_det(self):
        for dim in range(1, 4):
            form = affine_det_form(dim)
            for _ in range(5):
                pts = self.rng.standard_normal((dim + 1, dim))
                self.assertAlmostEqual(abs(form(pts) - affine_det(pts)), 0.0, places=9)

    def test_from_callable_recovers_coefficients(self):
        recovered = MultiAffineForm.from_callable(affine_det, 2, 3)
        np.testing.assert_allclose(recovered.coefficients, affine_det_form(2).coefficients, atol=1e-12)

    def test_homogeneity(self):
        form = affine_det_form(2)
        self.assertEqual(form.sector_degrees(), [2])
        self.assertTrue(form.restrict_to_sector(1).is_zero())

    def test_permuted_matches_argument_order(self):
        form = determinant_form(2, 3, [0, 1])
        sigma = Permutation((1, 2, 0))
        pts = self.rng.standard_normal((3, 2))
        expected = form(pts[list(sigma.mapping)])
        self.assertAlmostEqual(abs(form.permuted(sigma)(pts) - expected), 0.0, places=12)

    def test_padded_ignores_extra_arguments(self):
        form = wedge_generator(2, 2)
        pts = self.rng.standard_normal((3, 2))
        self.assertAlmostEqual(abs(form.padded(3)(pts) - form(pts[:2])), 0.0, places=12)

    def test_shape_checks(self):
        with self.assertRaises(InputRejectedError):
            affine_det_form(2) + affine_det_form(3)
        with self.assertRaises(InputRejectedError):
            affine_det_form(2)([[0, 0], [1, 1]])
        with self.assertRaises(InputRejectedError):
            determinant_form(2, 3, [0, 0])


class TestGeneratorAntisymmetrization(unittest.TestCase):
    """Test cases for antisymmetrize_generator"""

    def test_plane(self):
        result = antisymmetrize_generator(wedge_generator(2))
        np.testing.assert_allclose(result.coefficients, 2.0 * affine_det_form(2).coefficients, atol=1e-12)

    def test_space(self):
        result = antisymmetrize_generator(wedge_generator(3))
        np.testing.assert_allclose(result.coefficients, -6.0 * affine_det_form(3).coefficients, atol=1e-12)

    def test_result_is_antisymmetric(self):
        result = antisymmetrize_generator(wedge_generator(2))
        swap = Permutation.transposition(3, 0, 2)
        np.testing.assert_allclose(result.permuted(swap).coefficients, -result.coefficients, atol=1e-12)

    def test_too_many_arguments_vanish(self):
        self.assertTrue(antisymmetrize_generator(wedge_generator(1), 3).is_zero(atol=1e-12))

    def test_envelope(self):
        with self.assertRaises(UnsupportedSizeError):
            antisymmetrize_generator(wedge_generator(1), 7)


class TestNondegeneracyProbe(unittest.TestCase):
    """Test cases for the Monte Carlo falsifier"""

    def test_affine_det_has_no_counterexample(self):
        for dim in (1, 2, 3):
            report = nondegeneracy_probe(affine_det_form(dim), dim, 50, np.random.default_rng(dim))
            self.assertEqual(report.counterexamples, 0)
            self.assertEqual(report.status, 'no counterexample found')
            self.assertEqual(report.accepted + report.skipped, 50)

    def test_zero_form_is_degenerate(self):
        report = nondegeneracy_probe(MultiAffineForm.zero(2, 3), 2, 10)
        self.assertTrue(report.degenerate)
        self.assertEqual(report.to_dict()['status'], 'degenerate')

    def test_vanishing_callable_gives_counterexamples(self):
        report = nondegeneracy_probe(lambda pts: 0.0, 2, 20, np.random.default_rng(1), keep_examples=3)
        self.assertEqual(report.counterexamples, report.accepted)
        self.assertEqual(len(report.examples), 3)
        self.assertEqual(report.status, 'counterexamples found')

    def test_arity_mismatch(self):
        with self.assertRaises(InputRejectedError):
            nondegeneracy_probe(affine_det_form(2), 3, 5)


class TestConjectureNullspace(unittest.TestCase):
    """Test cases for the nullspace of antisymmetric multi-affine forms"""

    def test_plane_three_points(self):
        dims = [r.dimension for r in explore_conjecture(2, 3)]
        self.assertEqual(dims, [0, 0, 1, 0])

    def test_affine_det_spans_its_sector(self):
        result = conjecture_nullspace(2, 3, 2)
        self.assertLess(result.span_residual(affine_det_form(2)), 1e-8)
        self.assertLess(conjecture_nullspace(3, 4, 3).span_residual(affine_det_form(3)), 1e-8)

    def test_too_many_points(self):
        self.assertTrue(all(r.dimension == 0 for r in explore_conjecture(2, 4)))

    def test_dimension_counts(self):
        for dim in (1, 2, 3):
            for arity in range(1, dim + 2):
                for h in range(arity + 1):
                    expected = math.comb(dim, h) if h in (arity - 1, arity) else 0
                    result = conjecture_nullspace(dim, arity, h)
                    self.assertEqual(result.dimension, expected, msg=f"d={dim} m={arity} h={h}")

    def test_long_arity_on_the_line(self):
        for arity in (13, 16):
            started = time.perf_counter()
            results = explore_conjecture(1, arity)
            self.assertLess(time.perf_counter() - started, 30.0, msg=f"m={arity}")
            self.assertEqual([r.dimension for r in results], [0] * (arity + 1))
            self.assertEqual(sum(r.sector_size for r in results), 2 ** arity)
            self.assertEqual([r.sector_size for r in results], [math.comb(arity, h) for h in range(arity + 1)])

    def test_sign_propagation_matches_svd(self):
        for dim, arity in ((2, 3), (3, 4), (2, 5)):
            for h in range(arity + 1):
                by_svd = conjecture_nullspace(dim, arity, h)
                by_signs = conjecture_nullspace(dim, arity, h, max_svd_block=0)
                self.assertEqual(by_signs.dimension, by_svd.dimension, msg=f"d={dim} m={arity} h={h}")
                self.assertEqual(by_signs.singular_values, [])
        exact = conjecture_nullspace(3, 4, 3, max_svd_block=0)
        self.assertLess(exact.span_residual(affine_det_form(3)), 1e-12)

    def test_basis_vectors_are_antisymmetric(self):
        for form in conjecture_nullspace(3, 3, 2).basis:
            for k in range(2):
                swap = Permutation.transposition(3, k, k + 1)
                np.testing.assert_allclose(form.permuted(swap).coefficients, -form.coefficients, atol=1e-10)

    def test_invalid_homogeneity(self):
        with self.assertRaises(InputRejectedError):
            conjecture_nullspace(2, 3, 5)

    def test_span_residual_shape_mismatch(self):
        self.assertIsNone(conjecture_nullspace(2, 3, 2).span_residual(affine_det_form(3)))


if __name__ == '__main__':
    unittest.main()
