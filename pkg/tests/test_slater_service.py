"""
Test module for affine Slater determinants on finite measured spaces
"""

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import Config
from services.domain.measured_space import MeasuredSpace, WaveFunction
from services.errors import InputRejectedError, UnsupportedSizeError
from services.slater_service import SlaterService, sample_space, sample_wave_function


class TestMeasuredSpace(unittest.TestCase):
    """Test cases for MeasuredSpace and WaveFunction validation"""

    def test_uniform(self):
        space = MeasuredSpace.uniform(4)
        self.assertEqual(space.size, 4)
        self.assertEqual(space.nodes, (0, 1, 2, 3))

    def test_rejects_bad_weights(self):
        with self.assertRaises(InputRejectedError):
            MeasuredSpace([0.5, 0.6])
        with self.assertRaises(InputRejectedError):
            MeasuredSpace([1.5, -0.5])
        with self.assertRaises(InputRejectedError):
            MeasuredSpace([1.0])

    def test_weights_tolerance(self):
        with self.assertRaises(InputRejectedError):
            MeasuredSpace([0.5, 0.4999])
        space = MeasuredSpace([0.5, 0.4999], tolerance=1e-3)
        self.assertEqual(space.tolerance, 1e-3)
        self.assertEqual(MeasuredSpace.uniform(2).tolerance, Config.tolerance('weights'))

    def test_labels(self):
        space = MeasuredSpace([0.25, 0.75], nodes=['left', 'right'])
        self.assertEqual(space.index_of('right'), 1)
        with self.assertRaises(InputRejectedError):
            space.index_of('middle')
        with self.assertRaises(InputRejectedError):
            MeasuredSpace([0.5, 0.5], nodes=['x', 'x'])

    def test_normalized(self):
        space = MeasuredSpace.normalized([1.0, 3.0])
        np.testing.assert_allclose(space.weights, [0.25, 0.75])

    def test_wave_function_checks(self):
        with self.assertRaises(InputRejectedError):
            WaveFunction([[1j, 0.0]])
        with self.assertRaises(InputRejectedError):
            WaveFunction([[np.nan, 0.0]])
        with self.assertRaises(InputRejectedError):
            WaveFunction([[1.0, 0.0]]).check_space(MeasuredSpace.uniform(2))


class TestSlaterMoments(unittest.TestCase):
    """Test cases for centering, Ψ and the n-point functions"""

    def setUp(self):
        self.service = SlaterService()
        self.rng = np.random.default_rng(1729)
        self.space = sample_space(8, self.rng)
        self.phi = sample_wave_function(8, self.rng)

    def test_center(self):
        centered = self.service.center(self.phi, self.space)
        self.assertLess(centered.residual_mean(self.space), 1e-12)
        np.testing.assert_allclose(centered.values + centered.mean, self.phi.values, atol=1e-12)

    def test_reduce_whitens(self):
        reduced = self.service.reduce(self.phi, self.space)
        np.testing.assert_allclose(self.service.gram_matrix(reduced, self.space), np.eye(2), atol=1e-10)

    def test_reduce_rejects_dependent_components(self):
        values = np.column_stack([self.phi.values[:, 0], np.zeros(8)])
        with self.assertRaises(InputRejectedError):
            self.service.reduce(WaveFunction(values), self.space)

    def test_psi_decomposition(self):
        tensor = self.service.psi_tensor(self.phi)
        self.assertAlmostEqual(tensor[1, 4, 6], self.service.psi(self.phi, self.space, [1, 4, 6]), places=10)
        self.assertEqual(tensor[2, 2, 5], 0.0)

    def test_psi_by_label(self):
        space = MeasuredSpace([0.2, 0.3, 0.5], nodes=['a', 'b', 'c'])
        phi = WaveFunction([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        self.assertAlmostEqual(self.service.psi(phi, space, ['a', 'b', 'c']), 1.0)
        self.assertAlmostEqual(self.service.psi(phi, space, ['b', 'a', 'c']), -1.0)
        with self.assertRaises(InputRejectedError):
            self.service.psi(phi, space, ['a', 'b'])

    def test_one_point_vanishes(self):
        scale = self.phi.scale() ** 2
        self.assertLess(abs(self.service.one_point(self.phi, self.space)), 1e-10 * scale)

    def test_two_point_gram_identity(self):
        second = self.service.two_point(self.phi, self.space)
        prediction = 6.0 * self.service.gram_determinant(self.phi, self.space)
        self.assertAlmostEqual(second / prediction, 1.0, places=9)

    def test_n_point_any_dimension(self):
        for dim in (1, 2, 3):
            phi = sample_wave_function(6, self.rng, dim=dim)
            space = sample_space(6, self.rng)
            result = self.service.n_point(phi, space)
            self.assertEqual(result.gram_prediction,
                             math.factorial(dim + 1) * self.service.gram_determinant(phi, space))
            self.assertAlmostEqual(result.two_point / result.gram_prediction, 1.0, places=8)
            self.assertLess(abs(result.one_point), 1e-9 * max(phi.scale() ** dim, 1.0))

    def test_n_point_matches_two_point(self):
        result = self.service.n_point(self.phi, self.space)
        self.assertAlmostEqual(result.two_point, self.service.two_point(self.phi, self.space), places=9)

    def test_estimate_moments(self):
        space = MeasuredSpace.uniform(3)
        phi = WaveFunction([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        _, second = self.service.estimate_moments(phi, space, 20000, np.random.default_rng(0))
        exact = self.service.two_point(phi, space)
        self.assertAlmostEqual(second, exact, delta=0.1 * exact)

    def test_tuple_envelope(self):
        phi = sample_wave_function(200, self.rng, dim=3)
        with self.assertRaises(UnsupportedSizeError):
            self.service.n_point(phi, MeasuredSpace.uniform(200))

    def test_two_components_required(self):
        phi = sample_wave_function(8, self.rng, dim=3)
        with self.assertRaises(InputRejectedError):
            self.service.one_point(phi, self.space)


class TestSymmetricM(unittest.TestCase):
    """Test cases for the symmetric three-point identity"""

    def setUp(self):
        self.service = SlaterService()
        self.rng = np.random.default_rng(11)
        self.space = sample_space(5, self.rng)
        self.phi = sample_wave_function(5, self.rng)

    def symmetric_table(self):
        raw = self.rng.standard_normal((5, 5, 5))
        return sum(np.transpose(raw, p) for p in
                   [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6.0

    def test_identity_with_array(self):
        lhs, rhs = self.service.symmetric_m_identity(self.phi, self.space, self.symmetric_table())
        self.assertAlmostEqual(lhs, rhs, delta=1e-9 * max(abs(rhs), 1.0))

    def test_identity_with_callable(self):
        u = self.rng.standard_normal(5)

        def table(i, j, k):
            return u[i] + u[j] + u[k]
        lhs, rhs = self.service.symmetric_m_identity(self.phi, self.space, table)
        self.assertAlmostEqual(lhs, rhs, delta=1e-9 * max(abs(rhs), 1.0))

    def test_constant_table_gives_two_point(self):
        lhs, rhs = self.service.symmetric_m_identity(self.phi, self.space, np.ones((5, 5, 5)))
        self.assertAlmostEqual(rhs, self.service.two_point(self.phi, self.space), places=9)

    def test_rejects_asymmetric_table(self):
        table = self.symmetric_table()
        table[0, 1, 2] += 1.0
        with self.assertRaises(InputRejectedError) as ctx:
            self.service.symmetric_m_identity(self.phi, self.space, table)
        self.assertIn('permutation', ctx.exception.details)

    def test_rejects_wrong_shape(self):
        with self.assertRaises(InputRejectedError):
            self.service.symmetric_m_identity(self.phi, self.space, np.ones((4, 4, 4)))


class TestDensityKernels(unittest.TestCase):
    """Test cases for γ^(1) and γ^(2)"""

    def setUp(self):
        self.service = SlaterService()
        self.rng = np.random.default_rng(42)
        self.space = sample_space(6, self.rng)
        self.phi = sample_wave_function(6, self.rng)

    def test_gamma1_closed_form(self):
        gamma = self.service.gamma1(self.phi, self.space)
        np.testing.assert_allclose(gamma, self.service.gamma1_closed_form(self.phi, self.space), atol=1e-10)
        np.testing.assert_allclose(gamma, gamma.T, atol=1e-12)

    def test_gamma1_weighted_trace(self):
        gamma = self.service.gamma1(self.phi, self.space)
        trace = float(np.sum(self.space.weights * np.diag(gamma)))
        self.assertAlmostEqual(trace, 2.0 * self.service.gram_determinant(self.phi, self.space), places=9)

    def test_gamma1_reduced_is_sum_of_products(self):
        reduced = self.service.reduce(self.phi, self.space)
        np.testing.assert_allclose(self.service.gamma1_closed_form(reduced, self.space),
                                   reduced.values @ reduced.values.T, atol=1e-10)

    def test_gamma2_closed_form(self):
        kernel = self.service.gamma2(self.phi, self.space)
        np.testing.assert_allclose(kernel.matrix(), self.service.gamma2_closed_form(self.phi, self.space),
                                   atol=1e-10)

    def test_gamma2_positive_semidefinite(self):
        matrix = self.service.gamma2(self.phi, self.space).matrix()
        np.testing.assert_allclose(matrix, matrix.T, atol=1e-10)
        eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
        self.assertGreaterEqual(eigenvalues.min(), -1e-9 * eigenvalues.max())

    def test_gamma2_entry_matches_matrix(self):
        space = MeasuredSpace(self.space.weights, nodes=[f"n{i}" for i in range(6)])
        kernel = self.service.gamma2(self.phi, space)
        matrix = kernel.matrix()
        self.assertAlmostEqual(kernel.entry('n1', 'n3', 'n2', 'n5'), matrix[1 * 6 + 3, 2 * 6 + 5], places=10)
        self.assertEqual(kernel.entry('n2', 'n2', 'n0', 'n4'), 0.0)

    def test_gamma2_materialization_envelope(self):
        space = sample_space(40, self.rng)
        kernel = self.service.gamma2(sample_wave_function(40, self.rng), space)
        with self.assertRaises(UnsupportedSizeError):
            kernel.matrix()
        self.assertIsInstance(kernel.entry(0, 1, 2, 3), float)


if __name__ == '__main__':
    unittest.main()
