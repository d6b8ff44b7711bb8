"""
Test module for the collapse pipeline and the partial traces of ρ_{A,B,C}
"""

import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.collapse_service import (
    U_DIRECTION,
    V_DIRECTION,
    W_DIRECTION,
    CollapseService,
    affine_det2,
    computational_basis,
)
from services.domain.qubits import EmbeddedTriple, Morphism2, ThetaBlocks, Triple
from services.errors import ConsistencyError, InputRejectedError


class TestCollapsePipeline(unittest.TestCase):
    """Test cases for embed, Λ, θ, Tr_1 and the quotient projection"""

    def setUp(self):
        self.service = CollapseService()
        self.rng = np.random.default_rng(2024)

    def test_embed(self):
        e = self.service.embed(Triple([1, 0], [0, 1], [2, 3]))
        np.testing.assert_array_equal(e.a, [1, 0, 0, 0, 0, 0])
        np.testing.assert_array_equal(e.b, [0, 0, 0, 1, 0, 0])
        np.testing.assert_array_equal(e.c, [0, 0, 0, 0, 2, 3])
        projected = e.project()
        np.testing.assert_array_equal(projected.c, [2, 3])

    def test_embedded_support_enforced(self):
        with self.assertRaises(InputRejectedError):
            EmbeddedTriple([1, 0, 1, 0, 0, 0], [0] * 6, [0] * 6)

    def test_lambda_entry(self):
        t = Triple([3, 0], [5, 0], [0, 0])
        lam = self.service.lambda_tensor(t)
        self.assertAlmostEqual(lam.matrix[0, 2], 0.5 * 3 * 5)
        np.testing.assert_array_equal(lam.matrix + lam.matrix.T, np.zeros((6, 6)))

    def test_lambda_zero(self):
        lam = self.service.lambda_tensor(Triple([1, 0], [0, 0], [0, 0]))
        self.assertEqual(np.abs(lam.matrix).max(), 0.0)

    def test_theta_hand_example(self):
        blocks = self.service.theta(self.service.lambda_tensor(Triple([1, 0], [1, 0], [0, 0])))
        np.testing.assert_allclose(blocks.x_blocks[0], [1, 0, 0, 0, 0, 0])

    def test_theta_matches_closed_form(self):
        for _ in range(10):
            t = Triple.random(self.rng)
            blocks = self.service.theta(self.service.lambda_tensor(t))
            closed = self.service.theta_closed_form(t)
            np.testing.assert_allclose(blocks.x_blocks, closed.x_blocks, atol=1e-12)
            np.testing.assert_allclose(blocks.y_blocks, closed.y_blocks, atol=1e-12)
            self.assertEqual(blocks.support_residual(), 0.0)

    def test_tr1_general(self):
        a, b, c = self.rng.standard_normal((3, 2))
        result = self.service.omega1(Triple(a, b, c))

        def w2(u, v):
            return u[0] * v[1] - u[1] * v[0]
        np.testing.assert_allclose(result, [w2(a, b), w2(c, a), w2(b, c)], atol=1e-12)

    def test_tr1_y_trace_is_negative_x_trace(self):
        blocks = self.service.theta(self.service.lambda_tensor(Triple.random(self.rng)))
        x_sum = blocks.x_blocks.sum(axis=0)
        np.testing.assert_allclose(self.service.y_trace(blocks)[[0, 2, 4]], -x_sum[[1, 3, 5]], atol=1e-12)

    def test_tr1_rejects_broken_layout(self):
        blocks = ThetaBlocks(np.ones((3, 6)), np.ones((3, 6)))
        with self.assertRaises(ConsistencyError):
            self.service.tr1(blocks)

    def test_degenerate_triples(self):
        (xa, ya), (xb, yb), c = self.rng.standard_normal((3, 2))
        a = np.array([xa, ya])
        b = np.array([xb, yb])
        k = c[0] * ya - xa * c[1]
        np.testing.assert_allclose(self.service.omega1(Triple(a, a, c)), k * U_DIRECTION, atol=1e-12)
        ab = xa * yb - xb * ya
        np.testing.assert_allclose(self.service.omega1(Triple(a, b, b)), ab * W_DIRECTION, atol=1e-12)
        np.testing.assert_allclose(self.service.omega1(Triple(a, b, a)), ab * V_DIRECTION, atol=1e-12)

    def test_w_is_v_minus_u(self):
        directions = self.service.degenerate_directions()
        np.testing.assert_array_equal(directions['w'], directions['v'] - directions['u'])

    def test_quotient_projector(self):
        pi = self.service.quotient_projector()
        np.testing.assert_allclose(pi @ pi, pi, atol=1e-15)
        self.assertEqual(np.linalg.matrix_rank(pi), 1)
        np.testing.assert_allclose(pi @ U_DIRECTION, 0.0, atol=1e-15)
        np.testing.assert_allclose(pi @ V_DIRECTION, 0.0, atol=1e-15)

    def test_collapse_examples(self):
        self.assertAlmostEqual(self.service.collapse(Triple([1, 0], [0, 1], [0, 0])), 1.0)
        a = self.rng.standard_normal(2)
        self.assertAlmostEqual(abs(self.service.collapse(Triple(a, a, self.rng.standard_normal(2)))), 0.0)
        self.assertAlmostEqual(abs(self.service.collapse(Triple([1, 2], [3, 4], [5, 6]))), 0.0)

    def test_collapse_equals_affine_determinant(self):
        for _ in range(200):
            t = Triple.random(self.rng)
            expected = affine_det2(*t.points())
            self.assertLessEqual(abs(self.service.collapse(t) - expected), 1e-10 * max(t.scale() ** 2, 1.0))

    def test_morphism_covariance(self):
        t = Triple.random(self.rng)
        base = self.service.collapse(t)
        identity = self.service.collapse_with_morphism(t, Morphism2.identity())
        self.assertAlmostEqual(abs(identity - base), 0.0, places=12)
        scaled = self.service.collapse_with_morphism(t, Morphism2(np.diag([2.0, 3.0])))
        self.assertAlmostEqual(abs(scaled - 6.0 * base), 0.0, places=10)
        singular = self.service.collapse_with_morphism(t, Morphism2([[1.0, 2.0], [2.0, 4.0]]))
        self.assertAlmostEqual(abs(singular), 0.0, places=10)
        for _ in range(50):
            t = Triple.random(self.rng)
            sigma = Morphism2.random(self.rng)
            expected = sigma.det * self.service.collapse(t)
            self.assertLessEqual(abs(self.service.collapse_with_morphism(t, sigma) - expected),
                                 1e-9 * max(abs(expected), 1.0))


class TestPartialTraces(unittest.TestCase):
    """Test cases for ρ_{A,B,C} and its traces over the computational basis"""

    def setUp(self):
        self.service = CollapseService()
        self.rng = np.random.default_rng(99)

    def test_rho_factorizes(self):
        a, b, c, a2, b2, c2 = self.rng.standard_normal((6, 2))
        self.assertAlmostEqual(self.service.rho(a, b, c, a2, b2, c2),
                               affine_det2(a, b, c) * affine_det2(a2, b2, c2))

    def test_trace_AC_vanishes_on_basis(self):
        for b in computational_basis():
            for b_bra in computational_basis():
                self.assertEqual(self.service.rho_trace_AC(b, b_bra), 0.0)
        self.assertEqual(np.abs(self.service.rho_trace_AC_matrix()).max(), 0.0)

    def test_trace_AC_closed_form(self):
        for _ in range(100):
            b, b_bra = self.rng.standard_normal((2, 2))
            self.assertAlmostEqual(self.service.rho_trace_AC(b, b_bra),
                                   self.service.rho_trace_AC_closed_form(b, b_bra), places=12)

    def test_trace_A_examples(self):
        self.assertEqual(self.service.rho_trace_A([1, 2], [1, 2], [3, 0], [0, 1]), 0.0)
        self.assertAlmostEqual(self.service.rho_trace_A([2, 0], [0, 2], [2, 0], [0, 2]), 8.0)

    def test_trace_A_generic_nonzero(self):
        nonzero = sum(1 for _ in range(100)
                      if abs(self.service.rho_trace_A(*self.rng.standard_normal((4, 2)))) > 1e-12)
        self.assertGreaterEqual(nonzero, 99)

    def test_trace_A_basis_matrix_is_zero(self):
        self.assertEqual(np.abs(self.service.rho_trace_A_matrix()).max(), 0.0)

    def test_kernels(self):
        kernel = self.service.trace_A_kernel()
        b, c, b2, c2 = self.rng.standard_normal((4, 2))
        self.assertEqual(kernel((b, c), (b2, c2)), kernel((b2, c2), (b, c)))
        with self.assertRaises(InputRejectedError):
            kernel((b,), (b2,))
        self.assertEqual(self.service.trace_AC_kernel().arity, 1)


if __name__ == '__main__':
    unittest.main()
