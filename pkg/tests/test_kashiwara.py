"""
Test module for Lagrangian triples and the Kashiwara index
"""

import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.domain.lagrangian import LagrangianTriple, symplectic_form, symplectic_matrix
from services.errors import InputRejectedError
from services.kashiwara_service import (
    KashiwaraService,
    graph_triple,
    random_basis_change,
    random_graph_triple,
    random_symplectic,
)
from services.verification_service import example_lagrangian_triple


class TestLagrangianTriple(unittest.TestCase):
    """Test cases for input validation of Lagrangian triples"""

    def test_symplectic_form(self):
        self.assertEqual(symplectic_form([1, 0], [0, 1]), 1.0)
        self.assertEqual(symplectic_form([0, 1], [1, 0]), -1.0)

    def test_rejects_non_lagrangian(self):
        bases = (np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
                 np.vstack([np.zeros((2, 2)), np.eye(2)]),
                 np.vstack([np.eye(2), np.eye(2)]))
        with self.assertRaises(InputRejectedError) as ctx:
            LagrangianTriple(2, bases)
        self.assertEqual(ctx.exception.details['subspace'], 'L1')

    def test_rejects_rank_deficient(self):
        with self.assertRaises(InputRejectedError):
            LagrangianTriple(1, (np.zeros((2, 1)), np.array([[0.0], [1.0]]), np.array([[1.0], [1.0]])))

    def test_rejects_wrong_shape(self):
        with self.assertRaises(InputRejectedError):
            LagrangianTriple(2, (np.eye(2), np.eye(2), np.eye(2)))

    def test_json_round_trip(self):
        triple = example_lagrangian_triple()
        again = LagrangianTriple.from_json(triple.to_json())
        for b1, b2 in zip(triple.bases, again.bases):
            np.testing.assert_array_equal(b1, b2)
        with self.assertRaises(InputRejectedError):
            LagrangianTriple.from_json({'n': 1, 'L1': [[1], [0]]})


class TestKashiwaraIndex(unittest.TestCase):
    """Test cases for the signature of the Kashiwara form"""

    def setUp(self):
        self.service = KashiwaraService()
        self.rng = np.random.default_rng(1729)

    def test_plane_example(self):
        triple = example_lagrangian_triple()
        q = self.service.kashiwara_q(triple)
        np.testing.assert_allclose(q, [[0, 0.5, -0.5], [0.5, 0, -0.5], [-0.5, -0.5, 0]])
        result = self.service.kashiwara_index(triple)
        np.testing.assert_allclose(result.eigenvalues, [-0.5, -0.5, 1.0], atol=1e-12)
        self.assertEqual((result.n_plus, result.n_minus, result.n_zero), (1, 2, 0))
        self.assertEqual(result.signature, -1)

    def test_swapping_two_subspaces_flips_sign(self):
        triple = example_lagrangian_triple()
        self.assertEqual(self.service.kashiwara_index(triple.permuted((1, 0, 2))).signature, 1)

    def test_repeated_subspace_has_zero_eigenvalues(self):
        triple = example_lagrangian_triple()
        repeated = LagrangianTriple(1, (triple.bases[0], triple.bases[1], triple.bases[0]))
        self.assertGreater(self.service.kashiwara_index(repeated).n_zero, 0)

    def test_symmetric_matrix(self):
        triple = random_graph_triple(3, self.rng)
        q = self.service.kashiwara_q(triple)
        np.testing.assert_array_equal(q, q.T)

    def test_cyclic_invariance_and_antisymmetry(self):
        for n in (1, 2, 3):
            triple = random_graph_triple(n, self.rng)
            tau = self.service.kashiwara_index(triple).signature
            self.assertEqual(self.service.kashiwara_index(triple.permuted((1, 2, 0))).signature, tau)
            self.assertEqual(self.service.kashiwara_index(triple.permuted((0, 2, 1))).signature, -tau)

    def test_symplectic_invariance(self):
        for n in (1, 2):
            triple = random_graph_triple(n, self.rng)
            s = random_symplectic(n, self.rng)
            jmat = symplectic_matrix(n)
            np.testing.assert_allclose(s.T @ jmat @ s, jmat, atol=1e-9)
            self.assertEqual(self.service.kashiwara_index(triple.transformed(s)).signature,
                             self.service.kashiwara_index(triple).signature)

    def test_basis_invariance(self):
        triple = random_graph_triple(2, self.rng)
        changes = [random_basis_change(2, self.rng) for _ in range(3)]
        self.assertEqual(self.service.kashiwara_index(triple.rebased(changes)).signature,
                         self.service.kashiwara_index(triple).signature)

    def test_graph_triple_signature_is_minus_signature_of_a(self):
        a = np.diag([2.0, -1.0, 3.0])
        result = self.service.kashiwara_index(graph_triple(a))
        eigen_a = np.linalg.eigvalsh(a)
        self.assertEqual(result.signature, -int(np.sum(eigen_a > 0) - np.sum(eigen_a < 0)))
        self.assertEqual(result.n_zero, 0)

    def test_to_dict(self):
        payload = self.service.kashiwara_index(example_lagrangian_triple()).to_dict()
        self.assertEqual(payload['signature'], -1)
        self.assertIn('convention', payload)


if __name__ == '__main__':
    unittest.main()
