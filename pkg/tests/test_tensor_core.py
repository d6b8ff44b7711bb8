"""
Test module for tensor_core: permutations, dense tensors and the exterior product
"""

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.errors import InputRejectedError, UnsupportedSizeError
from services.tensor_core import (
    DenseTensor,
    Permutation,
    all_permutations,
    antisymmetrize,
    basis_vector,
    exterior_dimension,
    permute_slots,
    scalar_tensor,
    tensor_product,
    vector_tensor,
    wedge,
    wedge_scalar,
    wedge_vectors,
)


class TestPermutation(unittest.TestCase):
    """Test cases for Permutation"""

    def test_rejects_non_permutation(self):
        with self.assertRaises(InputRejectedError):
            Permutation((0, 0, 1))

    def test_lexicographic_enumeration(self):
        perms = all_permutations(3)
        self.assertEqual(len(perms), 6)
        self.assertEqual(perms[0].mapping, (0, 1, 2))
        self.assertEqual(perms[-1].mapping, (2, 1, 0))

    def test_sign_multiplicative(self):
        for p in range(1, 5):
            for s in all_permutations(p):
                for t in all_permutations(p):
                    self.assertEqual(s.compose(t).sign, s.sign * t.sign)

    def test_sign_matches_transposition_count(self):
        for p in range(1, 6):
            for s in all_permutations(p):
                self.assertEqual(s.sign, (-1) ** s.transposition_count())

    def test_inverse_and_compose(self):
        sigma = Permutation((2, 0, 3, 1))
        self.assertEqual(sigma.compose(sigma.inverse()), Permutation.identity(4))
        swap = Permutation.transposition(4, 1, 3)
        self.assertEqual(swap.sign, -1)
        self.assertEqual(Permutation.from_transpositions(4, [(0, 1), (0, 1)]), Permutation.identity(4))

    def test_degree_envelope(self):
        with self.assertRaises(UnsupportedSizeError):
            all_permutations(9)


class TestDenseTensor(unittest.TestCase):
    """Test cases for tensor products and antisymmetrization"""

    def setUp(self):
        self.rng = np.random.default_rng(7)
        self.e0 = vector_tensor(basis_vector(2, 0))
        self.e1 = vector_tensor(basis_vector(2, 1))

    def random_tensor(self, dim, degree):
        return DenseTensor(self.rng.standard_normal((dim,) * degree) + 1j * self.rng.standard_normal((dim,) * degree))

    def test_basis_product(self):
        t = tensor_product(self.e0, self.e1)
        expected = np.zeros((2, 2))
        expected[0, 1] = 1.0
        np.testing.assert_array_equal(t.array, expected)

    def test_scalar_identity(self):
        s = self.random_tensor(3, 2)
        np.testing.assert_array_equal(tensor_product(s, scalar_tensor(1.0)).array, s.array)

    def test_bilinearity(self):
        t = tensor_product(self.e0.scaled(2.0), self.e1.scaled(3.0))
        self.assertEqual(t.entry((0, 1)), 6.0)
        self.assertEqual(t.norm(), 6.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(InputRejectedError):
            tensor_product(self.e0, vector_tensor(basis_vector(3, 0)))

    def test_from_entries_row_major(self):
        t = DenseTensor.from_entries(2, 2, [1, 2, 3, 4])
        self.assertEqual(t.entry((1, 0)), 3)
        with self.assertRaises(InputRejectedError):
            DenseTensor.from_entries(2, 2, [1, 2, 3])

    def test_antisymmetrize_pair(self):
        anti = antisymmetrize(tensor_product(self.e0, self.e1))
        np.testing.assert_allclose(anti.array, [[0.0, 0.5], [-0.5, 0.0]])

    def test_antisymmetrize_repeated_index(self):
        anti = antisymmetrize(tensor_product(self.e0, self.e0))
        self.assertEqual(anti.norm(), 0.0)

    def test_idempotent(self):
        for _ in range(20):
            t = self.random_tensor(3, 3)
            once = antisymmetrize(t)
            np.testing.assert_allclose(antisymmetrize(once).array, once.array, atol=1e-12)

    def test_slot_permutation_sign(self):
        for degree in range(1, 5):
            anti = antisymmetrize(self.random_tensor(3, degree))
            for sigma in all_permutations(degree):
                np.testing.assert_allclose(permute_slots(anti, sigma).array, sigma.sign * anti.array, atol=1e-12)

    def test_permute_slots_convention(self):
        t = tensor_product(self.e0, self.e1)
        swapped = permute_slots(t, Permutation.transposition(2, 0, 1))
        self.assertEqual(swapped.entry((1, 0)), 1.0)

    def test_graded_anticommutativity(self):
        u, v, x = (self.rng.standard_normal(3) for _ in range(3))
        one = wedge_vectors([u])
        two = wedge_vectors([v, x])
        np.testing.assert_allclose(wedge(one, two).array, wedge(two, one).array, atol=1e-12)
        np.testing.assert_allclose(wedge(one, wedge_vectors([x])).array,
                                   -wedge(wedge_vectors([x]), one).array, atol=1e-12)


class TestWedgeScalar(unittest.TestCase):
    """Test cases for wedge_scalar and exterior dimensions"""

    def test_identity(self):
        self.assertAlmostEqual(wedge_scalar([[1, 0], [0, 1]]), 1.0)

    def test_repeated_column(self):
        self.assertAlmostEqual(abs(wedge_scalar([[1, 2], [1, 2]])), 0.0)

    def test_two_by_two(self):
        self.assertAlmostEqual(wedge_scalar([[1, 2], [3, 4]]), -2.0)

    def test_wrong_count(self):
        with self.assertRaises(InputRejectedError):
            wedge_scalar([[1, 2, 3], [4, 5, 6]])

    def test_top_component_of_wedge(self):
        rng = np.random.default_rng(11)
        for dim in range(2, 5):
            vs = list(rng.standard_normal((dim, dim)))
            top = wedge_vectors(vs).entry(range(dim)) * math.factorial(dim)
            self.assertAlmostEqual(abs(top - wedge_scalar(vs)), 0.0, places=10)

    def test_exterior_dimension(self):
        for dim in range(1, 4):
            dims = [exterior_dimension(dim, p) for p in range(dim + 1)]
            self.assertEqual(dims, [math.comb(dim, p) for p in range(dim + 1)])
            self.assertEqual(sum(dims), 2 ** dim)


if __name__ == '__main__':
    unittest.main()
