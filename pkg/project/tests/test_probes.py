import math

import numpy as np
from django.test import SimpleTestCase

from uniest.errors import UniestInputError
from uniest.haar import RngStream, haar_mean_operator, haar_special_unitary
from uniest.numerics import PureState, is_projector, kron, kron_power
from uniest.probes import (
    SINGLET,
    IrrepBlock,
    IrrepDecomposition,
    check_weights,
    defining_irrep,
    max_entangled,
    phi2,
    phi_N,
    reachable_support,
    ril_transport_identity,
    schmidt,
    schmidt_diagonal_probe,
    su2_n2_irreps,
    twirl,
)


class TestMaxEntangled(SimpleTestCase):

    def test_amplitudes(self):
        psi = max_entangled(3)
        self.assertEqual(psi.dims, (3, 3))
        np.testing.assert_allclose(psi.amplitudes[[0, 4, 8]], [1 / math.sqrt(3)] * 3)

    def test_rejects_small_dimension(self):
        with self.assertRaises(UniestInputError):
            max_entangled(1)

    def test_schmidt_diagonal_probe(self):
        psi = schmidt_diagonal_probe([0.6, 0.8])
        np.testing.assert_allclose(psi.amplitudes, [0.6, 0, 0, 0.8])

    def test_transport_identity(self):
        gen = RngStream(3).generator()
        for d in (2, 3, 4):
            self.assertTrue(ril_transport_identity(haar_special_unitary(d, gen), d).passed)

    def test_transport_identity_needs_unitary(self):
        with self.assertRaises(UniestInputError):
            ril_transport_identity(np.eye(2) * 2, 2)


class TestSchmidt(SimpleTestCase):

    def test_max_entangled(self):
        form = schmidt(max_entangled(4))
        np.testing.assert_allclose(form.coefficients, [0.5] * 4, atol=1e-12)
        np.testing.assert_allclose(form.rebuild(), max_entangled(4).amplitudes, atol=1e-12)

    def test_product_state(self):
        psi = PureState(np.kron([0.6, 0.8j], [1, 0, 0]), (2, 3))
        form = schmidt(psi)
        self.assertEqual(len(form.coefficients), 1)
        self.assertAlmostEqual(form.coefficients[0], 1.0, places=12)
        self.assertGreaterEqual(form.basis_a[0][0].real, 0)
        np.testing.assert_allclose(form.rebuild(), psi.amplitudes, atol=1e-12)

    def test_random_state(self):
        gen = RngStream(17).generator()
        psi = PureState.normalized(gen.standard_normal(12) + 1j * gen.standard_normal(12), (3, 4))
        form = schmidt(psi)
        self.assertTrue(np.all(np.diff(form.coefficients) <= 1e-12))
        self.assertAlmostEqual(sum(c ** 2 for c in form.coefficients), 1.0, places=12)
        basis = np.array(form.basis_a)
        np.testing.assert_allclose(basis.conj() @ basis.T, np.eye(len(basis)), atol=1e-10)
        np.testing.assert_allclose(form.rebuild(), psi.amplitudes, atol=1e-10)

    def test_rejects_tripartite(self):
        with self.assertRaises(UniestInputError):
            schmidt(PureState(np.eye(8)[0], (2, 2, 2)))


class TestIrrepDecomposition(SimpleTestCase):

    def test_two_qubit_blocks(self):
        irreps = su2_n2_irreps()
        self.assertTrue(irreps.verified)
        self.assertTrue(irreps.multiplicity_free)
        np.testing.assert_allclose(irreps.projector('triplet') + irreps.projector('singlet'), np.eye(4), atol=1e-12)
        self.assertAlmostEqual(np.trace(irreps.projector('triplet')).real, 3)
        self.assertEqual(list(irreps.ancilla_levels()['singlet']), [3])

    def test_singlet_is_invariant(self):
        gen = RngStream(1).generator()
        for _ in range(5):
            v = haar_special_unitary(2, gen)
            np.testing.assert_allclose(kron(v, v) @ SINGLET, SINGLET, atol=1e-12)

    def test_rejects_non_invariant_blocks(self):
        with self.assertRaises(UniestInputError):
            IrrepDecomposition(
                (IrrepBlock('a', 1, 3, np.eye(4)[:3]), IrrepBlock('b', 1, 1, np.eye(4)[3])),
                d=2,
                copies=2,
            )

    def test_rejects_bad_blocks(self):
        with self.assertRaises(UniestInputError):
            IrrepBlock('skew', 1, 2, np.array([[1, 0], [1, 0]]))
        with self.assertRaises(UniestInputError):
            IrrepBlock('short', 2, 2, np.eye(2))
        with self.assertRaises(UniestInputError):
            IrrepDecomposition((IrrepBlock('x', 1, 2, np.eye(2)), IrrepBlock('x', 1, 2, np.eye(2))), d=2)

    def test_unknown_label(self):
        with self.assertRaises(UniestInputError):
            su2_n2_irreps().block('quintet')

    def test_defining_irrep(self):
        irreps = defining_irrep(3)
        self.assertEqual(irreps.dimension, 3)
        np.testing.assert_allclose(irreps.projector('defining'), np.eye(3))


class TestProbes(SimpleTestCase):

    def test_phi_n_on_defining_irrep_is_max_entangled(self):
        np.testing.assert_allclose(phi_N(defining_irrep(3), (1.0,), 3).amplitudes, max_entangled(3).amplitudes)

    def test_phi2(self):
        a = math.sqrt(0.9)
        psi = phi2(a)
        self.assertEqual(psi.dims, (4, 4))
        self.assertAlmostEqual(np.linalg.norm(psi.amplitudes), 1.0, places=12)
        # triplet part lives on ancilla levels 0..2, singlet on level 3
        coefficients = psi.coefficients()
        np.testing.assert_allclose(coefficients[:, 3], math.sqrt(0.1) * SINGLET, atol=1e-12)
        self.assertAlmostEqual(np.linalg.norm(coefficients[:, :3]) ** 2, 0.9, places=12)

    def test_phi_n_schmidt_coefficients(self):
        # each block contributes n_alpha d_alpha equal coefficients a_alpha / sqrt(n_alpha d_alpha)
        a = 0.8
        form = schmidt(phi2(a))
        expected = sorted([a / math.sqrt(3)] * 3 + [math.sqrt(1 - a * a)], reverse=True)
        np.testing.assert_allclose(form.coefficients, expected, atol=1e-12)

    def test_phi2_blocks_are_preserved(self):
        a = 0.6
        psi = phi2(a)
        gen = RngStream(40).generator()
        for _ in range(5):
            u = haar_special_unitary(2, gen)
            moved = psi.apply(kron(kron(u, u), np.eye(4))).coefficients()
            self.assertAlmostEqual(np.linalg.norm(moved[:, 3]) ** 2, 1 - a * a, places=12)
            np.testing.assert_allclose(moved[:, 3], psi.coefficients()[:, 3], atol=1e-12)

    def test_phi2_triplet_only(self):
        np.testing.assert_allclose(phi2(1.0).coefficients()[:, 3], 0, atol=1e-15)

    def test_phi2_range(self):
        with self.assertRaises(UniestInputError):
            phi2(1.5)

    def test_weights(self):
        irreps = su2_n2_irreps()
        with self.assertRaises(UniestInputError):
            check_weights(irreps, (0.5, 0.5))
        with self.assertRaises(UniestInputError):
            check_weights(irreps, (-1.0, 0.0))
        with self.assertRaises(UniestInputError):
            check_weights(irreps, (1.0,))

    def test_ancilla_too_small(self):
        with self.assertRaises(UniestInputError):
            phi_N(su2_n2_irreps(), (1.0, 0.0), 3)


class TestTwirl(SimpleTestCase):

    def test_reachable_support(self):
        support = reachable_support(su2_n2_irreps(), 4)
        self.assertTrue(is_projector(support))
        self.assertAlmostEqual(np.trace(support).real, 10)
        np.testing.assert_allclose(reachable_support(defining_irrep(2), 2), np.eye(4))

    def test_defining_irrep(self):
        d = 3
        result = twirl(max_entangled(d).density(), defining_irrep(d), d)
        np.testing.assert_allclose(result, np.eye(d * d) / d ** 2, atol=1e-12)

    def test_matches_monte_carlo(self):
        irreps = su2_n2_irreps()
        rho = phi2(0.7).density()
        exact = twirl(rho, irreps, 4)

        def conjugate(v):
            big = kron(kron_power(v, 2), np.eye(4))
            return big @ rho @ big.conj().T

        mean, stderr = haar_mean_operator(conjugate, 2, 4000, RngStream(6))
        self.assertLess(np.max(np.abs(mean - exact)), max(0.02, 5 * stderr))

    def test_needs_multiplicity_free(self):
        irreps = IrrepDecomposition((IrrepBlock('pair', 2, 1, np.eye(2)),), d=2, verified=True)
        with self.assertRaises(UniestInputError):
            twirl(np.eye(4), irreps, 2)
        with self.assertRaises(UniestInputError):
            reachable_support(irreps, 2)
