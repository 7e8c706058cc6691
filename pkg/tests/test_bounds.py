import math

import numpy as np
import pytest

from conftest import random_basis, random_symmetric

import ritzbounds as rb
from ritzbounds.errors import (
    EmptySet,
    NotCommuting,
    SingularB,
    SingularShift,
    SubspaceNotContained,
)


class TestLemma:
    def test_two_by_two_worked_values(self):
        # A = diag(1, 2), y = (1, 1)/sqrt(2), target eigenpair (1, e1):
        # sin(x, y) = 1/sqrt(2); Ay = (1, 2)/||.|| gives sin(x, Ay) = 2/sqrt(5).
        # Lower factor 1/2, upper factor 1.
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0]))
        y = np.array([1.0, 1.0]) / math.sqrt(2.0)
        profile, lower, upper = rb.lemma_sin_bounds(a, 0, y)
        assert lower.lhs == pytest.approx(0.4472135954999579, abs=1e-12)
        assert lower.rhs == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
        assert upper.lhs == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
        assert upper.rhs == pytest.approx(0.8944271909999159, abs=1e-12)
        assert lower.satisfied and upper.satisfied
        assert profile.lower_factor == pytest.approx(0.5)
        assert profile.upper_factor == pytest.approx(1.0)

    def test_tightness_profile_three_by_three(self):
        # diag(1,2,3), target 1: a0^2 = 1/9, a1^2 = 1/4.
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0, 3.0]))
        a0_sq, a1_sq = rb.lemma_tightness_profile(a, 0)
        assert a0_sq == pytest.approx(1.0 / 9.0)
        assert a1_sq == pytest.approx(0.25)

    def test_tightness_excludes_index_not_value(self):
        # Repeated target eigenvalue: the duplicate copy stays in the
        # complement, so min/max over the others both see it.
        a = rb.SymmetricMatrix(np.diag([2.0, 2.0, 4.0]))
        a0_sq, a1_sq = rb.lemma_tightness_profile(a, 0)
        assert a0_sq == pytest.approx(0.25)
        assert a1_sq == pytest.approx(1.0)

    def test_random_instances_hold(self, rng):
        for _ in range(50):
            n = int(rng.integers(3, 20))
            # Keep the spectrum away from zero; transport needs A invertible.
            d = rng.uniform(0.5, 3.0, size=n)
            q = np.linalg.qr(rng.standard_normal((n, n)))[0]
            a = rb.SymmetricMatrix((q * d) @ q.T)
            y = rng.standard_normal(n)
            idx = int(rng.integers(0, n))
            _, lower, upper = rb.lemma_sin_bounds(a, idx, y)
            assert lower.satisfied
            assert upper.satisfied

    def test_subspace_transport(self, rng):
        for _ in range(20):
            n = 10
            d = np.sort(rng.uniform(1.0, 5.0, size=n))
            q = np.linalg.qr(rng.standard_normal((n, n)))[0]
            a = rb.SymmetricMatrix((q * d) @ q.T)
            x = rb.OrthonormalBasis(q[:, [2]])
            y = random_basis(rng, n, 3)
            lower, upper = rb.subspace_sin_transport(a, None, x, y)
            assert lower.satisfied
            assert upper.satisfied

    def test_subspace_transport_singular_shift(self, rng):
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0, 3.0]))
        x = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        y = random_basis(rng, 3, 1)
        with pytest.raises(SingularShift):
            rb.subspace_sin_transport(a, 2.0, x, y)


class TestSaad:
    def test_exact_on_contained_eigenvector(self, rng):
        a = random_symmetric(rng, 9)
        d = rb.jacobi_eigh(a)
        cols = np.hstack([d.eigenvectors[:, [4]], rng.standard_normal((9, 2))])
        k = rb.qr_orthonormalize(cols)
        rep = rb.saad_bound(a, k, 4, decomp=d)
        assert rep.lhs <= 1e-8
        assert rep.sin_angle_to_K <= 1e-10
        assert rep.satisfied

    def test_random_instances_hold(self, rng):
        for _ in range(40):
            n = int(rng.integers(5, 25))
            a = random_symmetric(rng, n)
            d = rb.jacobi_eigh(a)
            k = random_basis(rng, n, min(4, n - 1))
            idx = int(rng.integers(0, n))
            rep = rb.saad_bound(a, k, idx, decomp=d)
            assert rep.satisfied

    def test_single_dim_delta_is_inf(self, rng):
        a = random_symmetric(rng, 6)
        rep = rb.saad_bound(a, random_basis(rng, 6, 1), 0)
        assert math.isinf(rep.delta)
        assert rep.rhs == pytest.approx(rep.sin_angle_to_K)


class TestSeparationAndClusters:
    def test_separation_basic(self):
        assert rb.separation_delta_hermitian([1.0, 5.0], [2.0, 7.0]) == 1.0
        assert rb.separation_delta_hermitian([0.0], [3.0]) == 3.0

    def test_separation_empty(self):
        with pytest.raises(EmptySet):
            rb.separation_delta_hermitian([], [1.0])

    def test_cluster_detection(self):
        d = rb.jacobi_eigh(rb.SymmetricMatrix(np.diag([1.0, 2.0, 2.0, 5.0])))
        idx = rb.eigenvalue_cluster(d, 2.0, 5.0)
        assert list(idx) == [1, 2]

    def test_cluster_requires_eigenvalue(self):
        d = rb.jacobi_eigh(rb.SymmetricMatrix(np.diag([1.0, 2.0])))
        with pytest.raises(ValueError):
            rb.eigenvalue_cluster(d, 7.0, 2.0)


class TestStewartFrobenius:
    def test_multiplicity_two(self, rng):
        for _ in range(15):
            n = 12
            d_vals = np.sort(
                np.concatenate([[2.0, 2.0], rng.uniform(4.0, 9.0, size=n - 2)])
            )
            q = np.linalg.qr(rng.standard_normal((n, n)))[0]
            a = rb.SymmetricMatrix((q * d_vals) @ q.T)
            d = rb.jacobi_eigh(a)
            k = random_basis(rng, n, 4)
            rep = rb.stewart_frobenius_bound(a, k, 2.0, decomp=d)
            assert rep.satisfied
            assert rep.bound_id == "stewart_frobenius"

    def test_gamma_is_frobenius_at_least_spectral(self, rng):
        a = random_symmetric(rng, 10)
        k = random_basis(rng, 10, 3)
        d = rb.jacobi_eigh(a)
        lam = float(d.eigenvalues[0])
        stew = rb.stewart_frobenius_bound(a, k, lam, decomp=d)
        saad = rb.saad_bound(a, k, 0, decomp=d)
        assert stew.gamma >= saad.gamma - 1e-12


class TestHarmonicBound:
    def test_shifted_condition_number_example(self):
        assert rb.shifted_condition_number([1.0, 2.0, 4.0], 2.5) == pytest.approx(
            3.0
        )

    def test_shifted_condition_number_singular(self):
        with pytest.raises(SingularShift):
            rb.shifted_condition_number([1.0, 2.0], 2.0)

    def test_random_instances_hold(self, rng):
        for _ in range(30):
            n = int(rng.integers(6, 25))
            a = random_symmetric(rng, n)
            d = rb.jacobi_eigh(a)
            i = int(rng.integers(0, n - 1))
            if d.eigenvalues[i + 1] - d.eigenvalues[i] < 1e-8:
                continue
            sigma = 0.5 * (d.eigenvalues[i] + d.eigenvalues[i + 1])
            k = random_basis(rng, n, min(4, n - 1))
            rep = rb.harmonic_bound(a, k, sigma, i, decomp=d)
            assert rep.satisfied
            assert rep.kappa is not None and rep.kappa >= 1.0

    def test_exact_on_invariant_subspace(self):
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0, 4.0]))
        k = rb.OrthonormalBasis(np.eye(3)[:, [0, 2]])
        rep = rb.harmonic_bound(a, k, 2.5, 0)
        assert rep.lhs <= 1e-10
        assert rep.sin_angle_to_K <= 1e-12


class TestDeflatedHarmonic:
    def test_kappa_reduction_worked_example(self):
        # Spectrum {1,2,4,7}, sigma = 2.5: full kappa = 4.5/0.5 = 9; deflating
        # to the invariant subspace of {2,4} gives kappa = 1.5/0.5 = 3.
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0, 4.0, 7.0]))
        x = rb.OrthonormalBasis(np.eye(4)[:, [1, 2]])
        cols = np.array([[0.9, 0.1], [0.1, 0.9]])
        k = rb.OrthonormalBasis(
            x.columns @ np.linalg.qr(cols)[0]
        )
        rep = rb.deflated_harmonic_bound(a, x, k, 2.5, 0)
        assert rep.bound_id == "deflated_harmonic"
        assert rep.kappa == pytest.approx(3.0, abs=1e-10)
        full = rb.shifted_condition_number([1.0, 2.0, 4.0, 7.0], 2.5)
        assert full == pytest.approx(9.0)
        assert rep.satisfied

    def test_rejects_uncontained_subspace(self, rng):
        a = random_symmetric(rng, 6)
        d = rb.jacobi_eigh(a)
        x = rb.OrthonormalBasis(d.eigenvectors[:, :3])
        k = random_basis(rng, 6, 2)
        with pytest.raises(SubspaceNotContained):
            rb.deflated_harmonic_bound(a, x, k, 0.0, 0)


class TestEigenspaceHarmonic:
    def test_multiplicity_two(self, rng):
        for _ in range(10):
            n = 12
            d_vals = np.sort(
                np.concatenate([[2.0, 2.0], rng.uniform(4.0, 9.0, size=n - 2)])
            )
            q = np.linalg.qr(rng.standard_normal((n, n)))[0]
            a = rb.SymmetricMatrix((q * d_vals) @ q.T)
            d = rb.jacobi_eigh(a)
            sigma = 3.0
            k = random_basis(rng, n, 4)
            rep = rb.eigenspace_harmonic_bound(a, k, sigma, 2.0, decomp=d)
            assert rep.satisfied
            assert rep.bound_id == "eigenspace_harmonic"


class TestTHarmonicBound:
    def _instance(self, rng, n=10):
        a = random_symmetric(rng, n)
        d = rb.jacobi_eigh(a)
        i = n // 2 - 1
        sigma = 0.5 * (d.eigenvalues[i] + d.eigenvalues[i + 1])
        k = random_basis(rng, n, 4)
        return a, d, sigma, k, i

    def test_commuting_weight_holds(self, rng):
        for _ in range(15):
            a, d, sigma, k, i = self._instance(rng)
            t = rb.abs_value_inverse(a, sigma, decomp=d).realized
            rep = rb.t_harmonic_bound(a, k, sigma, t, i, decomp=d)
            assert rep.satisfied

    def test_invsq_weight_kappa_one(self, rng):
        a, d, sigma, k, i = self._instance(rng)
        t = rb.shift_inverse_squared(a, sigma, decomp=d).realized
        rep = rb.t_harmonic_bound(a, k, sigma, t, i, decomp=d)
        assert rep.kappa == pytest.approx(1.0, abs=1e-8)

    def test_absinv_weight_kappa_sqrt(self, rng):
        a, d, sigma, k, i = self._instance(rng)
        t = rb.abs_value_inverse(a, sigma, decomp=d).realized
        rep = rb.t_harmonic_bound(a, k, sigma, t, i, decomp=d)
        expected = math.sqrt(rb.shifted_condition_number(d.eigenvalues, sigma))
        assert rep.kappa == pytest.approx(expected, rel=1e-8)

    def test_identity_weight_matches_harmonic(self, rng):
        a, d, sigma, k, i = self._instance(rng)
        t = rb.SymmetricMatrix(np.eye(10))
        rep_t = rb.t_harmonic_bound(a, k, sigma, t, i, decomp=d)
        rep_h = rb.harmonic_bound(a, k, sigma, i, decomp=d)
        assert rep_t.lhs == pytest.approx(rep_h.lhs, abs=1e-10)
        assert rep_t.kappa == pytest.approx(rep_h.kappa, rel=1e-10)
        assert rep_t.rhs == pytest.approx(rep_h.rhs, rel=1e-8)

    def test_noncommuting_rejected(self, rng):
        a, d, sigma, k, i = self._instance(rng)
        g = rng.standard_normal((10, 10))
        t = rb.SymmetricMatrix(g @ g.T + 10 * np.eye(10))
        with pytest.raises(NotCommuting):
            rb.t_harmonic_bound(a, k, sigma, t, i, decomp=d)


class TestBInverseNorm:
    def test_worked_example(self):
        # diag(1,3), sigma=2, K = I: B = diag(-1,1), smallest |eig| = 1.
        a = rb.SymmetricMatrix(np.diag([1.0, 3.0]))
        k = rb.OrthonormalBasis(np.eye(2))
        assert rb.b_inverse_norm(a, k, 2.0) == pytest.approx(1.0)

    def test_singular_projected_matrix(self):
        a = rb.SymmetricMatrix(np.diag([1.0, 3.0]))
        v = np.array([[1.0], [1.0]]) / math.sqrt(2.0)
        with pytest.raises(SingularB):
            rb.b_inverse_norm(a, rb.OrthonormalBasis(v), 2.0)
