import math

import numpy as np
import pytest

from conftest import random_basis, random_symmetric

import ritzbounds as rb
from ritzbounds.errors import (
    DimensionMismatch,
    MatrixFormatError,
    NotPositiveDefinite,
    RankDeficient,
    SingularShift,
    ZeroVector,
)


class TestJacobiEigh:
    def test_diagonal_input(self):
        d = rb.jacobi_eigh(rb.SymmetricMatrix(np.diag([3.0, 1.0, 2.0])))
        np.testing.assert_allclose(d.eigenvalues, [1.0, 2.0, 3.0])
        # Eigenvectors of a diagonal matrix form a permutation matrix.
        assert np.allclose(np.abs(d.eigenvectors).sum(axis=0), 1.0)
        assert np.allclose(np.abs(d.eigenvectors).sum(axis=1), 1.0)

    def test_two_by_two(self):
        # Characteristic polynomial of [[2,1],[1,2]]: (2-t)^2 - 1 = 0.
        d = rb.jacobi_eigh(rb.SymmetricMatrix([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(d.eigenvalues, [1.0, 3.0], atol=1e-14)
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        assert abs(abs(d.eigenvectors[0, 0]) - inv_sqrt2) < 1e-14
        assert abs(abs(d.eigenvectors[0, 1]) - inv_sqrt2) < 1e-14

    def test_identity(self):
        d = rb.jacobi_eigh(rb.SymmetricMatrix(np.eye(4)))
        np.testing.assert_allclose(d.eigenvalues, np.ones(4))
        assert np.linalg.norm(d.eigenvectors.T @ d.eigenvectors - np.eye(4)) < 1e-12

    def test_reconstruction_random(self, rng):
        for n in (3, 17, 64):
            a = random_symmetric(rng, n)
            d = rb.jacobi_eigh(a)
            rebuilt = (d.eigenvectors * d.eigenvalues) @ d.eigenvectors.T
            rel = np.linalg.norm(a.entries - rebuilt) / np.linalg.norm(a.entries)
            assert rel <= 1e-10
            assert np.all(np.diff(d.eigenvalues) >= 0)


class TestQrOrthonormalize:
    def test_scaling_removed(self):
        m = np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        b = rb.qr_orthonormalize(m)
        np.testing.assert_allclose(b.columns, np.eye(3)[:, :2], atol=1e-15)

    def test_repeated_column_rank_deficient(self):
        m = np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
        with pytest.raises(RankDeficient):
            rb.qr_orthonormalize(m)

    def test_span_preserved(self):
        m = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
        b = rb.qr_orthonormalize(m)
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(np.abs(b.columns[:, 0]), [inv_sqrt2, inv_sqrt2, 0.0])
        # Same span: projectors agree.
        p1 = b.columns @ b.columns.T
        q = np.linalg.qr(m)[0]
        p2 = q @ q.T
        assert np.linalg.norm(p1 - p2) < 1e-12

    def test_more_columns_than_rows(self):
        with pytest.raises(DimensionMismatch):
            rb.qr_orthonormalize(np.ones((2, 3)))


class TestProjector:
    def test_axis_span(self):
        b = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        np.testing.assert_allclose(rb.projector(b).entries, np.diag([1.0, 0.0, 0.0]))

    def test_full_space(self):
        b = rb.OrthonormalBasis(np.eye(4))
        np.testing.assert_allclose(rb.projector(b).entries, np.eye(4))

    def test_diagonal_span(self):
        v = np.array([[1.0], [1.0], [0.0]]) / math.sqrt(2.0)
        p = rb.projector(rb.OrthonormalBasis(v)).entries
        expected = np.zeros((3, 3))
        expected[:2, :2] = 0.5
        np.testing.assert_allclose(p, expected, atol=1e-15)

    def test_idempotent_random(self, rng):
        b = random_basis(rng, 9, 4)
        p = rb.projector(b).entries
        assert np.linalg.norm(p @ p - p) <= 1e-10
        assert np.linalg.norm(p @ b.columns - b.columns) <= 1e-10


class TestNorms:
    def test_spectral_diagonal(self):
        assert rb.spectral_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)

    def test_spectral_zero(self):
        assert rb.spectral_norm(np.zeros((3, 2))) == 0.0

    def test_spectral_nilpotent(self):
        # M^T M = diag(0, 4), so the norm is 2.
        assert rb.spectral_norm([[0.0, 2.0], [0.0, 0.0]]) == pytest.approx(2.0)

    def test_frobenius(self):
        assert rb.frobenius_norm(np.eye(3)) == pytest.approx(math.sqrt(3.0))
        assert rb.frobenius_norm(np.zeros((2, 5))) == 0.0
        assert rb.frobenius_norm([[1.0, 2.0], [2.0, 1.0]]) == pytest.approx(
            math.sqrt(10.0)
        )

    def test_spectral_le_frobenius(self, rng):
        for _ in range(25):
            m = rng.standard_normal((rng.integers(1, 9), rng.integers(1, 9)))
            assert rb.spectral_norm(m) <= rb.frobenius_norm(m) + 1e-12


class TestAngles:
    def test_vector_contained(self):
        b = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        assert rb.sin_angle_vector_subspace(np.eye(3)[:, 0], b) == pytest.approx(0.0)

    def test_vector_orthogonal(self):
        b = rb.OrthonormalBasis(np.eye(3)[:, [1]])
        assert rb.sin_angle_vector_subspace(np.eye(3)[:, 0], b) == pytest.approx(1.0)

    def test_vector_diagonal(self):
        v = np.array([[1.0], [1.0], [0.0]]) / math.sqrt(2.0)
        b = rb.OrthonormalBasis(v)
        assert rb.sin_angle_vector_subspace(np.eye(3)[:, 0], b) == pytest.approx(
            1.0 / math.sqrt(2.0)
        )

    def test_zero_vector_rejected(self):
        b = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        with pytest.raises(ZeroVector):
            rb.sin_angle_vector_subspace(np.zeros(3), b)

    def test_subspaces_shared_direction(self):
        x = rb.OrthonormalBasis(np.eye(4)[:, [0, 1]])
        y = rb.OrthonormalBasis(np.eye(4)[:, [0, 2]])
        assert rb.sin_angle_subspaces(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_subspaces_orthogonal(self):
        x = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        y = rb.OrthonormalBasis(np.eye(3)[:, [1]])
        assert rb.sin_angle_subspaces(x, y) == pytest.approx(1.0)

    def test_subspaces_mixed(self):
        x = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        cols = np.zeros((3, 2))
        cols[:2, 0] = 1.0 / math.sqrt(2.0)
        cols[2, 1] = 1.0
        y = rb.OrthonormalBasis(cols)
        assert rb.sin_angle_subspaces(x, y) == pytest.approx(1.0 / math.sqrt(2.0))

    def test_subspace_symmetry(self, rng):
        for _ in range(20):
            x = random_basis(rng, 10, 3)
            y = random_basis(rng, 10, 4)
            assert rb.sin_angle_subspaces(x, y) == pytest.approx(
                rb.sin_angle_subspaces(y, x), abs=1e-12
            )

    def test_contained_vector_has_zero_angle(self, rng):
        for _ in range(20):
            k = random_basis(rng, 12, 4)
            x = k.columns @ rng.standard_normal(4)
            assert rb.sin_angle_vector_subspace(x, k) <= 1e-10

    def test_dimension_mismatch(self):
        x = rb.OrthonormalBasis(np.eye(3)[:, [0]])
        y = rb.OrthonormalBasis(np.eye(4)[:, [0]])
        with pytest.raises(DimensionMismatch):
            rb.sin_angle_subspaces(x, y)


class TestShiftInvert:
    def test_diagonal(self):
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0]))
        out = rb.shift_invert_apply(a, 0.0, np.eye(2))
        np.testing.assert_allclose(out, np.diag([1.0, 0.5]), atol=1e-14)

    def test_singular_shift(self):
        a = rb.SymmetricMatrix(np.diag([1.0, 2.0]))
        with pytest.raises(SingularShift):
            rb.shift_invert_apply(a, 2.0, np.eye(2))

    def test_vector(self):
        a = rb.SymmetricMatrix(np.diag([1.0, 3.0]))
        out = rb.shift_invert_apply(a, 2.0, np.array([1.0, 1.0]))
        np.testing.assert_allclose(out, [-1.0, 1.0], atol=1e-14)

    def test_roundtrip(self, rng):
        for _ in range(10):
            a = random_symmetric(rng, 12)
            d = rb.jacobi_eigh(a)
            sigma = 0.5 * (d.eigenvalues[5] + d.eigenvalues[6])
            m = rng.standard_normal((12, 3))
            s = a.entries - sigma * np.eye(12)
            back = s @ rb.shift_invert_apply(a, sigma, m)
            assert np.linalg.norm(back - m) <= 1e-9 * np.linalg.norm(m)


class TestSpdSqrt:
    def test_diagonal(self):
        r = rb.spd_sqrt(rb.SymmetricMatrix(np.diag([4.0, 9.0])))
        np.testing.assert_allclose(r.entries, np.diag([2.0, 3.0]), atol=1e-13)

    def test_identity(self):
        r = rb.spd_sqrt(rb.SymmetricMatrix(np.eye(3)))
        np.testing.assert_allclose(r.entries, np.eye(3), atol=1e-14)

    def test_squares_back(self):
        t = rb.SymmetricMatrix([[2.0, 1.0], [1.0, 2.0]])
        r = rb.spd_sqrt(t)
        assert np.linalg.norm(r.entries @ r.entries - t.entries) <= 1e-10
        assert np.min(rb.jacobi_eigh(r).eigenvalues) > 0

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            rb.spd_sqrt(rb.SymmetricMatrix(np.diag([1.0, -1.0])))


class TestMatrixIo:
    def test_roundtrip_bit_exact(self, rng, tmp_path):
        a = random_symmetric(rng, 7)
        path = tmp_path / "m.txt"
        rb.write_matrix(a, path)
        back = rb.read_matrix(path)
        assert np.array_equal(a.entries, back.entries)

    def test_rejects_asymmetric(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2\n1 2\n3 4\n")
        with pytest.raises(MatrixFormatError):
            rb.read_matrix(path)

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2\n1 x\n3 4\n")
        with pytest.raises(MatrixFormatError):
            rb.read_matrix(path)

    def test_basis_roundtrip(self, rng, tmp_path):
        b = random_basis(rng, 6, 2)
        path = tmp_path / "b.txt"
        rb.write_basis(b, path)
        back = rb.read_basis(path)
        p1 = b.columns @ b.columns.T
        p2 = back.columns @ back.columns.T
        assert np.linalg.norm(p1 - p2) < 1e-12


def test_symmetric_matrix_symmetrizes():
    m = rb.SymmetricMatrix([[1.0, 2.0], [0.0, 1.0]])
    assert m.entries[0, 1] == m.entries[1, 0] == 1.0


def test_symmetric_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        rb.SymmetricMatrix([[np.nan, 0.0], [0.0, 1.0]])
