"""Dense real symmetric linear algebra kernels.

Everything downstream (extraction, bounds, preconditioners, harness) is built
on the primitives in this module: a cyclic Jacobi eigensolver, Householder QR
orthonormalization, orthogonal projectors, matrix norms, principal angles and
shifted inverses.  All scalars are real double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import (
    ConvergenceError,
    DimensionMismatch,
    MatrixFormatError,
    NotPositiveDefinite,
    RankDeficient,
    SingularShift,
    ZeroVector,
)

# Central numerical contract, shared by the whole library.
TOL_EIG = 1e-10
TOL_ORTH = 1e-10
TOL_RANK = 1e-12
TOL_SHIFT = 1e-12
TOL_SPD = 1e-12
# Every bound-verification slack is relative to max(1, rhs) at this level.
BOUND_SLACK_REL = 1e-8

INF = math.inf


def _as_float_array(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")
    return a


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric operator, symmetrized exactly at construction."""

    entries: np.ndarray

    def __post_init__(self):
        a = _as_float_array(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("square matrix required")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def shifted(self, sigma: float) -> "SymmetricMatrix":
        """A - sigma*I."""
        return SymmetricMatrix(self.entries - sigma * np.eye(self.n))


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum, eigenvalues ascending, orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = _as_float_array(self.eigenvalues)
        v = _as_float_array(self.eigenvectors)
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def apply_function(self, f) -> SymmetricMatrix:
        """Q diag(f(lambda)) Q^T for a scalar function f of the spectrum."""
        d = np.asarray([f(lam) for lam in self.eigenvalues], dtype=float)
        q = self.eigenvectors
        return SymmetricMatrix((q * d) @ q.T)


@dataclass(frozen=True)
class OrthonormalBasis:
    """n x s matrix with orthonormal columns spanning a subspace."""

    columns: np.ndarray

    def __post_init__(self):
        c = _as_float_array(self.columns)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        gram_err = np.linalg.norm(c.T @ c - np.eye(c.shape[1]))
        if gram_err > TOL_ORTH:
            raise ValueError(f"columns not orthonormal (defect {gram_err:.2e})")
        c.setflags(write=False)
        object.__setattr__(self, "columns", c)

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def s(self) -> int:
        return self.columns.shape[1]


@njit(cache=True)
def _jacobi_kernel(a, v, tol, max_rotations):
    """Cyclic Jacobi sweeps with threshold convergence.

    Mutates `a` toward diagonal and accumulates rotations into `v`.
    Returns (rotations_used, converged).
    """
    n = a.shape[0]
    rotations = 0
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if math.sqrt(off) <= tol:
            return rotations, True
        if rotations >= max_rotations:
            return rotations, False
        # Rotate only entries carrying a meaningful share of the off-diag mass.
        thresh = math.sqrt(off) / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh * 1e-3:
                    continue
                rotations += 1
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq


def jacobi_eigh(A: SymmetricMatrix) -> EigenDecomposition:
    """Eigendecomposition by cyclic Jacobi with threshold sweeps.

    Converges when the off-diagonal Frobenius mass drops below
    1e-12 * ||A||_F; the rotation budget is 30*n^2.
    """
    a = np.array(A.entries, dtype=float)
    n = a.shape[0]
    if n == 1:
        return EigenDecomposition(a[0].copy(), np.eye(1))
    norm_a = np.linalg.norm(a)
    v = np.eye(n)
    _, converged = _jacobi_kernel(a, v, 1e-12 * norm_a, 30 * n * n)
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge within 30*{n}^2 rotations")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Deterministic sign: largest-magnitude entry of each eigenvector positive.
    for j in range(n):
        i = np.argmax(np.abs(v[:, j]))
        if v[i, j] < 0:
            v[:, j] = -v[:, j]
    return EigenDecomposition(w, v)


def qr_orthonormalize(M) -> OrthonormalBasis:
    """Householder QR with an explicit rank check on the diagonal of R."""
    m = _as_float_array(M)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    n, s = m.shape
    if s > n:
        raise DimensionMismatch(f"more columns ({s}) than rows ({n})")
    q, r = np.linalg.qr(m)
    norm_m = np.linalg.norm(m)
    diag = np.abs(np.diag(r))
    if norm_m == 0.0 or np.min(diag) < TOL_RANK * norm_m:
        raise RankDeficient("pivot norm below tol_rank * ||M||_F")
    # Make R's diagonal positive so the factorization is unique.
    signs = np.sign(np.diag(r))
    q = q * signs
    return OrthonormalBasis(q)


def projector(B: OrthonormalBasis) -> SymmetricMatrix:
    """Orthogonal projector onto the span of the basis columns."""
    c = B.columns
    return SymmetricMatrix(c @ c.T)


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=float)))


def spectral_norm(M) -> float:
    """Largest singular value, via the Jacobi eigensolver on the Gram matrix."""
    m = np.asarray(M, dtype=float)
    if m.ndim == 1:
        return float(np.linalg.norm(m))
    if np.all(m == 0.0):
        return 0.0
    g = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
    w = jacobi_eigh(SymmetricMatrix(g)).eigenvalues
    return math.sqrt(max(float(w[-1]), 0.0))


def sin_angle_vector_subspace(x, K: OrthonormalBasis) -> float:
    """sin of the angle between a vector and a subspace: ||(I - P_K) x||."""
    xv = _as_float_array(x).ravel()
    nrm = np.linalg.norm(xv)
    if nrm < TOL_RANK:
        raise ZeroVector("vector norm below tolerance")
    if xv.shape[0] != K.n:
        raise DimensionMismatch("vector and basis dimensions differ")
    xv = xv / nrm
    r = xv - K.columns @ (K.columns.T @ xv)
    return float(min(max(np.linalg.norm(r), 0.0), 1.0))


def sin_angle_subspaces(X: OrthonormalBasis, Y: OrthonormalBasis) -> float:
    """sin of the minimal angle between two subspaces.

    Computed as sqrt(1 - smax^2), smax the largest singular value of the
    cross-Gram X^T Y clamped to [0, 1].
    """
    if X.n != Y.n:
        raise DimensionMismatch("ambient dimensions differ")
    smax = min(max(spectral_norm(X.columns.T @ Y.columns), 0.0), 1.0)
    return math.sqrt(max(1.0 - smax * smax, 0.0))


def shift_invert_apply(
    A: SymmetricMatrix,
    sigma: float,
    M,
    decomp: EigenDecomposition | None = None,
) -> np.ndarray:
    """(A - sigma I)^{-1} M through the eigendecomposition of A."""
    if decomp is None:
        decomp = jacobi_eigh(A)
    gaps = np.abs(decomp.eigenvalues - sigma)
    if np.min(gaps) <= TOL_SHIFT * max(np.linalg.norm(A.entries), 1e-300):
        raise SingularShift(f"sigma={sigma} is numerically an eigenvalue")
    m = np.asarray(M, dtype=float)
    q = decomp.eigenvectors
    inv = 1.0 / (decomp.eigenvalues - sigma)
    return q @ (inv[:, None] * (q.T @ m)) if m.ndim == 2 else q @ (inv * (q.T @ m))


def spd_sqrt(T: SymmetricMatrix) -> SymmetricMatrix:
    """Symmetric positive definite square root."""
    d = jacobi_eigh(T)
    if np.min(d.eigenvalues) <= TOL_SPD:
        raise NotPositiveDefinite("matrix has an eigenvalue <= tol_spd")
    return d.apply_function(math.sqrt)


# ---------------------------------------------------------------------------
# Matrix text format: line 1 = n, then n rows of n whitespace-separated
# decimal entries.  Parsing rejects relative skew beyond 1e-12.


def write_matrix(A: SymmetricMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{A.n}\n")
        for row in A.entries:
            fh.write(" ".join(format(x, ".17g") for x in row) + "\n")


def read_matrix(path) -> SymmetricMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(tokens[0])
        data = [float(t) for t in tokens[1:]]
    except ValueError as exc:
        raise MatrixFormatError(f"bad token in matrix file: {exc}") from exc
    if n <= 0 or len(data) != n * n:
        raise MatrixFormatError(f"expected {n}x{n} entries, got {len(data)}")
    m = np.array(data, dtype=float).reshape(n, n)
    skew = np.linalg.norm(m - m.T)
    if skew > 1e-12 * max(np.linalg.norm(m), 1e-300):
        raise MatrixFormatError("matrix file is not symmetric")
    return SymmetricMatrix(m)


# Rectangular variant used for subspace files: line 1 = "n s", then n rows.


def write_basis(B: OrthonormalBasis, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{B.n} {B.s}\n")
        for row in B.columns:
            fh.write(" ".join(format(x, ".17g") for x in row) + "\n")


def read_basis(path) -> OrthonormalBasis:
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    try:
        n, s = int(tokens[0]), int(tokens[1])
        data = [float(t) for t in tokens[2:]]
    except (IndexError, ValueError) as exc:
        raise MatrixFormatError(f"bad basis file: {exc}") from exc
    if len(data) != n * s:
        raise MatrixFormatError(f"expected {n}x{s} entries, got {len(data)}")
    m = np.array(data, dtype=float).reshape(n, s)
    return qr_orthonormalize(m)
