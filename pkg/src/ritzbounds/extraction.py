"""Standard, harmonic and T-harmonic Rayleigh-Ritz extraction.

Three procedures over a trial subspace span(K):

* standard:   Galerkin condition A u - mu u  perp  K
* harmonic:   Petrov-Galerkin   A v - th v  perp  (A - sigma I) K
* T-harmonic: the harmonic condition in the T-inner product, T SPD

The harmonic procedure has two algebraically equivalent routes: the direct
generalized pencil in the trial coordinates, and a shift-invert reformulation
(standard extraction for (A - sigma I)^{-1} over the transformed subspace).
Both are exposed; the shift-invert route is the numerically safer primary,
the direct route serves as an independent cross-check.

Degenerate harmonic directions (reduced eigenvalue tau with |tau| below the
shift tolerance) are reported with the value +inf and excluded from pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    INF,
    TOL_SHIFT,
    EigenDecomposition,
    OrthonormalBasis,
    SymmetricMatrix,
    jacobi_eigh,
    qr_orthonormalize,
    shift_invert_apply,
)
from .errors import (
    CholeskyFailure,
    ComplexPairs,
    InsufficientFiniteValues,
    NoFinitePair,
    NotPositiveDefinite,
    SingularShift,
)

STANDARD = "standard"
HARMONIC = "harmonic"
T_HARMONIC = "t_harmonic"


@dataclass(frozen=True)
class RitzSet:
    """Extracted approximate eigenpairs, values ascending with inf last."""

    method: str
    values: np.ndarray          # s values; may contain the inf sentinel
    vectors: np.ndarray         # n x s unit-norm extracted vectors
    coefficients: np.ndarray    # s x s trial-space coordinates, column-wise
    shift: float | None = None
    aux_tau: np.ndarray | None = None   # tau = 1/(theta - sigma), harmonic only

    @property
    def s(self) -> int:
        return self.values.shape[0]

    def finite_indices(self) -> np.ndarray:
        return np.flatnonzero(np.isfinite(self.values))


@dataclass(frozen=True)
class PairingResult:
    """Association of one extracted column with a targeted eigenpair."""

    index: int
    target_lambda: float
    target_vector: np.ndarray


def _fix_signs(vectors: np.ndarray, coeffs: np.ndarray) -> None:
    """Flip each column so its largest-magnitude entry is positive."""
    for j in range(vectors.shape[1]):
        i = np.argmax(np.abs(vectors[:, j]))
        if vectors[i, j] < 0:
            vectors[:, j] = -vectors[:, j]
            coeffs[:, j] = -coeffs[:, j]


def _assemble(method, theta, tau, coeffs, K, shift):
    order = np.argsort(np.where(np.isfinite(theta), theta, np.inf), kind="stable")
    theta = theta[order]
    tau = tau[order] if tau is not None else None
    coeffs = coeffs[:, order]
    vectors = K.columns @ coeffs
    norms = np.linalg.norm(vectors, axis=0)
    vectors = vectors / norms
    coeffs = coeffs / norms
    _fix_signs(vectors, coeffs)
    return RitzSet(
        method=method,
        values=theta,
        vectors=vectors,
        coefficients=coeffs,
        shift=shift,
        aux_tau=tau,
    )


def _check_shift(A: SymmetricMatrix, sigma: float, decomp: EigenDecomposition):
    scale = max(np.linalg.norm(A.entries), 1e-300)
    if np.min(np.abs(decomp.eigenvalues - sigma)) <= TOL_SHIFT * scale:
        raise SingularShift(f"sigma={sigma} lies on the spectrum")


def rayleigh_ritz(A: SymmetricMatrix, K: OrthonormalBasis) -> RitzSet:
    """Standard extraction: eigenpairs of the projected matrix K^T A K."""
    h = SymmetricMatrix(K.columns.T @ A.entries @ K.columns)
    d = jacobi_eigh(h)
    return _assemble(STANDARD, d.eigenvalues.copy(), None, d.eigenvectors.copy(), K, None)


def harmonic_rayleigh_ritz(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    decomp: EigenDecomposition | None = None,
) -> RitzSet:
    """Harmonic extraction by the direct generalized pencil.

    Solves K^T S^2 K c = xi K^T S K c (S = A - sigma I) through the Cholesky
    factor of the SPD left-hand side; the reduced symmetric eigenvalues are
    tau = 1/xi and theta = sigma + 1/tau.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    _check_shift(A, sigma, decomp)
    sk = (A.entries - sigma * np.eye(A.n)) @ K.columns
    m1 = sk.T @ sk
    m1 = 0.5 * (m1 + m1.T)
    m2 = K.columns.T @ sk
    m2 = 0.5 * (m2 + m2.T)
    theta, tau, coeffs = _pencil_tau(m1, m2, sigma)
    return _assemble(HARMONIC, theta, tau, coeffs, K, sigma)


def _pencil_tau(m1: np.ndarray, m2: np.ndarray, sigma: float):
    """Solve m2 c = tau m1 c with m1 SPD; map tau to theta = sigma + 1/tau."""
    try:
        ell = np.linalg.cholesky(m1)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure("left-hand side not numerically SPD") from exc
    g = scipy.linalg.solve_triangular(ell, m2, lower=True)
    g = scipy.linalg.solve_triangular(ell, g.T, lower=True).T
    d = jacobi_eigh(SymmetricMatrix(0.5 * (g + g.T)))
    tau = d.eigenvalues.copy()
    coeffs = scipy.linalg.solve_triangular(ell.T, d.eigenvectors, lower=False)
    scale = max(np.max(np.abs(tau)), 1.0)
    theta = np.where(
        np.abs(tau) < TOL_SHIFT * scale, INF, sigma + 1.0 / np.where(tau == 0, 1.0, tau)
    )
    theta[~np.isfinite(theta)] = INF
    return theta, tau, coeffs


def harmonic_via_shift_invert(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    decomp: EigenDecomposition | None = None,
) -> RitzSet:
    """Harmonic extraction via standard Rayleigh-Ritz for (A - sigma I)^{-1}.

    Orthonormalizes S*K to Q, solves the symmetric problem Q^T S^{-1} Q and
    maps each reduced eigenvalue tau to theta = sigma + 1/tau.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    _check_shift(A, sigma, decomp)
    s_mat = A.entries - sigma * np.eye(A.n)
    Q = qr_orthonormalize(s_mat @ K.columns)
    sinv_q = shift_invert_apply(A, sigma, Q.columns, decomp=decomp)
    h = SymmetricMatrix(Q.columns.T @ sinv_q)
    d = jacobi_eigh(h)
    tau = d.eigenvalues.copy()
    # Extracted vector: v = S^{-1} (Q y), pulled back to trial coordinates.
    w = sinv_q @ d.eigenvectors
    coeffs = K.columns.T @ w
    scale = max(np.max(np.abs(tau)), 1.0)
    theta = np.where(
        np.abs(tau) < TOL_SHIFT * scale, INF, sigma + 1.0 / np.where(tau == 0, 1.0, tau)
    )
    theta[~np.isfinite(theta)] = INF
    return _assemble(HARMONIC, theta, tau, coeffs, K, sigma)


def t_harmonic_rayleigh_ritz(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    T: SymmetricMatrix,
    decomp: EigenDecomposition | None = None,
) -> RitzSet:
    """T-harmonic extraction for an SPD weight T.

    Solves the weighted pencil K^T S T S K c = xi K^T S T K c directly.  The
    right-hand matrix is symmetric only when T and A commute; in the general
    SPD case the reduced problem is solved as a real nonsymmetric pencil and
    any complex eigenvalues are rejected.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    _check_shift(A, sigma, decomp)
    t_eigs = jacobi_eigh(T)
    if np.min(t_eigs.eigenvalues) <= 0.0:
        raise NotPositiveDefinite("weight matrix is not SPD")
    sk = (A.entries - sigma * np.eye(A.n)) @ K.columns
    tsk = T.entries @ sk
    m1 = sk.T @ tsk
    m1 = 0.5 * (m1 + m1.T)
    m2 = tsk.T @ K.columns  # K^T S T K; symmetric only for commuting T
    sym_defect = np.linalg.norm(m2 - m2.T)
    if sym_defect <= 1e-10 * max(np.linalg.norm(m2), 1.0):
        theta, tau, coeffs = _pencil_tau(m1, 0.5 * (m2 + m2.T), sigma)
    else:
        theta, tau, coeffs = _pencil_tau_nonsym(m1, m2, sigma)
    return _assemble(T_HARMONIC, theta, tau, coeffs, K, sigma)


def _pencil_tau_nonsym(m1: np.ndarray, m2: np.ndarray, sigma: float):
    try:
        ell = np.linalg.cholesky(m1)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure("left-hand side not numerically SPD") from exc
    g = scipy.linalg.solve_triangular(ell, m2, lower=True)
    g = scipy.linalg.solve_triangular(ell, g.T, lower=True).T
    w, y = np.linalg.eig(g)
    if np.max(np.abs(w.imag)) > 1e-10 * max(np.max(np.abs(w)), 1.0):
        raise ComplexPairs("non-commuting weight produced complex reduced eigenpairs")
    tau = np.real(w)
    coeffs = scipy.linalg.solve_triangular(ell.T, np.real(y), lower=False)
    scale = max(np.max(np.abs(tau)), 1.0)
    theta = np.where(
        np.abs(tau) < TOL_SHIFT * scale, INF, sigma + 1.0 / np.where(tau == 0, 1.0, tau)
    )
    theta[~np.isfinite(theta)] = INF
    return theta, tau, coeffs


def pair_to_eigenvector(
    R: RitzSet, decomp: EigenDecomposition, target_index: int
) -> PairingResult:
    """Pick the finite column best aligned with the targeted eigenvector.

    Maximizes |x^T v_j|; ties go to the smaller |theta - lambda|, then to the
    lower column index.
    """
    finite = R.finite_indices()
    if finite.size == 0:
        raise NoFinitePair("all extracted values are infinite")
    lam = float(decomp.eigenvalues[target_index])
    x = decomp.eigenvectors[:, target_index]
    overlaps = np.abs(x @ R.vectors[:, finite])
    best = -1.0
    chosen = int(finite[0])
    for j, ov in zip(finite, overlaps):
        val_gap = abs(R.values[j] - lam)
        if ov > best + 1e-14:
            best, chosen, chosen_gap = ov, int(j), val_gap
        elif abs(ov - best) <= 1e-14 and val_gap < chosen_gap:
            chosen, chosen_gap = int(j), val_gap
    return PairingResult(index=chosen, target_lambda=lam, target_vector=x)


def select_theta_k(R: RitzSet, lam: float, k: int) -> list[int]:
    """Indices of the k finite extracted values closest to lam."""
    finite = R.finite_indices()
    if k > finite.size:
        raise InsufficientFiniteValues(f"only {finite.size} finite values, need {k}")
    dist = np.abs(R.values[finite] - lam)
    order = np.argsort(dist, kind="stable")
    return sorted(int(finite[i]) for i in order[:k])
