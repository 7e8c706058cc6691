"""Evaluators for the a priori angle bounds.

Each evaluator measures the left-hand side of one inequality (a sine of an
angle between an exact eigenvector/eigenspace and an extracted vector or
subspace), computes the right-hand side from first principles, and returns a
BoundReport with the slack and a satisfaction flag.

Covered inequalities:

* two-sided sine transport for a single eigenpair and for eigenspaces,
* the classical Galerkin (Saad-type) bound for standard Ritz vectors and its
  Frobenius-norm eigenspace version,
* the shifted/condition-number bound for harmonic Ritz vectors, its deflated
  variant over an invariant subspace, and its eigenspace extension,
* the preconditioned (T-weighted) harmonic bound for commuting SPD weights.

A separation delta over an empty complement set is +inf, in which case the
gamma^2/delta^2 term vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BOUND_SLACK_REL,
    INF,
    TOL_SHIFT,
    TOL_SPD,
    EigenDecomposition,
    OrthonormalBasis,
    SymmetricMatrix,
    frobenius_norm,
    jacobi_eigh,
    projector,
    qr_orthonormalize,
    shift_invert_apply,
    sin_angle_subspaces,
    sin_angle_vector_subspace,
    spd_sqrt,
    spectral_norm,
)
from .errors import (
    EmptySet,
    NotCommuting,
    NotPositiveDefinite,
    SingularB,
    SingularMatrix,
    SingularShift,
    SubspaceNotContained,
    ZeroVector,
)
from .extraction import (
    RitzSet,
    harmonic_via_shift_invert,
    pair_to_eigenvector,
    rayleigh_ritz,
    select_theta_k,
    t_harmonic_rayleigh_ritz,
)

# Eigenvalues closer than this relative gap form one multiplicity cluster.
CLUSTER_REL_GAP = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality: measured lhs vs computed rhs."""

    bound_id: str
    lhs: float
    gamma: float
    delta: float            # may be +inf
    kappa: float | None
    sin_angle_to_K: float
    rhs: float
    slack: float
    satisfied: bool


@dataclass(frozen=True)
class LemmaProfile:
    """Angles and tightness constants for the two-sided sine transport."""

    phi: float
    phi_A: float
    lower_factor: float
    upper_factor: float
    a0_sq: float
    a1_sq: float


def _make_report(bound_id, lhs, gamma, delta, kappa, sin_k) -> BoundReport:
    factor = 1.0 if not math.isfinite(delta) else math.sqrt(1.0 + (gamma / delta) ** 2)
    rhs = (kappa if kappa is not None else 1.0) * factor * sin_k
    slack = rhs - lhs
    return BoundReport(
        bound_id=bound_id,
        lhs=float(lhs),
        gamma=float(gamma),
        delta=float(delta),
        kappa=None if kappa is None else float(kappa),
        sin_angle_to_K=float(sin_k),
        rhs=float(rhs),
        slack=float(slack),
        satisfied=bool(slack >= -BOUND_SLACK_REL * max(1.0, rhs)),
    )


def _require_nonsingular(decomp: EigenDecomposition, scale: float):
    if np.min(np.abs(decomp.eigenvalues)) <= TOL_SHIFT * max(scale, 1e-300):
        raise SingularMatrix("operator is numerically singular")


def _single_vector_basis(y) -> OrthonormalBasis:
    yv = np.asarray(y, dtype=float).ravel()
    nrm = np.linalg.norm(yv)
    if nrm < 1e-300:
        raise ZeroVector("zero vector")
    return OrthonormalBasis((yv / nrm).reshape(-1, 1))


def lemma_sin_bounds(
    A: SymmetricMatrix,
    target_index: int,
    y,
    decomp: EigenDecomposition | None = None,
):
    """Two-sided transport of sin(x, y) through multiplication by A.

    Returns (LemmaProfile, lower_report, upper_report) where the reports
    verify |l/l_maxmag| sin(x, Ay) <= sin(x, y) <= |l/l_minmag| sin(x, Ay).
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    _require_nonsingular(decomp, np.linalg.norm(A.entries))
    yv = np.asarray(y, dtype=float).ravel()
    if np.linalg.norm(yv) < 1e-300:
        raise ZeroVector("zero vector")
    lam = float(decomp.eigenvalues[target_index])
    x = decomp.eigenvectors[:, target_index]
    mags = np.abs(decomp.eigenvalues)
    lam_maxmag = float(np.max(mags))
    lam_minmag = float(np.min(mags))
    sin_phi = sin_angle_vector_subspace(x, _single_vector_basis(yv))
    sin_phi_a = sin_angle_vector_subspace(x, _single_vector_basis(A.entries @ yv))
    lower_factor = abs(lam) / lam_maxmag
    upper_factor = abs(lam) / lam_minmag
    if decomp.n >= 2:
        a0_sq, a1_sq = lemma_tightness_profile(A, target_index, decomp=decomp)
    else:
        a0_sq = a1_sq = 1.0
    profile = LemmaProfile(
        phi=math.asin(min(sin_phi, 1.0)),
        phi_A=math.asin(min(sin_phi_a, 1.0)),
        lower_factor=lower_factor,
        upper_factor=upper_factor,
        a0_sq=a0_sq,
        a1_sq=a1_sq,
    )
    # Lower side: lower_factor * sin(phi_A) <= sin(phi).
    lower = _make_report("lemma_lower", lower_factor * sin_phi_a, 0.0, INF, None, sin_phi)
    # Upper side: sin(phi) <= upper_factor * sin(phi_A).
    upper = _make_report("lemma_upper", sin_phi, 0.0, INF, upper_factor, sin_phi_a)
    return profile, lower, upper


def lemma_tightness_profile(
    A: SymmetricMatrix,
    target_index: int,
    decomp: EigenDecomposition | None = None,
) -> tuple[float, float]:
    """Courant-Fischer constants (a0^2, a1^2) for the sine-transport ratio.

    a0^2 = lam^2 / max_{j != target} lam_j^2 and
    a1^2 = lam^2 / min_{j != target} lam_j^2, excluding the target index only
    so repeated eigenvalues keep their remaining copies.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    if decomp.n < 2:
        raise ValueError("need n >= 2")
    _require_nonsingular(decomp, np.linalg.norm(A.entries))
    lam = float(decomp.eigenvalues[target_index])
    others = np.delete(decomp.eigenvalues, target_index)
    sq = others**2
    return lam * lam / float(np.max(sq)), lam * lam / float(np.min(sq))


def subspace_sin_transport(
    A: SymmetricMatrix,
    sigma: float | None,
    eigenspace: OrthonormalBasis,
    Y: OrthonormalBasis,
    direction: str = "both",
    decomp: EigenDecomposition | None = None,
):
    """Two-sided sine transport between subspaces through A (or A - sigma I).

    Verifies |l/l_maxmag| sin(X, MY) <= sin(X, Y) <= |l/l_minmag| sin(X, MY)
    with M = A - sigma*I (sigma defaults to 0) and X an eigenspace of A.
    Returns a single report for direction "lower"/"upper", else a pair.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    shift = 0.0 if sigma is None else float(sigma)
    vals = decomp.eigenvalues - shift
    if np.min(np.abs(vals)) <= TOL_SHIFT * max(np.linalg.norm(A.entries), 1e-300):
        raise SingularShift("shifted operator is numerically singular")
    m = A.entries - shift * np.eye(A.n)
    # Eigenvalue of the eigenspace via the Rayleigh quotient of its first column.
    x0 = eigenspace.columns[:, 0]
    lam = float(x0 @ m @ x0)
    mags = np.abs(vals)
    lower_factor = abs(lam) / float(np.max(mags))
    upper_factor = abs(lam) / float(np.min(mags))
    my = qr_orthonormalize(m @ Y.columns)
    sin_y = sin_angle_subspaces(eigenspace, Y)
    sin_my = sin_angle_subspaces(eigenspace, my)
    lower = _make_report(
        "sin_transport_lower", lower_factor * sin_my, 0.0, INF, None, sin_y
    )
    upper = _make_report(
        "sin_transport_upper", sin_y, 0.0, INF, upper_factor, sin_my
    )
    if direction == "lower":
        return lower
    if direction == "upper":
        return upper
    return lower, upper


def _galerkin_gamma(A: SymmetricMatrix, K: OrthonormalBasis, norm) -> float:
    p = projector(K).entries
    coupling = p @ A.entries @ (np.eye(A.n) - p)
    return norm(coupling)


def saad_bound(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    target_index: int,
    decomp: EigenDecomposition | None = None,
    ritz: RitzSet | None = None,
) -> BoundReport:
    """Galerkin bound for a standard Ritz vector against one eigenvector."""
    if decomp is None:
        decomp = jacobi_eigh(A)
    if ritz is None:
        ritz = rayleigh_ritz(A, K)
    pairing = pair_to_eigenvector(ritz, decomp, target_index)
    lam = pairing.target_lambda
    x = pairing.target_vector
    others = np.delete(ritz.values, pairing.index)
    delta = float(np.min(np.abs(lam - others))) if others.size else INF
    gamma = _galerkin_gamma(A, K, spectral_norm)
    lhs = sin_angle_vector_subspace(
        x, _single_vector_basis(ritz.vectors[:, pairing.index])
    )
    sin_k = sin_angle_vector_subspace(x, K)
    return _make_report("saad", lhs, gamma, delta, None, sin_k)


def separation_delta_hermitian(alpha, beta) -> float:
    """Separation of two real eigenvalue sets: min pairwise |a_i - b_j|."""
    a = np.asarray(alpha, dtype=float).ravel()
    b = np.asarray(beta, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptySet("both eigenvalue sets must be nonempty")
    return float(np.min(np.abs(a[:, None] - b[None, :])))


def eigenvalue_cluster(
    decomp: EigenDecomposition, target_lambda: float, scale: float
) -> np.ndarray:
    """Indices of the multiplicity cluster around target_lambda."""
    tol = CLUSTER_REL_GAP * max(scale, 1.0)
    idx = np.flatnonzero(np.abs(decomp.eigenvalues - target_lambda) <= tol)
    if idx.size == 0:
        raise ValueError(f"{target_lambda} is not an eigenvalue")
    return idx


def stewart_frobenius_bound(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    target_lambda: float,
    k: int | None = None,
    decomp: EigenDecomposition | None = None,
) -> BoundReport:
    """Frobenius-norm eigenspace bound for a span of standard Ritz vectors."""
    if decomp is None:
        decomp = jacobi_eigh(A)
    scale = float(np.max(np.abs(decomp.eigenvalues), initial=0.0))
    cluster = eigenvalue_cluster(decomp, target_lambda, scale)
    if k is None:
        k = cluster.size
    x_basis = OrthonormalBasis(decomp.eigenvectors[:, cluster])
    ritz = rayleigh_ritz(A, K)
    selected = select_theta_k(ritz, target_lambda, k)
    complement = [j for j in range(ritz.s) if j not in selected]
    if complement:
        delta = float(np.min(np.abs(target_lambda - ritz.values[complement])))
    else:
        delta = INF
    gamma = _galerkin_gamma(A, K, frobenius_norm)
    u_basis = qr_orthonormalize(ritz.vectors[:, selected])
    lhs = sin_angle_subspaces(x_basis, u_basis)
    sin_k = sin_angle_subspaces(x_basis, K)
    return _make_report("stewart_frobenius", lhs, gamma, delta, None, sin_k)


def shifted_condition_number(eigenvalues, sigma: float) -> float:
    """max |lam_j - sigma| / min |lam_j - sigma| over a spectrum."""
    gaps = np.abs(np.asarray(eigenvalues, dtype=float) - sigma)
    lo = float(np.min(gaps))
    if lo == 0.0:
        raise SingularShift("sigma coincides with an eigenvalue")
    return float(np.max(gaps)) / lo


def _harmonic_delta(values, sigma, lam, excluded) -> float:
    """min over finite values (minus excluded indices) of
    |theta_j - lam| / (|lam - sigma| |theta_j - sigma|)."""
    best = INF
    for j, th in enumerate(values):
        if j in excluded or not math.isfinite(th):
            continue
        best = min(best, abs(th - lam) / (abs(lam - sigma) * abs(th - sigma)))
    return best


def _shift_inverse_matrix(
    A: SymmetricMatrix, sigma: float, decomp: EigenDecomposition
) -> np.ndarray:
    return shift_invert_apply(A, sigma, np.eye(A.n), decomp=decomp)


def harmonic_bound(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    target_index: int,
    decomp: EigenDecomposition | None = None,
    ritz: RitzSet | None = None,
    bound_id: str = "harmonic",
) -> BoundReport:
    """Condition-number bound for a harmonic Ritz vector."""
    if decomp is None:
        decomp = jacobi_eigh(A)
    if ritz is None:
        ritz = harmonic_via_shift_invert(A, K, sigma, decomp=decomp)
    pairing = pair_to_eigenvector(ritz, decomp, target_index)
    lam = pairing.target_lambda
    x = pairing.target_vector
    s_mat = A.entries - sigma * np.eye(A.n)
    q_basis = qr_orthonormalize(s_mat @ K.columns)
    p = projector(q_basis).entries
    sinv = _shift_inverse_matrix(A, sigma, decomp)
    gamma = spectral_norm(p @ sinv @ (np.eye(A.n) - p))
    kappa = shifted_condition_number(decomp.eigenvalues, sigma)
    delta = _harmonic_delta(ritz.values, sigma, lam, {pairing.index})
    lhs = sin_angle_vector_subspace(
        x, _single_vector_basis(ritz.vectors[:, pairing.index])
    )
    sin_k = sin_angle_vector_subspace(x, K)
    return _make_report(bound_id, lhs, gamma, delta, kappa, sin_k)


def deflated_harmonic_bound(
    A: SymmetricMatrix,
    X_basis: OrthonormalBasis,
    K: OrthonormalBasis,
    sigma: float,
    target_index: int,
) -> BoundReport:
    """Harmonic bound with the condition number reduced to an invariant subspace.

    Requires span(K) inside span(X_basis); the whole evaluation happens in the
    invariant coordinates, where the spectrum is the restricted eigenvalue set
    and the target index addresses the restricted spectrum (ascending).
    """
    resid = K.columns - X_basis.columns @ (X_basis.columns.T @ K.columns)
    if spectral_norm(resid) > 1e-10:
        raise SubspaceNotContained("trial subspace leaves the invariant subspace")
    a_red = SymmetricMatrix(X_basis.columns.T @ A.entries @ X_basis.columns)
    k_red = OrthonormalBasis(X_basis.columns.T @ K.columns)
    return harmonic_bound(
        a_red, k_red, sigma, target_index, bound_id="deflated_harmonic"
    )


def eigenspace_harmonic_bound(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    target_lambda: float,
    k: int | None = None,
    decomp: EigenDecomposition | None = None,
) -> BoundReport:
    """Frobenius-norm eigenspace bound for a span of harmonic Ritz vectors."""
    if decomp is None:
        decomp = jacobi_eigh(A)
    scale = float(np.max(np.abs(decomp.eigenvalues), initial=0.0))
    cluster = eigenvalue_cluster(decomp, target_lambda, scale)
    if k is None:
        k = cluster.size
    x_basis = OrthonormalBasis(decomp.eigenvectors[:, cluster])
    ritz = harmonic_via_shift_invert(A, K, sigma, decomp=decomp)
    selected = select_theta_k(ritz, target_lambda, k)
    delta = _harmonic_delta(ritz.values, sigma, target_lambda, set(selected))
    s_mat = A.entries - sigma * np.eye(A.n)
    q_basis = qr_orthonormalize(s_mat @ K.columns)
    p = projector(q_basis).entries
    sinv = _shift_inverse_matrix(A, sigma, decomp)
    gamma = frobenius_norm(p @ sinv @ (np.eye(A.n) - p))
    kappa = shifted_condition_number(decomp.eigenvalues, sigma)
    v_basis = qr_orthonormalize(ritz.vectors[:, selected])
    lhs = sin_angle_subspaces(x_basis, v_basis)
    sin_k = sin_angle_subspaces(x_basis, K)
    return _make_report("eigenspace_harmonic", lhs, gamma, delta, kappa, sin_k)


def weighted_condition_number(
    T: SymmetricMatrix, sigma: float, decomp: EigenDecomposition
) -> float:
    """Condition number of T^{1/2}(A - sigma I) for a weight commuting with A.

    When T commutes with A the squared eigenvalue magnitudes are the Rayleigh
    quotients x_j^T T x_j times (lam_j - sigma)^2 over the eigenvectors of A,
    which avoids the roundoff of forming the explicit square root.
    """
    x = decomp.eigenvectors
    quad = np.einsum("ji,jk,ki->i", x, T.entries, x)
    nu_sq = quad * (decomp.eigenvalues - sigma) ** 2
    lo = float(np.min(nu_sq))
    if lo <= 0.0:
        raise SingularShift("weighted shifted operator is singular")
    return math.sqrt(float(np.max(nu_sq)) / lo)


def t_harmonic_bound(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
    T: SymmetricMatrix,
    target_index: int,
    decomp: EigenDecomposition | None = None,
    force: bool = False,
) -> BoundReport:
    """Condition-number bound for a T-harmonic Ritz vector, commuting SPD T.

    The commutation hypothesis ||TA - AT||_F <= 1e-8 ||A||_F ||T||_F is a
    precondition; `force=True` evaluates the report anyway for exploration.
    """
    if decomp is None:
        decomp = jacobi_eigh(A)
    comm = frobenius_norm(T.entries @ A.entries - A.entries @ T.entries)
    comm_scale = frobenius_norm(A.entries) * frobenius_norm(T.entries)
    if not force and comm > 1e-8 * max(comm_scale, 1e-300):
        raise NotCommuting("weight does not commute with the operator")
    t_decomp = jacobi_eigh(T)
    if np.min(t_decomp.eigenvalues) <= TOL_SPD:
        raise NotPositiveDefinite("weight matrix is not SPD")
    ritz = t_harmonic_rayleigh_ritz(A, K, sigma, T, decomp=decomp)
    pairing = pair_to_eigenvector(ritz, decomp, target_index)
    lam = pairing.target_lambda
    x = pairing.target_vector
    root = spd_sqrt(T)
    s_mat = A.entries - sigma * np.eye(A.n)
    q_basis = qr_orthonormalize(root.entries @ s_mat @ K.columns)
    p = projector(q_basis).entries
    sinv = _shift_inverse_matrix(A, sigma, decomp)
    gamma = spectral_norm(p @ sinv @ (np.eye(A.n) - p))
    kappa = weighted_condition_number(T, sigma, decomp)
    delta = _harmonic_delta(ritz.values, sigma, lam, {pairing.index})
    lhs = sin_angle_vector_subspace(
        x, _single_vector_basis(ritz.vectors[:, pairing.index])
    )
    sin_k = sin_angle_vector_subspace(x, K)
    return _make_report("t_harmonic", lhs, gamma, delta, kappa, sin_k)


def b_inverse_norm(
    A: SymmetricMatrix,
    K: OrthonormalBasis,
    sigma: float,
) -> float:
    """Spectral norm of (K^T (A - sigma I) K)^{-1}, a conditioning diagnostic."""
    b = K.columns.T @ (A.entries - sigma * np.eye(A.n)) @ K.columns
    w = jacobi_eigh(SymmetricMatrix(b)).eigenvalues
    lo = float(np.min(np.abs(w)))
    if lo <= TOL_SHIFT * max(float(np.max(np.abs(w), initial=0.0)), 1.0):
        raise SingularB("projected shifted matrix is numerically singular")
    return 1.0 / lo
