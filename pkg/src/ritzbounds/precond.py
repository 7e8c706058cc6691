"""SPD preconditioners that commute with the operator.

Three constructions: the inverted absolute value of the shifted operator, the
inverted square of the shifted operator, and an arbitrary polynomial in the
operator that is positive on its spectrum.  All are realized as explicit
dense matrices so the weighted extraction and bound can use the exact square
root.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    TOL_SHIFT,
    TOL_SPD,
    EigenDecomposition,
    SymmetricMatrix,
    frobenius_norm,
    jacobi_eigh,
)
from .errors import NotPositiveOnSpectrum, SingularShift

IDENTITY = "identity"
ABS_VALUE_INVERSE = "abs_value_inverse"
SHIFT_INVERSE_SQUARED = "shift_inverse_squared"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class PreconditionerSpec:
    kind: str
    realized: SymmetricMatrix
    sigma: float | None = None
    coefficients: tuple[float, ...] | None = None


def identity(n: int) -> PreconditionerSpec:
    return PreconditionerSpec(kind=IDENTITY, realized=SymmetricMatrix(np.eye(n)))


def _checked_shift(A, sigma, decomp):
    if decomp is None:
        decomp = jacobi_eigh(A)
    scale = max(np.linalg.norm(A.entries), 1e-300)
    if np.min(np.abs(decomp.eigenvalues - sigma)) <= TOL_SHIFT * scale:
        raise SingularShift(f"sigma={sigma} lies on the spectrum")
    return decomp


def abs_value_inverse(
    A: SymmetricMatrix, sigma: float, decomp: EigenDecomposition | None = None
) -> PreconditionerSpec:
    """T = |A - sigma I|^{-1} on the eigenbasis of A."""
    decomp = _checked_shift(A, sigma, decomp)
    realized = decomp.apply_function(lambda lam: 1.0 / abs(lam - sigma))
    return PreconditionerSpec(kind=ABS_VALUE_INVERSE, realized=realized, sigma=sigma)


def shift_inverse_squared(
    A: SymmetricMatrix, sigma: float, decomp: EigenDecomposition | None = None
) -> PreconditionerSpec:
    """T = (A - sigma I)^{-2}; annihilates the weighted condition number."""
    decomp = _checked_shift(A, sigma, decomp)
    realized = decomp.apply_function(lambda lam: 1.0 / (lam - sigma) ** 2)
    return PreconditionerSpec(
        kind=SHIFT_INVERSE_SQUARED, realized=realized, sigma=sigma
    )


def polynomial_commuting(
    A: SymmetricMatrix, coefficients, decomp: EigenDecomposition | None = None
) -> PreconditionerSpec:
    """T = p(A) for p(t) = c0 + c1 t + ..., requiring p > 0 on the spectrum."""
    coeffs = tuple(float(c) for c in coefficients)
    if decomp is None:
        decomp = jacobi_eigh(A)
    vals = np.polynomial.polynomial.polyval(decomp.eigenvalues, coeffs)
    if np.min(vals) <= TOL_SPD:
        raise NotPositiveOnSpectrum("polynomial non-positive at an eigenvalue")
    q = decomp.eigenvectors
    realized = SymmetricMatrix((q * vals) @ q.T)
    return PreconditionerSpec(
        kind=POLYNOMIAL, realized=realized, coefficients=coeffs
    )


def validate(
    spec: PreconditionerSpec,
    A: SymmetricMatrix,
    decomp: EigenDecomposition | None = None,
) -> dict:
    """Diagnostics: SPD margin, commutation residual and weighted condition."""
    t = spec.realized.entries
    a = A.entries
    t_eigs = jacobi_eigh(spec.realized).eigenvalues
    denom = frobenius_norm(a) * frobenius_norm(t)
    comm = frobenius_norm(t @ a - a @ t) / denom if denom > 0 else 0.0
    out = {
        "spd_margin": float(np.min(t_eigs)),
        "commutation_residual": float(comm),
        "kappa_weighted": None,
    }
    if spec.sigma is not None:
        from .bounds import weighted_condition_number

        if decomp is None:
            decomp = jacobi_eigh(A)
        out["kappa_weighted"] = weighted_condition_number(
            spec.realized, spec.sigma, decomp
        )
    return out
