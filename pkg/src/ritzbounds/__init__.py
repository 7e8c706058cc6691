"""Rayleigh-Ritz extraction procedures and a priori eigenvector angle bounds.

The library covers standard, harmonic and T-harmonic extraction over a trial
subspace, principal-angle kernels, every associated a priori sine bound, SPD
commuting preconditioners, and a seeded experiment harness with CSV output.
"""

from .core import (
    BOUND_SLACK_REL,
    INF,
    TOL_EIG,
    TOL_ORTH,
    TOL_RANK,
    TOL_SHIFT,
    TOL_SPD,
    EigenDecomposition,
    OrthonormalBasis,
    SymmetricMatrix,
    frobenius_norm,
    jacobi_eigh,
    projector,
    qr_orthonormalize,
    read_basis,
    read_matrix,
    shift_invert_apply,
    sin_angle_subspaces,
    sin_angle_vector_subspace,
    spd_sqrt,
    spectral_norm,
    write_basis,
    write_matrix,
)
from .extraction import (
    PairingResult,
    RitzSet,
    harmonic_rayleigh_ritz,
    harmonic_via_shift_invert,
    pair_to_eigenvector,
    rayleigh_ritz,
    select_theta_k,
    t_harmonic_rayleigh_ritz,
)
from .bounds import (
    BoundReport,
    LemmaProfile,
    b_inverse_norm,
    deflated_harmonic_bound,
    eigenspace_harmonic_bound,
    eigenvalue_cluster,
    harmonic_bound,
    lemma_sin_bounds,
    lemma_tightness_profile,
    saad_bound,
    separation_delta_hermitian,
    shifted_condition_number,
    stewart_frobenius_bound,
    subspace_sin_transport,
    t_harmonic_bound,
    weighted_condition_number,
)
from .precond import (
    PreconditionerSpec,
    abs_value_inverse,
    identity,
    polynomial_commuting,
    shift_inverse_squared,
    validate,
)
from .harness import (
    ExperimentConfig,
    ShiftRule,
    SpectrumSpec,
    TrialRecord,
    emit_csv,
    gen_matrix,
    gen_subspace,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
