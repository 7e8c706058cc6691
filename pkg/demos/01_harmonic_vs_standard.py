"""Why harmonic extraction for interior eigenvalues.

Standard Rayleigh-Ritz can produce spurious interior Ritz values: a value in
the middle of the spectrum whose vector is a poor eigenvector approximation.
Harmonic extraction targets the eigenvalues nearest a shift and flags the
degenerate directions with an infinite value instead.

Run:  python3 demos/01_harmonic_vs_standard.py
"""

import numpy as np

import ritzbounds as rb


def main():
    # A spectrum with a well-separated interior eigenvalue at 5.0.
    values = [1.0, 1.5, 2.0, 2.5, 5.0, 8.0, 8.5, 9.0, 9.5, 10.0]
    a, decomp = rb.gen_matrix(rb.SpectrumSpec.explicit(values), 10, seed=7)
    target = 4  # index of the 5.0 eigenvalue
    sigma = 4.8

    k, realized = rb.gen_subspace(decomp, [target], 0.25, 4, seed=11)
    print(f"trial subspace: dim 4, sin angle to target eigenvector {realized:.3f}\n")

    standard = rb.rayleigh_ritz(a, k)
    harmonic = rb.harmonic_via_shift_invert(a, k, sigma)

    print("standard Ritz values: ", np.round(standard.values, 4))
    print("harmonic Ritz values: ", np.round(harmonic.values, 4))

    x = decomp.eigenvectors[:, target]
    for name, rs in (("standard", standard), ("harmonic", harmonic)):
        pairing = rb.pair_to_eigenvector(rs, decomp, target)
        v = rs.vectors[:, pairing.index]
        sin_v = float(np.sqrt(max(0.0, 1.0 - (x @ v) ** 2)))
        print(
            f"{name:9s} pick: value {rs.values[pairing.index]: .4f}, "
            f"sin angle to eigenvector {sin_v:.4f}"
        )

    rep = rb.harmonic_bound(a, k, sigma, target, decomp=decomp)
    print(
        f"\nharmonic a priori bound: lhs {rep.lhs:.4f} <= rhs {rep.rhs:.4f} "
        f"(kappa {rep.kappa:.2f}, gamma {rep.gamma:.3f}, delta {rep.delta:.3f})"
    )


if __name__ == "__main__":
    main()
