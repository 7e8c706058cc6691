"""Deflation and eigenvalue clusters.

Two ways the bounds degrade, and the remedies the library quantifies:

1. kappa(A - sigma I) is a global quantity; eigenvalues far from sigma
   inflate it.  Restricting the trial subspace inside an invariant subspace
   (deflation) replaces it with the condition number over the restricted
   spectrum only.
2. A clustered target eigenvalue makes the separation delta of any single
   Ritz value tiny; the eigenspace (Frobenius-norm) bounds track the whole
   cluster instead of one vector.

Run:  python3 demos/03_deflation_and_clusters.py
"""

import numpy as np

import ritzbounds as rb


def deflation_demo():
    print("--- deflation ---")
    values = [1.0, 2.0, 2.6, 3.0, 3.4, 4.0, 40.0, 80.0]
    a, decomp = rb.gen_matrix(rb.SpectrumSpec.explicit(values), 8, seed=5)
    sigma = 2.8
    kappa_full = rb.shifted_condition_number(decomp.eigenvalues, sigma)

    window = np.arange(0, 6)  # invariant subspace for the small eigenvalues
    x = rb.OrthonormalBasis(decomp.eigenvectors[:, window])
    kappa_red = rb.shifted_condition_number(decomp.eigenvalues[window], sigma)
    print(f"sigma = {sigma}: kappa_full = {kappa_full:.1f}, "
          f"kappa_deflated = {kappa_red:.1f}")

    red = rb.EigenDecomposition(decomp.eigenvalues[window], np.eye(6))
    k_red, _ = rb.gen_subspace(red, [2], 0.3, 3, seed=21)
    k = rb.OrthonormalBasis(x.columns @ k_red.columns)
    rep = rb.deflated_harmonic_bound(a, x, k, sigma, 2)
    full = rb.harmonic_bound(a, k, sigma, 2, decomp=decomp)
    print(f"rhs with full spectrum     : {full.rhs:.4f}")
    print(f"rhs after deflation        : {rep.rhs:.4f}\n")


def cluster_demo():
    print("--- multiplicity-3 cluster ---")
    values = [2.0, 2.0, 2.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0]
    a, decomp = rb.gen_matrix(rb.SpectrumSpec.explicit(values), 10, seed=9)
    k, _ = rb.gen_subspace(decomp, [0, 1, 2], 0.3, 5, seed=33)

    rep = rb.eigenspace_harmonic_bound(a, k, 3.0, 2.0, k=3, decomp=decomp)
    print(f"sin angle (eigenspace, harmonic Ritz span) = {rep.lhs:.4f}")
    print(f"eigenspace bound rhs                       = {rep.rhs:.4f}")
    print(f"satisfied: {rep.satisfied}")


if __name__ == "__main__":
    deflation_demo()
    cluster_demo()
