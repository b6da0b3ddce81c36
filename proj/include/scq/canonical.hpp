#pragma once

// Linear canonical transformations phi -> W phi, n -> W^{-T} n.

#include "scq/linalg.hpp"
#include "scq/model.hpp"

namespace scq {

class CanonicalTransform {
public:
    /// Inverts W with partial-pivot LU; throws SingularTransformError when
    /// max|W W^{-1} - I| exceeds 1e-10 * n.
    explicit CanonicalTransform(Matrix w);
    /// Uses a known inverse; still residual-checked.
    CanonicalTransform(Matrix w, Matrix w_inv);

    static CanonicalTransform identity(int n);

    const Matrix& W() const { return w_; }
    const Matrix& W_inv() const { return w_inv_; }
    /// (W^T)^{-1}, the charge transformation.
    Matrix charge_matrix() const { return w_inv_.transpose(); }
    int n() const { return static_cast<int>(w_.rows()); }
    /// max|W W^{-1} - I|.
    double residual() const;

    /// The transform applying `first` and then this one: W_this * W_first.
    CanonicalTransform after(const CanonicalTransform& first) const;

private:
    Matrix w_;
    Matrix w_inv_;
};

/// C_inv' = W C_inv W^T, M0' = W^{-T} M0 W^{-1}, N' = W^{-T} N, C_V' = W^{-T} C_V,
/// J_args' = J_args W^{-1}. Junction energies, Phi_x, V and mode kinds are carried over.
CircuitHamiltonian apply(const CircuitHamiltonian& h, const CanonicalTransform& t);

/// Sum over i != j of C_inv(i,j)^2 + M0(i,j)^2.
double offdiag_norm(const CircuitHamiltonian& h);

/// Max |E_i(h) - E_i(h2)| over the k lowest levels, both solved at a uniform cutoff.
/// Desk-scale check for Hamiltonians with at most three modes.
double spectral_equivalence_check(const CircuitHamiltonian& h, const CircuitHamiltonian& h2, int k,
                                  int cutoff);

}  // namespace scq
