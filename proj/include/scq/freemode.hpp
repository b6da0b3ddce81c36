#pragma once

// Free modes: flux directions with no potential, i.e. the intersection of
// ker(M0), ker(N_ext^T) and the span of the inductor axes.

#include <vector>

#include "scq/canonical.hpp"

namespace scq {

inline constexpr double kDefaultFreeModeThreshold = 1e-8;

struct FreeModeReport {
    int F = 0;
    Matrix basis;  // n x F, orthonormal free flux directions
    double threshold_used = kDefaultFreeModeThreshold;
};

/// Singular values below threshold * (largest singular value) count as zero. Throws
/// ThresholdAmbiguityError when a singular value lies within a factor of 10 of the cut, or
/// when the projector product has an eigenvalue in the unresolved band (0.5, 1 - 1e-6).
FreeModeReport count_free_modes(const CircuitHamiltonian& h,
                                double threshold = kDefaultFreeModeThreshold);

/// Orthogonal transform on the inductor subspace putting the free directions first.
struct ExposedHamiltonian {
    CircuitHamiltonian h;
    CanonicalTransform transform;
};
ExposedHamiltonian expose_free_modes(const CircuitHamiltonian& h, const FreeModeReport& report);

/// Iterative Gaussian elimination on C = C_inv^{-1} over the first F (free) modes.
/// W_f is the identity except column f, (W_f)_{if} = -(C_{f-1})_{if} / (C_{f-1})_{ff}.
/// The returned transform is W = [(W_F ... W_1)^T]^{-1}.
CanonicalTransform gaussian_elim_transform(const CircuitHamiltonian& exposed, int F);

/// The elimination factors W_1 ... W_F, in application order.
std::vector<Matrix> gaussian_elim_factors(const CircuitHamiltonian& exposed, int F);

/// Direct block elimination: with C = [[A, X], [X^T, B]], (W^T)^{-1} = [[I, 0], [-X^T A^{-1}, I]].
CanonicalTransform block_elim_transform(const CircuitHamiltonian& exposed, int F);

struct FreeModeRemoval {
    CircuitHamiltonian reduced;     // H without its free modes
    CanonicalTransform transform;   // composed n x n transform (expose, then eliminate)
    FreeModeReport report;
};

/// Count, expose, eliminate and drop the free coordinates. C_V of the reduced Hamiltonian is
/// the non-free rows of W^{-T} C_V; every other piece equals plain term deletion.
FreeModeRemoval remove_free_modes(const CircuitHamiltonian& h,
                                  double threshold = kDefaultFreeModeThreshold);

/// Drops coordinates [0, F) of a Hamiltonian whose first F modes are decoupled free modes.
CircuitHamiltonian drop_leading_modes(const CircuitHamiltonian& h, int F);

}  // namespace scq
