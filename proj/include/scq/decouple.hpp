#pragma once

// Coupling reduction by linear canonical transformations, and the split of a
// transformed junction cosine into local and coupling parts.

#include <string>
#include <vector>

#include "scq/canonical.hpp"
#include "scq/symplectic.hpp"

namespace scq {

enum class DecoupleMethod { SAD, InductorSymplectic, FullSymplectic };

std::string to_string(DecoupleMethod m);

struct DecoupleResult {
    CircuitHamiltonian H_out;
    CanonicalTransform T;
    DecoupleMethod method = DecoupleMethod::SAD;
    double offdiag_before = 0.0;
    double offdiag_after = 0.0;
    int iterations = 0;          // SAD sweeps performed
    int rotations = 0;           // SAD rotations applied
    std::vector<double> trace;   // SAD: offdiag_norm after every applied rotation
    Vector Lambda;               // symplectic methods: symplectic eigenvalues
};

inline constexpr double kDefaultAngleTolerance = 1e-12;
inline constexpr int kDefaultMaxSweeps = 100;

/// Jacobi joint diagonalization of {M0, C_inv} with Givens rotations on inductor pairs,
/// pairs visited in lexicographic order.
DecoupleResult simultaneous_approx_diag(const CircuitHamiltonian& h, int max_sweeps = kDefaultMaxSweeps,
                                        double angle_tol = kDefaultAngleTolerance);

/// Optimal Givens angle for the pair (p, q) of the matrix set: minimizes the squared
/// (p, q) entries of R X R^T, R = [[c, s], [-s, c]]. Returns 0 when no rotation helps.
double jacobi_pair_angle(const std::vector<const Matrix*>& mats, int p, int q);

/// Block Williamson on the inductor submatrices ((M0)_L, (C_inv)_L).
DecoupleResult inductor_symplectic(const CircuitHamiltonian& h);

/// Block Williamson on (M0, C_inv). Requires M0 positive definite.
DecoupleResult full_symplectic(const CircuitHamiltonian& h);

DecoupleResult decouple(const CircuitHamiltonian& h, DecoupleMethod method);

/// One junction term -sign*E*cos(sum_j a_j phi_j) written as
///   sum_j amplitude*cos(a_j phi_j) + amplitude*[cos(sum_j a_j phi_j) - sum_j cos(a_j phi_j)]
/// with amplitude = -sign*E.
struct CosineTerm {
    int mode = 0;
    double coefficient = 0.0;  // a_j
};

struct CosineSplit {
    double amplitude = 0.0;
    std::vector<CosineTerm> local;     // one entry per nonzero a_j
    std::vector<CosineTerm> coupling;  // empty when at most one mode participates

    double local_value(const Vector& phi) const;
    double coupling_value(const Vector& phi) const;
};

inline constexpr double kCosineCoefficientCut = 1e-10;

CosineSplit cosine_split(const Vector& j_row, double energy, int sign);

std::vector<CosineSplit> cosine_splits(const CircuitHamiltonian& h);

}  // namespace scq
