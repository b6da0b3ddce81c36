#pragma once

// Circuit Hamiltonian data model.
//
// All quantities are dimensionless in the operators: flux Phi = (hbar/2e) phi and
// charge Q = 2e n, so that with energies in GHz*h the Hamiltonian reads
//
//   H = 1/2 (n - C_V V)^T C_inv (n - C_V V) + 1/2 phi^T M0 phi + phi^T N_ext Phi_x
//       - sum_r sign_r E_r cos(sum_j J_args(r, j) phi_j)
//
// The constant V^T C_V^T C_inv C_V V / 2 is never carried.

#include <string>
#include <vector>

#include "scq/linalg.hpp"

namespace scq {

enum class ModeKind { Junction, Inductor };

/// One Josephson junction: energy in GHz*h and the sweet-spot sign flag.
/// The junction contributes -sign * energy * cos(argument).
struct Junction {
    double energy = 0.0;
    int sign = 1;
};

struct CircuitHamiltonian {
    std::vector<ModeKind> kinds;
    Matrix C_inv;   // n x n, charge coupling
    Matrix M0;      // n x n, flux coupling
    Matrix N_ext;   // n x m_x
    Matrix C_V;     // n x m_v, Farad/(2e)
    Matrix J_args;  // n_J x n, phase-argument coefficients per junction
    std::vector<Junction> junctions;
    Vector Phi_x;   // m_x
    Vector V;       // m_v, volts

    int n() const { return static_cast<int>(kinds.size()); }
    int n_junction_modes() const;
    int n_inductor_modes() const;
    std::vector<int> junction_modes() const;
    std::vector<int> inductor_modes() const;

    /// Linear flux coefficient N_ext * Phi_x (length n; zero when no external flux).
    Vector flux_drive() const;
    /// Linear charge coefficient C_inv * C_V * V (length n; zero when no voltage).
    Vector charge_drive() const;
};

/// Optional pieces of a Hamiltonian; empty matrices mean "absent".
struct HamiltonianInputs {
    std::vector<ModeKind> kinds;
    Matrix C_inv;
    Matrix M0;
    std::vector<Junction> junctions;
    Matrix N_ext;
    Vector Phi_x;
    Matrix C_V;
    Vector V;
    Matrix J_args;  // empty: selector rows, junction r acts on the r-th junction mode
};

/// Builds a Hamiltonian, symmetrizing C_inv and M0 when their asymmetry is within
/// round-off (max|A - A^T| <= 1e-9 max|A|). Throws DimensionError or ValidationError.
CircuitHamiltonian make_hamiltonian(HamiltonianInputs in);

struct ValidationReport {
    bool dimensions_ok = true;
    std::string dimension_message;
    double c_inv_asymmetry = 0.0;  // max|A - A^T| / max|A|
    double m0_asymmetry = 0.0;
    double c_inv_min_eigenvalue = 0.0;
    double c_inv_threshold = 0.0;  // 1e-12 * ||C_inv||_2
    double m0_min_eigenvalue = 0.0;
    double m0_threshold = 0.0;

    bool symmetric() const;
    bool c_inv_positive_definite() const { return c_inv_min_eigenvalue > c_inv_threshold; }
    bool m0_positive_semidefinite() const { return m0_min_eigenvalue >= -m0_threshold; }
    bool ok() const;
    std::string summary() const;
};

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kDefinitenessTolerance = 1e-12;

ValidationReport validate(const CircuitHamiltonian& h);

/// Throws ValidationError carrying the report summary when validation fails.
void require_valid(const CircuitHamiltonian& h);

std::string to_string(ModeKind kind);
ModeKind mode_kind_from_string(const std::string& s);

}  // namespace scq
