#pragma once

// Single-mode eigenbases and the operators expressed in them.
//
// Operators use the gauge in which the charge n is real symmetric; the flux phi is
// then purely imaginary and every phase factor exp(i a phi) is real.

#include <map>
#include <optional>
#include <vector>

#include "scq/decouple.hpp"
#include "scq/model.hpp"

namespace scq {

enum class PrimitiveKind { HarmonicOscillator, Charge };

struct PrimitiveBasis {
    PrimitiveKind kind = PrimitiveKind::HarmonicOscillator;
    int dim = 200;           // primitive dimension (2 * max_charge + 1 for the charge basis)
    double frequency = 0.0;  // HO: sqrt(C_inv_ii * M0_ii)
    double impedance = 0.0;  // HO: sqrt(C_inv_ii / M0_ii)
    int max_charge = 0;      // charge basis: |n| <= max_charge
};

struct LocalBasisOptions {
    int ho_dim = 200;
    int max_charge = 40;
};

struct LocalMode {
    int mode_index = 0;
    PrimitiveBasis primitive;
    Vector energies;   // ascending
    CMatrix phi_op;    // empty in the charge basis
    CMatrix n_op;
    std::map<double, CMatrix> phase_factors;  // a -> exp(i a phi)

    int dim() const { return static_cast<int>(energies.size()); }
    bool has_phi() const { return phi_op.size() > 0; }
    /// Throws BasisMismatchError if the factor was not built.
    const CMatrix& phase(double a) const;
    /// Keeps the lowest d states.
    LocalMode truncated(int d) const;
};

/// HO when (M0)_ii > 0, charge basis otherwise.
PrimitiveBasis default_primitive(const CircuitHamiltonian& h, int mode, const LocalBasisOptions& opts = {});

/// Diagonalizes the local Hamiltonian
///   1/2 C_inv_ii n^2 + 1/2 (M0)_ii phi^2 + (N Phi_x)_i phi - (C_inv C_V V)_i n + sum amplitude cos(a phi)
/// where the cosines are the local parts of every junction term, and keeps `keep` states.
LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, const PrimitiveBasis& basis, int keep);
LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, int keep, const LocalBasisOptions& opts = {});
/// Harmonic-oscillator primitive of the given dimension.
LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, int primitive_dim, int keep,
                           PrimitiveKind kind);

std::vector<LocalMode> build_local_modes(const CircuitHamiltonian& h, const std::vector<int>& keep,
                                         const LocalBasisOptions& opts = {});

/// Primitive HO operators (n-real gauge) for tests: n = (a + a^dag) / sqrt(2z),
/// phi = i sqrt(z/2) (a - a^dag).
CMatrix ho_phi(int dim, double impedance);
CMatrix ho_n(int dim, double impedance);

}  // namespace scq
