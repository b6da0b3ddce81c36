#pragma once

// Low-lying spectra in a truncated product of local eigenbases, reduced density
// matrices and cutoff selection.

#include <vector>

#include "scq/eigensolve.hpp"
#include "scq/local_mode.hpp"

namespace scq {

struct SpectrumOptions {
    LocalBasisOptions basis;
    EigensolveOptions solver;
};

struct SpectrumResult {
    Vector eigenvalues;       // ascending, GHz*h
    CMatrix eigenvectors;     // product basis, one column per level
    std::vector<int> cutoffs;
    Vector residuals;
    long matvecs = 0;
    bool real_arithmetic = false;
};

SpectrumResult solve_spectrum(const CircuitHamiltonian& h, const std::vector<int>& cutoffs, int k,
                              const SpectrumOptions& opts = {});

/// Solves with prebuilt local modes; `start` is an optional initial vector.
SpectrumResult solve_spectrum(const CircuitHamiltonian& h, const std::vector<LocalMode>& locals, int k,
                              const SpectrumOptions& opts = {}, const CVector* start = nullptr);

struct ReducedDensityMatrix {
    int mode_index = 0;
    CMatrix rho;

    Vector populations() const { return rho.diagonal().real(); }
};

/// rho(m, m') = sum over the other modes' indices of conj(C(.., m, ..)) C(.., m', ..).
ReducedDensityMatrix reduced_density_matrix(const CVector& psi, const std::vector<int>& dims, int mode);
ReducedDensityMatrix reduced_density_matrix(const SpectrumResult& result, int state, int mode);

struct AdaptiveOptions {
    AdaptiveOptions() { spectrum.solver.tol = 1e-13; }

    double epsilon = 1e-17;
    int d_init = 8;
    int d_max = 100;
    int max_rounds = 10;
    SpectrumOptions spectrum;
};

struct AdaptiveResult {
    std::vector<int> cutoffs;            // d_k: populations at index >= d_k are below epsilon
    std::vector<Vector> populations;     // ground-state populations in the final basis (size d_k + 1)
    std::vector<std::vector<int>> history;  // working basis sizes per round
    double ground_energy = 0.0;
    int rounds = 0;
    bool converged = false;
};

/// Grows or shrinks each mode's basis until the ground state's population tail beyond d_k
/// stays below epsilon. Every solve carries one probe state past d_k. Throws
/// CutoffExceededError naming the mode when d_max is not enough.
AdaptiveResult adaptive_cutoffs(const CircuitHamiltonian& h, const AdaptiveOptions& opts = {});

/// Smallest d with populations(m) < epsilon for every m >= d (at least 1).
int tail_cutoff(const Vector& populations, double epsilon);

struct ConvergenceRow {
    int d = 0;
    Vector energies;
};

/// k lowest levels at each uniform cutoff d.
std::vector<ConvergenceRow> spectrum_vs_cutoff(const CircuitHamiltonian& h, int k, const std::vector<int>& d_values,
                                               const SpectrumOptions& opts = {});

}  // namespace scq
