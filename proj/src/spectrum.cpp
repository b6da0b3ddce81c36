#include "scq/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "scq/errors.hpp"

namespace scq {

namespace {

std::vector<int> dims_of(const std::vector<LocalMode>& locals) {
    std::vector<int> d;
    for (const LocalMode& l : locals) d.push_back(l.dim());
    return d;
}

std::vector<LocalMode> truncate_all(const std::vector<LocalMode>& full, const std::vector<int>& d) {
    std::vector<LocalMode> out;
    for (std::size_t i = 0; i < full.size(); ++i) out.push_back(full[i].truncated(d[i]));
    return out;
}

// Copies amplitudes of psi (dims `from`) into the product space `to`, dropping states beyond it.
CVector embed(const CVector& psi, const std::vector<int>& from, const std::vector<int>& to) {
    Eigen::Index total = 1;
    for (int d : to) total *= d;
    CVector out = CVector::Zero(total);
    const std::size_t n = from.size();
    std::vector<int> idx(n, 0);
    for (Eigen::Index src = 0; src < psi.size(); ++src) {
        bool inside = true;
        Eigen::Index dst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            inside = inside && idx[k] < to[k];
            dst = dst * to[k] + idx[k];
        }
        if (inside) out(dst) = psi(src);
        for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
            if (++idx[k] < from[k]) break;
            idx[k] = 0;
        }
    }
    return out;
}

}  // namespace

SpectrumResult solve_spectrum(const CircuitHamiltonian& h, const std::vector<int>& cutoffs, int k,
                              const SpectrumOptions& opts) {
    return solve_spectrum(h, build_local_modes(h, cutoffs, opts.basis), k, opts);
}

SpectrumResult solve_spectrum(const CircuitHamiltonian& h, const std::vector<LocalMode>& locals, int k,
                              const SpectrumOptions& opts, const CVector* start) {
    const ComplexOperator op = assemble_hamiltonian(h, locals);
    if (k < 1 || k > op.dim()) throw DimensionError("k must lie in [1, product dimension]");
    SpectrumResult out;
    out.cutoffs = dims_of(locals);
    if (const auto real_op = to_real(op)) {
        Vector start_real;
        const Vector* sp = nullptr;
        if (start && max_abs(start->imag()) == 0.0) {
            start_real = start->real();
            sp = &start_real;
        }
        const EigenPairs<double> ep = eigensolve<double>(*real_op, k, opts.solver, sp);
        out.eigenvalues = ep.values;
        out.eigenvectors = ep.vectors.cast<Complex>();
        out.residuals = ep.residuals;
        out.matvecs = ep.matvecs;
        out.real_arithmetic = true;
    } else {
        const EigenPairs<Complex> ep = eigensolve<Complex>(op, k, opts.solver, start);
        out.eigenvalues = ep.values;
        out.eigenvectors = ep.vectors;
        out.residuals = ep.residuals;
        out.matvecs = ep.matvecs;
    }
    return out;
}

ReducedDensityMatrix reduced_density_matrix(const CVector& psi, const std::vector<int>& dims, int mode) {
    if (mode < 0 || mode >= static_cast<int>(dims.size())) throw DimensionError("mode index out of range");
    Eigen::Index outer = 1, inner = 1, total = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        total *= dims[j];
        if (static_cast<int>(j) < mode) outer *= dims[j];
        if (static_cast<int>(j) > mode) inner *= dims[j];
    }
    if (psi.size() != total) throw DimensionError("state length does not match the cutoffs");
    const Eigen::Index d = dims[mode];
    ReducedDensityMatrix r;
    r.mode_index = mode;
    r.rho = CMatrix::Zero(d, d);
    using RowC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (Eigen::Index o = 0; o < outer; ++o) {
        Eigen::Map<const RowC> block(psi.data() + o * d * inner, d, inner);
        r.rho.noalias() += block.conjugate() * block.transpose();
    }
    return r;
}

ReducedDensityMatrix reduced_density_matrix(const SpectrumResult& result, int state, int mode) {
    if (state < 0 || state >= result.eigenvectors.cols()) throw DimensionError("state index out of range");
    return reduced_density_matrix(result.eigenvectors.col(state), result.cutoffs, mode);
}

int tail_cutoff(const Vector& populations, double epsilon) {
    int d = static_cast<int>(populations.size());
    while (d > 1 && populations(d - 1) < epsilon) --d;
    return d;
}

AdaptiveResult adaptive_cutoffs(const CircuitHamiltonian& h, const AdaptiveOptions& opts) {
    if (!(opts.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (opts.d_init < 2 || opts.d_max < opts.d_init) throw ValidationError("need 2 <= d_init <= d_max");
    const int n = h.n();
    const int b_max = opts.d_max + 1;
    const std::vector<LocalMode> full = build_local_modes(h, std::vector<int>(n, b_max), opts.spectrum.basis);

    AdaptiveResult res;
    std::vector<int> b(n, opts.d_init);
    CVector previous;
    std::vector<int> previous_dims;
    for (res.rounds = 1; res.rounds <= opts.max_rounds; ++res.rounds) {
        res.history.push_back(b);
        const std::vector<LocalMode> locals = truncate_all(full, b);
        CVector start;
        if (previous.size() > 0) start = embed(previous, previous_dims, b);
        const SpectrumResult sr =
            solve_spectrum(h, locals, 1, opts.spectrum, start.size() > 0 && start.norm() > 0 ? &start : nullptr);
        previous = sr.eigenvectors.col(0);
        previous_dims = b;
        res.ground_energy = sr.eigenvalues(0);

        std::vector<int> next(n);
        res.populations.assign(n, Vector());
        for (int k = 0; k < n; ++k) {
            const Vector p = reduced_density_matrix(sr, 0, k).populations();
            res.populations[k] = p;
            if (p(b[k] - 1) >= opts.epsilon) {
                if (b[k] >= b_max)
                    throw CutoffExceededError("mode " + std::to_string(k) + " needs more than d_max=" +
                                                  std::to_string(opts.d_max) + " local states",
                                              k);
                next[k] = std::min(2 * b[k], b_max);
            } else {
                next[k] = tail_cutoff(p, opts.epsilon) + 1;
            }
        }
        if (next == b) {
            res.converged = true;
            break;
        }
        b = next;
    }
    res.rounds = std::min(res.rounds, opts.max_rounds);
    res.cutoffs.resize(n);
    for (int k = 0; k < n; ++k) res.cutoffs[k] = res.populations[k].size() > 0
                                                     ? tail_cutoff(res.populations[k], opts.epsilon)
                                                     : b[k] - 1;
    return res;
}

std::vector<ConvergenceRow> spectrum_vs_cutoff(const CircuitHamiltonian& h, int k, const std::vector<int>& d_values,
                                               const SpectrumOptions& opts) {
    if (d_values.empty()) return {};
    const int d_top = *std::max_element(d_values.begin(), d_values.end());
    const std::vector<LocalMode> full = build_local_modes(h, std::vector<int>(h.n(), d_top), opts.basis);
    std::vector<ConvergenceRow> rows;
    for (int d : d_values) {
        const SpectrumResult sr = solve_spectrum(h, truncate_all(full, std::vector<int>(h.n(), d)), k, opts);
        rows.push_back({d, sr.eigenvalues});
    }
    return rows;
}

}  // namespace scq
