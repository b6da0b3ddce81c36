#include "scq/freemode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scq/errors.hpp"

namespace scq {

namespace {

// Orthogonal projector onto the right null space of `a` (rows x n).
Matrix kernel_projector(const Matrix& a, Eigen::Index n, double threshold, const char* name) {
    if (a.rows() == 0 || a.size() == 0 || max_abs(a) == 0.0) return Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double cut = threshold * s(0);
    Matrix kernel(n, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sigma = i < s.size() ? s(i) : 0.0;
        if (sigma > cut / 10.0 && sigma < cut * 10.0)
            throw ThresholdAmbiguityError(std::string("singular value ") + std::to_string(sigma) + " of " +
                                          name + " is within a factor of 10 of the free-mode cut " +
                                          std::to_string(cut));
        if (sigma < cut) {
            kernel.conservativeResize(Eigen::NoChange, kernel.cols() + 1);
            kernel.col(kernel.cols() - 1) = svd.matrixV().col(i);
        }
    }
    return kernel * kernel.transpose();
}

// Greedy Gram-Schmidt of the coordinate axes `axes` projected by `projector`: at each step the
// axis with the largest remaining component is taken. Returns (axis, unit vector) pairs.
std::vector<std::pair<int, Vector>> greedy_axis_basis(const Matrix& projector, const std::vector<int>& axes,
                                                      int count) {
    const Eigen::Index n = projector.rows();
    std::vector<std::pair<int, Vector>> chosen;
    std::vector<bool> used(axes.size(), false);
    for (int step = 0; step < count; ++step) {
        int best = -1;
        double best_norm = -1.0;
        Vector best_vec;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            if (used[a]) continue;
            Vector r = projector.col(axes[a]);
            for (const auto& [axis, q] : chosen) r -= q.dot(r) * q;
            const double nr = r.norm();
            if (nr > best_norm) {
                best_norm = nr;
                best = static_cast<int>(a);
                best_vec = r;
            }
        }
        if (best < 0 || best_norm < 1e-6)
            throw Error("could not complete an orthonormal basis of the requested subspace");
        used[best] = true;
        Vector q = best_vec / best_norm;
        // second pass for orthogonality
        for (const auto& [axis, p] : chosen) q -= p.dot(q) * p;
        q.normalize();
        if (q(axes[best]) < 0) q = -q;
        chosen.emplace_back(axes[best], q);
    }
    (void)n;
    return chosen;
}

Matrix inverse_spd(const Matrix& a, const char* what) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw PivotError(std::string(what) + " is not positive definite");
    return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

void require_leading_free(const CircuitHamiltonian& h, int F) {
    if (F < 0 || F > h.n()) throw DimensionError("free-mode count out of range");
    const double m_scale = std::max(1.0, max_abs(h.M0));
    const double n_scale = std::max(1.0, max_abs(h.N_ext));
    for (int f = 0; f < F; ++f) {
        if (max_abs(h.M0.row(f)) > 1e-9 * m_scale || (h.N_ext.cols() > 0 && max_abs(h.N_ext.row(f)) > 1e-9 * n_scale))
            throw ValidationError("mode " + std::to_string(f) + " is not an exposed free mode");
    }
}

}  // namespace

FreeModeReport count_free_modes(const CircuitHamiltonian& h, double threshold) {
    const Eigen::Index n = h.n();
    const Matrix p_m = kernel_projector(h.M0, n, threshold, "M0");
    const Matrix p_n = kernel_projector(h.N_ext.transpose(), n, threshold, "N_ext^T");
    Matrix p_l = Matrix::Zero(n, n);
    for (int i : h.inductor_modes()) p_l(i, i) = 1.0;

    const Matrix k = p_l * p_m * p_n * p_m * p_l;
    const SymEigen e = sym_eigen(0.5 * (k + k.transpose()));

    FreeModeReport report;
    report.threshold_used = threshold;
    Matrix free_vectors(n, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lambda = e.values(i);
        if (lambda >= 1.0 - 1e-6) {
            free_vectors.conservativeResize(Eigen::NoChange, free_vectors.cols() + 1);
            free_vectors.col(free_vectors.cols() - 1) = e.vectors.col(i);
        } else if (lambda > 0.5) {
            throw ThresholdAmbiguityError("subspace intersection eigenvalue " + std::to_string(lambda) +
                                          " is neither 0-like nor 1");
        }
    }
    report.F = static_cast<int>(free_vectors.cols());
    report.basis = Matrix(n, 0);
    if (report.F == 0) return report;

    // Align the basis with coordinate axes where possible.
    Matrix proj = free_vectors * free_vectors.transpose();
    for (int j : h.junction_modes()) {
        proj.row(j).setZero();
        proj.col(j).setZero();
    }
    const auto picked = greedy_axis_basis(proj, h.inductor_modes(), report.F);
    report.basis.resize(n, report.F);
    for (int f = 0; f < report.F; ++f) report.basis.col(f) = picked[f].second;
    return report;
}

ExposedHamiltonian expose_free_modes(const CircuitHamiltonian& h, const FreeModeReport& report) {
    const int n = h.n();
    const int F = report.F;
    if (F == 0) return {h, CanonicalTransform::identity(n)};
    if (report.basis.rows() != n || report.basis.cols() != F)
        throw DimensionError("free-mode basis shape does not match the Hamiltonian");
    if (max_abs(report.basis.transpose() * report.basis - Matrix::Identity(F, F)) > 1e-10)
        throw ValidationError("free-mode basis is not orthonormal");

    const std::vector<int> inductors = h.inductor_modes();
    Matrix complement = Matrix::Zero(n, n);
    for (int i : inductors) complement(i, i) = 1.0;
    complement -= report.basis * report.basis.transpose();
    const auto picked = greedy_axis_basis(complement, inductors, static_cast<int>(inductors.size()) - F);

    Matrix w(n, n);
    std::vector<ModeKind> kinds;
    for (int f = 0; f < F; ++f) {
        w.row(f) = report.basis.col(f).transpose();
        kinds.push_back(ModeKind::Inductor);
    }
    int row = F;
    for (int i = 0; i < n; ++i) {
        if (h.kinds[i] == ModeKind::Junction) {
            w.row(row).setZero();
            w(row, i) = 1.0;
            kinds.push_back(ModeKind::Junction);
            ++row;
            continue;
        }
        auto it = std::find_if(picked.begin(), picked.end(), [i](const auto& p) { return p.first == i; });
        if (it == picked.end()) continue;
        w.row(row) = it->second.transpose();
        kinds.push_back(ModeKind::Inductor);
        ++row;
    }

    const CanonicalTransform t(w, w.transpose());
    CircuitHamiltonian out = apply(h, t);
    out.kinds = std::move(kinds);

    // The leading rows are zero up to round-off; make them exact.
    const double m_scale = std::max(1.0, max_abs(out.M0));
    const double n_scale = std::max(1.0, max_abs(out.N_ext));
    for (int f = 0; f < F; ++f) {
        if (max_abs(out.M0.row(f)) > 1e-9 * m_scale ||
            (out.N_ext.cols() > 0 && max_abs(out.N_ext.row(f)) > 1e-9 * n_scale))
            throw ValidationError("free-mode basis does not annihilate M0/N_ext");
        out.M0.row(f).setZero();
        out.M0.col(f).setZero();
        if (out.N_ext.cols() > 0) out.N_ext.row(f).setZero();
    }
    return {std::move(out), t};
}

std::vector<Matrix> gaussian_elim_factors(const CircuitHamiltonian& exposed, int F) {
    require_leading_free(exposed, F);
    const Eigen::Index n = exposed.n();
    Matrix c = inverse_spd(exposed.C_inv, "C_inv");
    const double guard = kDefinitenessTolerance * sym_norm2(c);

    std::vector<Matrix> factors;
    for (int f = 0; f < F; ++f) {
        const double pivot = c(f, f);
        if (!(pivot > guard))
            throw PivotError("elimination pivot " + std::to_string(pivot) + " at mode " + std::to_string(f) +
                             " is not positive");
        Matrix wf = Matrix::Identity(n, n);
        wf.col(f) = -c.col(f) / pivot;
        c = wf * c * wf.transpose();
        c = (0.5 * (c + c.transpose())).eval();
        factors.push_back(std::move(wf));
    }
    return factors;
}

CanonicalTransform gaussian_elim_transform(const CircuitHamiltonian& exposed, int F) {
    const Eigen::Index n = exposed.n();
    const std::vector<Matrix> factors = gaussian_elim_factors(exposed, F);
    // P = W_F ... W_1; each factor is an involution so P^{-1} = W_1 ... W_F.
    Matrix p = Matrix::Identity(n, n);
    Matrix p_inv = Matrix::Identity(n, n);
    for (const Matrix& wf : factors) {
        p = wf * p;
        p_inv = p_inv * wf;
    }
    return CanonicalTransform(p_inv.transpose(), p.transpose());
}

CanonicalTransform block_elim_transform(const CircuitHamiltonian& exposed, int F) {
    require_leading_free(exposed, F);
    const Eigen::Index n = exposed.n();
    if (F == 0) return CanonicalTransform::identity(static_cast<int>(n));
    const Matrix c = inverse_spd(exposed.C_inv, "C_inv");
    const Matrix a = c.topLeftCorner(F, F);
    const Matrix x = c.topRightCorner(F, n - F);
    if (!(min_eigenvalue(a) > kDefinitenessTolerance * sym_norm2(c)))
        throw PivotError("free-mode block of the capacitance matrix is singular");
    const Matrix gain = x.transpose() * inverse_spd(a, "free-mode capacitance block");

    Matrix lower = Matrix::Identity(n, n);  // (W^T)^{-1}
    lower.bottomLeftCorner(n - F, F) = -gain;
    Matrix lower_inv = Matrix::Identity(n, n);
    lower_inv.bottomLeftCorner(n - F, F) = gain;
    return CanonicalTransform(lower_inv.transpose(), lower.transpose());
}

CircuitHamiltonian drop_leading_modes(const CircuitHamiltonian& h, int F) {
    const int n = h.n();
    std::vector<int> keep(n - F);
    std::iota(keep.begin(), keep.end(), F);
    CircuitHamiltonian out;
    out.kinds.assign(h.kinds.begin() + F, h.kinds.end());
    out.C_inv = submatrix(h.C_inv, keep, keep);
    out.M0 = submatrix(h.M0, keep, keep);
    out.N_ext = select_rows(h.N_ext, keep);
    out.C_V = select_rows(h.C_V, keep);
    out.J_args = select_cols(h.J_args, keep);
    out.junctions = h.junctions;
    out.Phi_x = h.Phi_x;
    out.V = h.V;
    return out;
}

FreeModeRemoval remove_free_modes(const CircuitHamiltonian& h, double threshold) {
    require_valid(h);
    FreeModeReport report = count_free_modes(h, threshold);
    if (report.F == 0) return {h, CanonicalTransform::identity(h.n()), std::move(report)};

    const ExposedHamiltonian exposed = expose_free_modes(h, report);
    const CanonicalTransform elim = gaussian_elim_transform(exposed.h, report.F);
    const CircuitHamiltonian decoupled = apply(exposed.h, elim);
    return {drop_leading_modes(decoupled, report.F), elim.after(exposed.transform), std::move(report)};
}

}  // namespace scq
