#include "scq/canonical.hpp"

#include <algorithm>
#include <cmath>

#include "scq/errors.hpp"
#include "scq/spectrum.hpp"

namespace scq {

namespace {

void check_inverse(const Matrix& w, const Matrix& w_inv) {
    if (w.rows() != w.cols()) throw SingularTransformError("W must be square");
    if (w_inv.rows() != w.rows() || w_inv.cols() != w.cols())
        throw SingularTransformError("W and W^-1 shapes differ");
    const double n = static_cast<double>(w.rows());
    const double res = max_abs(w * w_inv - Matrix::Identity(w.rows(), w.cols()));
    if (!(res <= 1e-10 * std::max(1.0, n)))
        throw SingularTransformError("W is singular or ill-conditioned (inverse residual " +
                                     std::to_string(res) + ")");
}

}  // namespace

CanonicalTransform::CanonicalTransform(Matrix w) : w_(std::move(w)) {
    if (w_.rows() != w_.cols()) throw SingularTransformError("W must be square");
    w_inv_ = w_.partialPivLu().inverse();
    check_inverse(w_, w_inv_);
}

CanonicalTransform::CanonicalTransform(Matrix w, Matrix w_inv) : w_(std::move(w)), w_inv_(std::move(w_inv)) {
    check_inverse(w_, w_inv_);
}

CanonicalTransform CanonicalTransform::identity(int n) {
    return CanonicalTransform(Matrix::Identity(n, n), Matrix::Identity(n, n));
}

double CanonicalTransform::residual() const {
    return max_abs(w_ * w_inv_ - Matrix::Identity(w_.rows(), w_.cols()));
}

CanonicalTransform CanonicalTransform::after(const CanonicalTransform& first) const {
    return CanonicalTransform(w_ * first.W(), first.W_inv() * w_inv_);
}

CircuitHamiltonian apply(const CircuitHamiltonian& h, const CanonicalTransform& t) {
    if (t.n() != h.n()) throw DimensionError("transform size does not match Hamiltonian");
    const Matrix& w = t.W();
    const Matrix& w_inv = t.W_inv();
    const Matrix w_inv_t = w_inv.transpose();

    CircuitHamiltonian out = h;
    out.C_inv = w * h.C_inv * w.transpose();
    out.M0 = w_inv_t * h.M0 * w_inv;
    out.C_inv = (0.5 * (out.C_inv + out.C_inv.transpose())).eval();
    out.M0 = (0.5 * (out.M0 + out.M0.transpose())).eval();
    out.N_ext = w_inv_t * h.N_ext;
    out.C_V = w_inv_t * h.C_V;
    out.J_args = h.J_args * w_inv;
    return out;
}

double offdiag_norm(const CircuitHamiltonian& h) {
    double s = 0.0;
    for (int i = 0; i < h.n(); ++i)
        for (int j = 0; j < h.n(); ++j)
            if (i != j) s += h.C_inv(i, j) * h.C_inv(i, j) + h.M0(i, j) * h.M0(i, j);
    return s;
}

double spectral_equivalence_check(const CircuitHamiltonian& h, const CircuitHamiltonian& h2, int k,
                                  int cutoff) {
    if (h.n() > 3 || h2.n() > 3) throw DimensionError("spectral equivalence check is limited to 3 modes");
    const std::vector<int> c1(h.n(), cutoff), c2(h2.n(), cutoff);
    const SpectrumResult a = solve_spectrum(h, c1, k);
    const SpectrumResult b = solve_spectrum(h2, c2, k);
    double diff = 0.0;
    for (int i = 0; i < k; ++i) diff = std::max(diff, std::abs(a.eigenvalues(i) - b.eigenvalues(i)));
    return diff;
}

}  // namespace scq
