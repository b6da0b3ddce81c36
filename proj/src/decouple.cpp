#include "scq/decouple.hpp"

#include <cmath>

#include "scq/errors.hpp"

namespace scq {

namespace {

DecoupleResult finish(const CircuitHamiltonian& h, CanonicalTransform t, DecoupleMethod method) {
    CircuitHamiltonian out = apply(h, t);
    DecoupleResult r{std::move(out), std::move(t), method, 0.0, 0.0, 0, 0, {}, {}};
    r.offdiag_before = offdiag_norm(h);
    r.offdiag_after = offdiag_norm(r.H_out);
    return r;
}

void rotate(Matrix& x, int p, int q, double c, double s) {
    // X <- R X R^T on rows/cols p, q
    const Vector rp = x.row(p), rq = x.row(q);
    x.row(p) = c * rp + s * rq;
    x.row(q) = -s * rp + c * rq;
    const Vector cp = x.col(p), cq = x.col(q);
    x.col(p) = c * cp + s * cq;
    x.col(q) = -s * cp + c * cq;
}

}  // namespace

std::string to_string(DecoupleMethod m) {
    switch (m) {
        case DecoupleMethod::SAD: return "sad";
        case DecoupleMethod::InductorSymplectic: return "ios";
        case DecoupleMethod::FullSymplectic: return "fs";
    }
    return "?";
}

double jacobi_pair_angle(const std::vector<const Matrix*>& mats, int p, int q) {
    // X'_pq = u . (cos 2t, sin 2t) with u = (x_pq, -(x_pp - x_qq)/2)
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (const Matrix* x : mats) {
        const Eigen::Vector2d u((*x)(p, q), -0.5 * ((*x)(p, p) - (*x)(q, q)));
        g += u * u.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
    if (!(hi > 0.0) || hi - lo <= 1e-14 * hi) return 0.0;
    Eigen::Vector2d e = es.eigenvectors().col(0);
    if (e(0) < 0) e = -e;
    if (!(lo < g(0, 0))) return 0.0;  // theta = 0 is already optimal
    return 0.5 * std::atan2(e(1), e(0));
}

DecoupleResult simultaneous_approx_diag(const CircuitHamiltonian& h, int max_sweeps, double angle_tol) {
    require_valid(h);
    const int n = h.n();
    const std::vector<int> ind = h.inductor_modes();
    Matrix c = h.C_inv, m = h.M0;
    Matrix w = Matrix::Identity(n, n);

    int sweeps = 0, rotations = 0;
    std::vector<double> trace;
    const std::vector<const Matrix*> set{&m, &c};
    for (; sweeps < max_sweeps;) {
        double largest = 0.0;
        for (std::size_t a = 0; a < ind.size(); ++a) {
            for (std::size_t b = a + 1; b < ind.size(); ++b) {
                const int p = ind[a], q = ind[b];
                const double theta = jacobi_pair_angle(set, p, q);
                if (std::abs(theta) < angle_tol) continue;
                largest = std::max(largest, std::abs(theta));
                const double cs = std::cos(theta), sn = std::sin(theta);
                rotate(c, p, q, cs, sn);
                rotate(m, p, q, cs, sn);
                const Vector wp = w.row(p), wq = w.row(q);
                w.row(p) = cs * wp + sn * wq;
                w.row(q) = -sn * wp + cs * wq;
                ++rotations;
                double off = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != j) off += c(i, j) * c(i, j) + m(i, j) * m(i, j);
                trace.push_back(off);
            }
        }
        ++sweeps;
        if (largest < angle_tol) break;
    }

    DecoupleResult r = finish(h, CanonicalTransform(w, w.transpose()), DecoupleMethod::SAD);
    r.iterations = sweeps;
    r.rotations = rotations;
    r.trace = std::move(trace);
    return r;
}

DecoupleResult inductor_symplectic(const CircuitHamiltonian& h) {
    require_valid(h);
    const int n = h.n();
    const std::vector<int> ind = h.inductor_modes();
    if (ind.empty()) return finish(h, CanonicalTransform::identity(n), DecoupleMethod::InductorSymplectic);

    const Matrix m_l = submatrix(h.M0, ind, ind);
    const Matrix c_l = submatrix(h.C_inv, ind, ind);
    if (!(min_eigenvalue(m_l) > kDefinitenessTolerance * sym_norm2(m_l)))
        throw NotPositiveDefiniteError("inductor block of M0 is not positive definite");
    const SymplecticFactorization f = block_williamson(m_l, c_l);
    const Matrix& s_n = *f.block_form;
    const Matrix s_n_inv = f.S.bottomRightCorner(ind.size(), ind.size()).transpose();

    Matrix w = Matrix::Identity(n, n), w_inv = Matrix::Identity(n, n);
    for (std::size_t a = 0; a < ind.size(); ++a)
        for (std::size_t b = 0; b < ind.size(); ++b) {
            w(ind[a], ind[b]) = s_n_inv(a, b);
            w_inv(ind[a], ind[b]) = s_n(a, b);
        }
    DecoupleResult r = finish(h, CanonicalTransform(w, w_inv), DecoupleMethod::InductorSymplectic);
    r.Lambda = f.Lambda;
    return r;
}

DecoupleResult full_symplectic(const CircuitHamiltonian& h) {
    require_valid(h);
    if (!(min_eigenvalue(h.M0) > kDefinitenessTolerance * sym_norm2(h.M0)))
        throw NotPositiveDefiniteError(
            "full symplectic diagonalization needs M0 positive definite: every junction must be shunted "
            "by an inductor");
    const SymplecticFactorization f = block_williamson(h.M0, h.C_inv);
    const Eigen::Index n = h.n();
    const Matrix w = f.S.bottomRightCorner(n, n).transpose();
    DecoupleResult r = finish(h, CanonicalTransform(w, *f.block_form), DecoupleMethod::FullSymplectic);
    r.Lambda = f.Lambda;
    return r;
}

DecoupleResult decouple(const CircuitHamiltonian& h, DecoupleMethod method) {
    switch (method) {
        case DecoupleMethod::SAD: return simultaneous_approx_diag(h);
        case DecoupleMethod::InductorSymplectic: return inductor_symplectic(h);
        case DecoupleMethod::FullSymplectic: return full_symplectic(h);
    }
    throw Error("unknown decoupling method");
}

CosineSplit cosine_split(const Vector& j_row, double energy, int sign) {
    CosineSplit s;
    s.amplitude = -sign * energy;
    for (Eigen::Index j = 0; j < j_row.size(); ++j)
        if (std::abs(j_row(j)) >= kCosineCoefficientCut) s.local.push_back({static_cast<int>(j), j_row(j)});
    if (s.local.size() > 1) s.coupling = s.local;
    return s;
}

std::vector<CosineSplit> cosine_splits(const CircuitHamiltonian& h) {
    std::vector<CosineSplit> out;
    for (std::size_t r = 0; r < h.junctions.size(); ++r)
        out.push_back(cosine_split(h.J_args.row(r).transpose(), h.junctions[r].energy, h.junctions[r].sign));
    return out;
}

double CosineSplit::local_value(const Vector& phi) const {
    double v = 0.0;
    for (const CosineTerm& t : local) v += amplitude * std::cos(t.coefficient * phi(t.mode));
    return v;
}

double CosineSplit::coupling_value(const Vector& phi) const {
    if (coupling.empty()) return 0.0;
    double arg = 0.0, sum = 0.0;
    for (const CosineTerm& t : coupling) {
        arg += t.coefficient * phi(t.mode);
        sum += std::cos(t.coefficient * phi(t.mode));
    }
    return amplitude * (std::cos(arg) - sum);
}

}  // namespace scq
