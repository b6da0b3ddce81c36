#include "scq/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scq/errors.hpp"

namespace scq {

namespace {

std::vector<int> descending_order(const Vector& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v(a) > v(b); });
    return idx;
}

}  // namespace

SymplecticFactorization williamson(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) throw DimensionError("williamson expects a 2n x 2n matrix");
    const Eigen::Index n = m.rows() / 2;
    const Matrix sym = 0.5 * (m + m.transpose());
    const Matrix m_inv_half = spd_power(sym, -0.5);
    const Matrix omega = symplectic_form(n);

    const CMatrix herm = Complex(0.0, 1.0) * (m_inv_half * omega * m_inv_half).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
    if (solver.info() != Eigen::Success) throw PairingError("Hermitian eigensolver failed");
    const Vector& ev = solver.eigenvalues();  // ascending: -lambda_max ... +lambda_max

    const double scale = ev.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pos = ev(n + k);
        const double neg = ev(n - 1 - k);
        if (!(pos > 0.0) || std::abs(pos + neg) > 1e-8 * scale)
            throw PairingError("eigenvalues of i M^-1/2 Omega M^-1/2 do not pair into +/- lambda");
    }

    // Largest lambda first gives ascending Lambda = 1/lambda.
    Vector d(n);
    Matrix o(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = 2 * n - 1 - k;
        const CVector v = solver.eigenvectors().col(src);
        d(k) = ev(src);
        o.col(k) = std::sqrt(2.0) * v.real();
        o.col(n + k) = -std::sqrt(2.0) * v.imag();
    }
    if (max_abs(o.transpose() * o - Matrix::Identity(2 * n, 2 * n)) > 1e-8)
        throw PairingError("eigenvectors are not conjugate-paired");

    Vector dd(2 * n);
    dd << d, d;
    SymplecticFactorization out;
    out.S = m_inv_half * o * dd.array().rsqrt().matrix().asDiagonal();
    out.Lambda = d.cwiseInverse();
    return out;
}

SymplecticFactorization block_williamson(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionError("block_williamson expects two n x n matrices");
    const Eigen::Index n = a.rows();
    const Matrix a_sym = 0.5 * (a + a.transpose());
    const Matrix b_sym = 0.5 * (b + b.transpose());
    const Matrix a_inv_half = spd_power(a_sym, -0.5);
    const Matrix b_inv_half = spd_power(b_sym, -0.5);
    const Matrix a_inv = a_inv_half * a_inv_half;

    Matrix x = b_inv_half * a_inv * b_inv_half;
    x = (0.5 * (x + x.transpose())).eval();
    const SymEigen e = sym_eigen(x);
    const std::vector<int> order = descending_order(e.values);

    Matrix s_n(n, n), lower(n, n);
    Vector lambda(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double l = e.values(order[k]);
        if (!(l > 0.0)) throw NotPositiveDefiniteError("block_williamson: non-positive eigenvalue");
        const Vector w = e.vectors.col(order[k]);
        // upper block: -A^{-1/2} O1 D^{-1/2} with O1_k = -(1/sqrt(l)) A^{-1/2} B^{-1/2} w
        Vector up = a_inv * (b_inv_half * w) / std::pow(l, 0.75);
        Vector lo = b_inv_half * w / std::pow(l, 0.25);
        Eigen::Index dominant = 0;
        up.cwiseAbs().maxCoeff(&dominant);
        if (up(dominant) < 0) {
            up = -up;
            lo = -lo;
        }
        s_n.col(k) = up;
        lower.col(k) = lo;
        lambda(k) = 1.0 / std::sqrt(l);
    }

    SymplecticFactorization out;
    out.S = block_diag(s_n, lower);
    out.Lambda = lambda;
    out.block_form = s_n;
    return out;
}

double is_symplectic(const Matrix& s) {
    if (s.rows() != s.cols() || s.rows() % 2 != 0) throw DimensionError("symplectic check expects 2n x 2n");
    const Matrix omega = symplectic_form(s.rows() / 2);
    return max_abs(s.transpose() * omega * s - omega);
}

}  // namespace scq
