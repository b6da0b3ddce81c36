#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "scq/io.hpp"
#include "scq/model.hpp"

namespace scq::test {

inline std::string data_path(const std::string& name) { return std::string(SCQ_DATA_DIR) + "/" + name; }

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> g;
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

// G G^T + shift * I, well conditioned for small shift > 0.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double shift = 0.5) {
    const Matrix g = random_matrix(rng, n, n);
    return g * g.transpose() / static_cast<double>(n) + shift * Matrix::Identity(n, n);
}

inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
}

inline CircuitHamiltonian quadratic_toy(const Matrix& c_inv, const Matrix& m0,
                                        std::vector<ModeKind> kinds = {}, std::vector<Junction> junctions = {}) {
    HamiltonianInputs in;
    in.kinds = kinds.empty() ? std::vector<ModeKind>(c_inv.rows(), ModeKind::Inductor) : std::move(kinds);
    in.C_inv = c_inv;
    in.M0 = m0;
    in.junctions = std::move(junctions);
    return make_hamiltonian(std::move(in));
}

// One junction mode (0) and one inductor mode (1), both shunted.
inline CircuitHamiltonian junction_toy(double coupling_c = 0.3, double coupling_m = 0.2, double ej = 1.5,
                                       int sign = 1) {
    Matrix c(2, 2), m(2, 2);
    c << 2.0, coupling_c, coupling_c, 1.5;
    m << 1.2, coupling_m, coupling_m, 0.9;
    return quadratic_toy(c, m, {ModeKind::Junction, ModeKind::Inductor}, {{ej, sign}});
}

}  // namespace scq::test

namespace scq::test {

// Orders columns by descending magnitude of their dominant entry and makes that entry positive.
inline Matrix normalize_columns(const Matrix& a) {
    std::vector<std::pair<double, Vector>> cols;
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        Eigen::Index idx = 0;
        const double mag = a.col(k).cwiseAbs().maxCoeff(&idx);
        cols.emplace_back(mag, a(idx, k) < 0 ? Vector(-a.col(k)) : Vector(a.col(k)));
    }
    std::stable_sort(cols.begin(), cols.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    Matrix out(a.rows(), a.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k) out.col(k) = cols[k].second;
    return out;
}

}  // namespace scq::test
