#include "scq/linalg.hpp"

#include <cmath>

#include "scq/errors.hpp"

namespace scq {

SymEigen sym_eigen(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix spd_power(const Matrix& a, double p) {
    const SymEigen e = sym_eigen(a);
    if (e.values.size() > 0 && !(e.values(0) > 0.0)) {
        throw NotPositiveDefiniteError("matrix is not positive definite (smallest eigenvalue " +
                                       std::to_string(e.values(0)) + ")");
    }
    Vector fv = e.values.array().pow(p);
    return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

double min_eigenvalue(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double sym_norm2(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix symplectic_form(Eigen::Index n) {
    Matrix omega = Matrix::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n).setIdentity();
    omega.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return omega;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
    return out;
}

Matrix select_rows(const Matrix& a, const std::vector<int>& rows) {
    Matrix out(rows.size(), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = a.row(rows[i]);
    return out;
}

Matrix select_cols(const Matrix& a, const std::vector<int>& cols) {
    Matrix out(a.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = a.col(cols[j]);
    return out;
}

}  // namespace scq
