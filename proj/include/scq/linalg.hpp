#pragma once

// Dense linear-algebra vocabulary shared by every module.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace scq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest absolute entry; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
struct SymEigen {
    Vector values;
    Matrix vectors;
};
SymEigen sym_eigen(const Matrix& a);

/// f(A) for symmetric A via its eigen-decomposition.
template <typename F>
Matrix sym_function(const Matrix& a, F&& f) {
    const SymEigen e = sym_eigen(a);
    Vector fv(e.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
    return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

/// A^p for symmetric positive definite A (p = 1/2, -1/2, -1 ...).
Matrix spd_power(const Matrix& a, double p);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& a);

/// Spectral norm of a symmetric matrix.
double sym_norm2(const Matrix& a);

/// Standard symplectic form [[0, I], [-I, 0]] of size 2n.
Matrix symplectic_form(Eigen::Index n);

/// Block-diagonal assembly diag(a, b).
Matrix block_diag(const Matrix& a, const Matrix& b);

/// Rows/columns selected by `idx`.
Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols);
Matrix select_rows(const Matrix& a, const std::vector<int>& rows);
Matrix select_cols(const Matrix& a, const std::vector<int>& cols);

}  // namespace scq
