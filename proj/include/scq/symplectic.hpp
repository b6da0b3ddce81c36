#pragma once

// Williamson normal form: S^T M S = diag(Lambda, Lambda) with S symplectic.

#include <optional>

#include "scq/linalg.hpp"

namespace scq {

struct SymplecticFactorization {
    Matrix S;        // 2n x 2n
    Vector Lambda;   // n symplectic eigenvalues, ascending
    std::optional<Matrix> block_form;  // S_n when S = diag(S_n, S_n^{-T})
};

/// Full Williamson factorization of a symmetric positive definite 2n x 2n matrix.
/// Throws NotPositiveDefiniteError or PairingError.
SymplecticFactorization williamson(const Matrix& m);

/// Block-diagonal factorization of M = diag(A, B) with A, B symmetric positive definite.
/// Columns of S_n are sign-fixed so their largest entry is positive.
SymplecticFactorization block_williamson(const Matrix& a, const Matrix& b);

/// max|S^T Omega S - Omega|.
double is_symplectic(const Matrix& s);

}  // namespace scq
