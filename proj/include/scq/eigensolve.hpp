#pragma once

// Lowest eigenpairs of Hermitian operators: dense for small problems, thick-restart
// Lanczos with full reorthogonalization otherwise.

#include <cstdint>
#include <functional>

#include "scq/product_operator.hpp"

namespace scq {

struct EigensolveOptions {
    double tol = 1e-10;            // residual <= tol * |H| estimate
    int dense_limit = 4096;        // dense solve at or below this dimension
    long max_matvecs = 0;          // 0: 10 * dimension
    int basis_size = 0;            // 0: max(2k + 16, 30)
    std::uint64_t seed = 0x5eed5eedULL;
};

template <typename Scalar>
struct EigenPairs {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Vector values;     // ascending
    Mat vectors;       // columns, unit norm
    Vector residuals;  // |H v - E v|
    long matvecs = 0;
};

template <typename Scalar>
using MatVec = std::function<void(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&,
                                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>;

/// Thick-restart Lanczos for the k lowest eigenpairs. Throws ConvergenceError with the
/// best residuals when max_matvecs is exhausted.
template <typename Scalar>
EigenPairs<Scalar> lanczos(const MatVec<Scalar>& apply, Eigen::Index dim, int k, const EigensolveOptions& opts,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* start = nullptr);

template <typename Scalar>
EigenPairs<Scalar> dense_eigensolve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& h, int k);

template <typename Scalar>
EigenPairs<Scalar> eigensolve(const ProductOperator<Scalar>& op, int k, const EigensolveOptions& opts = {},
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* start = nullptr);

}  // namespace scq
