#pragma once

// Matrix-free operators on a tensor-product space: a diagonal, single-mode operators
// and products of single-mode factors.
//
// Index layout is row-major: mode 0 varies slowest.

#include <optional>
#include <vector>

#include "scq/local_mode.hpp"

namespace scq {

/// y = (I (x) A (x) I) x acting on mode k. OpenMP-parallel over the outer index.
template <typename Scalar>
void apply_mode(const std::vector<int>& dims, int k,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y);

/// Serial loop-based version of apply_mode, kept as a reference.
template <typename Scalar>
void apply_mode_reference(const std::vector<int>& dims, int k,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                          Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y);

template <typename Scalar>
class ProductOperator {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    struct Factor {
        int mode;
        Mat op;
    };
    /// coeff * (x)_j factors_j, plus its adjoint when `with_adjoint` is set.
    struct Term {
        Scalar coeff;
        std::vector<Factor> factors;
        bool with_adjoint = false;
    };

    explicit ProductOperator(std::vector<int> dims);

    const std::vector<int>& dims() const { return dims_; }
    Eigen::Index dim() const { return dim_; }
    const Vector& diagonal() const { return diag_; }
    const std::vector<Mat>& single() const { return single_; }
    const std::vector<Term>& terms() const { return terms_; }

    void set_diagonal(Vector d);
    void add_single(int mode, const Mat& op);
    void add_term(Term t);

    /// y = H x.
    void apply(const Vec& x, Vec& y) const;
    /// Same product through apply_mode_reference, serially.
    void apply_reference(const Vec& x, Vec& y) const;
    /// Dense matrix by explicit Kronecker products.
    Mat dense() const;

private:
    std::vector<int> dims_;
    Eigen::Index dim_ = 1;
    Vector diag_;
    std::vector<Mat> single_;
    std::vector<bool> has_single_;
    std::vector<Term> terms_;
};

using RealOperator = ProductOperator<double>;
using ComplexOperator = ProductOperator<Complex>;

/// Kronecker product a (x) b.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b);

/// The Hamiltonian in the product of the local eigenbases:
///   sum of local energies + sum_{i<j} C_inv_ij n_i n_j + (M0)_ij phi_i phi_j
///   + sum_junctions amplitude * [Re prod_j exp(i a_j phi_j) - sum_j cos(a_j phi_j)].
ComplexOperator assemble_hamiltonian(const CircuitHamiltonian& h, const std::vector<LocalMode>& locals);

/// Real form of an operator whose factors are each real or purely imaginary with real
/// overall coefficients; nullopt when no such form exists.
std::optional<RealOperator> to_real(const ComplexOperator& op);

}  // namespace scq
