#include "scq/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <type_traits>

#include "scq/errors.hpp"

namespace scq {

namespace {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> random_vector(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if constexpr (std::is_same_v<Scalar, double>) {
            v(i) = g(rng);
        } else {
            const double re = g(rng);
            v(i) = Scalar(re, g(rng));
        }
    }
    return v;
}

template <typename Scalar>
Vector true_residuals(const MatVec<Scalar>& apply, const Vector& values,
                      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& vectors) {
    Vector r(values.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hv;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = vectors.col(i);
        apply(v, hv);
        r(i) = (hv - values(i) * v).norm();
    }
    return r;
}

}  // namespace

template <typename Scalar>
EigenPairs<Scalar> dense_eigensolve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& h, int k) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (k < 1 || k > h.rows()) throw DimensionError("requested more eigenpairs than the dimension");
    const Mat sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    EigenPairs<Scalar> out;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.residuals.resize(k);
    for (int i = 0; i < k; ++i) out.residuals(i) = (sym * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
    return out;
}

template <typename Scalar>
EigenPairs<Scalar> lanczos(const MatVec<Scalar>& apply, Eigen::Index dim, int k, const EigensolveOptions& opts,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* start) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    if (k < 1 || k > dim) throw DimensionError("requested more eigenpairs than the dimension");

    const long max_matvecs = opts.max_matvecs > 0 ? opts.max_matvecs : 10 * static_cast<long>(dim);
    int m = opts.basis_size > 0 ? opts.basis_size : std::max(2 * k + 16, 30);
    m = static_cast<int>(std::min<Eigen::Index>(m, dim));
    const int keep = std::min(m - 1, k + (m - k) / 2);

    std::mt19937_64 rng(opts.seed);
    Mat v(dim, m + 1);
    Vec v0 = (start && start->size() == dim && start->norm() > 0) ? *start : random_vector<Scalar>(dim, rng);
    v.col(0) = v0 / v0.norm();

    Mat t = Mat::Zero(m, m);
    int p = 0;
    long matvecs = 0;
    double norm_est = 0.0;
    Vec w(dim);
    Vector best_res = Vector::Constant(k, std::numeric_limits<double>::infinity());

    for (;;) {
        double beta = 0.0;
        for (int j = p; j < m; ++j) {
            const Vec vj = v.col(j);
            apply(vj, w);
            ++matvecs;
            Vec h = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * h;
            const Vec h2 = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * h2;
            h += h2;
            t.col(j).head(j + 1) = h;
            t.row(j).head(j + 1) = h.adjoint();
            t(j, j) = std::real(t(j, j));
            norm_est = std::max(norm_est, std::abs(std::real(t(j, j))));
            beta = w.norm();
            if (beta <= 1e-14 * std::max(1.0, norm_est)) {
                beta = 0.0;
                if (j + 1 < m) {
                    // Krylov space exhausted; continue with a fresh orthogonal direction.
                    Vec r = random_vector<Scalar>(dim, rng);
                    for (int pass = 0; pass < 2; ++pass) r -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * r);
                    v.col(j + 1) = r / r.norm();
                } else {
                    v.col(j + 1).setZero();
                }
            } else {
                v.col(j + 1) = w / beta;
            }
        }

        Eigen::SelfAdjointEigenSolver<Mat> es(t);
        if (es.info() != Eigen::Success) throw ConvergenceError("projected eigensolver failed");
        const Vector theta = es.eigenvalues();
        const Mat& y = es.eigenvectors();
        norm_est = std::max(norm_est, theta.cwiseAbs().maxCoeff());

        bool converged = true;
        for (int i = 0; i < k; ++i) {
            const double r = std::abs(beta * y(m - 1, i));
            best_res(i) = r;
            if (r > opts.tol * norm_est) converged = false;
        }
        if (converged || matvecs >= max_matvecs) {
            EigenPairs<Scalar> out;
            out.values = theta.head(k);
            out.vectors = v.leftCols(m) * y.leftCols(k);
            for (int i = 0; i < k; ++i) out.vectors.col(i).normalize();
            out.residuals = true_residuals<Scalar>(apply, out.values, out.vectors);
            out.matvecs = matvecs + k;
            if (!converged) {
                std::ostringstream os;
                os << "Lanczos did not converge in " << matvecs << " matrix-vector products; residuals:";
                for (int i = 0; i < k; ++i) os << ' ' << out.residuals(i);
                throw ConvergenceError(os.str());
            }
            return out;
        }

        // Thick restart: keep the lowest Ritz vectors and the residual direction.
        const Mat ritz = v.leftCols(m) * y.leftCols(keep);
        v.leftCols(keep) = ritz;
        v.col(keep) = v.col(m);
        t.setZero();
        for (int i = 0; i < keep; ++i) t(i, i) = theta(i);
        p = keep;
        if (beta == 0.0) {
            Vec r = random_vector<Scalar>(dim, rng);
            for (int pass = 0; pass < 2; ++pass) r -= v.leftCols(keep) * (v.leftCols(keep).adjoint() * r);
            v.col(keep) = r / r.norm();
        }
    }
}

template <typename Scalar>
EigenPairs<Scalar> eigensolve(const ProductOperator<Scalar>& op, int k, const EigensolveOptions& opts,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* start) {
    if (op.dim() <= opts.dense_limit) return dense_eigensolve<Scalar>(op.dense(), k);
    const MatVec<Scalar> apply = [&op](const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                                       Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) { op.apply(x, y); };
    return lanczos<Scalar>(apply, op.dim(), k, opts, start);
}

template EigenPairs<double> dense_eigensolve<double>(const Eigen::MatrixXd&, int);
template EigenPairs<Complex> dense_eigensolve<Complex>(const Eigen::MatrixXcd&, int);
template EigenPairs<double> lanczos<double>(const MatVec<double>&, Eigen::Index, int, const EigensolveOptions&,
                                            const Eigen::VectorXd*);
template EigenPairs<Complex> lanczos<Complex>(const MatVec<Complex>&, Eigen::Index, int, const EigensolveOptions&,
                                              const Eigen::VectorXcd*);
template EigenPairs<double> eigensolve<double>(const RealOperator&, int, const EigensolveOptions&,
                                               const Eigen::VectorXd*);
template EigenPairs<Complex> eigensolve<Complex>(const ComplexOperator&, int, const EigensolveOptions&,
                                                 const Eigen::VectorXcd*);

}  // namespace scq
