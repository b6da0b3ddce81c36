#include "scq/product_operator.hpp"

#include <cmath>
#include <numeric>
#include <type_traits>

#include "scq/errors.hpp"

namespace scq {

namespace {

template <typename Scalar>
Scalar conj_scalar(Scalar v) {
    if constexpr (std::is_same_v<Scalar, double>)
        return v;
    else
        return std::conj(v);
}

template <typename Scalar>
using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void mode_extent(const std::vector<int>& dims, int k, Eigen::Index& outer, Eigen::Index& inner) {
    outer = 1;
    inner = 1;
    for (int j = 0; j < k; ++j) outer *= dims[j];
    for (std::size_t j = k + 1; j < dims.size(); ++j) inner *= dims[j];
}

}  // namespace

template <typename Scalar>
void apply_mode(const std::vector<int>& dims, int k,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
    Eigen::Index outer, inner;
    mode_extent(dims, k, outer, inner);
    const Eigen::Index d = dims[k];
    y.resize(x.size());
    if (inner == 1) {
        Eigen::Map<const RowMat<Scalar>> xm(x.data(), outer, d);
        Eigen::Map<RowMat<Scalar>> ym(y.data(), outer, d);
        ym.noalias() = xm * a.transpose();
        return;
    }
    if (outer == 1) {
        Eigen::Map<const RowMat<Scalar>> xm(x.data(), d, inner);
        Eigen::Map<RowMat<Scalar>> ym(y.data(), d, inner);
        ym.noalias() = a * xm;
        return;
    }
    const Eigen::Index block = d * inner;
#pragma omp parallel for schedule(static)
    for (Eigen::Index o = 0; o < outer; ++o) {
        Eigen::Map<const RowMat<Scalar>> xm(x.data() + o * block, d, inner);
        Eigen::Map<RowMat<Scalar>> ym(y.data() + o * block, d, inner);
        ym.noalias() = a * xm;
    }
}

template <typename Scalar>
void apply_mode_reference(const std::vector<int>& dims, int k,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                          Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
    Eigen::Index outer, inner;
    mode_extent(dims, k, outer, inner);
    const Eigen::Index d = dims[k];
    y.setZero(x.size());
    for (Eigen::Index o = 0; o < outer; ++o)
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) {
                const Scalar arc = a(r, c);
                if (arc == Scalar(0)) continue;
                for (Eigen::Index i = 0; i < inner; ++i) y((o * d + r) * inner + i) += arc * x((o * d + c) * inner + i);
            }
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <typename Scalar>
ProductOperator<Scalar>::ProductOperator(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_) {
        if (d < 1) throw DimensionError("mode dimensions must be positive");
        dim_ *= d;
    }
    diag_ = Vector::Zero(dim_);
    single_.resize(dims_.size());
    has_single_.assign(dims_.size(), false);
}

template <typename Scalar>
void ProductOperator<Scalar>::set_diagonal(Vector d) {
    if (d.size() != dim_) throw DimensionError("diagonal length does not match the product dimension");
    diag_ = std::move(d);
}

template <typename Scalar>
void ProductOperator<Scalar>::add_single(int mode, const Mat& op) {
    if (op.rows() != dims_[mode] || op.cols() != dims_[mode]) throw DimensionError("single-mode operator shape");
    if (!has_single_[mode]) {
        single_[mode] = op;
        has_single_[mode] = true;
    } else {
        single_[mode] += op;
    }
}

template <typename Scalar>
void ProductOperator<Scalar>::add_term(Term t) {
    for (const Factor& f : t.factors)
        if (f.mode < 0 || f.mode >= static_cast<int>(dims_.size()) || f.op.rows() != dims_[f.mode] ||
            f.op.cols() != dims_[f.mode])
            throw DimensionError("product-term factor shape");
    terms_.push_back(std::move(t));
}

template <typename Scalar>
void ProductOperator<Scalar>::apply(const Vec& x, Vec& y) const {
    if (x.size() != dim_) throw DimensionError("vector length does not match the operator");
    y = diag_.template cast<Scalar>().cwiseProduct(x);
    Vec a(dim_), b(dim_);
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (!has_single_[k]) continue;
        apply_mode<Scalar>(dims_, static_cast<int>(k), single_[k], x, a);
        y += a;
    }
    for (const Term& t : terms_) {
        for (int pass = 0; pass < (t.with_adjoint ? 2 : 1); ++pass) {
            const Vec* src = &x;
            for (const Factor& f : t.factors) {
                if (pass == 0)
                    apply_mode<Scalar>(dims_, f.mode, f.op, *src, a);
                else
                    apply_mode<Scalar>(dims_, f.mode, f.op.adjoint().eval(), *src, a);
                std::swap(a, b);
                src = &b;
            }
            const Scalar c = pass == 0 ? t.coeff : conj_scalar(t.coeff);
            y += c * b;
        }
    }
}

template <typename Scalar>
void ProductOperator<Scalar>::apply_reference(const Vec& x, Vec& y) const {
    if (x.size() != dim_) throw DimensionError("vector length does not match the operator");
    y.resize(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) y(i) = diag_(i) * x(i);
    Vec a, b;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (!has_single_[k]) continue;
        apply_mode_reference<Scalar>(dims_, static_cast<int>(k), single_[k], x, a);
        y += a;
    }
    for (const Term& t : terms_) {
        for (int pass = 0; pass < (t.with_adjoint ? 2 : 1); ++pass) {
            b = x;
            for (const Factor& f : t.factors) {
                const Mat op = pass == 0 ? f.op : Mat(f.op.adjoint());
                apply_mode_reference<Scalar>(dims_, f.mode, op, b, a);
                b = a;
            }
            const Scalar c = pass == 0 ? t.coeff : conj_scalar(t.coeff);
            y += c * b;
        }
    }
}

template <typename Scalar>
typename ProductOperator<Scalar>::Mat ProductOperator<Scalar>::dense() const {
    const std::size_t n = dims_.size();
    auto embed = [&](const std::vector<const Mat*>& ops) {
        Mat out = Mat::Identity(1, 1);
        for (std::size_t k = 0; k < n; ++k) {
            const Mat id = Mat::Identity(dims_[k], dims_[k]);
            out = kron<Scalar>(out, ops[k] ? *ops[k] : id);
        }
        return out;
    };
    Mat h = Mat::Zero(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) h(i, i) = diag_(i);
    for (std::size_t k = 0; k < n; ++k) {
        if (!has_single_[k]) continue;
        std::vector<const Mat*> ops(n, nullptr);
        ops[k] = &single_[k];
        h += embed(ops);
    }
    for (const Term& t : terms_) {
        std::vector<Mat> own(n);
        std::vector<const Mat*> ops(n, nullptr);
        for (const Factor& f : t.factors) {
            own[f.mode] = ops[f.mode] ? Mat(own[f.mode] * f.op) : f.op;
            ops[f.mode] = &own[f.mode];
        }
        const Mat prod = embed(ops);
        h += t.coeff * prod;
        if (t.with_adjoint) h += conj_scalar(t.coeff) * prod.adjoint();
    }
    return h;
}

template class ProductOperator<double>;
template class ProductOperator<Complex>;
template void apply_mode<double>(const std::vector<int>&, int, const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                 Eigen::VectorXd&);
template void apply_mode<Complex>(const std::vector<int>&, int, const Eigen::MatrixXcd&, const Eigen::VectorXcd&,
                                  Eigen::VectorXcd&);
template void apply_mode_reference<double>(const std::vector<int>&, int, const Eigen::MatrixXd&,
                                           const Eigen::VectorXd&, Eigen::VectorXd&);
template void apply_mode_reference<Complex>(const std::vector<int>&, int, const Eigen::MatrixXcd&,
                                            const Eigen::VectorXcd&, Eigen::VectorXcd&);
template Eigen::MatrixXd kron<double>(const Eigen::MatrixXd&, const Eigen::MatrixXd&);
template Eigen::MatrixXcd kron<Complex>(const Eigen::MatrixXcd&, const Eigen::MatrixXcd&);

ComplexOperator assemble_hamiltonian(const CircuitHamiltonian& h, const std::vector<LocalMode>& locals) {
    const int n = h.n();
    if (static_cast<int>(locals.size()) != n) throw DimensionError("one local mode per Hamiltonian mode");
    std::vector<int> dims(n);
    for (int i = 0; i < n; ++i) {
        if (locals[i].mode_index != i) throw DimensionError("local modes must be ordered by mode index");
        dims[i] = locals[i].dim();
    }
    ComplexOperator op(dims);

    Vector diag(op.dim());
    {
        // tensor sum of local energies, mode 0 slowest
        diag.setZero();
        Eigen::Index inner = op.dim();
        for (int k = 0; k < n; ++k) {
            inner /= dims[k];
            for (Eigen::Index idx = 0; idx < op.dim(); ++idx) diag(idx) += locals[k].energies((idx / inner) % dims[k]);
        }
    }
    op.set_diagonal(std::move(diag));

    const double c_cut = 1e-12 * std::max(1.0, max_abs(h.C_inv));
    const double m_cut = 1e-12 * std::max(1.0, max_abs(h.M0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(h.C_inv(i, j)) > c_cut)
                op.add_term({Complex(h.C_inv(i, j)), {{i, locals[i].n_op}, {j, locals[j].n_op}}, false});
            if (std::abs(h.M0(i, j)) > m_cut) {
                if (!locals[i].has_phi() || !locals[j].has_phi())
                    throw BasisMismatchError("flux coupling between modes " + std::to_string(i) + " and " +
                                             std::to_string(j) + " needs a flux operator on both");
                op.add_term({Complex(h.M0(i, j)), {{i, locals[i].phi_op}, {j, locals[j].phi_op}}, false});
            }
        }

    for (const CosineSplit& s : cosine_splits(h)) {
        if (s.coupling.empty()) continue;
        ComplexOperator::Term t{Complex(0.5 * s.amplitude), {}, true};
        for (const CosineTerm& ct : s.coupling) {
            const CMatrix& p = locals[ct.mode].phase(ct.coefficient);
            t.factors.push_back({ct.mode, p});
            op.add_single(ct.mode, -s.amplitude * 0.5 * (p + p.adjoint()));
        }
        op.add_term(std::move(t));
    }
    return op;
}

namespace {

// Real part R with m = i^e R; e in {0, 1}. Returns -1 when m is neither real nor imaginary.
int split_phase(const CMatrix& m, Matrix& r) {
    const double scale = std::max(1e-300, max_abs(m));
    const double re = max_abs(m.real()), im = max_abs(m.imag());
    if (im <= 1e-12 * scale) {
        r = m.real();
        return 0;
    }
    if (re <= 1e-12 * scale) {
        r = m.imag();
        return 1;
    }
    return -1;
}

}  // namespace

std::optional<RealOperator> to_real(const ComplexOperator& op) {
    RealOperator r(op.dims());
    r.set_diagonal(op.diagonal());
    for (std::size_t k = 0; k < op.dims().size(); ++k) {
        if (op.single()[k].size() == 0) continue;
        Matrix m;
        if (split_phase(op.single()[k], m) != 0) return std::nullopt;
        r.add_single(static_cast<int>(k), m);
    }
    for (const ComplexOperator::Term& t : op.terms()) {
        RealOperator::Term rt{0.0, {}, t.with_adjoint};
        Complex coeff = t.coeff;
        for (const auto& f : t.factors) {
            Matrix m;
            const int e = split_phase(f.op, m);
            if (e < 0) return std::nullopt;
            if (e == 1) coeff *= Complex(0.0, 1.0);
            rt.factors.push_back({f.mode, std::move(m)});
        }
        if (std::abs(coeff.imag()) > 1e-12 * std::max(1e-300, std::abs(coeff))) return std::nullopt;
        rt.coeff = coeff.real();
        r.add_term(std::move(rt));
    }
    return r;
}

}  // namespace scq
