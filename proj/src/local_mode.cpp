#include "scq/local_mode.hpp"

#include <cmath>

#include "scq/errors.hpp"

namespace scq {

namespace {

constexpr Complex kI(0.0, 1.0);

// Lowering operator a, real.
Matrix lowering(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

// exp(i a phi) with phi = sqrt(z/2) (a + a^dag) real, then rotated by diag(i^k) into the
// n-real gauge.
CMatrix ho_phase_factor(const SymEigen& phi_real, double a) {
    const Eigen::Index dim = phi_real.values.size();
    CVector ph(dim);
    for (Eigen::Index k = 0; k < dim; ++k) ph(k) = std::exp(kI * (a * phi_real.values(k)));
    const CMatrix v = phi_real.vectors.cast<Complex>();
    CMatrix p = v * ph.asDiagonal() * v.transpose();
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) {
            const int shift = static_cast<int>(((c - r) % 4 + 4) % 4);
            static const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            p(r, c) *= powers[shift];
        }
    return p;
}

CMatrix charge_shift(int max_charge, int a) {
    const int dim = 2 * max_charge + 1;
    CMatrix p = CMatrix::Zero(dim, dim);
    for (int m = 0; m < dim; ++m)
        if (m + a >= 0 && m + a < dim) p(m + a, m) = 1.0;
    return p;
}

bool is_integer(double a) { return std::abs(a - std::round(a)) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Phase-factor coefficients this mode needs: local cosines and coupling factors.
struct ModeCosines {
    std::vector<std::pair<double, double>> local;  // (a, amplitude)
    std::vector<double> factors;                   // coefficients used in coupling products
};

ModeCosines mode_cosines(const CircuitHamiltonian& h, int mode) {
    ModeCosines out;
    for (const CosineSplit& s : cosine_splits(h)) {
        for (const CosineTerm& t : s.local)
            if (t.mode == mode) out.local.emplace_back(t.coefficient, s.amplitude);
        for (const CosineTerm& t : s.coupling)
            if (t.mode == mode) out.factors.push_back(t.coefficient);
    }
    return out;
}

// Fixes the eigenvector phases so the largest component is real positive.
void fix_phases(CMatrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index r = 0;
        v.col(c).cwiseAbs().maxCoeff(&r);
        const Complex z = v(r, c);
        if (std::abs(z) > 0) v.col(c) *= std::conj(z) / std::abs(z);
    }
}

}  // namespace

CMatrix ho_phi(int dim, double impedance) {
    const Matrix a = lowering(dim);
    return kI * std::sqrt(impedance / 2.0) * (a - a.transpose()).cast<Complex>();
}

CMatrix ho_n(int dim, double impedance) {
    const Matrix a = lowering(dim);
    return ((a + a.transpose()) / std::sqrt(2.0 * impedance)).cast<Complex>();
}

const CMatrix& LocalMode::phase(double a) const {
    auto it = phase_factors.find(a);
    if (it == phase_factors.end())
        throw BasisMismatchError("mode " + std::to_string(mode_index) + " has no phase factor for a=" +
                                 std::to_string(a));
    return it->second;
}

LocalMode LocalMode::truncated(int d) const {
    if (d < 1 || d > dim()) throw DimensionError("truncation size out of range");
    LocalMode out;
    out.mode_index = mode_index;
    out.primitive = primitive;
    out.energies = energies.head(d);
    if (has_phi()) out.phi_op = phi_op.topLeftCorner(d, d);
    out.n_op = n_op.topLeftCorner(d, d);
    for (const auto& [a, p] : phase_factors) out.phase_factors.emplace(a, p.topLeftCorner(d, d));
    return out;
}

PrimitiveBasis default_primitive(const CircuitHamiltonian& h, int mode, const LocalBasisOptions& opts) {
    const double c = h.C_inv(mode, mode);
    const double m = h.M0(mode, mode);
    PrimitiveBasis b;
    if (m > kDefinitenessTolerance * std::max(1.0, sym_norm2(h.M0))) {
        b.kind = PrimitiveKind::HarmonicOscillator;
        b.dim = opts.ho_dim;
        b.frequency = std::sqrt(c * m);
        b.impedance = std::sqrt(c / m);
    } else {
        b.kind = PrimitiveKind::Charge;
        b.max_charge = opts.max_charge;
        b.dim = 2 * opts.max_charge + 1;
    }
    return b;
}

LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, const PrimitiveBasis& basis, int keep) {
    if (mode < 0 || mode >= h.n()) throw DimensionError("mode index out of range");
    if (keep < 1 || keep > basis.dim) throw DimensionError("keep must lie in [1, primitive dimension]");

    const double c = h.C_inv(mode, mode);
    const double m = h.M0(mode, mode);
    const double flux = h.flux_drive()(mode);
    const double charge = h.charge_drive()(mode);
    const ModeCosines cos_terms = mode_cosines(h, mode);
    const int dim = basis.dim;

    CMatrix ham, n_prim, phi_prim;
    std::map<double, CMatrix> factors;
    auto add_factor = [&](double a, const auto& make) {
        if (!factors.count(a)) factors.emplace(a, make(a));
    };

    if (basis.kind == PrimitiveKind::HarmonicOscillator) {
        if (!(m > 0.0)) throw ValidationError("harmonic-oscillator basis needs (M0)_ii > 0 for mode " +
                                              std::to_string(mode));
        const double z = basis.impedance > 0 ? basis.impedance : std::sqrt(c / m);
        const double w = std::sqrt(c * m);
        n_prim = ho_n(dim, z);
        phi_prim = ho_phi(dim, z);
        // 1/2 C n^2 + 1/2 M phi^2 = (C/(4z)) X^2 - (M z / 4) Y^2, exact when z = sqrt(C/M).
        const Matrix a = lowering(dim);
        const Matrix x = a + a.transpose(), y = a - a.transpose();
        Matrix quad = (c / (4.0 * z)) * x * x - (m * z / 4.0) * y * y;
        if (std::abs(z - std::sqrt(c / m)) <= 1e-12 * z) {
            quad.setZero();
            for (int k = 0; k < dim; ++k) quad(k, k) = w * (k + 0.5);
        }
        ham = quad.cast<Complex>() + flux * phi_prim - charge * n_prim;

        const SymEigen phi_real = sym_eigen(std::sqrt(z / 2.0) * x);
        auto make = [&](double coef) { return ho_phase_factor(phi_real, coef); };
        for (const auto& [coef, amp] : cos_terms.local) {
            add_factor(coef, make);
            const CMatrix& p = factors.at(coef);
            ham += amp * 0.5 * (p + p.adjoint());
        }
        for (double coef : cos_terms.factors) add_factor(coef, make);
    } else {
        if (m != 0.0 || flux != 0.0)
            throw BasisMismatchError("charge basis cannot represent a flux potential on mode " +
                                     std::to_string(mode));
        const int nmax = basis.max_charge;
        n_prim = CMatrix::Zero(dim, dim);
        for (int k = 0; k < dim; ++k) n_prim(k, k) = k - nmax;
        ham = (0.5 * c * n_prim * n_prim - charge * n_prim).eval();
        auto make = [&](double coef) {
            if (!is_integer(coef))
                throw BasisMismatchError("non-integer phase coefficient " + std::to_string(coef) +
                                         " on charge-basis mode " + std::to_string(mode));
            return charge_shift(nmax, static_cast<int>(std::lround(coef)));
        };
        for (const auto& [coef, amp] : cos_terms.local) {
            add_factor(coef, make);
            const CMatrix& p = factors.at(coef);
            ham += amp * 0.5 * (p + p.adjoint());
        }
        for (double coef : cos_terms.factors) add_factor(coef, make);
    }

    ham = 0.5 * (ham + ham.adjoint()).eval();
    CMatrix vecs;
    Vector vals;
    if (max_abs(ham.imag()) <= 1e-14 * std::max(1.0, max_abs(ham.real()))) {
        const SymEigen e = sym_eigen(ham.real());
        vals = e.values;
        vecs = e.vectors.cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(ham);
        if (es.info() != Eigen::Success) throw Error("local eigensolver failed");
        vals = es.eigenvalues();
        vecs = es.eigenvectors();
    }
    fix_phases(vecs);
    const CMatrix v = vecs.leftCols(keep);

    LocalMode out;
    out.mode_index = mode;
    out.primitive = basis;
    out.energies = vals.head(keep);
    out.n_op = v.adjoint() * n_prim * v;
    if (phi_prim.size() > 0) out.phi_op = v.adjoint() * phi_prim * v;
    for (const auto& [coef, p] : factors) out.phase_factors.emplace(coef, v.adjoint() * p * v);
    return out;
}

LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, int keep, const LocalBasisOptions& opts) {
    return build_local_mode(h, mode, default_primitive(h, mode, opts), keep);
}

LocalMode build_local_mode(const CircuitHamiltonian& h, int mode, int primitive_dim, int keep,
                           PrimitiveKind kind) {
    LocalBasisOptions opts;
    opts.ho_dim = primitive_dim;
    opts.max_charge = (primitive_dim - 1) / 2;
    PrimitiveBasis b = default_primitive(h, mode, opts);
    if (b.kind != kind) {
        if (kind == PrimitiveKind::HarmonicOscillator)
            throw ValidationError("harmonic-oscillator basis needs (M0)_ii > 0 for mode " + std::to_string(mode));
        b.kind = PrimitiveKind::Charge;
        b.max_charge = opts.max_charge;
        b.dim = 2 * opts.max_charge + 1;
    }
    return build_local_mode(h, mode, b, keep);
}

std::vector<LocalMode> build_local_modes(const CircuitHamiltonian& h, const std::vector<int>& keep,
                                         const LocalBasisOptions& opts) {
    if (static_cast<int>(keep.size()) != h.n()) throw DimensionError("one cutoff per mode is required");
    std::vector<LocalMode> out(h.n());
    std::vector<std::exception_ptr> errors(h.n());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < h.n(); ++i) {
        try {
            out[i] = build_local_mode(h, i, keep[i], opts);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace scq
