#include "scq/model.hpp"

#include <cmath>
#include <sstream>

#include "scq/errors.hpp"

namespace scq {

namespace {

double relative_asymmetry(const Matrix& a) {
    const double scale = max_abs(a);
    if (scale == 0.0) return 0.0;
    return max_abs(a - a.transpose()) / scale;
}

Matrix symmetrized(const Matrix& a, const char* name) {
    if (a.rows() != a.cols()) throw DimensionError(std::string(name) + " is not square");
    if (relative_asymmetry(a) > kSymmetryTolerance)
        throw ValidationError(std::string(name) + " is not symmetric");
    return 0.5 * (a + a.transpose());
}

}  // namespace

int CircuitHamiltonian::n_junction_modes() const {
    return static_cast<int>(junction_modes().size());
}

int CircuitHamiltonian::n_inductor_modes() const {
    return static_cast<int>(inductor_modes().size());
}

std::vector<int> CircuitHamiltonian::junction_modes() const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
        if (kinds[i] == ModeKind::Junction) out.push_back(i);
    return out;
}

std::vector<int> CircuitHamiltonian::inductor_modes() const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
        if (kinds[i] == ModeKind::Inductor) out.push_back(i);
    return out;
}

Vector CircuitHamiltonian::flux_drive() const {
    if (N_ext.cols() == 0) return Vector::Zero(n());
    return N_ext * Phi_x;
}

Vector CircuitHamiltonian::charge_drive() const {
    if (C_V.cols() == 0) return Vector::Zero(n());
    return C_inv * (C_V * V);
}

CircuitHamiltonian make_hamiltonian(HamiltonianInputs in) {
    const auto n = static_cast<Eigen::Index>(in.kinds.size());
    if (in.C_inv.rows() != n || in.M0.rows() != n)
        throw DimensionError("C_inv and M0 must be " + std::to_string(n) + "x" + std::to_string(n));

    CircuitHamiltonian h;
    h.kinds = std::move(in.kinds);
    h.C_inv = symmetrized(in.C_inv, "C_inv");
    h.M0 = symmetrized(in.M0, "M0");

    h.N_ext = in.N_ext.size() == 0 ? Matrix(n, in.Phi_x.size()) : in.N_ext;
    if (in.N_ext.size() == 0) h.N_ext.setZero();
    h.Phi_x = in.Phi_x.size() == 0 ? Vector::Zero(h.N_ext.cols()) : in.Phi_x;

    h.C_V = in.C_V.size() == 0 ? Matrix(n, in.V.size()) : in.C_V;
    if (in.C_V.size() == 0) h.C_V.setZero();
    h.V = in.V.size() == 0 ? Vector::Zero(h.C_V.cols()) : in.V;

    h.junctions = std::move(in.junctions);
    const std::vector<int> jmodes = h.junction_modes();
    if (h.junctions.size() != jmodes.size())
        throw DimensionError("expected " + std::to_string(jmodes.size()) +
                             " junction energies, got " + std::to_string(h.junctions.size()));
    for (const Junction& j : h.junctions)
        if (j.sign != 1 && j.sign != -1) throw ValidationError("junction sign must be +1 or -1");

    if (in.J_args.size() == 0) {
        h.J_args = Matrix::Zero(static_cast<Eigen::Index>(jmodes.size()), n);
        for (std::size_t r = 0; r < jmodes.size(); ++r) h.J_args(r, jmodes[r]) = 1.0;
    } else {
        h.J_args = std::move(in.J_args);
    }

    const ValidationReport report = validate(h);
    if (!report.dimensions_ok) throw DimensionError(report.dimension_message);
    return h;
}

bool ValidationReport::symmetric() const {
    return c_inv_asymmetry <= kSymmetryTolerance && m0_asymmetry <= kSymmetryTolerance;
}

bool ValidationReport::ok() const {
    return dimensions_ok && symmetric() && c_inv_positive_definite() && m0_positive_semidefinite();
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (!dimensions_ok) os << "dimension mismatch: " << dimension_message << "; ";
    if (c_inv_asymmetry > kSymmetryTolerance) os << "C_inv asymmetry " << c_inv_asymmetry << "; ";
    if (m0_asymmetry > kSymmetryTolerance) os << "M0 asymmetry " << m0_asymmetry << "; ";
    if (!c_inv_positive_definite())
        os << "C_inv not positive definite (min eigenvalue " << c_inv_min_eigenvalue << "); ";
    if (!m0_positive_semidefinite())
        os << "M0 not positive semidefinite (min eigenvalue " << m0_min_eigenvalue << "); ";
    std::string s = os.str();
    return s.empty() ? "ok" : s.substr(0, s.size() - 2);
}

ValidationReport validate(const CircuitHamiltonian& h) {
    ValidationReport r;
    const Eigen::Index n = h.n();
    std::ostringstream msg;
    auto check = [&](bool cond, const std::string& what) {
        if (!cond) {
            r.dimensions_ok = false;
            msg << what << "; ";
        }
    };
    check(h.C_inv.rows() == n && h.C_inv.cols() == n, "C_inv shape");
    check(h.M0.rows() == n && h.M0.cols() == n, "M0 shape");
    check(h.N_ext.rows() == n, "N_ext rows");
    check(h.N_ext.cols() == h.Phi_x.size(), "N_ext columns vs Phi_x");
    check(h.C_V.rows() == n, "C_V rows");
    check(h.C_V.cols() == h.V.size(), "C_V columns vs V");
    check(h.J_args.rows() == static_cast<Eigen::Index>(h.junctions.size()), "J_args rows vs junctions");
    check(h.J_args.cols() == n, "J_args columns");
    check(h.n_junction_modes() == static_cast<int>(h.junctions.size()), "junction count vs junction modes");
    r.dimension_message = msg.str();
    if (!r.dimensions_ok) return r;

    r.c_inv_asymmetry = relative_asymmetry(h.C_inv);
    r.m0_asymmetry = relative_asymmetry(h.M0);
    const Matrix c = 0.5 * (h.C_inv + h.C_inv.transpose());
    const Matrix m = 0.5 * (h.M0 + h.M0.transpose());
    r.c_inv_min_eigenvalue = min_eigenvalue(c);
    r.c_inv_threshold = kDefinitenessTolerance * sym_norm2(c);
    r.m0_min_eigenvalue = min_eigenvalue(m);
    r.m0_threshold = kDefinitenessTolerance * sym_norm2(m);
    return r;
}

void require_valid(const CircuitHamiltonian& h) {
    const ValidationReport r = validate(h);
    if (!r.ok()) throw ValidationError("invalid Hamiltonian: " + r.summary());
}

std::string to_string(ModeKind kind) {
    return kind == ModeKind::Junction ? "junction" : "inductor";
}

ModeKind mode_kind_from_string(const std::string& s) {
    if (s == "junction" || s == "J") return ModeKind::Junction;
    if (s == "inductor" || s == "L") return ModeKind::Inductor;
    throw ParseError("unknown mode kind '" + s + "'");
}

}  // namespace scq
