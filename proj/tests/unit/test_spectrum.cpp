#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "scq/decouple.hpp"
#include "scq/errors.hpp"
#include "scq/freemode.hpp"
#include "scq/spectrum.hpp"

using namespace scq;

namespace {

CVector random_cvector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v;
}

CMatrix random_cmatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    return test::random_matrix(rng, r, c).cast<Complex>() + Complex(0, 1) * test::random_matrix(rng, r, c).cast<Complex>();
}

// Junction mode 0 coupled to inductor mode 1 both quadratically and through one cosine.
CircuitHamiltonian mixed_toy() {
    HamiltonianInputs in;
    in.kinds = {ModeKind::Junction, ModeKind::Inductor};
    in.C_inv.resize(2, 2);
    in.C_inv << 2.0, 0.3, 0.3, 1.5;
    in.M0.resize(2, 2);
    in.M0 << 1.2, 0.2, 0.2, 0.9;
    in.junctions = {{1.5, 1}};
    in.J_args.resize(1, 2);
    in.J_args << 1.0, 0.5;
    return make_hamiltonian(std::move(in));
}

CMatrix hermitian_cos(const CMatrix& k) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
    const Vector c = es.eigenvalues().array().cos();
    return es.eigenvectors() * c.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("harmonic oscillator energies") {
    Matrix c(1, 1), m(1, 1);
    c << 2.5;
    m << 0.7;
    const CircuitHamiltonian h = test::quadratic_toy(c, m);
    const LocalMode lm = build_local_mode(h, 0, 20);
    const double w = std::sqrt(2.5 * 0.7);
    for (int k = 0; k < 20; ++k) CHECK(lm.energies(k) == doctest::Approx(w * (k + 0.5)).epsilon(1e-8));
    CHECK(lm.primitive.kind == PrimitiveKind::HarmonicOscillator);
}

TEST_CASE("canonical commutator in the primitive oscillator basis") {
    const int d = 20;
    const CMatrix phi = ho_phi(d, 1.7), n = ho_n(d, 1.7);
    const CMatrix comm = phi * n - n * phi;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == d - 1 && j == d - 1) continue;
            const Complex expected = i == j ? Complex(0, 1) : Complex(0, 0);
            CHECK(std::abs(comm(i, j) - expected) < 1e-12);
        }
    CHECK(max_abs(n.imag()) == 0.0);
    CHECK(max_abs(phi.real()) == 0.0);
}

TEST_CASE("charge basis converges in max_charge") {
    Matrix c(1, 1), m = Matrix::Zero(1, 1);
    c << 0.8;
    const CircuitHamiltonian h = test::quadratic_toy(c, m, {ModeKind::Junction}, {{6.0, 1}});
    LocalBasisOptions small, large;
    small.max_charge = 20;
    large.max_charge = 40;
    const LocalMode a = build_local_mode(h, 0, 8, small), b = build_local_mode(h, 0, 8, large);
    CHECK(a.primitive.kind == PrimitiveKind::Charge);
    CHECK(max_abs(a.energies - b.energies) < 1e-6);

    CircuitHamiltonian odd = h;
    odd.J_args(0, 0) = 0.5;
    CHECK_THROWS_AS(build_local_mode(odd, 0, 4), BasisMismatchError);
}

TEST_CASE("local modes of the decoupled fluxonium pair converge in the primitive dimension") {
    const CircuitHamiltonian h = full_symplectic(load_hamiltonian(test::data_path("fluxonium_pair.json"))).H_out;
    for (int mode = 0; mode < h.n(); ++mode) {
        const LocalMode a = build_local_mode(h, mode, 120, 10, PrimitiveKind::HarmonicOscillator);
        const LocalMode b = build_local_mode(h, mode, 240, 10, PrimitiveKind::HarmonicOscillator);
        CHECK(max_abs(a.energies - b.energies) < 1e-8 * std::max(1.0, a.energies.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("phase factors") {
    const CircuitHamiltonian h = mixed_toy();
    const LocalMode full = build_local_mode(h, 1, 40, 40, PrimitiveKind::HarmonicOscillator);
    const CMatrix& u = full.phase(0.5);
    CHECK(max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(40, 40))) < 1e-10);
    CHECK(max_abs(u.imag()) < 1e-12);
    const LocalMode cut = full.truncated(12);
    CHECK(max_abs(CMatrix(cut.phase(0.5) - u.topLeftCorner(12, 12))) == 0.0);
    CHECK_THROWS_AS(full.phase(0.25), BasisMismatchError);
}

TEST_CASE("parallel mode application matches the serial reference") {
    std::mt19937_64 rng(41);
    const std::vector<int> dims{3, 4, 5, 2};
    const Eigen::Index total = 3 * 4 * 5 * 2;
    for (int k = 0; k < 4; ++k) {
        const CMatrix a = random_cmatrix(rng, dims[k], dims[k]);
        const CVector x = random_cvector(rng, total);
        CVector y1, y2;
        apply_mode<Complex>(dims, k, a, x, y1);
        apply_mode_reference<Complex>(dims, k, a, x, y2);
        CHECK(max_abs(CVector(y1 - y2)) < 1e-12);

        const Matrix ar = test::random_matrix(rng, dims[k], dims[k]);
        const Vector xr = test::random_matrix(rng, total, 1);
        Vector z1, z2;
        apply_mode<double>(dims, k, ar, xr, z1);
        apply_mode_reference<double>(dims, k, ar, xr, z2);
        CHECK(max_abs(Vector(z1 - z2)) < 1e-12);
    }
}

TEST_CASE("assembled operator: apply, reference and dense agree and are Hermitian") {
    const CircuitHamiltonian h = mixed_toy();
    const std::vector<LocalMode> locals = build_local_modes(h, {5, 6});
    const ComplexOperator op = assemble_hamiltonian(h, locals);
    const CMatrix dense = op.dense();
    CHECK(max_abs(CMatrix(dense - dense.adjoint())) < 1e-12);
    std::mt19937_64 rng(42);
    const CVector x = random_cvector(rng, op.dim());
    CVector y1, y2;
    op.apply(x, y1);
    op.apply_reference(x, y2);
    CHECK(max_abs(CVector(y1 - y2)) < 1e-12);
    CHECK(max_abs(CVector(y1 - dense * x)) < 1e-12);

    const std::optional<RealOperator> real = to_real(op);
    REQUIRE(real.has_value());
    CHECK(max_abs(CMatrix(real->dense().cast<Complex>() - dense)) < 1e-12);
}

TEST_CASE("uncoupled modes give sums of local energies") {
    const CircuitHamiltonian h = test::junction_toy(0.0, 0.0);
    const std::vector<LocalMode> locals = build_local_modes(h, {6, 6});
    std::vector<double> sums;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) sums.push_back(locals[0].energies(i) + locals[1].energies(j));
    std::sort(sums.begin(), sums.end());
    const SpectrumResult r = solve_spectrum(h, locals, 8);
    for (int i = 0; i < 8; ++i) CHECK(r.eigenvalues(i) == doctest::Approx(sums[i]).epsilon(1e-10));
}

TEST_CASE("spectrum matches a dense Hamiltonian built in the primitive product basis") {
    const CircuitHamiltonian h = mixed_toy();
    const int d = 30;
    const std::vector<LocalMode> locals{build_local_mode(h, 0, d, d, PrimitiveKind::HarmonicOscillator),
                                        build_local_mode(h, 1, d, d, PrimitiveKind::HarmonicOscillator)};
    const SpectrumResult r = solve_spectrum(h, locals, 6);

    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix quad[2], phi[2], n[2];
    for (int i = 0; i < 2; ++i) {
        const double z = std::sqrt(h.C_inv(i, i) / h.M0(i, i));
        const double w = std::sqrt(h.C_inv(i, i) * h.M0(i, i));
        quad[i] = CMatrix::Zero(d, d);
        for (int k = 0; k < d; ++k) quad[i](k, k) = w * (k + 0.5);
        phi[i] = ho_phi(d, z);
        n[i] = ho_n(d, z);
    }
    CMatrix full = kron<Complex>(quad[0], id) + kron<Complex>(id, quad[1]) +
                   h.C_inv(0, 1) * kron<Complex>(n[0], n[1]) + h.M0(0, 1) * kron<Complex>(phi[0], phi[1]);
    const CMatrix arg = h.J_args(0, 0) * kron<Complex>(phi[0], id) + h.J_args(0, 1) * kron<Complex>(id, phi[1]);
    full -= h.junctions[0].sign * h.junctions[0].energy * hermitian_cos(arg);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (full + full.adjoint()), Eigen::EigenvaluesOnly);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues(i) - es.eigenvalues()(i)) < 1e-10);
}

TEST_CASE("Lanczos agrees with the dense solver") {
    const CircuitHamiltonian h = full_symplectic(load_hamiltonian(test::data_path("fluxonium_pair.json"))).H_out;
    const std::vector<int> cut{4, 4, 3, 3, 2};
    SpectrumOptions lanczos_opts;
    lanczos_opts.solver.dense_limit = 0;
    const SpectrumResult a = solve_spectrum(h, cut, 4, lanczos_opts);
    const SpectrumResult b = solve_spectrum(h, cut, 4);
    CHECK(a.matvecs > 0);
    CHECK(b.matvecs == 0);
    CHECK(max_abs(Vector(a.eigenvalues - b.eigenvalues)) < 1e-8);
    for (int i = 0; i < 4; ++i) CHECK(a.residuals(i) < 1e-7);
}

TEST_CASE("separable oscillators") {
    const Vector c = (Vector(3) << 1.0, 2.0, 0.5).finished();
    const Vector m = (Vector(3) << 1.0, 0.75, 3.0).finished();
    const CircuitHamiltonian h = test::quadratic_toy(c.asDiagonal(), m.asDiagonal());
    const Vector w = (c.array() * m.array()).sqrt();
    std::vector<double> oracle;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) oracle.push_back(w(0) * (i + 0.5) + w(1) * (j + 0.5) + w(2) * (k + 0.5));
    std::sort(oracle.begin(), oracle.end());
    const SpectrumResult r = solve_spectrum(h, {6, 6, 6}, 8);
    for (int i = 0; i < 8; ++i) CHECK(r.eigenvalues(i) == doctest::Approx(oracle[i]).epsilon(1e-10));
    CHECK(r.real_arithmetic);
}

TEST_CASE("Cooper-pair box energy table") {
    const CircuitHamiltonian h = remove_free_modes(load_hamiltonian(test::data_path("cooper_pair_box.json"))).reduced;
    const SpectrumResult r = solve_spectrum(h, {30, 30}, 10);
    const double table[] = {-0.999, -0.00981, 0.979, 1.88, 1.97, 2.87, 2.96, 3.32, 3.85, 3.95};
    for (int i = 0; i < 10; ++i) CHECK(std::abs(r.eigenvalues(i) - table[i]) <= 0.01);
    CHECK(std::abs(r.eigenvalues(1) - r.eigenvalues(0) - 0.989) <= 0.005);
}

TEST_CASE("reduced density matrices") {
    std::mt19937_64 rng(43);
    const std::vector<int> dims{3, 4, 2};
    CVector psi = random_cvector(rng, 24);
    psi.normalize();
    for (int mode = 0; mode < 3; ++mode) {
        CMatrix oracle = CMatrix::Zero(dims[mode], dims[mode]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int mp = 0; mp < dims[mode]; ++mp) {
                        int idx[3] = {a, b, c};
                        const int m = idx[mode];
                        idx[mode] = mp;
                        const int i1 = (a * 4 + b) * 2 + c;
                        const int i2 = (idx[0] * 4 + idx[1]) * 2 + idx[2];
                        oracle(m, mp) += std::conj(psi(i1)) * psi(i2);
                    }
        const ReducedDensityMatrix rho = reduced_density_matrix(psi, dims, mode);
        CHECK(max_abs(CMatrix(rho.rho - oracle)) < 1e-12);
        CHECK(std::abs(rho.rho.trace() - Complex(1.0, 0.0)) < 1e-12);
        CHECK(max_abs(CMatrix(rho.rho - rho.rho.adjoint())) < 1e-12);
    }

    const CVector a = random_cvector(rng, 3).normalized(), b = random_cvector(rng, 4).normalized();
    CVector product(12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) product(i * 4 + j) = a(i) * b(j);
    const CMatrix r0 = reduced_density_matrix(product, {3, 4}, 0).rho;
    CHECK(std::abs((r0 * r0).trace() - Complex(1.0, 0.0)) < 1e-12);

    const SpectrumResult s = solve_spectrum(test::junction_toy(), {8, 8}, 3);
    for (int mode = 0; mode < 2; ++mode) {
        const ReducedDensityMatrix r = reduced_density_matrix(s, 1, mode);
        CHECK(r.populations().sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.populations().minCoeff() >= -1e-15);
    }
}

TEST_CASE("tail cutoff") {
    const Vector p = (Vector(5) << 0.9, 0.09, 1e-3, 1e-5, 1e-20).finished();
    CHECK(tail_cutoff(p, 1e-4) == 3);
    CHECK(tail_cutoff(p, 1e-2) == 2);
    CHECK(tail_cutoff(p, 1.0) == 1);
    CHECK(tail_cutoff(p, 1e-30) == 5);
}

TEST_CASE("adaptive cutoffs") {
    const CircuitHamiltonian h = test::junction_toy(0.4, 0.3, 1.0);
    AdaptiveOptions loose;
    loose.epsilon = 0.5;
    const AdaptiveResult one = adaptive_cutoffs(h, loose);
    CHECK(one.cutoffs == std::vector<int>{1, 1});

    AdaptiveOptions opts;
    opts.epsilon = 1e-8;
    const AdaptiveResult r = adaptive_cutoffs(h, opts);
    REQUIRE(r.converged);

    // exhaustive scan against a converged reference ground state
    const SpectrumResult ref = solve_spectrum(h, {40, 40}, 1);
    for (int mode = 0; mode < 2; ++mode) {
        const Vector pop = reduced_density_matrix(ref, 0, mode).populations();
        for (int d = 1; d < 40; ++d) {
            bool ok = true;
            for (int m = d; m < 40; ++m) ok = ok && pop(m) < opts.epsilon;
            CHECK(ok == (d >= r.cutoffs[mode]));
        }
        CHECK(r.populations[mode](r.cutoffs[mode]) < opts.epsilon);
    }

    AdaptiveOptions tight;
    tight.epsilon = 1e-30;
    tight.d_init = 4;
    tight.d_max = 6;
    CHECK_THROWS_AS(adaptive_cutoffs(h, tight), CutoffExceededError);
}

TEST_CASE("energies decrease with the cutoff") {
    const std::vector<ConvergenceRow> rows = spectrum_vs_cutoff(mixed_toy(), 4, {2, 4, 8, 16});
    REQUIRE(rows.size() == 4);
    for (std::size_t r = 1; r < rows.size(); ++r)
        for (int i = 0; i < 4; ++i) CHECK(rows[r].energies(i) <= rows[r - 1].energies(i) + 1e-10);
}

TEST_CASE("inductor-only and full symplectic pipelines agree on the ground energy") {
    const CircuitHamiltonian h = load_hamiltonian(test::data_path("fluxonium_pair.json"));
    const std::vector<int> cut(5, 10);
    const double e_ios = solve_spectrum(inductor_symplectic(h).H_out, cut, 1).eigenvalues(0);
    const double e_fs = solve_spectrum(full_symplectic(h).H_out, cut, 1).eigenvalues(0);
    CHECK(std::abs(e_ios - e_fs) < 1e-3);
}
