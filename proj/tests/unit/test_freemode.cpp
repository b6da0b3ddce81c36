#include <doctest.h>

#include "helpers.hpp"
#include "scq/errors.hpp"
#include "scq/freemode.hpp"
#include "scq/spectrum.hpp"

using namespace scq;

namespace {

// Rank of a matrix by SVD with a relative cut far from any test's singular values.
int rank_of(const Matrix& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8 * s(0)) ++r;
    return r;
}

// F = n_L - rank([M0_LL, N_L]): v in span(L) lies in ker M0 iff M0_LL v_L = 0 since M0 >= 0.
int free_count_oracle(const CircuitHamiltonian& h) {
    const std::vector<int> l = h.inductor_modes();
    Matrix stacked(l.size(), l.size() + h.N_ext.cols());
    stacked << submatrix(h.M0, l, l), select_rows(h.N_ext, l);
    return static_cast<int>(l.size()) - rank_of(stacked);
}

CircuitHamiltonian random_with_free(std::mt19937_64& rng, int n, int n_j, int F) {
    // Free directions: random orthonormal vectors inside the inductor block.
    const int n_l = n - n_j;
    const Matrix q = test::random_orthogonal(rng, n_l);
    Matrix basis = Matrix::Zero(n, F);
    basis.bottomRows(n_l) = q.leftCols(F);
    const Matrix proj = Matrix::Identity(n, n) - basis * basis.transpose();
    const Matrix g = proj * test::random_matrix(rng, n, n);

    HamiltonianInputs in;
    in.kinds.assign(n, ModeKind::Inductor);
    for (int j = 0; j < n_j; ++j) {
        in.kinds[j] = ModeKind::Junction;
        in.junctions.push_back({1.0 + j, 1});
    }
    in.C_inv = test::random_spd(rng, n);
    in.M0 = g * g.transpose();
    in.C_V = test::random_matrix(rng, n, 1);
    in.V = Vector::Constant(1, 0.2);
    return make_hamiltonian(std::move(in));
}

}  // namespace

TEST_CASE("Cooper-pair box golden values") {
    const CircuitHamiltonian h = load_hamiltonian(test::data_path("cooper_pair_box.json"));
    const FreeModeRemoval r = remove_free_modes(h);
    REQUIRE(r.report.F == 1);
    REQUIRE(r.reduced.n() == 2);
    CHECK(r.reduced.kinds[0] == ModeKind::Junction);
    CHECK(r.reduced.kinds[1] == ModeKind::Inductor);

    // reduced C_inv is the non-free block of C_inv, C_V follows the block elimination
    CHECK(max_abs(r.reduced.C_inv - h.C_inv.bottomRightCorner(2, 2)) < 1e-10);
    const Matrix c = h.C_inv.inverse();
    Vector cv(2);
    for (int i = 0; i < 2; ++i) cv(i) = h.C_V(i + 1, 0) - c(i + 1, 0) / c(0, 0) * h.C_V(0, 0);
    CHECK(max_abs(r.reduced.C_V.col(0) - cv) < 1e-10);
    CHECK(r.reduced.C_V(0, 0) == doctest::Approx(12.4296).epsilon(1e-4));
    CHECK(r.reduced.C_V(1, 0) == doctest::Approx(-17.1224).epsilon(1e-4));

    const Matrix charge = r.transform.charge_matrix();
    CHECK(charge(0, 0) == doctest::Approx(-1.0));
    CHECK(charge(1, 0) == doctest::Approx(-0.57017).epsilon(1e-4));
    CHECK(charge(2, 0) == doctest::Approx(0.78543).epsilon(1e-4));
    CHECK(max_abs(r.reduced.M0 - h.M0.bottomRightCorner(2, 2)) == 0.0);
}

TEST_CASE("positive definite M0 has no free modes") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 4;
        const CircuitHamiltonian h = test::quadratic_toy(test::random_spd(rng, n), test::random_spd(rng, n));
        const FreeModeRemoval r = remove_free_modes(h);
        CHECK(r.report.F == 0);
        CHECK(r.reduced.C_inv == h.C_inv);
        CHECK(r.transform.W() == Matrix::Identity(n, n));
    }
    const CircuitHamiltonian flux = load_hamiltonian(test::data_path("fluxonium_pair.json"));
    CHECK(count_free_modes(flux).F == 0);
}

TEST_CASE("free-mode count agrees with the rank oracle") {
    std::mt19937_64 rng(2);
    // all inductors, two-dimensional kernel
    const Matrix g = test::random_matrix(rng, 4, 2);
    const CircuitHamiltonian h = test::quadratic_toy(test::random_spd(rng, 4), g * g.transpose());
    CHECK(free_count_oracle(h) == 2);
    CHECK(count_free_modes(h).F == 2);

    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + trial % 4;
        const int n_j = trial % 2;
        const int F = 1 + trial % (n - n_j - 1);
        const CircuitHamiltonian r = random_with_free(rng, n, n_j, F);
        CHECK(free_count_oracle(r) == F);
        CHECK(count_free_modes(r).F == F);
    }

    // a kernel vector along a junction axis is not free
    Matrix m = Matrix::Identity(3, 3);
    m(0, 0) = 0.0;
    const CircuitHamiltonian j = test::quadratic_toy(test::random_spd(rng, 3), m,
                                                     {ModeKind::Junction, ModeKind::Inductor, ModeKind::Inductor},
                                                     {{1.0, 1}});
    CHECK(count_free_modes(j).F == 0);

    // external flux lifts an otherwise free direction
    HamiltonianInputs in;
    in.kinds.assign(2, ModeKind::Inductor);
    in.C_inv = Matrix::Identity(2, 2);
    in.M0 = Matrix::Zero(2, 2);
    in.N_ext = Matrix::Zero(2, 1);
    in.N_ext(1, 0) = 0.7;
    in.Phi_x = Vector::Constant(1, 0.1);
    const CircuitHamiltonian nx = make_hamiltonian(in);
    CHECK(free_count_oracle(nx) == 1);
    CHECK(count_free_modes(nx).F == 1);
}

TEST_CASE("exposure of a diagonal free direction") {
    std::mt19937_64 rng(4);
    Vector v(3);
    v << 1.0, 1.0, 0.0;
    v /= std::sqrt(2.0);
    const Matrix m = Matrix::Identity(3, 3) - v * v.transpose();
    const CircuitHamiltonian h = test::quadratic_toy(test::random_spd(rng, 3), m);
    const FreeModeReport report = count_free_modes(h);
    REQUIRE(report.F == 1);
    CHECK(max_abs(report.basis * report.basis.transpose() - v * v.transpose()) < 1e-12);

    const ExposedHamiltonian e = expose_free_modes(h, report);
    CHECK(std::abs(std::abs(e.transform.W().row(0).dot(v)) - 1.0) < 1e-12);
    CHECK(max_abs(e.transform.W() * e.transform.W().transpose() - Matrix::Identity(3, 3)) < 1e-12);
    CHECK(max_abs(e.h.M0.row(0)) == 0.0);
    CHECK(max_abs(e.h.M0.col(0)) == 0.0);
}

TEST_CASE("Gaussian and block elimination agree where it matters") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + trial % 4;
        const int n_j = trial % 2;
        const int F = 1 + trial % (n - n_j - 1);
        const CircuitHamiltonian h = random_with_free(rng, n, n_j, F);
        const FreeModeReport report = count_free_modes(h);
        REQUIRE(report.F == F);
        const ExposedHamiltonian e = expose_free_modes(h, report);

        const std::vector<Matrix> factors = gaussian_elim_factors(e.h, F);
        REQUIRE(static_cast<int>(factors.size()) == F);
        for (const Matrix& wf : factors) CHECK(max_abs(wf * wf - Matrix::Identity(n, n)) < 1e-12);

        const CanonicalTransform tg = gaussian_elim_transform(e.h, F);
        const CanonicalTransform tb = block_elim_transform(e.h, F);
        const CircuitHamiltonian hg = apply(e.h, tg);
        const CircuitHamiltonian hb = apply(e.h, tb);

        // the free block decouples from the rest in the capacitance matrix
        for (const CircuitHamiltonian* x : {&hg, &hb}) {
            const Matrix c = x->C_inv.inverse();
            CHECK(max_abs(c.topRightCorner(F, n - F)) < 1e-9 * max_abs(c));
            CHECK(max_abs(x->C_inv.topRightCorner(F, n - F)) < 1e-9 * max_abs(x->C_inv));
        }
        CHECK(max_abs(tg.charge_matrix().bottomRows(n - F) - tb.charge_matrix().bottomRows(n - F)) < 1e-9);

        const CircuitHamiltonian rg = drop_leading_modes(hg, F);
        const CircuitHamiltonian rb = drop_leading_modes(hb, F);
        CHECK(max_abs(rg.C_inv - rb.C_inv) < 1e-9);
        CHECK(max_abs(rg.C_V - rb.C_V) < 1e-9);
        CHECK(max_abs(rg.J_args - rb.J_args) < 1e-12);

        // M0 and N_ext are untouched bit for bit
        CHECK(hg.M0 == e.h.M0);
        CHECK(hb.M0 == e.h.M0);
        CHECK(hg.N_ext == e.h.N_ext);

        // naive deletion only gets C_V wrong
        const CircuitHamiltonian naive = drop_leading_modes(e.h, F);
        CHECK(max_abs(naive.C_inv - rg.C_inv) < 1e-9);
        CHECK(naive.M0 == rg.M0);
        CHECK(max_abs(naive.J_args - rg.J_args) < 1e-12);
        CHECK(max_abs(naive.C_V - rg.C_V) > 1e-6);
    }
}

TEST_CASE("singular values near the cut are ambiguous") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 3e-8;
    const CircuitHamiltonian h = test::quadratic_toy(Matrix::Identity(2, 2), m);
    CHECK_THROWS_AS(count_free_modes(h, 1e-8), ThresholdAmbiguityError);
    CHECK(count_free_modes(h, 1e-12).F == 0);
    CHECK(count_free_modes(h, 1e-4).F == 1);
}

TEST_CASE("zero-charge sector of the free mode reproduces the reduced spectrum") {
    CircuitHamiltonian h = load_hamiltonian(test::data_path("cooper_pair_box.json"));
    h.V(0) = 0.05;
    const CircuitHamiltonian reduced = remove_free_modes(h).reduced;

    PrimitiveBasis frozen;
    frozen.kind = PrimitiveKind::Charge;
    frozen.max_charge = 0;
    frozen.dim = 1;
    std::vector<LocalMode> locals;
    locals.push_back(build_local_mode(h, 0, frozen, 1));
    locals.push_back(build_local_mode(h, 1, 30));
    locals.push_back(build_local_mode(h, 2, 30));
    const SpectrumResult full = solve_spectrum(h, locals, 6);
    const SpectrumResult red = solve_spectrum(reduced, std::vector<int>{30, 30}, 6);
    for (int i = 1; i < 6; ++i)
        CHECK(full.eigenvalues(i) - full.eigenvalues(0) ==
              doctest::Approx(red.eigenvalues(i) - red.eigenvalues(0)).epsilon(1e-8));
}
