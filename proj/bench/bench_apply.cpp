#include <benchmark/benchmark.h>

#include <random>

#include "scq/decouple.hpp"
#include "scq/io.hpp"
#include "scq/product_operator.hpp"

using namespace scq;

namespace {

CVector random_state(Eigen::Index n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v;
}

const std::vector<int> kDims{12, 12, 12, 12, 4};

void apply_mode_args(benchmark::internal::Benchmark* b) {
    for (int k = 0; k < 5; ++k) b->Arg(k);
}

void BM_ApplyMode(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const CMatrix a = CMatrix::Random(kDims[k], kDims[k]);
    const CVector x = random_state(12 * 12 * 12 * 12 * 4);
    CVector y;
    for (auto _ : state) {
        apply_mode<Complex>(kDims, k, a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_ApplyMode)->Apply(apply_mode_args);

void BM_ApplyModeReference(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const CMatrix a = CMatrix::Random(kDims[k], kDims[k]);
    const CVector x = random_state(12 * 12 * 12 * 12 * 4);
    CVector y;
    for (auto _ : state) {
        apply_mode_reference<Complex>(kDims, k, a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_ApplyModeReference)->Apply(apply_mode_args);

ComplexOperator fluxonium_operator(int d) {
    const CircuitHamiltonian h =
        full_symplectic(load_hamiltonian(std::string(SCQ_DATA_DIR) + "/fluxonium_pair.json")).H_out;
    return assemble_hamiltonian(h, build_local_modes(h, std::vector<int>(h.n(), d)));
}

void BM_Hamiltonian(benchmark::State& state) {
    const ComplexOperator op = fluxonium_operator(static_cast<int>(state.range(0)));
    const CVector x = random_state(op.dim());
    CVector y;
    for (auto _ : state) {
        op.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["dim"] = static_cast<double>(op.dim());
}
BENCHMARK(BM_Hamiltonian)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HamiltonianReference(benchmark::State& state) {
    const ComplexOperator op = fluxonium_operator(static_cast<int>(state.range(0)));
    const CVector x = random_state(op.dim());
    CVector y;
    for (auto _ : state) {
        op.apply_reference(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["dim"] = static_cast<double>(op.dim());
}
BENCHMARK(BM_HamiltonianReference)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
