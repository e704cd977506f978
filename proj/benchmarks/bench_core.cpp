#include "nadyn/evolve.hpp"
#include "nadyn/fit.hpp"
#include "nadyn/model.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/predict.hpp"
#include "nadyn/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace nadyn;

namespace {

ReducedHamiltonian barrier(int n) {
    ModelSpec spec;
    spec.kind = ModelKind::barrier;
    spec.n = n;
    spec.alpha = 0.3;
    spec.beta = 0.5;
    return build_model(spec);
}

void BM_EigensystemLowest(benchmark::State& state) {
    const auto h = barrier(static_cast<int>(state.range(0)));
    const Eigen::MatrixXd m = hamiltonian_at(h, 0.37);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigensystem_lowest(m, 2));
    }
}
BENCHMARK(BM_EigensystemLowest)->Arg(16)->Arg(84)->Arg(200);

void BM_GapTrace(benchmark::State& state) {
    const auto h = barrier(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gap_trace(h, 1025));
    }
}
BENCHMARK(BM_GapTrace)->Arg(16)->Arg(84)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
    const auto h = barrier(84);
    const StateVector start = ground_state(h, 0.0).cast<std::complex<double>>();
    const auto method = static_cast<Method>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate(h, start, 200.0, 1024, method));
    }
    state.SetLabel(std::string(to_string(method)));
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Propagate)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_EvolveBarrier(benchmark::State& state) {
    const auto h = barrier(84);
    const double tau = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_schrodinger(h, tau));
    }
}
BENCHMARK(BM_EvolveBarrier)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_AmplitudeIntegral(benchmark::State& state) {
    const auto trace = gap_trace(barrier(32), 1025);
    const double tau = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplitude_integral(trace, tau));
    }
}
BENCHMARK(BM_AmplitudeIntegral)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_FitAV(benchmark::State& state) {
    SplitParams p;
    p.rho0 = 0.5;
    p.rho1 = 0.3;
    p.omega_minus = 0.32;
    p.omega_plus = 0.52;
    p.A = 0.2;
    p.g = 0.05;
    p.v = 0.5;
    const auto taus = numeric::linspace(20.0, 200.0, 181);
    std::vector<double> probs;
    for (double t : taus) probs.push_back(predict_split(p, t));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_A_v(taus, probs, p));
    }
}
BENCHMARK(BM_FitAV)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
