#include <benchmark/benchmark.h>

#include "rmdp/envs.hpp"
#include "rmdp/robust_dp.hpp"

namespace {

rmdp::AmbiguitySpec set_for(int kind) {
    switch (kind) {
    case 0: return rmdp::AmbiguitySpec::tv(0.4);
    case 1: return rmdp::AmbiguitySpec::chi2(0.4);
    default: return rmdp::AmbiguitySpec::kl(0.4);
    }
}

// Arguments: set kind (0 tv, 1 chi2, 2 kl), workers.
void BM_GamblersBackup(benchmark::State& state) {
    const auto mdp = rmdp::gamblers(0.6, 0.95);
    const auto set = set_for(static_cast<int>(state.range(0)));
    std::vector<double> v(mdp.num_states(), 0.5);
    const auto workers = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::bellman_apply(mdp, set, v, workers));
}

void BM_FrozenLakeSolve(benchmark::State& state) {
    const auto mdp = rmdp::frozenlake(0.4, 0.9);
    const auto set = set_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::robust_value_iteration(mdp, set));
}

} // namespace

BENCHMARK(BM_GamblersBackup)->ArgsProduct({{0, 1, 2}, {1, 4}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FrozenLakeSolve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
