#include <random>

#include <benchmark/benchmark.h>

#include "rmdp/ambiguity.hpp"

namespace {

struct Instance {
    rmdp::Distribution center;
    std::vector<double> v;
};

Instance make(std::size_t n) {
    std::mt19937_64 rng(n);
    std::exponential_distribution<double> e(1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Instance x;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x.center.push_back(e(rng));
        total += x.center.back();
        x.v.push_back(u(rng));
    }
    for (auto& p : x.center) p /= total;
    return x;
}

void BM_SigmaTv(benchmark::State& state) {
    auto x = make(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::sigma_tv(x.center, x.v, 0.3));
}

void BM_SigmaChi2(benchmark::State& state) {
    auto x = make(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::sigma_chi2(x.center, x.v, 0.3));
}

void BM_SigmaKl(benchmark::State& state) {
    auto x = make(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::sigma_kl(x.center, x.v, 0.3));
}

} // namespace

BENCHMARK(BM_SigmaTv)->RangeMultiplier(4)->Range(4, 256);
BENCHMARK(BM_SigmaChi2)->RangeMultiplier(4)->Range(4, 256);
BENCHMARK(BM_SigmaKl)->RangeMultiplier(4)->Range(4, 256);
