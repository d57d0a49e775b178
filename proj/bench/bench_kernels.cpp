// Serial reference vs OpenMP versions of the heavy kernels.

#include "sehurdle/estimate.hpp"
#include "sehurdle/kfunction.hpp"
#include "sehurdle/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace sehurdle;

namespace {

struct KData {
    DailySeries series;
    std::vector<double> phat;
    std::vector<long> lags;
};

const KData& k_data() {
    static const KData data = [] {
        const auto model = se1_reference_model();
        auto s = simulate(model, 20'000, 1);
        auto p = model_probabilities(model, s);
        return KData{std::move(s), std::move(p), default_lags()};
    }();
    return data;
}

void bm_weighted_k_serial(benchmark::State& state) {
    const auto& d = k_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_k_serial(d.series, d.phat, d.lags));
    }
}

void bm_weighted_k(benchmark::State& state) {
    const auto& d = k_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_k(d.series, d.phat, d.lags));
    }
}

void bm_bootstrap_serial(benchmark::State& state) {
    const auto lags = default_lags();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bootstrap_sample_serial(se1_reference_model(), 2557, lags, 50, 3));
    }
}

void bm_bootstrap(benchmark::State& state) {
    const auto lags = default_lags();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bootstrap_sample(se1_reference_model(), 2557, lags, 50, 3));
    }
}

const DailySeries& fit_data() {
    static const auto s = simulate(se1_reference_model(), 2557, 5);
    return s;
}

void bm_fit_se1_serial(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_hurdle_serial(fit_data(), hurdle_spec_by_name("SE1")));
    }
}

void bm_fit_se1(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_hurdle(fit_data(), hurdle_spec_by_name("SE1")));
    }
}

} // namespace

BENCHMARK(bm_weighted_k_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_weighted_k)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bootstrap_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bootstrap)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fit_se1_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fit_se1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
