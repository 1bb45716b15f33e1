#include <benchmark/benchmark.h>

#include "weblog/interevent.hpp"
#include "weblog/prefattach.hpp"
#include "weblog/synthgen.hpp"

using namespace weblog;

namespace {

EventStore make_corpus(std::size_t days, double daily) {
    synthgen::GeneratorSpec spec;
    spec.seed = 99;
    spec.n_days = days;
    spec.n_users = 2000;
    spec.n_urls = 5000;
    spec.base_daily_clicks = daily;
    return synthgen::generate(spec).store;
}

const EventStore& corpus() {
    static EventStore store = make_corpus(60, 50000);
    return store;
}

void bm_tau_v_serial(benchmark::State& state) {
    const auto& s = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(tau_v_serial(s));
}

void bm_tau_v_parallel(benchmark::State& state) {
    const auto& s = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(tau_v(s));
}

void bm_tau_c_serial(benchmark::State& state) {
    const auto& s = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(tau_c_serial(s));
}

void bm_tau_c_parallel(benchmark::State& state) {
    const auto& s = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(tau_c(s));
}

void bm_delta_curve(benchmark::State& state) {
    const auto& s = corpus();
    TimeGrid grid = make_grid(s);
    for (auto _ : state)
        benchmark::DoNotOptimize(delta_curve(s, PrefTarget::w, grid));
}

void bm_windowed_distributions(benchmark::State& state) {
    const auto& s = corpus();
    TimeGrid grid = make_grid(s);
    for (auto _ : state)
        benchmark::DoNotOptimize(windowed_distributions(s, PrefTarget::k_ip, grid));
}

BENCHMARK(bm_tau_v_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_tau_v_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_tau_c_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_tau_c_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_delta_curve)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_windowed_distributions)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
