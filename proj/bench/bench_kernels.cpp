// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare.

#include "heunlock/portrait.hpp"
#include "heunlock/xiprod.hpp"
#include "heunlock/youngdet.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

using namespace heunlock;

namespace {

const std::vector<double> kXs{0.1, 1.0, 5.0, 10.0};

void BM_scan_serial(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(positivity_scan_serial(static_cast<int>(st.range(0)), 5, kXs));
}

void BM_scan_omp(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(positivity_scan(static_cast<int>(st.range(0)), 5, kXs));
    st.counters["threads"] = omp_get_max_threads();
}

void BM_xi_grid_serial(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(xi_grid(1, 0.7, 10.0, 0.05, false));
}

void BM_xi_grid_omp(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(xi_grid(1, 0.7, 10.0, 0.05, true));
    st.counters["threads"] = omp_get_max_threads();
}

PortraitSpec bench_spec()
{
    PortraitSpec s;
    s.nB = 40;
    s.nA = 40;
    s.periods = 1000;
    return s;
}

void BM_portrait_serial(benchmark::State& st)
{
    const auto s = bench_spec();
    for (auto _ : st)
        benchmark::DoNotOptimize(portrait_serial(s));
}

void BM_portrait_omp(benchmark::State& st)
{
    const auto s = bench_spec();
    for (auto _ : st)
        benchmark::DoNotOptimize(portrait(s));
    st.counters["threads"] = omp_get_max_threads();
}

} // namespace

BENCHMARK(BM_scan_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_omp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_xi_grid_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_xi_grid_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_portrait_serial)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_portrait_omp)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
