#include <benchmark/benchmark.h>

#include "qsched/engine.hpp"
#include "qsched/metrics.hpp"
#include "qsched/oracles.hpp"
#include "qsched/workloads.hpp"

namespace {

using namespace qsched;

void BM_run_discipline(benchmark::State& state, DisciplineKind kind) {
    TwoPointModel model(8, 4);
    Trace trace = two_point_trace(model, 100000, 1234);
    DisciplineSpec spec{kind, TieBreak::EarliestArrival};
    for (auto _ : state) {
        auto result = run(trace, spec);
        benchmark::DoNotOptimize(result.records.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(trace.size()));
}

void BM_bernoulli_generation(benchmark::State& state) {
    BernoulliModel model(4);
    for (auto _ : state) {
        auto trace = bernoulli_trace(model, 500000, 99);
        benchmark::DoNotOptimize(trace.size());
    }
}

void BM_enumeration(benchmark::State& state) {
    for (auto _ : state) {
        auto result = enumerate_busy_periods(8, 4, state.range(0));
        benchmark::DoNotOptimize(result.periods.size());
    }
}

void BM_lemma_audit(benchmark::State& state) {
    for (auto _ : state) {
        auto report = verify_lemmas(6, 3, state.range(0));
        benchmark::DoNotOptimize(report.cases_checked);
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_run_discipline, fcfs, qsched::DisciplineKind::Fcfs);
BENCHMARK_CAPTURE(BM_run_discipline, srpt, qsched::DisciplineKind::Srpt);
BENCHMARK_CAPTURE(BM_run_discipline, spst, qsched::DisciplineKind::Spst);
BENCHMARK_CAPTURE(BM_run_discipline, ps, qsched::DisciplineKind::Ps);
BENCHMARK(BM_bernoulli_generation);
BENCHMARK(BM_enumeration)->Arg(10)->Arg(12)->Arg(14);
BENCHMARK(BM_lemma_audit)->Arg(10)->Arg(12);

BENCHMARK_MAIN();
