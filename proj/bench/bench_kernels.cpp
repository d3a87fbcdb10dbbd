#include <benchmark/benchmark.h>

#include "autorand/catalog.hpp"
#include "autorand/constructions.hpp"
#include "autorand/experiment.hpp"
#include "autorand/kernels.hpp"

using namespace autorand;

namespace {

struct AuditInput {
    Setup setup;
    std::vector<MState> states;
    std::vector<Word> probes;
};

const AuditInput& audit_input() {
    static const AuditInput in = [] {
        AuditInput a{variant_family_learner(prefix_family()), {}, {}};
        RunOptions opts;
        opts.keep_states = true;
        Stream z(ll_text(Dfa::universal()), oracle_of(catalog_dfa("no-double-one")));
        a.states = run(a.setup, z, 64, opts).states;
        Lcg rng(5);
        for (int i = 0; i < 512; ++i) a.probes.push_back(rng.word(12));
        return a;
    }();
    return in;
}

template <bool Parallel>
void BM_audit(benchmark::State& state) {
    const auto& in = audit_input();
    for (auto _ : state) {
        auto rep = Parallel ? kernels::audit_transitions(in.setup, in.states, in.probes)
                            : kernels::serial::audit_transitions(in.setup, in.states, in.probes);
        benchmark::DoNotOptimize(rep.transitions);
    }
    state.SetItemsProcessed(state.iterations() * in.states.size() * (in.probes.size() + 1));
}

template <bool Parallel>
void BM_slices(benchmark::State& state) {
    const Dfa d = catalog_dfa("no-double-one");
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto c = Parallel ? kernels::slice_counts_bruteforce(d, n) : kernels::serial::slice_counts_bruteforce(d, n);
        benchmark::DoNotOptimize(c.back());
    }
}

template <bool Parallel>
void BM_batch(benchmark::State& state) {
    const Setup d = regular_bettor(catalog_dfa("zero-star-one-star"));
    std::vector<kernels::BatchJob> jobs;
    for (const char* name : {"no-double-one", "zero-star", "one-sigma-star", "even-zeros", "sigma-star",
                             "zero-or-one-star", "finite-three", "one-zero-star"}) {
        const Dfa l = catalog_dfa(name);
        jobs.push_back({[l] { return Stream(ll_text(Dfa::universal()), oracle_of(l)); },
                        static_cast<std::size_t>(state.range(0))});
    }
    for (auto _ : state) {
        auto r = Parallel ? kernels::run_batch(d, jobs) : kernels::serial::run_batch(d, jobs);
        benchmark::DoNotOptimize(r.size());
    }
}

}  // namespace

BENCHMARK(BM_audit<false>)->Name("audit_transitions/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_audit<true>)->Name("audit_transitions/openmp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_slices<false>)->Name("slice_counts/serial")->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_slices<true>)->Name("slice_counts/openmp")->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_batch<false>)->Name("run_batch/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch<true>)->Name("run_batch/openmp")->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
