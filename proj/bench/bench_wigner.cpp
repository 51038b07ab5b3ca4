#include <benchmark/benchmark.h>

#include <omp.h>

#include "atiqo/qo_state.hpp"
#include "atiqo/wigner.hpp"

using namespace atiqo;
using namespace atiqo::wigner;

namespace {

const NodeSet& mir_nodes()
{
    static const NodeSet nodes = [] {
        const LaserPulse pulse(0.106, 0.009, 5);
        const SimConfig cfg(pulse, AtomModel(0.5));
        return saddle_nodes(qo::build_branch(momentum_for_energy(pulse, 2.2), cfg));
    }();
    return nodes;
}

WignerRequest request(std::size_t n, Representation rep, int threads)
{
    WignerRequest req;
    req.nx = n;
    req.ny = n;
    req.center_on_mean = true;
    req.representation = rep;
    req.threads = threads;
    return req;
}

void BM_serial_reference(benchmark::State& state)
{
    const auto req = request(static_cast<std::size_t>(state.range(0)), Representation::pairs, 1);
    for (auto _ : state) benchmark::DoNotOptimize(wigner_map_serial(req, mir_nodes()).max_abs);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_openmp_pairs(benchmark::State& state)
{
    const auto req = request(static_cast<std::size_t>(state.range(0)), Representation::pairs, omp_get_num_procs());
    for (auto _ : state) benchmark::DoNotOptimize(wigner_map(req, mir_nodes()).max_abs);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_openmp_moments(benchmark::State& state)
{
    const auto req = request(static_cast<std::size_t>(state.range(0)), Representation::moments, omp_get_num_procs());
    for (auto _ : state) benchmark::DoNotOptimize(wigner_map(req, mir_nodes()).max_abs);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_serial_reference)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_openmp_pairs)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_openmp_moments)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
