// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "qcomp/eval.hpp"
#include "qcomp/generate.hpp"
#include "qcomp/hardness.hpp"
#include "qcomp/tight_example.hpp"
#include "qcomp/transform.hpp"

using namespace qcomp;

static void BM_MonteCarlo_Parallel(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo_error(625, 25, state.range(0), 0, InputFamily::mixed_boundary));
}
static void BM_MonteCarlo_Serial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::monte_carlo_error(625, 25, state.range(0), 0, InputFamily::mixed_boundary));
}
BENCHMARK(BM_MonteCarlo_Parallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo_Serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

namespace {

struct HardnessFixture {
    PromiseFunction g;
    Distribution mu;
    TreeFamily family;
};

const HardnessFixture& hardness_fixture() {
    static const HardnessFixture f = [] {
        std::vector<GValue> table(8);
        for (std::uint64_t y = 0; y < 8; ++y)
            table[y] = Bitstring::from_index(y, 3).weight() >= 2 ? GValue::one : GValue::zero;
        PromiseFunction g(3, table);
        Distribution mu = balanced_mixture(Distribution::uniform(3), g);
        return HardnessFixture{g, mu, TreeFamily(3, 3)};
    }();
    return f;
}

PolarisedTree large_image() {
    Rng rng(1);
    for (;;) {
        const Instance in = random_instance(rng, 3, 3, 6);
        if (in.protocol->size() >= 60)
            return transform_protocol(*in.protocol, in.g, in.mu_g).tree;
    }
}

} // namespace

static void BM_Hardness_Parallel(benchmark::State& state) {
    const auto& f = hardness_fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(hardness_score(f.mu, f.g, f.family));
}
static void BM_Hardness_Serial(benchmark::State& state) {
    const auto& f = hardness_fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::hardness_score(f.mu, f.g, f.family));
}
BENCHMARK(BM_Hardness_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hardness_Serial)->Unit(benchmark::kMillisecond);

static void BM_ZLaws_Parallel(benchmark::State& state) {
    const PolarisedTree t = large_image();
    for (auto _ : state)
        benchmark::DoNotOptimize(z_laws(t));
}
static void BM_ZLaws_Serial(benchmark::State& state) {
    const PolarisedTree t = large_image();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::z_laws(t));
}
BENCHMARK(BM_ZLaws_Parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ZLaws_Serial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
