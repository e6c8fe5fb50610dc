// Serial against parallel kernels, and the fast Sigma-max against plain
// enumeration of compositions.
//
//   bench_kernels --benchmark_filter=Measure

#include <benchmark/benchmark.h>

#include "creature_lab/fuzz/fuzz.hpp"
#include "creature_lab/measure.hpp"
#include "creature_lab/random/random_triple.hpp"
#include "creature_lab/star/star_triple.hpp"

using namespace creature_lab;

namespace {

FiniteCandidate full_binary(unsigned height) {
    std::map<Node, Creature> cs;
    std::vector<Node> level{{}};
    for (unsigned l = 0; l < height; ++l) {
        std::vector<Node> next;
        for (const Node& nu : level) {
            cs.emplace(nu, creature_r(nu, {0, 1}));
            next.push_back(extend(nu, 0));
            next.push_back(extend(nu, 1));
        }
        level = std::move(next);
    }
    return FiniteCandidate::from_creatures(Family::random, {}, height, cs);
}

void measure_kernel(benchmark::State& state, bool parallel) {
    const RandomTriple R;
    const FiniteCandidate s = full_binary(static_cast<unsigned>(state.range(0)));
    const CompiledCandidate c(R, s);
    Rng rng(1);
    const std::vector<Rational> boundary = c.boundary_vector(fuzz::random_valuation(rng, s, 64));
    for (auto _ : state) benchmark::DoNotOptimize(c.values(boundary, parallel));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}

void BM_MeasureSerial(benchmark::State& state) { measure_kernel(state, false); }
void BM_MeasureParallel(benchmark::State& state) { measure_kernel(state, true); }
BENCHMARK(BM_MeasureSerial)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureParallel)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

// F* of a full level-0 creature at N = range(0): every extension row.
void fstar_kernel(benchmark::State& state, bool parallel) {
    const unsigned N = static_cast<unsigned>(state.range(0));
    const StarTriple S(uniform_toy_profile(1, N, 0, 3));
    std::vector<Letter> all;
    for (Letter f = 0; f < (Letter{1} << N); ++f) all.push_back(f);
    const Creature t = make_star_creature(0, {}, 0, {}, all);
    const FunctionalSet F = S.functionals(t);
    Rng rng(2);
    std::vector<Rational> r;
    for (std::size_t i = 0; i < all.size(); ++i) r.push_back(rng.unit(16));
    for (auto _ : state) benchmark::DoNotOptimize(parallel ? F.evaluate_parallel(r) : F.evaluate(r));
    state.counters["rows"] = static_cast<double>(F.row_count());
}

void BM_FStarSerial(benchmark::State& state) { fstar_kernel(state, false); }
void BM_FStarParallel(benchmark::State& state) { fstar_kernel(state, true); }
BENCHMARK(BM_FStarSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FStarParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

// max F_s(r) over Sigma(t) for a small star creature: the override prunes
// by norm and g, the base class walks every composition.
void sigma_max(benchmark::State& state, bool fast) {
    const StarTriple S(uniform_toy_profile(3, 2, 2, 1));
    const Creature t = make_star_creature(2, {0, 0}, 2, {}, {0, 1, 2, 3});
    const std::vector<Rational> r{Rational(1), Rational(1, 2), Rational(3, 4), Rational(1, 4)};
    const std::vector<bool> allowed(4, true);
    for (auto _ : state) {
        if (fast) benchmark::DoNotOptimize(S.best_composition(t, r, 1, allowed));
        else benchmark::DoNotOptimize(S.MeasuredTriple::best_composition(t, r, 1, allowed));
    }
}

void BM_SigmaMaxFast(benchmark::State& state) { sigma_max(state, true); }
void BM_SigmaMaxEnumerate(benchmark::State& state) { sigma_max(state, false); }
BENCHMARK(BM_SigmaMaxFast)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SigmaMaxEnumerate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
