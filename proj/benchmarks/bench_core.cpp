#include <benchmark/benchmark.h>

#include <numbers>

#include "dyngreen/basis.hpp"
#include "dyngreen/bounds.hpp"
#include "dyngreen/global.hpp"

using namespace dyngreen;

namespace {

MapPair sample_map(int d) {
    std::vector<Rat> a(static_cast<std::size_t>(d) + 1), b(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        a[static_cast<std::size_t>(i)] = (3 * i + 1) % 7 - 3;
        b[static_cast<std::size_t>(i)] = (5 * i + 2) % 9 - 4;
    }
    a[0] = 1;
    return MapPair(BinaryForm(a), BinaryForm(b));
}

void BM_Resultant(benchmark::State& state) {
    const MapPair f = sample_map(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(resultant(f.f1(), f.f2()));
}
BENCHMARK(BM_Resultant)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Iterate(benchmark::State& state) {
    const MapPair f = sample_map(2);
    for (auto _ : state) benchmark::DoNotOptimize(iterate_forms(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Iterate)->Arg(3)->Arg(5)->Arg(7);

void BM_HeightArchimedean(benchmark::State& state) {
    const LocalHeight h(sample_map(3), Place::archimedean());
    const Lift z{Rat(17, 5), Rat(-3, 2)};
    for (auto _ : state) benchmark::DoNotOptimize(h(z, 1e-12));
}
BENCHMARK(BM_HeightArchimedean);

void BM_HeightPadic(benchmark::State& state) {
    const MapPair f(BinaryForm({1, 0, 1}), BinaryForm({0, 2, 0}));
    const LocalHeight h(f, Place::finite(2ul));
    const Lift z{Rat(3), Rat(5)};
    for (auto _ : state) benchmark::DoNotOptimize(h(z, 1e-12));
}
BENCHMARK(BM_HeightPadic);

void BM_ChangeMatrixDet(benchmark::State& state) {
    const MapPair f = sample_map(2);
    const SigmaIndex idx = make_sigma(3, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(change_matrix_det(f, idx));
}
BENCHMARK(BM_ChangeMatrixDet)->Arg(1)->Arg(2)->Arg(3);

void BM_Dsum(benchmark::State& state) {
    const LocalHeight h(sample_map(2), Place::archimedean());
    std::vector<ComplexLift> pts;
    const int n = static_cast<int>(state.range(0));
    for (int j = 0; j < n; ++j) pts.push_back({std::polar(1.0 + 0.01 * j, 2 * std::numbers::pi * j / n), 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(dsum(h, pts, 1e-10));
}
BENCHMARK(BM_Dsum)->Arg(16)->Arg(64);

void BM_CanonicalHeight(benchmark::State& state) {
    const GlobalHeight g(sample_map(2));
    const RationalPoint p(Int(7), Int(3));
    for (auto _ : state) benchmark::DoNotOptimize(g(p, 1e-10));
}
BENCHMARK(BM_CanonicalHeight);

}  // namespace

BENCHMARK_MAIN();
