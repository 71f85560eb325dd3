#include <benchmark/benchmark.h>

#include "gvlab/collar_metrics.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/kobayashi.hpp"
#include "gvlab/metric_space.hpp"
#include "gvlab/sampling.hpp"

namespace {

gvlab::FiniteMetricSpace euclidean(const std::vector<gvlab::Vec>& pts) {
    const std::size_t n = pts.size();
    gvlab::Mat d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (pts[i] - pts[j]).norm();
    return gvlab::FiniteMetricSpace::from_matrix(std::move(d));
}

void BM_delta_four_point(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const gvlab::FiniteMetricSpace ms = euclidean(gvlab::sunflower_disk(n, 1.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gvlab::delta_four_point(ms, gvlab::DeltaMode::exhaustive, 0).delta);
    }
}
BENCHMARK(BM_delta_four_point)->Arg(40)->Arg(80)->Arg(120);

void BM_levi_form(benchmark::State& state) {
    const gvlab::Domain ball = gvlab::make_fixture("ball2");
    gvlab::Vec p(4), v(4);
    p << 0.2, -0.1, 0.3, 0.1;
    v << 0.5, 0.5, -0.5, 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(gvlab::levi_form(ball, p, v));
}
BENCHMARK(BM_levi_form);

void BM_band_infinitesimal(benchmark::State& state) {
    const gvlab::Domain disk = gvlab::make_fixture("disk");
    gvlab::Vec p(2), v(2);
    p << 0.9, 0.0;
    v << 1.0, 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(gvlab::band_infinitesimal(disk, p, v, 2.0).upper);
}
BENCHMARK(BM_band_infinitesimal);

void BM_kob_graph(benchmark::State& state) {
    const gvlab::Domain disk = gvlab::make_fixture("disk");
    const auto samples = gvlab::sunflower_disk(static_cast<int>(state.range(0)), 0.9);
    const auto est = gvlab::KobayashiEstimator::oracle("disk");
    for (auto _ : state)
        benchmark::DoNotOptimize(gvlab::kob_distance_graph(disk, samples, 8, est).dist.sum());
}
BENCHMARK(BM_kob_graph)->Arg(100)->Arg(250);

void BM_boundary_project(benchmark::State& state) {
    const gvlab::Domain ball = gvlab::make_fixture("ball2");
    gvlab::Vec p(4);
    p << 0.3, 0.2, -0.4, 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(gvlab::boundary_project(ball, p).delta);
}
BENCHMARK(BM_boundary_project);

}  // namespace
