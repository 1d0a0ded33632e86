#include <benchmark/benchmark.h>

#include "sprayscope/checks.hpp"
#include "sprayscope/gallery.hpp"
#include "sprayscope/jet.hpp"

using namespace sprayscope;

namespace {

void BM_JetMultiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto e = dsl::parse_expression("sin(x1*y2) + exp(x2)*y1", 2);
  const std::vector<double> p{0.3, 1.1, 0.7, -0.4};
  const auto a = ad::jet_evaluate(e, p, order);
  const auto b = ad::jet_evaluate(dsl::parse_expression("cos(x1) + y1*y2", 2), p, order);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["coeffs"] = static_cast<double>(a.size());
}
BENCHMARK(BM_JetMultiply)->DenseRange(1, 6);

void BM_BuildFrame(benchmark::State& state) {
  const auto e = gallery::get_example(state.range(0) == 0 ? "poincare_half_plane" : "shen_randers_11_2");
  const auto spray = e.spray();
  const auto p = checks::sample_points(spray, e.sample_spec(1)).front();
  for (auto _ : state) benchmark::DoNotOptimize(geom::build_frame(spray, p));
}
BENCHMARK(BM_BuildFrame)->Arg(0)->Arg(1);

void BM_Verdict64(benchmark::State& state) {
  const auto e = gallery::get_example("bao_robles_paraboloid");
  const auto spray = e.spray();
  const auto points = checks::sample_points(spray, e.sample_spec(64));
  for (auto _ : state) benchmark::DoNotOptimize(checks::verdict(spray, points));
}
BENCHMARK(BM_Verdict64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
