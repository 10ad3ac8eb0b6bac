#include <benchmark/benchmark.h>

#include <numbers>

#include "rollsym/lie_engine.hpp"
#include "rollsym/nilpotent.hpp"
#include "rollsym/path.hpp"
#include "rollsym/rolling_core.hpp"

using namespace rollsym;

namespace {

RollingModel pair(int n) { return RollingModel(SpaceForm::sphere(n, 1.0), SpaceForm::hyperbolic(n, 1.0)); }

void BM_FlagRanks(benchmark::State& st) {
  const RollingModel m = pair(static_cast<int>(st.range(0)));
  Rng rng(1);
  const RollingState q = sample_state(m, rng);
  for (auto _ : st) benchmark::DoNotOptimize(flag_ranks(m, q, 3).ranks);
}
BENCHMARK(BM_FlagRanks)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RollAlong(benchmark::State& st) {
  const RollingModel m = pair(3);
  Rng rng(2);
  const RollingState q = sample_state(m, rng);
  const Vec d = m.M.from_frame(q.x, Vec::Unit(3, 0));
  const GeodesicPath g = GeodesicPath::from_direction(m.M, q.x, d, 2.0 * std::numbers::pi);
  const double step = 1.0 / static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(roll_along(m, q, g, {step, false}).states.back().A);
}
BENCHMARK(BM_RollAlong)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_BracketFd(benchmark::State& st) {
  const RollingModel m = pair(3);
  Rng rng(3);
  const RollingState q = sample_state(m, rng);
  const StructuredField X = rolling_lift_field(m, constant_frame_field(Vec::Unit(3, 0)));
  const StructuredField Y = rolling_lift_field(m, constant_frame_field(Vec::Unit(3, 1)));
  for (auto _ : st) benchmark::DoNotOptimize(bracket_fd(m, X, Y, q).C);
}
BENCHMARK(BM_BracketFd)->Unit(benchmark::kMicrosecond);

void BM_VerifyStructure(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(verify_structure<Rational>(n).identity_checks);
}
BENCHMARK(BM_VerifyStructure)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
