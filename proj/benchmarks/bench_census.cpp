#include <benchmark/benchmark.h>

#include <cmath>

#include "slogcert/census.hpp"
#include "slogcert/krawczyk.hpp"
#include "slogcert/oracle.hpp"

namespace {

using namespace slogcert;

const SquareSystem& circle_line() {
  static const SquareSystem s = SquareSystem::parse({"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2);
  return s;
}

void BM_Krawczyk(benchmark::State& state) {
  const double r = std::sqrt(0.5);
  const Box b{Interval(r - 0.05, r + 0.05), Interval(r - 0.05, r + 0.05)};
  for (auto _ : state) benchmark::DoNotOptimize(krawczyk_test(circle_line(), b));
}
BENCHMARK(BM_Krawczyk);

void BM_CensusCircleLine(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_nonsingular_zeros(circle_line(), 2.0));
}
BENCHMARK(BM_CensusCircleLine)->Unit(benchmark::kMillisecond);

void BM_CensusPhiPlane(benchmark::State& state) {
  const SquareSystem s = SquareSystem::parse({"phi(x1) + x2*x2 - 0.5", "x1 - 2*x2 - 1"}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(count_nonsingular_zeros(s, 4.0));
}
BENCHMARK(BM_CensusPhiPlane)->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state) {
  const GridSpec g = GridSpec::uniform(Box::cube(2, 2.0), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_zero_count(circle_line(), g, 1));
}
BENCHMARK(BM_GridOracle)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
