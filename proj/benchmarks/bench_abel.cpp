#include <benchmark/benchmark.h>

#include <vector>

#include "slogcert/abel.hpp"
#include "slogcert/evaluate.hpp"
#include "slogcert/interval.hpp"
#include "slogcert/parser.hpp"

namespace {

using namespace slogcert;

void BM_AbelBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(AbelFunction::build(static_cast<int>(state.range(0)), 1e-8));
}
BENCHMARK(BM_AbelBuild)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_PhiEval(benchmark::State& state) {
  const AbelFunction& phi = default_abel();
  double x = static_cast<double>(state.range(0)), acc = 0.0;
  for (auto _ : state) {
    acc += phi(x);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_PhiEval)->Arg(-20)->Arg(0)->Arg(2)->Arg(1000000);

void BM_TermGradient(benchmark::State& state) {
  const Term t = parse_term("phi(x1*x1 + exp(x2)) * dphi(x1 - x2) + sin(x1)", default_var_names(2));
  const std::vector<double> x{0.7, -0.3};
  for (auto _ : state) benchmark::DoNotOptimize(value_and_gradient(t, x));
}
BENCHMARK(BM_TermGradient);

void BM_IntervalPhi(benchmark::State& state) {
  const Term t = parse_term("phi(x1*x1 + exp(x2))", default_var_names(2));
  const Box b{Interval(0.1, 0.4), Interval(-1.0, -0.5)};
  for (auto _ : state) benchmark::DoNotOptimize(interval_value_and_gradient(t, b));
}
BENCHMARK(BM_IntervalPhi);

}  // namespace

BENCHMARK_MAIN();
