#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "expmoment/cost_table.hpp"
#include "expmoment/curie_weiss.hpp"
#include "expmoment/exponents.hpp"
#include "expmoment/probability.hpp"
#include "expmoment/rng.hpp"
#include "expmoment/strategy.hpp"

namespace {

using namespace expmoment;

FiniteDistribution random_distribution(std::size_t m, std::uint64_t seed) {
  DeterministicRng rng(seed);
  std::vector<double> w(m);
  double sum = 0.0;
  for (double& x : w) {
    x = 0.05 + rng.uniform01();
    sum += x;
  }
  for (double& x : w) x /= sum;
  return FiniteDistribution(w);
}

std::vector<double> random_cost(std::size_t m, std::uint64_t seed) {
  DeterministicRng rng(seed);
  std::vector<double> c(m);
  for (double& x : c) x = 3.0 * rng.uniform01();
  return c;
}

FiniteCostTable random_table(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  DeterministicRng rng(seed);
  std::vector<std::vector<double>> data(rows, std::vector<double>(cols));
  for (std::size_t x = 0; x < rows; ++x) {
    data[x][x % cols] = 0.0;  // every row keeps a zero so distortion matrices stay valid
    for (std::size_t s = 0; s < cols; ++s)
      if (s != x % cols) data[x][s] = 0.1 + 2.0 * rng.uniform01();
  }
  return FiniteCostTable::from_rows(data);
}

void BM_TiltedMeasure(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const FiniteDistribution p = random_distribution(m, 7);
  const std::vector<double> cost = random_cost(m, 11);
  for (auto _ : state) {
    TiltResult r = tilted_measure(p, cost, 0.8);
    benchmark::DoNotOptimize(r.log_z);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TiltedMeasure)->RangeMultiplier(8)->Range(8, 4096)->Complexity();

void BM_LogExpMoment(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const FiniteDistribution p = random_distribution(m, 13);
  const FiniteCostTable table = random_table(m, m, 17);
  for (auto _ : state) {
    double v = log_exp_moment(p, table, m / 2, 0.5);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_LogExpMoment)->RangeMultiplier(8)->Range(8, 512);

void BM_GibbsGridScan(benchmark::State& state) {
  const FiniteDistribution p = random_distribution(3, 19);
  const std::vector<double> cost = random_cost(3, 23);
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    GibbsScanResult r = gibbs_variational_scan(p, cost, 1.2, resolution);
    benchmark::DoNotOptimize(r.max_value);
  }
}
BENCHMARK(BM_GibbsGridScan)->Arg(100)->Arg(300)->Arg(600);

void BM_GenericExponentShannon(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const FiniteDistribution p = random_distribution(m, 29);
  const LambdaFunctional lam = LambdaFunctional::shannon();
  for (auto _ : state) {
    ExponentResult r = generic_exponent(p, lam, 1.0);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_GenericExponentShannon)->Arg(4)->Arg(8)->Arg(16);

void BM_BlahutArimoto(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const FiniteDistribution q = random_distribution(m, 31);
  const FiniteCostTable d = random_table(m, m, 37);
  for (auto _ : state) {
    RDPoint pt = blahut_arimoto_rd(q, d, 0.3);
    benchmark::DoNotOptimize(pt.R);
  }
}
BENCHMARK(BM_BlahutArimoto)->Arg(2)->Arg(4)->Arg(8);

void BM_TwoPartExactMoment(benchmark::State& state) {
  const FiniteDistribution p = random_distribution(3, 41);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double v = two_part_code_exact_moment(p, 1.0, n);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_TwoPartExactMoment)->Arg(20)->Arg(40)->Arg(60);

void BM_CwExactFiniteN(benchmark::State& state) {
  const CWParams params{0.5, 1.0};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double v = cw_exact_finite_n(params, n);
    benchmark::DoNotOptimize(v);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CwExactFiniteN)->RangeMultiplier(10)->Range(1000, 100000)->Complexity();

void BM_CwFixedPoints(benchmark::State& state) {
  const CWParams params{0.3, 1.1};
  for (auto _ : state) {
    std::vector<double> roots = magnetization_fixed_points(params);
    benchmark::DoNotOptimize(roots.data());
  }
}
BENCHMARK(BM_CwFixedPoints);

}  // namespace

BENCHMARK_MAIN();
