#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "expmoment/cost_table.hpp"
#include "expmoment/probability.hpp"
#include "expmoment/rng.hpp"
#include "expmoment/strategy.hpp"

using namespace expmoment;

namespace {

// Strategies are candidate code distributions; cost(x, s) = -ln q_s(x).
// Column 0 is the optimizer p^(1/2)/sum for alpha = 1.
FiniteCostTable example_code_table() {
  const std::vector<std::vector<double>> codes{
      {0.414213562373095049, 0.292893218813452476, 0.292893218813452476},
      {0.5, 0.25, 0.25},
      {1.0 / 3, 1.0 / 3, 1.0 / 3},
  };
  std::vector<std::vector<double>> rows(3, std::vector<double>(3));
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t s = 0; s < 3; ++s) rows[x][s] = -std::log(codes[s][x]);
  return FiniteCostTable::from_rows(rows);
}

const FiniteDistribution kSource({0.5, 0.25, 0.25});

}  // namespace

TEST_CASE("log_exp_moment equals the direct sum") {
  const FiniteCostTable table = example_code_table();
  for (std::size_t s = 0; s < 3; ++s) {
    double direct = 0.0;
    for (std::size_t x = 0; x < 3; ++x)
      direct += kSource[x] * std::exp(1.3 * table(x, s));
    CHECK(log_exp_moment(kSource, table, s, 1.3) ==
          doctest::Approx(std::log(direct)).epsilon(1e-13));
  }
  // alpha = 0: moment is 1
  CHECK(log_exp_moment(kSource, table, 0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("Gibbs objective peaks at the tilted measure with value ln Z") {
  const FiniteCostTable table = example_code_table();
  const double alpha = 1.0;
  const std::vector<double> cost = table.column(0);
  const TiltResult tilt = tilted_measure(kSource, cost, alpha);
  const double lnz = log_exp_moment(kSource, table, 0, alpha);
  CHECK(tilt.log_z == doctest::Approx(lnz).epsilon(1e-14));
  CHECK(gibbs_objective(kSource, cost, alpha, tilt.q) ==
        doctest::Approx(lnz).epsilon(1e-12));
  // any other Q scores strictly less
  CHECK(gibbs_objective(kSource, cost, alpha, FiniteDistribution::uniform(3)) <
        lnz - 1e-6);
  CHECK(gibbs_objective(kSource, cost, alpha, kSource) < lnz);
}

TEST_CASE("grid scan approximates ln Z to the stated resolution bound") {
  const FiniteCostTable table = example_code_table();
  const double alpha = 1.0;
  const std::vector<double> cost = table.column(0);
  const double lnz = log_exp_moment(kSource, table, 0, alpha);
  const GibbsScanResult scan = gibbs_variational_scan(kSource, cost, alpha, 600);
  CHECK(scan.max_value <= lnz + 1e-12);
  CHECK(std::abs(scan.max_value - lnz) <= 10.0 / 600);
  // the grid argmax should be near the tilted measure
  const TiltResult tilt = tilted_measure(kSource, cost, alpha);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(scan.argmax_q[i] - tilt.q[i]) < 0.01);
}

TEST_CASE("grid scan rejects oversized alphabets") {
  const FiniteDistribution p = FiniteDistribution::uniform(5);
  const std::vector<double> cost(5, 1.0);
  CHECK_THROWS_AS(gibbs_variational_scan(p, cost, 1.0, 100), std::invalid_argument);
}

TEST_CASE("certificate accepts the optimizer and rejects the others") {
  const FiniteCostTable table = example_code_table();
  const CertificateReport good = theorem1_certify(kSource, table, 0, 1.0, 1e-9);
  CHECK(good.certified);
  CHECK(good.q_objective_gap <= 1e-9);
  CHECK(good.log_z == doctest::Approx(1.06959999347914074).epsilon(1e-12));
  // the tilted measure for the optimal code column is the code itself
  CHECK(good.tilted_q[0] == doctest::Approx(0.414213562373095049).epsilon(1e-12));
  CHECK(good.tilted_q[1] == doctest::Approx(0.292893218813452476).epsilon(1e-12));

  CHECK_FALSE(theorem1_certify(kSource, table, 1, 1.0, 1e-9).certified);
  CHECK_FALSE(theorem1_certify(kSource, table, 2, 1.0, 1e-9).certified);
}

TEST_CASE("brute force picks the smallest moment, ties to the lowest index") {
  const FiniteCostTable table = example_code_table();
  const BruteForceResult best = brute_force_optimum(kSource, table, 1.0);
  CHECK(best.best_strategy == 0);
  CHECK(best.log_moment == doctest::Approx(1.06959999347914074).epsilon(1e-12));

  const FiniteCostTable flat = FiniteCostTable::from_rows(
      {{1.0, 1.0}, {2.0, 2.0}});
  CHECK(brute_force_optimum(FiniteDistribution::uniform(2), flat, 0.5).best_strategy == 0);
}

TEST_CASE("saddle gap orders min-max above max-min") {
  const FiniteCostTable table = example_code_table();
  const SaddleGapResult r = saddle_gap(kSource, table, 1.0, 200);
  CHECK(r.minmax >= r.maxmin - 1e-12);
  const BruteForceResult best = brute_force_optimum(kSource, table, 1.0);
  CHECK(std::abs(r.minmax - best.log_moment) <= 10.0 / 200);
}

TEST_CASE("Monte Carlo estimate brackets the exact moment") {
  const FiniteCostTable table = example_code_table();
  const double alpha = 0.5;
  const double exact = std::exp(log_exp_moment(kSource, table, 0, alpha));
  const MCEstimate mc = mc_exp_moment(kSource, table, 0, alpha, 200000, 42);
  CHECK(mc.n_samples == 200000);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.mean - exact) <= 4.0 * mc.std_error);
}

TEST_CASE("Monte Carlo is bit-identical across worker counts") {
  const FiniteCostTable table = example_code_table();
  auto run = [&](const char* threads) {
    setenv("EXPMOMENT_THREADS", threads, 1);
    const MCEstimate mc = mc_exp_moment(kSource, table, 1, 0.8, 50000, 7);
    unsetenv("EXPMOMENT_THREADS");
    return mc;
  };
  const MCEstimate a = run("1");
  const MCEstimate b = run("5");
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("Monte Carlo input validation") {
  const FiniteCostTable table = example_code_table();
  CHECK_THROWS_AS(mc_exp_moment(kSource, table, 0, 1.0, 99, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_exp_moment(kSource, table, 9, 1.0, 1000, 1), std::invalid_argument);
}
