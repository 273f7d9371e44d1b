#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "expmoment/numeric.hpp"
#include "expmoment/parallel.hpp"
#include "expmoment/rng.hpp"

using namespace expmoment;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("log_sum_exp basics") {
  CHECK(log_sum_exp({}) == -kInf);
  const std::vector<double> all_ninf{-kInf, -kInf};
  CHECK(log_sum_exp(all_ninf) == -kInf);

  const std::vector<double> two_zeros{0.0, 0.0};
  CHECK(log_sum_exp(two_zeros) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const std::vector<double> huge{1000.0, 1000.0};
  CHECK(log_sum_exp(huge) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));

  const std::vector<double> mixed{-kInf, 2.5};
  CHECK(log_sum_exp(mixed) == doctest::Approx(2.5));
}

TEST_CASE("bisect finds a cos root") {
  const double root = bisect([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-14);
  CHECK(root == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("bisect accepts an endpoint zero") {
  const double root = bisect([](double x) { return x - 1.0; }, 1.0, 5.0, 1e-14);
  CHECK(root == doctest::Approx(1.0));
}

TEST_CASE("bisect rejects a bracket without a sign change") {
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                  std::invalid_argument);
}

TEST_CASE("golden_max locates a parabola peak") {
  const double x = golden_max([](double t) { return -(t - 1.3) * (t - 1.3); },
                              -4.0, 4.0, 1e-11);
  CHECK(x == doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("composition enumeration is complete and distinct") {
  const int parts = 3, total = 4;
  std::set<std::vector<int>> seen;
  for_each_composition(parts, total, [&](std::span<const int> k) {
    REQUIRE(k.size() == static_cast<std::size_t>(parts));
    int sum = 0;
    for (int v : k) {
      CHECK(v >= 0);
      sum += v;
    }
    CHECK(sum == total);
    seen.insert(std::vector<int>(k.begin(), k.end()));
  });
  CHECK(seen.size() == composition_count(parts, total));
  CHECK(composition_count(parts, total) == 15);  // C(6, 2)

  std::size_t with_first = 0;
  for_each_composition_with_first(parts, total, 2, [&](std::span<const int> k) {
    CHECK(k[0] == 2);
    ++with_first;
  });
  CHECK(with_first == 3);  // (2,0,2) (2,1,1) (2,2,0)
}

TEST_CASE("log binomial and multinomial") {
  CHECK(std::exp(log_binomial(6, 3)) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(log_binomial(60, 0) == doctest::Approx(0.0));
  const std::vector<int> counts{2, 1, 1};
  CHECK(std::exp(log_multinomial(4, counts)) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Hermite rule integrates low moments exactly") {
  const GaussHermite gh = gauss_hermite(64);
  REQUIRE(gh.nodes.size() == 64);
  double w_sum = 0.0, x2_sum = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    w_sum += gh.weights[i];
    x2_sum += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  CHECK(w_sum == doctest::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(x2_sum == doctest::Approx(sqrt_pi / 2).epsilon(1e-13));
  // nodes ascend and pair up symmetrically
  for (std::size_t i = 1; i < gh.nodes.size(); ++i) CHECK(gh.nodes[i] > gh.nodes[i - 1]);
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    CHECK(gh.nodes[i] == doctest::Approx(-gh.nodes[gh.nodes.size() - 1 - i]));
}

TEST_CASE("DeterministicRng replays exactly per seed") {
  DeterministicRng a(123), b(123), c(124);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.uniform01();
    CHECK(ua == b.uniform01());
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    if (ua != c.uniform01()) any_diff = true;
  }
  CHECK(any_diff);

  DeterministicRng n1(7), n2(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = n1.normal();
    CHECK(std::isfinite(v));
    CHECK(v == n2.normal());
  }
}

TEST_CASE("normal() has roughly standard moments") {
  DeterministicRng rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sumsq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("sample_index respects the cumulative weights") {
  DeterministicRng rng(5);
  const std::vector<double> cumulative{0.2, 0.5, 1.0};
  std::vector<int> counts(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.sample_index(cumulative)];
  CHECK(std::abs(counts[0] / double(n) - 0.2) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.3) < 0.01);
  CHECK(std::abs(counts[2] / double(n) - 0.5) < 0.01);
}

TEST_CASE("parallel_chunks partitions the range exactly once") {
  const std::size_t n = 1003;
  std::vector<std::atomic<int>> touched(n);
  parallel_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    CHECK(begin <= end);
    for (std::size_t i = begin; i < end; ++i) touched[i].fetch_add(1);
  });
  for (std::size_t i = 0; i < n; ++i) CHECK(touched[i].load() == 1);
  CHECK(parallel_chunk_count(n) <= 64);
  CHECK(parallel_chunk_count(3) == 3);
}

TEST_CASE("chunk layout is independent of the worker count") {
  auto run = [](const char* threads) {
    setenv("EXPMOMENT_THREADS", threads, 1);
    std::vector<double> slot(parallel_chunk_count(5000), 0.0);
    parallel_chunks(5000, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      double acc = 0.0;
      for (std::size_t i = begin; i < end; ++i) acc += std::sin(double(i)) * 1e-3;
      slot[chunk] = acc;
    });
    double total = 0.0;
    for (double v : slot) total += v;  // merge in chunk order
    unsetenv("EXPMOMENT_THREADS");
    return total;
  };
  const double one = run("1");
  const double four = run("4");
  const double many = run("16");
  CHECK(one == four);  // bitwise, not approximate
  CHECK(one == many);
}

TEST_CASE("worker_thread_count honors the environment cap") {
  setenv("EXPMOMENT_THREADS", "2", 1);
  CHECK(worker_thread_count() <= 2);
  setenv("EXPMOMENT_THREADS", "nonsense", 1);
  CHECK(worker_thread_count() >= 1);
  unsetenv("EXPMOMENT_THREADS");
  CHECK(worker_thread_count() >= 1);
}
