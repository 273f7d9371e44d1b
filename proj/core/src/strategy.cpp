#include "expmoment/strategy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "expmoment/numeric.hpp"
#include "expmoment/parallel.hpp"
#include "expmoment/rng.hpp"

namespace expmoment {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxGridAlphabet = 4;

void check_pair(const FiniteDistribution& p, const FiniteCostTable& table) {
  if (p.alphabet_size() != table.n_symbols())
    throw std::invalid_argument("alphabet size does not match cost table rows");
}

void check_strategy(const FiniteCostTable& table, std::size_t s) {
  if (s >= table.n_strategies())
    throw std::invalid_argument("strategy index out of range");
}

// Gibbs objective of the grid point k/N, or -inf when it leaves supp(p).
double grid_objective(std::span<const int> k, int N,
                      const FiniteDistribution& p, std::span<const double> cost,
                      double alpha) {
  double obj = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (p[i] == 0.0) return kNegInf;
    const double qi = static_cast<double>(k[i]) / N;
    obj += qi * (alpha * cost[i] - std::log(qi / p[i]));
  }
  return obj;
}

}  // namespace

double log_exp_moment(const FiniteDistribution& p, const FiniteCostTable& table,
                      std::size_t s, double alpha) {
  check_pair(p, table);
  check_strategy(table, s);
  std::vector<double> t;
  t.reserve(p.alphabet_size());
  for (std::size_t x = 0; x < p.alphabet_size(); ++x)
    if (p[x] > 0.0) t.push_back(std::log(p[x]) + alpha * table(x, s));
  return log_sum_exp(t);
}

double expected_cost(const FiniteDistribution& q, const FiniteCostTable& table,
                     std::size_t s) {
  check_pair(q, table);
  check_strategy(table, s);
  double e = 0.0;
  for (std::size_t x = 0; x < q.alphabet_size(); ++x) e += q[x] * table(x, s);
  return e;
}

double gibbs_objective(const FiniteDistribution& p, std::span<const double> cost,
                       double alpha, const FiniteDistribution& q) {
  if (cost.size() != p.alphabet_size() || q.alphabet_size() != p.alphabet_size())
    throw std::invalid_argument("gibbs_objective: size mismatch");
  const double d = kl_divergence(q, p);
  if (!std::isfinite(d)) return kNegInf;
  double e = 0.0;
  for (std::size_t i = 0; i < q.alphabet_size(); ++i) e += q[i] * cost[i];
  return alpha * e - d;
}

GibbsScanResult gibbs_variational_scan(const FiniteDistribution& p,
                                       std::span<const double> cost, double alpha,
                                       int grid_resolution) {
  if (cost.size() != p.alphabet_size())
    throw std::invalid_argument("gibbs_variational_scan: cost length mismatch");
  const int m = static_cast<int>(p.alphabet_size());
  if (m > kMaxGridAlphabet)
    throw std::invalid_argument("gibbs_variational_scan: alphabet larger than 4");
  if (grid_resolution < 1)
    throw std::invalid_argument("gibbs_variational_scan: resolution must be >= 1");
  const int N = grid_resolution;

  struct ChunkBest {
    double value = kNegInf;
    std::vector<int> k;
  };
  std::vector<ChunkBest> partial(parallel_chunk_count(static_cast<std::size_t>(N) + 1));
  // Chunks over the first coordinate; enumeration inside each chunk is
  // lexicographic, so merging in chunk order keeps first-wins tie-breaking.
  parallel_chunks(static_cast<std::size_t>(N) + 1,
                  [&](std::size_t chunk, std::size_t b, std::size_t e) {
    ChunkBest& best = partial[chunk];
    for (std::size_t k0 = b; k0 < e; ++k0) {
      for_each_composition_with_first(
          m, N, static_cast<int>(k0), [&](std::span<const int> k) {
            const double v = grid_objective(k, N, p, cost, alpha);
            if (v > best.value) {
              best.value = v;
              best.k.assign(k.begin(), k.end());
            }
          });
    }
  });

  const ChunkBest* winner = nullptr;
  for (const ChunkBest& c : partial)
    if (!winner || c.value > winner->value) winner = &c;
  if (!winner || winner->k.empty())
    throw std::logic_error("gibbs_variational_scan: no feasible grid point");

  std::vector<double> q(winner->k.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = static_cast<double>(winner->k[i]) / N;
  return GibbsScanResult{winner->value, FiniteDistribution(std::move(q))};
}

CertificateReport theorem1_certify(const FiniteDistribution& p,
                                   const FiniteCostTable& table, std::size_t s,
                                   double alpha, double tol) {
  check_pair(p, table);
  check_strategy(table, s);
  if (alpha < 0.0)
    throw std::invalid_argument("theorem1_certify: alpha must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("theorem1_certify: tol must be > 0");

  TiltResult tilt = tilted_measure(p, table.column(s), alpha);
  const double own = expected_cost(tilt.q, table, s);
  double best = own;
  for (std::size_t other = 0; other < table.n_strategies(); ++other)
    best = std::min(best, expected_cost(tilt.q, table, other));
  const double gap = own - best;
  return CertificateReport{gap <= tol, s, gap, tilt.log_z, std::move(tilt.q)};
}

BruteForceResult brute_force_optimum(const FiniteDistribution& p,
                                     const FiniteCostTable& table, double alpha) {
  check_pair(p, table);
  BruteForceResult out{0, log_exp_moment(p, table, 0, alpha)};
  for (std::size_t s = 1; s < table.n_strategies(); ++s) {
    const double v = log_exp_moment(p, table, s, alpha);
    if (v < out.log_moment) {
      out.log_moment = v;
      out.best_strategy = s;
    }
  }
  return out;
}

SaddleGapResult saddle_gap(const FiniteDistribution& p, const FiniteCostTable& table,
                           double alpha, int grid_resolution) {
  check_pair(p, table);
  const int m = static_cast<int>(p.alphabet_size());
  if (m > kMaxGridAlphabet)
    throw std::invalid_argument("saddle_gap: alphabet larger than 4");
  if (grid_resolution < 1)
    throw std::invalid_argument("saddle_gap: resolution must be >= 1");
  const int N = grid_resolution;
  const std::size_t ns = table.n_strategies();

  struct ChunkAcc {
    std::vector<double> per_strategy_max;
    double maxmin = kNegInf;
  };
  std::vector<ChunkAcc> partial(parallel_chunk_count(static_cast<std::size_t>(N) + 1),
                                ChunkAcc{std::vector<double>(ns, kNegInf), kNegInf});
  parallel_chunks(static_cast<std::size_t>(N) + 1,
                  [&](std::size_t chunk, std::size_t b, std::size_t e) {
    ChunkAcc& acc = partial[chunk];
    for (std::size_t k0 = b; k0 < e; ++k0) {
      for_each_composition_with_first(
          m, N, static_cast<int>(k0), [&](std::span<const int> k) {
            // Shared D(Q||P) term; per-strategy value differs only in E_Q cost.
            double kl = 0.0;
            bool feasible = true;
            for (std::size_t i = 0; i < k.size() && feasible; ++i) {
              if (k[i] == 0) continue;
              if (p[i] == 0.0) {
                feasible = false;
                break;
              }
              const double qi = static_cast<double>(k[i]) / N;
              kl += qi * std::log(qi / p[i]);
            }
            if (!feasible) return;
            double point_min = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < ns; ++s) {
              double e_cost = 0.0;
              for (std::size_t i = 0; i < k.size(); ++i)
                if (k[i] != 0)
                  e_cost += (static_cast<double>(k[i]) / N) *
                            table(i, s);
              const double v = alpha * e_cost - kl;
              if (v > acc.per_strategy_max[s]) acc.per_strategy_max[s] = v;
              if (v < point_min) point_min = v;
            }
            if (point_min > acc.maxmin) acc.maxmin = point_min;
          });
    }
  });

  std::vector<double> per_strategy_max(ns, kNegInf);
  double maxmin = kNegInf;
  for (const ChunkAcc& acc : partial) {
    for (std::size_t s = 0; s < ns; ++s)
      per_strategy_max[s] = std::max(per_strategy_max[s], acc.per_strategy_max[s]);
    maxmin = std::max(maxmin, acc.maxmin);
  }
  double minmax = std::numeric_limits<double>::infinity();
  for (double v : per_strategy_max) minmax = std::min(minmax, v);
  return SaddleGapResult{minmax, maxmin};
}

MCEstimate mc_exp_moment(const FiniteDistribution& p, const FiniteCostTable& table,
                         std::size_t s, double alpha, std::size_t n_samples,
                         std::uint64_t seed) {
  check_pair(p, table);
  check_strategy(table, s);
  if (n_samples < 100)
    throw std::invalid_argument("mc_exp_moment: need at least 100 samples");

  std::vector<double> cumulative(p.alphabet_size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.alphabet_size(); ++i) {
    acc += p[i];
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  DeterministicRng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t x = rng.sample_index(cumulative);
    const double v = std::exp(alpha * table(x, s));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(n_samples);
  const double se = m2 > 0.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  return MCEstimate{mean, se, n_samples, seed};
}

}  // namespace expmoment
