#pragma once

#include <cstdint>
#include <span>

#include "expmoment/cost_table.hpp"
#include "expmoment/probability.hpp"

namespace expmoment {

// ln E_P exp(alpha * cost(X, s)). Finite for any real alpha on a finite
// alphabet; computed via log-sum-exp.
double log_exp_moment(const FiniteDistribution& p, const FiniteCostTable& table,
                      std::size_t s, double alpha);

// E_Q cost(X, s).
double expected_cost(const FiniteDistribution& q, const FiniteCostTable& table,
                     std::size_t s);

// alpha * E_Q cost - D(Q || P); -inf when Q leaves the support of P.
double gibbs_objective(const FiniteDistribution& p, std::span<const double> cost,
                       double alpha, const FiniteDistribution& q);

struct GibbsScanResult {
  double max_value;
  FiniteDistribution argmax_q;
};

// Maximizes the Gibbs objective over the simplex grid {k/N}. The maximum over
// all Q equals log_exp_moment, attained at the tilted measure; the grid scan
// is the independent check of that identity. Alphabet size is capped at 4
// because the grid grows as N^(m-1).
GibbsScanResult gibbs_variational_scan(const FiniteDistribution& p,
                                       std::span<const double> cost, double alpha,
                                       int grid_resolution);

struct CertificateReport {
  bool certified;
  std::size_t strategy_index;
  // E_Q cost(X, s) minus the minimum over strategies of E_Q cost, where Q is
  // the measure tilted by this strategy's own cost. Zero gap is the
  // sufficient optimality condition.
  double q_objective_gap;
  double log_z;
  FiniteDistribution tilted_q;
};

// Sufficient-condition check for minimizing E exp(alpha * cost), alpha >= 0:
// certified when s itself minimizes expected cost under the measure tilted by
// cost(., s). Certification implies global optimality; failure is not a
// refutation.
CertificateReport theorem1_certify(const FiniteDistribution& p,
                                   const FiniteCostTable& table, std::size_t s,
                                   double alpha, double tol = 1e-9);

struct BruteForceResult {
  std::size_t best_strategy;
  double log_moment;
};

// Exhaustive minimization of log_exp_moment over strategies (ties break to
// the lowest index).
BruteForceResult brute_force_optimum(const FiniteDistribution& p,
                                     const FiniteCostTable& table, double alpha);

struct SaddleGapResult {
  double minmax;  // min over strategies of max over grid Q
  double maxmin;  // max over grid Q of min over strategies
};

// Grid estimate of both orders of optimization of the Gibbs objective.
// minmax >= maxmin always; equality can fail because the objective is convex
// (not concave) in Q, so the minimax theorem does not apply.
SaddleGapResult saddle_gap(const FiniteDistribution& p, const FiniteCostTable& table,
                           double alpha, int grid_resolution);

struct MCEstimate {
  double mean;
  double std_error;
  std::size_t n_samples;
  std::uint64_t seed;
};

// Plain Monte Carlo estimate of E exp(alpha * cost(X, s)) with its standard
// error. Deterministic for a fixed seed regardless of thread count.
MCEstimate mc_exp_moment(const FiniteDistribution& p, const FiniteCostTable& table,
                         std::size_t s, double alpha, std::size_t n_samples,
                         std::uint64_t seed);

}  // namespace expmoment
