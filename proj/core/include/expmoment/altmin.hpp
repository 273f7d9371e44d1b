#pragma once

#include <cstddef>
#include <vector>

#include "expmoment/cost_table.hpp"
#include "expmoment/probability.hpp"

namespace expmoment {

struct AltMinTrajectory {
  // strategy_sequence[k] is the iterate after k steps; objective_sequence[k]
  // is ln E exp(-alpha * cost(X, strategy_sequence[k])). Both have length
  // iterations + 1.
  std::vector<std::size_t> strategy_sequence;
  std::vector<double> objective_sequence;
  std::size_t iterations = 0;
  bool converged = false;
};

// Alternating maximization of E exp(-alpha * cost(X, s)) over s, alpha > 0:
// tilt P by -alpha * cost(., s_k), then pick the strategy minimizing expected
// cost under the tilted measure (ties to the lowest index). Each step cannot
// decrease the objective; a repeated strategy means the deterministic update
// map has closed a cycle over equal-objective iterates, so iteration stops as
// converged. The stationary point satisfies necessary conditions only, hence
// the multi-start variant.
AltMinTrajectory alt_minimize_neg_moment(const FiniteDistribution& p,
                                         const FiniteCostTable& table, double alpha,
                                         std::size_t s0, std::size_t max_iter = 1000,
                                         double tol = 1e-10);

struct MultiStartResult {
  AltMinTrajectory best;
  std::size_t best_start = 0;  // starting strategy that won
};

// Runs alt_minimize_neg_moment from every strategy and keeps the run with the
// highest final objective (ties to the lowest starting index).
MultiStartResult alt_minimize_multi_start(const FiniteDistribution& p,
                                          const FiniteCostTable& table, double alpha,
                                          std::size_t max_iter = 1000,
                                          double tol = 1e-10);

}  // namespace expmoment
