#include "expmoment/altmin.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "expmoment/strategy.hpp"

namespace expmoment {

AltMinTrajectory alt_minimize_neg_moment(const FiniteDistribution& p,
                                         const FiniteCostTable& table, double alpha,
                                         std::size_t s0, std::size_t max_iter,
                                         double tol) {
  if (p.alphabet_size() != table.n_symbols())
    throw std::invalid_argument("alt_minimize: alphabet size mismatch");
  if (s0 >= table.n_strategies())
    throw std::invalid_argument("alt_minimize: start strategy out of range");
  if (!(alpha > 0.0))
    throw std::invalid_argument("alt_minimize: alpha must be > 0");
  if (tol < 0.0) throw std::invalid_argument("alt_minimize: negative tol");

  AltMinTrajectory traj;
  traj.strategy_sequence.push_back(s0);
  traj.objective_sequence.push_back(log_exp_moment(p, table, s0, -alpha));
  std::vector<bool> visited(table.n_strategies(), false);
  visited[s0] = true;

  while (traj.iterations < max_iter) {
    const std::size_t s = traj.strategy_sequence.back();
    const TiltResult tilt = tilted_measure(p, table.column(s), -alpha);
    std::size_t s_next = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cand = 0; cand < table.n_strategies(); ++cand) {
      const double e = expected_cost(tilt.q, table, cand);
      if (e < best) {
        best = e;
        s_next = cand;
      }
    }
    if (s_next == s) {
      traj.converged = true;
      break;
    }
    const double prev = traj.objective_sequence.back();
    traj.strategy_sequence.push_back(s_next);
    traj.objective_sequence.push_back(log_exp_moment(p, table, s_next, -alpha));
    ++traj.iterations;
    if (visited[s_next]) {
      // Deterministic update revisiting a strategy: the orbit is a cycle of
      // equal-objective iterates, no further improvement is possible.
      traj.converged = true;
      break;
    }
    visited[s_next] = true;
    if (traj.objective_sequence.back() - prev < tol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

MultiStartResult alt_minimize_multi_start(const FiniteDistribution& p,
                                          const FiniteCostTable& table, double alpha,
                                          std::size_t max_iter, double tol) {
  MultiStartResult out;
  bool have = false;
  for (std::size_t s0 = 0; s0 < table.n_strategies(); ++s0) {
    AltMinTrajectory t = alt_minimize_neg_moment(p, table, alpha, s0, max_iter, tol);
    if (!have || t.objective_sequence.back() > out.best.objective_sequence.back()) {
      out.best = std::move(t);
      out.best_start = s0;
      have = true;
    }
  }
  return out;
}

}  // namespace expmoment
