// Acceptance suite: every release gate in one binary. Each criterion prints
// exactly one PASS/FAIL line; the exit code is the number of failures. All
// tolerances are pinned here, next to the check they gate.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expmoment/altmin.hpp"
#include "expmoment/curie_weiss.hpp"
#include "expmoment/estimators.hpp"
#include "expmoment/exponents.hpp"
#include "expmoment/numeric.hpp"
#include "expmoment/probability.hpp"
#include "expmoment/rng.hpp"
#include "expmoment/strategy.hpp"

namespace {

using namespace expmoment;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

FiniteDistribution random_simplex(DeterministicRng& rng, std::size_t m) {
  std::vector<double> w(m);
  double sum = 0.0;
  for (double& x : w) {
    x = 0.05 + rng.uniform01();
    sum += x;
  }
  for (double& x : w) x /= sum;
  return FiniteDistribution(w);
}

FiniteCostTable random_table(DeterministicRng& rng, std::size_t m, std::size_t n) {
  std::vector<double> data(m * n);
  for (double& x : data) x = 3.0 * rng.uniform01();
  return FiniteCostTable(m, n, data);
}

// 1. The simplex-grid maximum of alpha E_Q[cost] - D(Q||P) reproduces the
// log-moment ln Z(s) within the grid resolution bound 10/N.
Outcome criterion_gibbs_identity() {
  constexpr int kResolution = 600;
  constexpr double kTol = 10.0 / kResolution;
  DeterministicRng rng(20240801);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 2.0);
    const std::size_t n_s = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    const FiniteDistribution p = random_simplex(rng, m);
    const FiniteCostTable table = random_table(rng, m, n_s);
    const double alpha = 2.0 * rng.uniform01();
    const std::size_t s = trial % n_s;
    const std::vector<double> cost = table.column(s);
    const double log_z = log_exp_moment(p, table, s, alpha);
    const GibbsScanResult scan = gibbs_variational_scan(p, cost, alpha, kResolution);
    worst = std::max(worst, std::abs(scan.max_value - log_z));
  }
  return {worst <= kTol, "max |grid max - ln Z| = " + num(worst) + " (bound " +
                             num(kTol) + ")"};
}

// 2. A certificate is sound: every certified strategy attains the brute-force
// minimum of the log-moment within 1e-9.
Outcome criterion_certificate_soundness() {
  constexpr double kGap = 1e-9;
  DeterministicRng rng(7);
  int certified = 0;
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteDistribution p = random_simplex(rng, 3);
    const FiniteCostTable table = random_table(rng, 3, 5);
    for (const double alpha : {0.3, 1.0, 3.0}) {
      const BruteForceResult brute = brute_force_optimum(p, table, alpha);
      for (std::size_t s = 0; s < table.n_strategies(); ++s) {
        if (!theorem1_certify(p, table, s, alpha).certified) continue;
        ++certified;
        if (log_exp_moment(p, table, s, alpha) > brute.log_moment + kGap)
          ++violations;
      }
    }
  }
  return {violations == 0 && certified > 0,
          std::to_string(certified) + " certificates, " +
              std::to_string(violations) + " unsound"};
}

// 3. Ternary source (1/2, 1/4, 1/4) at alpha = 1: the optimal code
// distribution, its log-moment as alpha * H_{1/(1+alpha)}, and global
// optimality against every interior grid competitor at resolution 300.
Outcome criterion_code_distribution() {
  constexpr double kDistTol = 1e-6;
  constexpr double kMomentTol = 1e-9;
  constexpr int kResolution = 300;
  const FiniteDistribution p({0.5, 0.25, 0.25});
  const double alpha = 1.0;
  const CodeDistributionResult res = optimal_code_distribution(p, alpha);
  const double expected[3] = {0.414214, 0.292893, 0.292893};
  double dist_err = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    dist_err = std::max(dist_err, std::abs(res.s_q[i] - expected[i]));
  const double moment_err =
      std::abs(res.log_moment - alpha * renyi_entropy(p, 1.0 / (1.0 + alpha)));

  double grid_min = std::numeric_limits<double>::infinity();
  for_each_composition(3, kResolution, [&](std::span<const int> k) {
    if (k[0] == 0 || k[1] == 0 || k[2] == 0) return;  // infinite length
    double terms[3];
    for (std::size_t i = 0; i < 3; ++i)
      terms[i] = std::log(p[i]) -
                 alpha * std::log(static_cast<double>(k[i]) / kResolution);
    grid_min = std::min(grid_min, log_sum_exp(terms));
  });
  const bool no_improvement = grid_min >= res.log_moment - kMomentTol;
  return {dist_err <= kDistTol && moment_err <= kMomentTol && no_improvement,
          "distribution err " + num(dist_err) + ", log-moment err " +
              num(moment_err) + ", grid min - optimum = " +
              num(grid_min - res.log_moment)};
}

// 4. Fixed-point estimator special cases: a linear conditional mean returns
// its coefficient exactly in zero iterations; equal two-point means force
// s = 0; alpha -> 0 recovers the midpoint slope.
Outcome criterion_fixpoint_cases() {
  const FiniteSupportPrior linear =
      make_prior({1.0, -1.0, 2.0}, {0.3, 0.3, 0.4}, {1.7, -1.7, 3.4});
  const FixpointResult a = bayes_linear_fixpoint(linear, 0.3, -5.0);
  const bool linear_ok = a.s == 1.7 && a.iterations == 0 && a.converged;

  const FixpointResult b = two_point_fixpoint({0.8, 0.8}, 0.3, 0.7);
  const bool symmetric_ok = b.converged && std::abs(b.s) <= 1e-10;

  const FixpointResult c = two_point_fixpoint({1.3, 0.1}, 1e-9, 0.0);
  const bool small_alpha_ok = c.converged && std::abs(c.s - 0.6) <= 1e-6;

  return {linear_ok && symmetric_ok && small_alpha_ok,
          std::string("linear ") + (linear_ok ? "exact" : "WRONG") +
              ", symmetric |s| = " + num(std::abs(b.s)) +
              ", small-alpha err = " + num(std::abs(c.s - 0.6))};
}

// 5. Gaussian sample mean, n = 4, sigma2 = 1, alpha = 1: closed form sqrt(2)
// within 1e-12 and a seeded 1e6-sample Monte Carlo within 4 standard errors.
// alpha sits exactly where exp(alpha (mean - theta)^2) stops being square
// integrable, so the averaged estimate is heavy tailed and the seed is pinned.
Outcome criterion_gaussian_moment() {
  constexpr double kExactTol = 1e-12;
  constexpr std::uint64_t kSeed = 1;
  const GaussianLocationFamily fam{4, 1.0, 0.0};
  const double exact = gaussian_sample_mean_moment(fam, 1.0);
  const double exact_err = std::abs(exact - std::sqrt(2.0));
  const MCEstimate mc = mc_gaussian_sample_mean_moment(fam, 1.0, 1000000, kSeed);
  const double dev = std::abs(mc.mean - exact);
  return {exact_err <= kExactTol && dev <= 4.0 * mc.std_error,
          "closed-form err " + num(exact_err) + ", MC dev " + num(dev) + " vs 4se " +
              num(4.0 * mc.std_error)};
}

// 6. The CRB-lifted lower bound exp(alpha sigma2/n) never exceeds the exact
// Gaussian moment across alpha up to 0.9 of the divergence point, and the two
// log-moments agree to first order as alpha -> 0.
Outcome criterion_crb_bound() {
  const GaussianLocationFamily fam{5, 1.0, 0.0};
  const CRBSpec spec = gaussian_location_crb_spec(fam, -10.0, 10.0);
  const double alpha_max = fam.n / (2.0 * fam.sigma2);
  double worst_excess = -std::numeric_limits<double>::infinity();
  bool bounded = true;
  for (int i = 1; i <= 9; ++i) {
    const double alpha = 0.1 * i * alpha_max;
    const CRBBoundResult b = crb_lower_bound(spec, 0.0, alpha);
    bounded = bounded && !b.unbounded;
    const double exact_log = std::log(gaussian_sample_mean_moment(fam, alpha));
    worst_excess = std::max(worst_excess, b.bound_log - exact_log);
  }
  const double alpha_small = 1e-4 * fam.n / fam.sigma2;
  const double ratio =
      crb_lower_bound(spec, 0.0, alpha_small).bound_log /
      std::log(gaussian_sample_mean_moment(fam, alpha_small));
  const bool first_order = std::abs(ratio - 1.0) <= 1e-3;
  return {bounded && worst_excess <= 1e-12 && first_order,
          "max bound excess " + num(worst_excess) + ", small-alpha log ratio " +
              num(ratio)};
}

// 7. The variational exponent with lambda = Shannon entropy matches
// alpha * H_{1/(1+alpha)}(P) within 1e-5 across alphabets 2-4.
Outcome criterion_renyi_identity() {
  constexpr double kTol = 1e-5;
  const std::vector<std::vector<double>> sources = {
      {0.5, 0.5},
      {0.8, 0.2},
      {0.95, 0.05},
      {1.0 / 3, 1.0 / 3, 1.0 / 3},
      {0.5, 0.25, 0.25},
      {0.6, 0.3, 0.1},
      {0.25, 0.25, 0.25, 0.25},
      {0.4, 0.3, 0.2, 0.1},
      {0.7, 0.1, 0.1, 0.1},
  };
  const LambdaFunctional lam = LambdaFunctional::shannon();
  double worst = 0.0;
  for (const auto& w : sources) {
    const FiniteDistribution p(w);
    for (const double alpha : {0.25, 0.5, 1.0, 2.0}) {
      const ExponentResult r = generic_exponent(p, lam, alpha);
      worst = std::max(worst, std::abs(r.value - lossless_exponent(p, alpha)));
    }
  }
  return {worst <= kTol, "max |variational - closed form| = " + num(worst)};
}

// 8. Guessing exponent: the three-phase closed form tracks the variational
// optimization with lambda = min(H_Q, R) within 2e-3, and both phase
// boundaries are continuous within 1e-6.
Outcome criterion_guessing() {
  constexpr double kMatchTol = 2e-3;
  constexpr double kJoinTol = 1e-6;
  const std::vector<std::vector<double>> sources = {
      {0.5, 0.5}, {0.8, 0.2}, {0.5, 0.3, 0.2}};
  double worst_match = 0.0;
  double worst_join = 0.0;
  for (const auto& w : sources) {
    const FiniteDistribution p(w);
    for (const double alpha : {0.5, 2.0}) {
      for (const double R : {0.2, 0.45, 0.69}) {
        const double closed = guessing_exponent_closed(p, R, alpha).value;
        const double variational =
            generic_exponent(p, LambdaFunctional::guessing(R), alpha).value;
        worst_match = std::max(worst_match, std::abs(closed - variational));
      }
      for (const double boundary :
           {entropy(p), entropy(power_tilted(p, alpha))}) {
        const double below =
            guessing_exponent_closed(p, boundary - 1e-9, alpha).value;
        const double above =
            guessing_exponent_closed(p, boundary + 1e-9, alpha).value;
        worst_join = std::max(worst_join, std::abs(below - above));
      }
    }
  }
  return {worst_match <= kMatchTol && worst_join <= kJoinTol,
          "max closed-vs-variational " + num(worst_match) + ", max boundary jump " +
              num(worst_join)};
}

// 9. Two-part code moment: (1/n) ln E exp(alpha n H_emp) stays within
// alpha (1/2)(ln n)/n + 0.05 of the lossless exponent, from below, with the
// gap shrinking over n in {20, 40, 60}.
Outcome criterion_two_part() {
  bool ok = true;
  double worst_fraction = 0.0;  // gap / margin, should stay below 1
  for (const auto& [p0, alpha] : std::vector<std::pair<double, double>>{
           {0.5, 1.0}, {0.8, 1.0}, {0.5, 0.5}, {0.8, 0.5}}) {
    const FiniteDistribution p({p0, 1.0 - p0});
    const double limit = lossless_exponent(p, alpha);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (const int n : {20, 40, 60}) {
      const double v = two_part_code_exact_moment(p, alpha, n);
      const double margin = alpha * 0.5 * std::log(n) / n + 0.05;
      const double gap = std::abs(v - limit);
      ok = ok && gap <= margin && v <= limit + margin && gap <= prev_gap + 1e-12;
      worst_fraction = std::max(worst_fraction, gap / margin);
      prev_gap = gap;
    }
  }
  return {ok, "max gap/margin = " + num(worst_fraction)};
}

// 10. REM exponent: the two branches agree at the critical alpha within 1e-9;
// the transition is second order (first derivative continuous within 1e-4,
// second derivative jumps by more than 0.01).
Outcome criterion_rem() {
  double worst_value_jump = 0.0;
  double worst_slope_jump = 0.0;
  double min_curvature_jump = std::numeric_limits<double>::infinity();
  const auto value = [](double R, double a) { return rem_lossy_exponent(R, a).value; };
  for (int i = 1; i <= 6; ++i) {
    const double R = 0.1 * i;
    const double ac = rem_lossy_exponent(R, 1.0).critical_alpha;
    worst_value_jump = std::max(
        worst_value_jump, std::abs(value(R, ac + 1e-12) - value(R, ac - 1e-12)));
    const double h1 = 1e-4;
    const double left_slope = (value(R, ac) - value(R, ac - h1)) / h1;
    const double right_slope = (value(R, ac + h1) - value(R, ac)) / h1;
    worst_slope_jump = std::max(worst_slope_jump, std::abs(right_slope - left_slope));
    const double h2 = 1e-3;
    const double left_curv =
        (value(R, ac) - 2.0 * value(R, ac - h2) + value(R, ac - 2.0 * h2)) / (h2 * h2);
    const double right_curv =
        (value(R, ac + 2.0 * h2) - 2.0 * value(R, ac + h2) + value(R, ac)) / (h2 * h2);
    min_curvature_jump = std::min(min_curvature_jump, right_curv - left_curv);
  }
  return {worst_value_jump <= 1e-9 && worst_slope_jump <= 1e-4 &&
              min_curvature_jump > 0.01,
          "value jump " + num(worst_value_jump) + ", slope jump " +
              num(worst_slope_jump) + ", min curvature jump " +
              num(min_curvature_jump)};
}

// 11. Mean-field magnetization model at mu = 0, alpha = 1: the three fixed
// points, the exponent against a dense grid oracle, the finite-n value at
// n = 2000, and the phase-diagram topology on the 37 x 31 grid.
Outcome criterion_curie_weiss() {
  const CWParams params{0.0, 1.0};
  const std::vector<double> roots = magnetization_fixed_points(params);
  bool roots_ok = roots.size() == 3;
  if (roots_ok) {
    roots_ok = std::abs(roots[0] + 0.957504) <= 1e-6 && std::abs(roots[1]) <= 1e-6 &&
               std::abs(roots[2] - 0.957504) <= 1e-6;
  }

  const CWExponentResult res = cw_exponent(params);
  // independent oracle: dense scan of the objective plus golden refinement
  double best_m = 0.0;
  double best_val = -std::numeric_limits<double>::infinity();
  constexpr int kScan = 2000000;
  for (int i = 0; i <= kScan; ++i) {
    const double m = -1.0 + 2.0 * i / kScan;
    const double v = cw_objective(params, m);
    if (v > best_val) {
      best_val = v;
      best_m = m;
    }
  }
  const double refined = cw_objective(
      params, golden_max([&](double m) { return cw_objective(params, m); },
                         std::max(-1.0, best_m - 2.0 / kScan),
                         std::min(1.0, best_m + 2.0 / kScan), 1e-13));
  const double oracle_gap = std::abs(res.exponent - refined);
  const bool exponent_ok = oracle_gap <= 1e-6;

  const double finite_gap = std::abs(cw_exact_finite_n(params, 2000) - res.exponent);
  const bool finite_ok = finite_gap <= 5e-3;

  const std::vector<PhasePoint> grid = phase_diagram_grid(-0.9, 0.9, 37, 0.0, 1.5, 31);
  bool topology_ok = grid.size() == 37u * 31u;
  int counts[6] = {0, 0, 0, 0, 0, 0};
  for (const PhasePoint& pt : grid) {
    counts[static_cast<int>(pt.phase)]++;
    const double mu = pt.params.mu;
    const double alpha = pt.params.alpha;
    if (alpha < 0.5 - 1e-9) {
      topology_ok = topology_ok && pt.phase == CWPhase::paramagnetic;
    } else if (std::abs(alpha - 0.5) <= 1e-9 || std::abs(mu) <= 1e-9) {
      topology_ok = topology_ok && pt.phase == CWPhase::boundary;
    } else {
      const double a0 = critical_alpha(mu);
      if (std::abs(alpha - a0) > 1e-9) {
        const bool same_sign = alpha < a0;
        const CWPhase expected =
            mu > 0 ? (same_sign ? CWPhase::pos_mu_pos_m : CWPhase::pos_mu_neg_m)
                   : (same_sign ? CWPhase::neg_mu_neg_m : CWPhase::neg_mu_pos_m);
        topology_ok = topology_ok && pt.phase == expected;
      }
    }
  }
  for (int c : counts) topology_ok = topology_ok && c > 0;

  // spot-check the dominant-magnetization sign against the dense oracle
  int spot = 0;
  bool spots_ok = true;
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const PhasePoint& pt = grid[i];
    if (pt.params.alpha < 0.55 || std::abs(pt.params.mu) < 0.05) continue;
    double sm = 0.0;
    double sv = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100000; ++k) {
      const double m = -1.0 + 2.0 * k / 100000.0;
      const double v = cw_objective(pt.params, m);
      if (v > sv) {
        sv = v;
        sm = m;
      }
    }
    spots_ok = spots_ok && (sm > 0) == (pt.dominant_m > 0);
    ++spot;
  }

  // the row just above the transition already shows every region
  bool row_ok = true;
  {
    bool seen[6] = {false, false, false, false, false, false};
    for (const PhasePoint& pt : grid)
      if (std::abs(pt.params.alpha - 0.55) <= 1e-9)
        seen[static_cast<int>(pt.phase)] = true;
    for (int k = 1; k < 6; ++k) row_ok = row_ok && seen[k];
    row_ok = row_ok && !seen[0];
  }

  return {roots_ok && exponent_ok && finite_ok && topology_ok && spots_ok &&
              row_ok && spot > 10,
          "oracle gap " + num(oracle_gap) + ", finite-n gap " + num(finite_gap) +
              ", " + std::to_string(spot) + " sign spot-checks"};
}

// 12. Alternating optimization on 100 random 4x6 tables: the objective never
// decreases, the limit is a fixed point of the update map, and the gap to the
// brute-force optimum is zero in at least 90 instances. Stationary points are
// only necessary conditions, so this drives the multi-start variant; single
// starts stall at local optima in roughly a third of these instances.
Outcome criterion_altmin() {
  constexpr double kStepTol = 1e-12;
  DeterministicRng rng(4242);
  int zero_gap = 0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteDistribution p = random_simplex(rng, 4);
    const FiniteCostTable table = random_table(rng, 4, 6);
    const double alpha = 0.2 + 1.8 * rng.uniform01();
    const AltMinTrajectory traj =
        alt_minimize_multi_start(p, table, alpha).best;
    ok = ok && traj.converged;
    for (std::size_t k = 0; k + 1 < traj.objective_sequence.size(); ++k)
      ok = ok && traj.objective_sequence[k + 1] >=
                     traj.objective_sequence[k] - kStepTol;

    // fixed point: one more update step cannot move the objective
    const std::size_t final_s = traj.strategy_sequence.back();
    const FiniteDistribution q =
        tilted_measure(p, table.column(final_s), -alpha).q;
    std::size_t best_response = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < table.n_strategies(); ++s) {
      const double c = expected_cost(q, table, s);
      if (c < best_cost - 1e-15) {
        best_cost = c;
        best_response = s;
      }
    }
    const double final_obj = traj.objective_sequence.back();
    const double mapped_obj = log_exp_moment(p, table, best_response, -alpha);
    ok = ok && std::abs(mapped_obj - final_obj) <= kStepTol;

    double brute = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < table.n_strategies(); ++s)
      brute = std::max(brute, log_exp_moment(p, table, s, -alpha));
    ok = ok && brute >= final_obj - kStepTol;
    if (brute - final_obj <= kStepTol) ++zero_gap;
  }
  ok = ok && zero_gap >= 90;
  return {ok, std::to_string(zero_gap) + "/100 runs reach the brute-force optimum"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Gibbs variational identity matches the log-moment", criterion_gibbs_identity},
      {"certified strategies are global minimizers", criterion_certificate_soundness},
      {"ternary optimal code distribution", criterion_code_distribution},
      {"Bayes fixed-point estimator special cases", criterion_fixpoint_cases},
      {"Gaussian sample-mean moment, closed form and Monte Carlo",
       criterion_gaussian_moment},
      {"CRB lower bound stays below the exact moment", criterion_crb_bound},
      {"variational exponent equals the Renyi closed form", criterion_renyi_identity},
      {"guessing exponent phases and continuity", criterion_guessing},
      {"two-part code moment converges from below", criterion_two_part},
      {"REM branches meet in a second-order transition", criterion_rem},
      {"mean-field fixed points, exponent, phase topology", criterion_curie_weiss},
      {"alternating optimization reaches certified fixed points", criterion_altmin},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.ok) ++failures;
    std::printf("%s  %2zu  %s  [%s]\n", outcome.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
  }
  return failures;
}
