#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "expmoment/probability.hpp"
#include "expmoment/strategy.hpp"

namespace expmoment {

// Discrete prior on Y plus the conditional-mean function phi sampled on the
// same support: X | Y=y is Gaussian with mean phi(y) and unit variance.
struct FiniteSupportPrior {
  std::vector<double> support;   // y values, distinct
  std::vector<double> weights;   // prior probabilities, validated like a distribution
  std::vector<double> phi;       // phi(y) per support point
};

FiniteSupportPrior make_prior(std::vector<double> support, std::vector<double> weights,
                              std::vector<double> phi);
// CSV rows (y, weight, phi); an optional non-numeric header row is skipped.
FiniteSupportPrior parse_prior_csv(const std::string& text);
FiniteSupportPrior load_prior(const std::string& path_or_dash);

// Equal-weight prior on {+1, -1} with conditional means phi_plus, phi_minus.
struct TwoPointPrior {
  double phi_plus;
  double phi_minus;
};

// n i.i.d. Gaussians, mean theta, variance sigma2; the estimand is theta.
struct GaussianLocationFamily {
  int n;
  double sigma2;
  double theta;
};

// Pluggable family contract for the estimation lower bound: the
// Cramer-Rao bound at theta' and D(P_theta' || P_theta), both for the full
// n-sample experiment, plus the search interval for theta'.
struct CRBSpec {
  std::function<double(double)> crb_at;
  std::function<double(double, double)> kl_at;
  double search_lo;
  double search_hi;
};

CRBSpec gaussian_location_crb_spec(const GaussianLocationFamily& fam, double lo,
                                   double hi);

struct CodeDistributionResult {
  FiniteDistribution s_q;
  double log_moment;
};

// Minimizer of E exp(alpha * length(X)) over code distributions q with
// length = -ln q: s_q proportional to p^(1/(1+alpha)). log_moment equals
// alpha times the Renyi entropy of order 1/(1+alpha).
CodeDistributionResult optimal_code_distribution(const FiniteDistribution& p,
                                                 double alpha);

struct FixpointResult {
  double s = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// One application of the fixed-point map s -> E[Y phi(Y)] / E[Y^2] with
// expectations under the reweighted prior proportional to
// w(y) exp(c (phi(y) - s y)^2), c = alpha / (1 - 2 alpha).
double bayes_fixpoint_map(const FiniteSupportPrior& prior, double alpha, double s);

// Damped fixed-point iteration s <- (1-gamma) s + gamma map(s). The map's
// fixed points are the stationarity condition for the best linear estimator
// of X from Y under exp(alpha * squared error), alpha in (0, 1/2). A linear
// phi makes the map constant, so that case returns the coefficient directly.
FixpointResult bayes_linear_fixpoint(const FiniteSupportPrior& prior, double alpha,
                                     double s0, std::size_t max_iter = 10000,
                                     double tol = 1e-12, double damping = 0.5);

// Specialization to the two-point prior. For phi_plus == -phi_minus the root
// is phi_plus; for phi_plus == phi_minus == phi it solves
// s = -phi * tanh(2 alpha phi s / (1 - 2 alpha)).
FixpointResult two_point_fixpoint(const TwoPointPrior& prior, double alpha, double s0,
                                  std::size_t max_iter = 10000, double tol = 1e-12);

// E exp(alpha (X - s Y)^2) for the prior model, by 64-node Gauss-Hermite
// quadrature over the conditional with nodes scaled to the tilted variance
// 1/(1-2 alpha). Used to rank fixed points when the stationarity condition
// has several roots.
double squared_error_exp_moment(const FiniteSupportPrior& prior, double alpha,
                                double s);

// E exp(alpha (sample_mean - theta)^2) = (1 - 2 alpha sigma2 / n)^(-1/2).
// Rejects alpha >= n / (2 sigma2), where the moment diverges.
double gaussian_sample_mean_moment(const GaussianLocationFamily& fam, double alpha);

// Seeded simulation oracle for the same moment; deterministic per seed.
MCEstimate mc_gaussian_sample_mean_moment(const GaussianLocationFamily& fam,
                                          double alpha, std::size_t n_samples,
                                          std::uint64_t seed);

struct CRBBoundResult {
  double bound_log = 0.0;
  double argmax_theta_prime = 0.0;
  bool unbounded = false;  // supremand still growing at an interval edge
};

// sup over theta' of [alpha * crb_at(theta') + alpha (theta'-theta)^2
// - kl_at(theta', theta)]: a lower bound on ln E exp(alpha (est - theta)^2)
// for every unbiased estimator. Grid scan plus golden-section refinement.
CRBBoundResult crb_lower_bound(const CRBSpec& spec, double theta, double alpha,
                               int grid = 1001);

}  // namespace expmoment
