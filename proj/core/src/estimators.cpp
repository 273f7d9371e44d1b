#include "expmoment/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "expmoment/io.hpp"
#include "expmoment/numeric.hpp"
#include "expmoment/rng.hpp"

namespace expmoment {

namespace {

void validate_alpha_window(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 0.5))
    throw std::invalid_argument("fixpoint: alpha must lie in (0, 1/2)");
}

// Reweighted prior w~(y) proportional to w(y) exp(c (phi - s y)^2), in the
// log domain.
std::vector<double> reweighted(const FiniteSupportPrior& prior, double c, double s) {
  const std::size_t n = prior.support.size();
  std::vector<double> logw(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (prior.weights[i] <= 0.0) continue;
    const double r = prior.phi[i] - s * prior.support[i];
    logw[i] = std::log(prior.weights[i]) + c * r * r;
  }
  const double lz = log_sum_exp(logw);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (std::isfinite(logw[i])) w[i] = std::exp(logw[i] - lz);
  return w;
}

// Detects phi(y) = c * y exactly (bitwise-identical ratios). Points of zero
// weight are ignored.
bool linear_phi(const FiniteSupportPrior& prior, double* coeff) {
  bool have = false;
  double c = 0.0;
  for (std::size_t i = 0; i < prior.support.size(); ++i) {
    if (prior.weights[i] <= 0.0) continue;
    if (prior.support[i] == 0.0) {
      if (prior.phi[i] != 0.0) return false;
      continue;
    }
    const double r = prior.phi[i] / prior.support[i];
    if (!have) {
      c = r;
      have = true;
    } else if (r != c) {
      return false;
    }
  }
  if (!have) return false;
  *coeff = c;
  return true;
}

}  // namespace

FiniteSupportPrior make_prior(std::vector<double> support, std::vector<double> weights,
                              std::vector<double> phi) {
  if (support.size() != weights.size() || support.size() != phi.size())
    throw std::invalid_argument("prior: field lengths differ");
  if (support.empty()) throw std::invalid_argument("prior: empty support");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!std::isfinite(support[i]) || !std::isfinite(phi[i]))
      throw std::invalid_argument("prior: support and phi must be finite");
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j])
        throw std::invalid_argument("prior: duplicate support point");
  }
  FiniteDistribution check(weights);  // validates and normalizes
  FiniteSupportPrior prior;
  prior.support = std::move(support);
  prior.weights.assign(check.probs().begin(), check.probs().end());
  prior.phi = std::move(phi);

  double ey2 = 0.0;
  for (std::size_t i = 0; i < prior.support.size(); ++i)
    ey2 += prior.weights[i] * prior.support[i] * prior.support[i];
  if (!(ey2 > 0.0))
    throw std::invalid_argument("prior: E[Y^2] must be positive");
  return prior;
}

FiniteSupportPrior parse_prior_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  std::vector<double> y, w, phi;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 3)
      throw std::invalid_argument("prior: each row needs (y, weight, phi)");
    double vals[3];
    bool numeric = true;
    for (int c = 0; c < 3; ++c) {
      try {
        vals[c] = parse_double(rows[r][c]);
      } catch (const std::invalid_argument&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (r == 0) continue;  // header
      throw std::invalid_argument("prior: non-numeric cell in row " +
                                  std::to_string(r + 1));
    }
    y.push_back(vals[0]);
    w.push_back(vals[1]);
    phi.push_back(vals[2]);
  }
  return make_prior(std::move(y), std::move(w), std::move(phi));
}

FiniteSupportPrior load_prior(const std::string& path_or_dash) {
  return parse_prior_csv(read_text_input(path_or_dash));
}

CodeDistributionResult optimal_code_distribution(const FiniteDistribution& p,
                                                 double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("optimal_code_distribution: alpha must be > 0");
  const double u = 1.0 / (1.0 + alpha);
  std::vector<double> logq(p.alphabet_size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < p.alphabet_size(); ++i)
    if (p[i] > 0.0) logq[i] = u * std::log(p[i]);
  const double lz = log_sum_exp(logq);
  std::vector<double> q(p.alphabet_size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    if (std::isfinite(logq[i])) q[i] = std::exp(logq[i] - lz);
  // ln E_P q(X)^(-alpha) = (1 + alpha) ln Z, i.e. alpha * H_u(P) with
  // u = 1/(1+alpha).
  return CodeDistributionResult{FiniteDistribution(std::move(q)),
                                (1.0 + alpha) * lz};
}

double bayes_fixpoint_map(const FiniteSupportPrior& prior, double alpha, double s) {
  validate_alpha_window(alpha);
  const double c = alpha / (1.0 - 2.0 * alpha);
  const std::vector<double> w = reweighted(prior, c, s);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * prior.support[i] * prior.phi[i];
    den += w[i] * prior.support[i] * prior.support[i];
  }
  if (!(den > 0.0))
    throw std::domain_error("fixpoint: E[Y^2] degenerate under reweighting");
  return num / den;
}

FixpointResult bayes_linear_fixpoint(const FiniteSupportPrior& prior, double alpha,
                                     double s0, std::size_t max_iter, double tol,
                                     double damping) {
  validate_alpha_window(alpha);
  if (!(tol > 0.0)) throw std::invalid_argument("fixpoint: tol must be > 0");
  if (!(damping > 0.0 && damping <= 1.0))
    throw std::invalid_argument("fixpoint: damping must be in (0, 1]");

  double coeff = 0.0;
  if (linear_phi(prior, &coeff)) {
    // The map sends every s to coeff, so coeff is the exact fixed point.
    FixpointResult out;
    out.s = coeff;
    out.iterations = 0;
    out.residual = std::abs(coeff - bayes_fixpoint_map(prior, alpha, coeff));
    out.converged = out.residual <= tol;
    return out;
  }

  FixpointResult out;
  out.s = s0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const double mapped = bayes_fixpoint_map(prior, alpha, out.s);
    out.residual = std::abs(out.s - mapped);
    out.iterations = it;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    out.s = (1.0 - damping) * out.s + damping * mapped;
    if (!std::isfinite(out.s))
      throw std::domain_error("fixpoint: iteration diverged");
  }
  out.residual = std::abs(out.s - bayes_fixpoint_map(prior, alpha, out.s));
  out.converged = out.residual <= tol;
  out.iterations = max_iter;
  return out;
}

FixpointResult two_point_fixpoint(const TwoPointPrior& prior, double alpha, double s0,
                                  std::size_t max_iter, double tol) {
  const FiniteSupportPrior full = make_prior({1.0, -1.0}, {0.5, 0.5},
                                             {prior.phi_plus, prior.phi_minus});
  return bayes_linear_fixpoint(full, alpha, s0, max_iter, tol);
}

double squared_error_exp_moment(const FiniteSupportPrior& prior, double alpha,
                                double s) {
  if (!(alpha < 0.5))
    throw std::invalid_argument("squared_error_exp_moment: needs alpha < 1/2");
  static const GaussHermite rule = gauss_hermite(64);
  static const std::vector<double> log_w = [&] {
    std::vector<double> v(rule.weights.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::log(rule.weights[j]);
    return v;
  }();
  // The tilt widens the conditional to variance 1/(1-2 alpha); scaling the
  // substitution to that width, X = phi_i + sqrt(2/(1-2 alpha)) t, folds the
  // whole quadratic into the e^{-t^2} weight. The leftover integrand is
  // exp(beta t), which the 64-node rule resolves for any alpha < 1/2; at the
  // unscaled width the nodes underresolve the integrand as alpha -> 1/2.
  const double a = 1.0 - 2.0 * alpha;
  const double log_pi = std::log(std::acos(-1.0));
  std::vector<double> terms(rule.nodes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < prior.support.size(); ++i) {
    if (prior.weights[i] <= 0.0) continue;
    const double m = prior.phi[i] - s * prior.support[i];
    const double beta = 2.0 * std::sqrt(2.0) * alpha * m / std::sqrt(a);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      terms[j] = log_w[j] + beta * rule.nodes[j];
    const double log_cond =
        alpha * m * m - 0.5 * std::log(a) + log_sum_exp(terms) - 0.5 * log_pi;
    total += prior.weights[i] * std::exp(log_cond);
  }
  return total;
}

double gaussian_sample_mean_moment(const GaussianLocationFamily& fam, double alpha) {
  if (fam.n < 1 || !(fam.sigma2 > 0.0))
    throw std::invalid_argument("gaussian family: need n >= 1 and sigma2 > 0");
  const double limit = fam.n / (2.0 * fam.sigma2);
  if (!(alpha < limit))
    throw std::invalid_argument("gaussian_sample_mean_moment: divergent for alpha >= n/(2 sigma2)");
  return 1.0 / std::sqrt(1.0 - 2.0 * alpha * fam.sigma2 / fam.n);
}

MCEstimate mc_gaussian_sample_mean_moment(const GaussianLocationFamily& fam,
                                          double alpha, std::size_t n_samples,
                                          std::uint64_t seed) {
  if (fam.n < 1 || !(fam.sigma2 > 0.0))
    throw std::invalid_argument("gaussian family: need n >= 1 and sigma2 > 0");
  if (n_samples < 100)
    throw std::invalid_argument("mc_gaussian_sample_mean_moment: need at least 100 samples");
  const double sigma = std::sqrt(fam.sigma2);
  DeterministicRng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    double acc = 0.0;
    for (int j = 0; j < fam.n; ++j) acc += fam.theta + sigma * rng.normal();
    const double dev = acc / fam.n - fam.theta;
    const double v = std::exp(alpha * dev * dev);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(n_samples);
  const double se = m2 > 0.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  return MCEstimate{mean, se, n_samples, seed};
}

CRBSpec gaussian_location_crb_spec(const GaussianLocationFamily& fam, double lo,
                                   double hi) {
  if (fam.n < 1 || !(fam.sigma2 > 0.0))
    throw std::invalid_argument("gaussian family: need n >= 1 and sigma2 > 0");
  if (!(lo < hi)) throw std::invalid_argument("crb spec: empty interval");
  const double crb = fam.sigma2 / fam.n;  // Fisher information n/sigma2
  const double kl_scale = fam.n / (2.0 * fam.sigma2);
  CRBSpec spec;
  spec.crb_at = [crb](double) { return crb; };
  spec.kl_at = [kl_scale](double tp, double t) {
    return kl_scale * (tp - t) * (tp - t);
  };
  spec.search_lo = lo;
  spec.search_hi = hi;
  return spec;
}

CRBBoundResult crb_lower_bound(const CRBSpec& spec, double theta, double alpha,
                               int grid) {
  if (grid < 3) throw std::invalid_argument("crb_lower_bound: grid must be >= 3");
  if (!(spec.search_lo <= theta) || !(theta <= spec.search_hi))
    throw std::invalid_argument("crb_lower_bound: theta outside search interval");
  auto g = [&](double tp) {
    const double d = tp - theta;
    return alpha * spec.crb_at(tp) + alpha * d * d - spec.kl_at(tp, theta);
  };
  const double lo = spec.search_lo, hi = spec.search_hi;
  const double step = (hi - lo) / (grid - 1);
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double v = g(lo + i * step);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  CRBBoundResult out;
  if (best == 0 || best == grid - 1) {
    // Maximum on the boundary: report the edge value and flag growth if the
    // supremand is still increasing toward the edge.
    const double edge = lo + best * step;
    const double inner = lo + (best == 0 ? 1 : grid - 2) * step;
    out.bound_log = g(edge);
    out.argmax_theta_prime = edge;
    out.unbounded = g(edge) > g(inner);
    return out;
  }
  const double a = lo + (best - 1) * step;
  const double b = lo + (best + 1) * step;
  const double refined = golden_max(g, a, b, 1e-10);
  out.bound_log = g(refined);
  out.argmax_theta_prime = refined;
  out.unbounded = false;
  return out;
}

}  // namespace expmoment
