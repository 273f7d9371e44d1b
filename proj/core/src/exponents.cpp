#include "expmoment/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "expmoment/numeric.hpp"

namespace expmoment {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_distortion_matrix(const FiniteCostTable& d) {
  for (std::size_t x = 0; x < d.n_symbols(); ++x) {
    bool has_zero = false;
    for (std::size_t y = 0; y < d.n_strategies(); ++y) {
      if (d(x, y) < 0.0)
        throw std::invalid_argument("distortion matrix: negative entry");
      if (d(x, y) == 0.0) has_zero = true;
    }
    if (!has_zero)
      throw std::invalid_argument("distortion matrix: row without a zero entry");
  }
}

// Average distortion of the best single reproduction letter: the D value of
// the R = 0 endpoint.
double zero_rate_distortion(const FiniteDistribution& q, const FiniteCostTable& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < d.n_strategies(); ++y) {
    double avg = 0.0;
    for (std::size_t x = 0; x < d.n_symbols(); ++x) avg += q[x] * d(x, y);
    best = std::min(best, avg);
  }
  return best;
}

}  // namespace

RDPoint blahut_arimoto_rd(const FiniteDistribution& q, const FiniteCostTable& d,
                          double slope, std::size_t max_iter, double tol) {
  if (q.alphabet_size() != d.n_symbols())
    throw std::invalid_argument("blahut_arimoto_rd: source/matrix size mismatch");
  if (!(slope > 0.0))
    throw std::invalid_argument("blahut_arimoto_rd: slope must be > 0");
  validate_distortion_matrix(d);

  const double beta = 1.0 / slope;
  const std::size_t nx = d.n_symbols();
  const std::size_t ny = d.n_strategies();

  std::vector<double> log_r(ny, -std::log(static_cast<double>(ny)));
  std::vector<double> log_w(nx * ny, kNegInf);  // conditional law per source row
  RDPoint out;

  for (std::size_t it = 0; it < max_iter; ++it) {
    // w(y|x) proportional to r(y) exp(-beta d(x,y)), row by row.
    for (std::size_t x = 0; x < nx; ++x) {
      if (q[x] == 0.0) continue;
      std::vector<double> t(ny);
      for (std::size_t y = 0; y < ny; ++y) t[y] = log_r[y] - beta * d(x, y);
      const double lz = log_sum_exp(t);
      for (std::size_t y = 0; y < ny; ++y) log_w[x * ny + y] = t[y] - lz;
    }
    // r(y) <- sum_x q(x) w(y|x).
    std::vector<double> new_r(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (q[x] == 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y)
        new_r[y] += q[x] * std::exp(log_w[x * ny + y]);
    }
    double delta = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double old = std::exp(log_r[y]);
      delta = std::max(delta, std::abs(new_r[y] - old));
      log_r[y] = new_r[y] > 0.0 ? std::log(new_r[y]) : kNegInf;
    }
    out.iterations = it + 1;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }

  // Read R as the mutual information of the induced joint law and D as its
  // average distortion.
  std::vector<double> marginal(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    if (q[x] == 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y)
      marginal[y] += q[x] * std::exp(log_w[x * ny + y]);
  }
  double rate = 0.0, dist = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (q[x] == 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = std::exp(log_w[x * ny + y]);
      if (w == 0.0) continue;
      rate += q[x] * w * (log_w[x * ny + y] - std::log(marginal[y]));
      dist += q[x] * w * d(x, y);
    }
  }
  out.R = rate < 0.0 ? 0.0 : rate;
  out.D = dist;
  return out;
}

namespace {

// Monotone bracket-and-bisect on ln(beta). get returns the coordinate that
// decreases in slope (D) or increases (R); target_decreasing tells which.
RDPoint solve_rd_target(const FiniteDistribution& q, const FiniteCostTable& d,
                        double target, bool target_is_distortion) {
  const double lo_beta = 1e-9, hi_beta_cap = 1e9;
  auto eval = [&](double beta) { return blahut_arimoto_rd(q, d, 1.0 / beta); };

  double lo = lo_beta, hi = lo_beta * 2.0;
  RDPoint at_hi = eval(hi);
  auto reached = [&](const RDPoint& pt) {
    return target_is_distortion ? pt.D <= target : pt.R >= target;
  };
  while (!reached(at_hi) && hi < hi_beta_cap) {
    lo = hi;
    hi *= 4.0;
    at_hi = eval(hi);
  }
  if (!reached(at_hi)) return at_hi;  // target beyond the curve; endpoint value

  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);  // bisect in log space
    const RDPoint at_mid = eval(mid);
    if (reached(at_mid))
      hi = mid;
    else
      lo = mid;
    const double err = target_is_distortion ? std::abs(at_mid.D - target)
                                            : std::abs(at_mid.R - target);
    if (err < 1e-12) return at_mid;
  }
  return eval(hi);
}

}  // namespace

RDPoint rate_at_distortion(const FiniteDistribution& q, const FiniteCostTable& d,
                           double D_target) {
  if (D_target < 0.0)
    throw std::invalid_argument("rate_at_distortion: negative distortion");
  validate_distortion_matrix(d);
  if (D_target >= zero_rate_distortion(q, d)) {
    RDPoint pt;
    pt.R = 0.0;
    pt.D = zero_rate_distortion(q, d);
    pt.converged = true;
    return pt;
  }
  if (D_target == 0.0) {
    // Slope -> 0 limit; a very cold run lands on the lossless endpoint.
    return blahut_arimoto_rd(q, d, 1e-6);
  }
  return solve_rd_target(q, d, D_target, true);
}

RDPoint distortion_at_rate(const FiniteDistribution& q, const FiniteCostTable& d,
                           double R_target) {
  if (R_target < 0.0) throw std::invalid_argument("distortion_at_rate: negative rate");
  validate_distortion_matrix(d);
  if (R_target == 0.0) {
    RDPoint pt;
    pt.R = 0.0;
    pt.D = zero_rate_distortion(q, d);
    pt.converged = true;
    return pt;
  }
  const RDPoint cold = blahut_arimoto_rd(q, d, 1e-6);
  if (R_target >= cold.R) return cold;  // rate above the curve: D at its floor
  return solve_rd_target(q, d, R_target, false);
}

LambdaFunctional::LambdaFunctional(LambdaKind kind, double param,
                                   std::optional<FiniteCostTable> d_matrix)
    : kind_(kind), param_(param), d_matrix_(std::move(d_matrix)),
      cache_(std::make_shared<Cache>()) {}

LambdaFunctional LambdaFunctional::shannon() {
  return LambdaFunctional(LambdaKind::shannon_entropy, 0.0, std::nullopt);
}

LambdaFunctional LambdaFunctional::guessing(double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("lambda guessing: R must be >= 0");
  return LambdaFunctional(LambdaKind::guessing_min, R, std::nullopt);
}

LambdaFunctional LambdaFunctional::rate_distortion(FiniteCostTable d_matrix, double D) {
  if (!(D >= 0.0)) throw std::invalid_argument("lambda rate_distortion: D must be >= 0");
  validate_distortion_matrix(d_matrix);
  return LambdaFunctional(LambdaKind::rate_distortion, D, std::move(d_matrix));
}

LambdaFunctional LambdaFunctional::distortion_rate(FiniteCostTable d_matrix, double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("lambda distortion_rate: R must be >= 0");
  validate_distortion_matrix(d_matrix);
  return LambdaFunctional(LambdaKind::distortion_rate, R, std::move(d_matrix));
}

double LambdaFunctional::operator()(const FiniteDistribution& q) const {
  switch (kind_) {
    case LambdaKind::shannon_entropy:
      return entropy(q);
    case LambdaKind::guessing_min:
      return std::min(entropy(q), param_);
    case LambdaKind::rate_distortion:
    case LambdaKind::distortion_rate:
      break;
  }
  std::vector<long long> key(q.alphabet_size());
  for (std::size_t i = 0; i < key.size(); ++i)
    key[i] = std::llround(q[i] * 1e6);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    const auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const double v = kind_ == LambdaKind::rate_distortion
                       ? rate_at_distortion(q, *d_matrix_, param_).R
                       : distortion_at_rate(q, *d_matrix_, param_).D;
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->values.emplace(std::move(key), v);
  return v;
}

namespace {

// Objective and helpers for generic_exponent, working on the support of p.
struct SupportView {
  std::vector<std::size_t> index;  // support positions in the full alphabet
  std::vector<double> p;           // p restricted to its support
  std::size_t full_size = 0;
};

SupportView support_view(const FiniteDistribution& p) {
  SupportView v;
  v.full_size = p.alphabet_size();
  for (std::size_t i = 0; i < p.alphabet_size(); ++i) {
    if (p[i] > 0.0) {
      v.index.push_back(i);
      v.p.push_back(p[i]);
    }
  }
  return v;
}

FiniteDistribution embed(const SupportView& view, std::span<const double> q) {
  std::vector<double> full(view.full_size, 0.0);
  for (std::size_t i = 0; i < view.index.size(); ++i) full[view.index[i]] = q[i];
  return FiniteDistribution(std::move(full));
}

double lambda_on_support(const LambdaFunctional& lam, const SupportView& view,
                         std::span<const double> q) {
  return lam(embed(view, q));
}

}  // namespace

ExponentResult generic_exponent(const FiniteDistribution& p, const LambdaFunctional& lam,
                                double alpha, double tol) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("generic_exponent: alpha must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("generic_exponent: tol must be > 0");

  const SupportView view = support_view(p);
  const std::size_t m = view.p.size();

  std::vector<double> q(view.p);
  auto objective = [&](std::span<const double> qq) {
    double kl = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (qq[i] > 0.0) kl += qq[i] * std::log(qq[i] / view.p[i]);
    return alpha * lambda_on_support(lam, view, qq) - std::max(kl, 0.0);
  };

  double f = objective(q);
  std::size_t iterations = 0;
  bool converged = alpha == 0.0 || m == 1;  // Q = P is already optimal then
  double eta = 1.0;
  const std::size_t max_iter = 5000;
  const double fd_step = 1e-6;

  std::vector<double> grad(m), trial(m), logq(m);
  if (!converged) {
    for (std::size_t it = 0; it < max_iter; ++it) {
      // Gradient of alpha*lambda by central differences with renormalized
      // perturbations; the KL term's gradient is exact.
      for (std::size_t i = 0; i < m; ++i) {
        const double up = fd_step;
        const double down = std::min(fd_step, 0.5 * q[i]);
        for (std::size_t j = 0; j < m; ++j) trial[j] = q[j];
        trial[i] = q[i] + up;
        double scale = 1.0 + up;
        for (std::size_t j = 0; j < m; ++j) trial[j] /= scale;
        const double lam_up = lambda_on_support(lam, view, trial);
        for (std::size_t j = 0; j < m; ++j) trial[j] = q[j];
        trial[i] = q[i] - down;
        scale = 1.0 - down;
        for (std::size_t j = 0; j < m; ++j) trial[j] /= scale;
        const double lam_down = lambda_on_support(lam, view, trial);
        grad[i] = alpha * (lam_up - lam_down) / (up + down) -
                  (std::log(q[i] / view.p[i]) + 1.0);
      }

      // Entropic mirror step with backtracking on the step size.
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt) {
        for (std::size_t i = 0; i < m; ++i) logq[i] = std::log(q[i]) + eta * grad[i];
        const double lz = log_sum_exp(logq);
        for (std::size_t i = 0; i < m; ++i) trial[i] = std::exp(logq[i] - lz);
        const double f_trial = objective(trial);
        if (f_trial > f) {
          const double gain = f_trial - f;
          q.assign(trial.begin(), trial.end());
          f = f_trial;
          eta = std::min(eta * 1.2, 10.0);
          accepted = true;
          iterations = it + 1;
          if (gain < tol) converged = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) {
        // No uphill step at any tried size: at a maximum to finite-difference
        // accuracy.
        converged = true;
        iterations = it + 1;
      }
      if (converged) break;
    }
  }

  ExponentResult out{f, embed(view, q), iterations, converged, std::nullopt};

  if (view.full_size <= 3) {
    // Independent check: dense simplex grid in the full alphabet.
    const int N = 600;
    double best = kNegInf;
    for_each_composition(static_cast<int>(view.full_size), N,
                         [&](std::span<const int> k) {
                           double kl = 0.0;
                           bool ok = true;
                           std::vector<double> qq(view.full_size);
                           for (std::size_t i = 0; i < qq.size(); ++i) {
                             qq[i] = static_cast<double>(k[i]) / N;
                             if (qq[i] > 0.0 && p[i] == 0.0) ok = false;
                           }
                           if (!ok) return;
                           for (std::size_t i = 0; i < qq.size(); ++i)
                             if (qq[i] > 0.0) kl += qq[i] * std::log(qq[i] / p[i]);
                           const double v =
                               alpha * lam(FiniteDistribution(qq)) - std::max(kl, 0.0);
                           best = std::max(best, v);
                         });
    out.oracle_gap = out.value - best;
  }
  return out;
}

double lossless_exponent(const FiniteDistribution& p, double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("lossless_exponent: alpha must be >= 0");
  if (alpha == 0.0) return 0.0;
  return alpha * renyi_entropy(p, 1.0 / (1.0 + alpha));
}

FiniteDistribution power_tilted(const FiniteDistribution& p, double theta) {
  if (!(theta >= 0.0)) throw std::invalid_argument("power_tilted: theta must be >= 0");
  const double u = 1.0 / (1.0 + theta);
  std::vector<double> t(p.alphabet_size(), kNegInf);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (p[i] > 0.0) t[i] = u * std::log(p[i]);
  const double lz = log_sum_exp(t);
  std::vector<double> q(t.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    if (std::isfinite(t[i])) q[i] = std::exp(t[i] - lz);
  return FiniteDistribution(std::move(q));
}

GuessingExponentBreakdown guessing_exponent_closed(const FiniteDistribution& p,
                                                   double R, double alpha) {
  if (!(R >= 0.0)) throw std::invalid_argument("guessing exponent: R must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("guessing exponent: alpha must be > 0");
  for (double pi : p.probs())
    if (pi == 0.0)
      throw std::invalid_argument("guessing exponent: p must have full support");

  GuessingExponentBreakdown out;
  out.entropy_p = entropy(p);
  out.entropy_p_alpha = entropy(power_tilted(p, alpha));

  if (R < out.entropy_p) {
    out.phase = GuessingPhase::low_R;
    out.value = alpha * R;
    return out;
  }
  if (R >= out.entropy_p_alpha) {
    out.phase = GuessingPhase::high_R;
    out.value = lossless_exponent(p, alpha);
    return out;
  }
  // Middle phase: theta_R solves H(P_theta) = R; H(P_theta) increases from
  // H(P) at theta = 0 toward ln m.
  out.phase = GuessingPhase::middle;
  const double hi = std::max(alpha, 50.0);
  const double theta_r = bisect(
      [&](double th) { return entropy(power_tilted(p, th)) - R; }, 0.0, hi, 1e-10);
  out.theta_r = theta_r;
  if (theta_r < 1e-12) {
    out.value = alpha * R;  // boundary with the low phase
  } else {
    out.value = (alpha - theta_r) * R +
                theta_r * renyi_entropy(p, 1.0 / (1.0 + theta_r));
  }
  return out;
}

double binary_rate_distortion(double q, double D) {
  if (!(q >= 0.0) || !(q <= 1.0))
    throw std::invalid_argument("binary_rate_distortion: q outside [0, 1]");
  const double qr = std::min(q, 1.0 - q);  // symmetry reduction
  if (!(D >= 0.0) || D > qr + 1e-15)
    throw std::invalid_argument("binary_rate_distortion: D outside [0, min(q,1-q)]");
  const double r = binary_entropy(qr) - binary_entropy(std::min(D, qr));
  return r < 0.0 ? 0.0 : r;
}

double bss_distortion_rate(double R) {
  const double ln2 = std::log(2.0);
  if (!(R >= 0.0) || R > ln2 + 1e-15)
    throw std::invalid_argument("bss_distortion_rate: R outside [0, ln 2]");
  return binary_entropy_inverse(ln2 - std::min(R, ln2));
}

RemExponentResult rem_lossy_exponent(double R, double alpha) {
  const double ln2 = std::log(2.0);
  if (!(R > 0.0) || !(R < ln2))
    throw std::invalid_argument("rem_lossy_exponent: R must lie strictly in (0, ln 2)");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("rem_lossy_exponent: alpha must be >= 0");
  const double delta = bss_distortion_rate(R);
  RemExponentResult out;
  out.critical_alpha = std::log((1.0 - delta) / delta);
  if (alpha <= out.critical_alpha) {
    out.value = -alpha * delta;
  } else {
    // -alpha + ln(1 + e^alpha) = ln(1 + e^-alpha), overflow-safe.
    out.value = std::log1p(std::exp(-alpha)) + R - ln2;
  }
  return out;
}

double two_part_code_exact_moment(const FiniteDistribution& p, double alpha, int n) {
  if (p.alphabet_size() > 4)
    throw std::invalid_argument("two_part_code_exact_moment: alphabet larger than 4");
  if (n < 1 || n > 60)
    throw std::invalid_argument("two_part_code_exact_moment: n outside [1, 60]");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("two_part_code_exact_moment: alpha must be >= 0");

  std::vector<double> terms;
  for_each_composition(static_cast<int>(p.alphabet_size()), n,
                       [&](std::span<const int> k) {
                         double logp = 0.0;
                         double emp_h = 0.0;
                         for (std::size_t i = 0; i < k.size(); ++i) {
                           if (k[i] == 0) continue;
                           if (p[i] == 0.0) return;  // impossible type under p
                           const double frac = static_cast<double>(k[i]) / n;
                           logp += k[i] * std::log(p[i]);
                           emp_h -= frac * std::log(frac);
                         }
                         terms.push_back(log_multinomial(n, k) + logp +
                                         alpha * n * emp_h);
                       });
  return log_sum_exp(terms) / n;
}

}  // namespace expmoment
