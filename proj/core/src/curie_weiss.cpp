#include "expmoment/curie_weiss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "expmoment/numeric.hpp"
#include "expmoment/parallel.hpp"
#include "expmoment/probability.hpp"

namespace expmoment {

namespace {

void validate(const CWParams& params) {
  if (!(std::abs(params.mu) < 1.0))
    throw std::invalid_argument("curie-weiss: mu must lie in (-1, 1)");
  if (!(params.alpha >= 0.0))
    throw std::invalid_argument("curie-weiss: alpha must be >= 0");
}

constexpr int kScanPoints = 10000;
constexpr double kRootMergeTol = 1e-9;

}  // namespace

double CWParams::field() const { return std::atanh(mu) - 2.0 * alpha * mu; }

double CWParams::coupling() const { return 2.0 * alpha; }

std::string to_string(CWPhase phase) {
  switch (phase) {
    case CWPhase::paramagnetic: return "paramagnetic";
    case CWPhase::pos_mu_pos_m: return "pos_mu_pos_m";
    case CWPhase::neg_mu_pos_m: return "neg_mu_pos_m";
    case CWPhase::neg_mu_neg_m: return "neg_mu_neg_m";
    case CWPhase::pos_mu_neg_m: return "pos_mu_neg_m";
    case CWPhase::boundary: return "boundary";
  }
  return "unknown";
}

double critical_alpha(double mu) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("critical_alpha: mu must lie in (-1, 1)");
  if (mu == 0.0) return 0.5;  // limit of artanh(mu)/(2 mu)
  return std::atanh(mu) / (2.0 * mu);
}

std::vector<double> magnetization_fixed_points(const CWParams& params) {
  validate(params);
  const double B = params.field();
  const double J = params.coupling();
  auto g = [&](double m) { return m - std::tanh(J * m + B); };

  std::vector<double> roots;
  auto add_root = [&](double r) {
    for (double existing : roots)
      if (std::abs(existing - r) <= kRootMergeTol) return;
    roots.push_back(r);
  };

  double prev_m = -1.0;
  double prev_g = g(prev_m);
  if (prev_g == 0.0) add_root(prev_m);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double m = -1.0 + 2.0 * i / kScanPoints;
    const double gm = g(m);
    if (gm == 0.0) {
      add_root(m);
    } else if ((prev_g < 0.0 && gm > 0.0) || (prev_g > 0.0 && gm < 0.0)) {
      add_root(bisect(g, prev_m, m, 1e-13));
    }
    prev_m = m;
    prev_g = gm;
  }

  // Tangency probe: double roots touch where tanh'(Jm + B) J = 1, i.e. at
  // m_c = (+-acosh(sqrt(J)) - B) / J. The grid scan misses those because g
  // does not change sign there.
  if (J > 1.0) {
    const double u = std::acosh(std::sqrt(J));
    for (const double uc : {u, -u}) {
      const double mc = (uc - B) / J;
      if (mc > -1.0 && mc < 1.0 && std::abs(g(mc)) <= 1e-10) add_root(mc);
    }
  }

  std::sort(roots.begin(), roots.end());
  return roots;
}

double cw_objective(const CWParams& params, double m) {
  validate(params);
  if (!(m >= -1.0) || !(m <= 1.0))
    throw std::invalid_argument("cw_objective: m outside [-1, 1]");
  const double d = m - params.mu;
  return params.alpha * d * d -
         binary_kl(0.5 * (1.0 + m), 0.5 * (1.0 + params.mu));
}

CWExponentResult cw_exponent(const CWParams& params) {
  std::vector<double> candidates = magnetization_fixed_points(params);
  candidates.push_back(-1.0);
  candidates.push_back(1.0);

  double best = -std::numeric_limits<double>::infinity();
  for (double m : candidates) best = std::max(best, cw_objective(params, m));

  // Near-optimal candidates; a pair of opposite signs is the symmetric tie
  // of the zero-field case and is reported by its nonnegative member.
  std::vector<double> near;
  for (double m : candidates)
    if (cw_objective(params, m) >= best - 1e-10) near.push_back(m);

  CWExponentResult out;
  out.exponent = best;
  const double max_m = *std::max_element(near.begin(), near.end());
  const double min_m = *std::min_element(near.begin(), near.end());
  out.tie = min_m < -kRootMergeTol && max_m > kRootMergeTol &&
            std::abs(max_m + min_m) <= 1e-6;
  if (out.tie) {
    out.dominant_m = max_m;
  } else {
    out.dominant_m = near.front();
    double dom_v = cw_objective(params, out.dominant_m);
    for (double m : near) {
      const double v = cw_objective(params, m);
      if (v > dom_v || (v == dom_v && m > out.dominant_m)) {
        out.dominant_m = m;
        dom_v = v;
      }
    }
  }
  return out;
}

double cw_exact_finite_n(const CWParams& params, int n) {
  validate(params);
  if (n < 1) throw std::invalid_argument("cw_exact_finite_n: n must be >= 1");
  const double lp = std::log1p(params.mu) - std::log(2.0);   // ln((1+mu)/2)
  const double lq = std::log1p(-params.mu) - std::log(2.0);  // ln((1-mu)/2)
  std::vector<double> terms(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double mk = (2.0 * k - n) / n;
    const double d = mk - params.mu;
    terms[static_cast<std::size_t>(k)] =
        log_binomial(n, k) + k * lp + (n - k) * lq + params.alpha * n * d * d;
  }
  return log_sum_exp(terms) / n;
}

PhasePoint classify_phase(const CWParams& params) {
  validate(params);
  PhasePoint out;
  out.params = params;
  out.fixed_points = magnetization_fixed_points(params);
  const CWExponentResult ex = cw_exponent(params);
  out.dominant_m = ex.dominant_m;
  out.exponent = ex.exponent;
  out.dominant_tie = ex.tie;

  constexpr double kBoundaryTol = 1e-9;
  if (std::abs(params.alpha - 0.5) <= kBoundaryTol) {
    out.phase = CWPhase::boundary;
  } else if (params.alpha < 0.5) {
    out.phase = CWPhase::paramagnetic;
  } else if (std::abs(params.mu) <= kBoundaryTol) {
    out.phase = CWPhase::boundary;  // symmetric line above the critical tilt
  } else if (std::abs(params.alpha - critical_alpha(params.mu)) <= kBoundaryTol) {
    out.phase = CWPhase::boundary;
  } else if (params.mu > 0.0) {
    out.phase = params.alpha < critical_alpha(params.mu) ? CWPhase::pos_mu_pos_m
                                                         : CWPhase::pos_mu_neg_m;
  } else {
    out.phase = params.alpha < critical_alpha(params.mu) ? CWPhase::neg_mu_neg_m
                                                         : CWPhase::neg_mu_pos_m;
  }
  return out;
}

std::vector<PhasePoint> phase_diagram_grid(double mu_lo, double mu_hi, int mu_steps,
                                           double alpha_lo, double alpha_hi,
                                           int alpha_steps) {
  if (mu_steps < 2 || alpha_steps < 2)
    throw std::invalid_argument("phase_diagram_grid: need at least 2 steps per axis");
  if (!(mu_lo <= mu_hi) || !(alpha_lo <= alpha_hi))
    throw std::invalid_argument("phase_diagram_grid: inverted range");
  if (!(std::abs(mu_lo) < 1.0) || !(std::abs(mu_hi) < 1.0) || !(alpha_lo >= 0.0))
    throw std::invalid_argument("phase_diagram_grid: range outside the domain");

  const std::size_t total =
      static_cast<std::size_t>(mu_steps) * static_cast<std::size_t>(alpha_steps);
  std::vector<PhasePoint> points(total);
  parallel_chunks(total, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const int i = static_cast<int>(idx) / alpha_steps;
      const int j = static_cast<int>(idx) % alpha_steps;
      CWParams params;
      params.mu = mu_lo + (mu_hi - mu_lo) * i / (mu_steps - 1);
      params.alpha = alpha_lo + (alpha_hi - alpha_lo) * j / (alpha_steps - 1);
      points[idx] = classify_phase(params);
    }
  });
  return points;
}

}  // namespace expmoment
