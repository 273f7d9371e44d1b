#pragma once

#include <string>
#include <vector>

namespace expmoment {

// Parameters of the tilted binary-source model: mu is the source bias
// (expected magnetization), alpha the tilt on the squared estimation error.
// The induced mean-field model has external field B = artanh(mu) - 2 alpha mu
// and pairwise coupling J = 2 alpha.
struct CWParams {
  double mu = 0.0;
  double alpha = 0.0;

  double field() const;     // B
  double coupling() const;  // J
};

enum class CWPhase {
  paramagnetic,
  pos_mu_pos_m,
  neg_mu_pos_m,
  neg_mu_neg_m,
  pos_mu_neg_m,
  boundary,
};

std::string to_string(CWPhase phase);

// Critical tilt alpha_0(mu) = artanh(mu) / (2 mu), above which the dominant
// magnetization flips sign against mu; continuous limit 1/2 at mu = 0.
double critical_alpha(double mu);

// All solutions of m = tanh(J m + B) in [-1, 1]: sign-change scan on a
// 10^4-point grid refined by bisection, plus a tangency probe at the points
// where the slope of tanh(J m + B) equals 1 (J > 1 only). 1 root for J <= 1;
// 1, 2 (tangency), or 3 otherwise.
std::vector<double> magnetization_fixed_points(const CWParams& params);

// Large-deviations objective whose maximum over m gives the exponent:
// alpha (m - mu)^2 - d2((1+m)/2 || (1+mu)/2). Equals the partition-function
// form with field B and coupling J after substituting both definitions;
// its stationary points are exactly the tanh fixed points.
double cw_objective(const CWParams& params, double m);

struct CWExponentResult {
  double exponent = 0.0;
  double dominant_m = 0.0;
  bool tie = false;  // symmetric pair of maximizers; the nonnegative one is reported
};

// (1/n) ln E exp(alpha n (mu_hat - mu)^2) in the n -> inf limit: the maximum
// of cw_objective over the fixed points and the endpoints +-1.
CWExponentResult cw_exponent(const CWParams& params);

// Exact finite-n value of the same normalized log-moment, by a log-domain
// binomial sum over the magnetization levels m_k = (2k - n)/n.
double cw_exact_finite_n(const CWParams& params, int n);

struct PhasePoint {
  CWParams params;
  std::vector<double> fixed_points;
  double dominant_m = 0.0;
  double exponent = 0.0;
  bool dominant_tie = false;
  CWPhase phase = CWPhase::paramagnetic;
};

// Phase per the (mu, alpha) diagram: paramagnetic below alpha = 1/2; above,
// four regions split by the sign of mu and by alpha vs critical_alpha(mu)
// (equivalently the sign of the dominant m); boundary when within 1e-9 of
// any separating line.
PhasePoint classify_phase(const CWParams& params);

// Inclusive linspace grid over [mu_lo, mu_hi] x [alpha_lo, alpha_hi],
// classify_phase at every point, row-major with mu varying slowest.
std::vector<PhasePoint> phase_diagram_grid(double mu_lo, double mu_hi, int mu_steps,
                                           double alpha_lo, double alpha_hi,
                                           int alpha_steps);

}  // namespace expmoment
