#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "expmoment/cost_table.hpp"
#include "expmoment/probability.hpp"

namespace expmoment {

// R(beta)/D(beta) point computed by alternating minimization of the
// rate-distortion Lagrangian. slope is the temperature-like parameter: the
// conditional law is w(xh|x) proportional to r(xh) exp(-d(x,xh)/slope), so
// slope -> 0+ drives D -> 0.
struct RDPoint {
  double R = 0.0;
  double D = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

RDPoint blahut_arimoto_rd(const FiniteDistribution& q, const FiniteCostTable& d_matrix,
                          double slope, std::size_t max_iter = 20000,
                          double tol = 1e-13);

// R_Q(D) and D_Q(R) by outer bisection on the slope. Targets outside the
// achievable range clamp to the endpoint values (R = 0 and D = 0 branches).
RDPoint rate_at_distortion(const FiniteDistribution& q, const FiniteCostTable& d_matrix,
                           double D_target);
RDPoint distortion_at_rate(const FiniteDistribution& q, const FiniteCostTable& d_matrix,
                           double R_target);

// The per-distribution rate lambda(Q) appearing in the universal exponent
// max_Q [alpha * lambda(Q) - D(Q || P)].
enum class LambdaKind { shannon_entropy, guessing_min, rate_distortion, distortion_rate };

class LambdaFunctional {
 public:
  static LambdaFunctional shannon();
  static LambdaFunctional guessing(double R);
  static LambdaFunctional rate_distortion(FiniteCostTable d_matrix, double D);
  static LambdaFunctional distortion_rate(FiniteCostTable d_matrix, double R);

  double operator()(const FiniteDistribution& q) const;
  LambdaKind kind() const { return kind_; }

 private:
  LambdaFunctional(LambdaKind kind, double param,
                   std::optional<FiniteCostTable> d_matrix);

  LambdaKind kind_;
  double param_ = 0.0;
  std::optional<FiniteCostTable> d_matrix_;
  // Rate-distortion evaluations are costly; cache keyed on Q quantized to a
  // 1e-6 grid. Guarded for concurrent callers.
  struct Cache {
    std::mutex mu;
    std::map<std::vector<long long>, double> values;
  };
  std::shared_ptr<Cache> cache_;
};

struct ExponentResult {
  double value = 0.0;
  FiniteDistribution argmax_q;
  std::size_t solver_iterations = 0;
  bool converged = false;
  // Populated when the simplex grid oracle ran (alphabet <= 3):
  // value - grid maximum. Slightly negative values up to the grid
  // resolution bound are expected.
  std::optional<double> oracle_gap;
};

// max_Q [alpha * lambda(Q) - D(Q || P)] by entropic mirror ascent from
// Q = P, with finite-difference lambda gradients and backtracking step
// control.
ExponentResult generic_exponent(const FiniteDistribution& p, const LambdaFunctional& lam,
                                double alpha, double tol = 1e-10);

// alpha * H_u(P) at u = 1/(1+alpha): the closed form of the exponent for
// lambda = Shannon entropy. alpha = 0 returns 0.
double lossless_exponent(const FiniteDistribution& p, double alpha);

// P_theta(x) proportional to p(x)^(1/(1+theta)); theta >= 0.
FiniteDistribution power_tilted(const FiniteDistribution& p, double theta);

enum class GuessingPhase { low_R, middle, high_R };

struct GuessingExponentBreakdown {
  double value = 0.0;
  GuessingPhase phase = GuessingPhase::low_R;
  std::optional<double> theta_r;  // present only in the middle phase
  double entropy_p = 0.0;         // H(P), lower phase boundary
  double entropy_p_alpha = 0.0;   // H(P_alpha), upper phase boundary
};

// Three-phase closed form of the guessing exponent as a function of the key
// rate R: alpha*R below H(P); (alpha - theta_R) R + theta_R H_{1/(1+theta_R)}(P)
// between the boundaries, where theta_R solves H(P_theta) = R; and the
// lossless exponent above H(P_alpha). Requires full support so P_theta is
// defined for all theta.
GuessingExponentBreakdown guessing_exponent_closed(const FiniteDistribution& p,
                                                   double R, double alpha);

// Binary-source closed forms with Hamming distortion, rates in nats:
// R(D) = h2(q) - h2(D) clipped at 0, and the distortion-rate function of the
// symmetric binary source, delta(R) = h2^{-1}(ln 2 - R).
double binary_rate_distortion(double q, double D);
double bss_distortion_rate(double R);

struct RemExponentResult {
  double value = 0.0;
  double critical_alpha = 0.0;
};

// Lossy-compression exponent of the random-code ensemble at rate R (nats),
// with a second-order phase transition at critical_alpha = ln((1-d)/d),
// d = bss_distortion_rate(R). Below: -alpha*d. Above:
// -alpha + ln(1+e^alpha) + R - ln 2.
RemExponentResult rem_lossy_exponent(double R, double alpha);

// (1/n) ln E exp(alpha * n * empirical_entropy) by exact enumeration of type
// classes. Alphabet <= 4 and n <= 60 keep the enumeration small. Approaches
// lossless_exponent(p, alpha) from below as n grows.
double two_part_code_exact_moment(const FiniteDistribution& p, double alpha, int n);

}  // namespace expmoment
