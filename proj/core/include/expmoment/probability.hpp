#pragma once

#include <span>
#include <string>
#include <vector>

namespace expmoment {

// Probability vector over a finite alphabet. Construction validates
// (nonnegative, finite, sums to 1 within kSumTolerance) and then
// renormalizes exactly so downstream code can rely on sum == 1 up to
// rounding of the division.
class FiniteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit FiniteDistribution(std::vector<double> probs);
  static FiniteDistribution uniform(std::size_t n);
  static FiniteDistribution point_mass(std::size_t n, std::size_t at);

  std::size_t alphabet_size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const FiniteDistribution&) const = default;

 private:
  std::vector<double> probs_;
};

struct TiltResult {
  FiniteDistribution q;
  double log_z;  // log of the normalizer E_P exp(alpha * cost)
};

// Shannon entropy in nats; 0 log 0 = 0.
double entropy(const FiniteDistribution& p);

// D(q || p) in nats; +inf when q puts mass outside the support of p.
double kl_divergence(const FiniteDistribution& q, const FiniteDistribution& p);

// Order-u Renyi entropy, u > 0 and u != 1 (the Shannon limit is entropy()).
double renyi_entropy(const FiniteDistribution& p, double u);

// Binary Shannon entropy h(d) in nats, d in [0, 1].
double binary_entropy(double d);

// Inverse of binary_entropy restricted to [0, 1/2]; input in [0, ln 2].
double binary_entropy_inverse(double h);

// KL divergence between Bernoulli(a) and Bernoulli(b) in nats.
double binary_kl(double a, double b);

// Exponential tilt: q_i proportional to p_i * exp(alpha * cost[i]), computed
// in the log domain. Any real alpha is accepted; cost entries must be finite.
TiltResult tilted_measure(const FiniteDistribution& p,
                          std::span<const double> cost, double alpha);

// Text form: numbers separated by commas and/or whitespace.
FiniteDistribution parse_distribution(const std::string& text);
FiniteDistribution load_distribution(const std::string& path_or_dash);
std::string format_distribution(const FiniteDistribution& p);

}  // namespace expmoment
