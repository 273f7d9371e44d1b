#include "expmoment/probability.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "expmoment/io.hpp"
#include "expmoment/numeric.hpp"

namespace expmoment {

FiniteDistribution::FiniteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty())
    throw std::invalid_argument("distribution: empty probability vector");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("distribution: entries must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("distribution: entries sum to " +
                                format_double(sum) + ", not 1");
  for (double& p : probs_) p /= sum;
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform: empty alphabet");
  return FiniteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteDistribution FiniteDistribution::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw std::invalid_argument("point_mass: index out of range");
  std::vector<double> v(n, 0.0);
  v[at] = 1.0;
  return FiniteDistribution(std::move(v));
}

double entropy(const FiniteDistribution& p) {
  double h = 0.0;
  for (double pi : p.probs())
    if (pi > 0.0) h -= pi * std::log(pi);
  return h;
}

double kl_divergence(const FiniteDistribution& q, const FiniteDistribution& p) {
  if (q.alphabet_size() != p.alphabet_size())
    throw std::invalid_argument("kl_divergence: alphabet size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < q.alphabet_size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += q[i] * std::log(q[i] / p[i]);
  }
  // Rounding can push a tiny negative through; KL is nonnegative.
  return d < 0.0 ? 0.0 : d;
}

double renyi_entropy(const FiniteDistribution& p, double u) {
  if (!(u > 0.0) || u == 1.0)
    throw std::invalid_argument("renyi_entropy: order must be positive and != 1");
  std::vector<double> terms;
  terms.reserve(p.alphabet_size());
  for (double pi : p.probs())
    if (pi > 0.0) terms.push_back(u * std::log(pi));
  return log_sum_exp(terms) / (1.0 - u);
}

double binary_entropy(double d) {
  if (!(d >= 0.0) || !(d <= 1.0))
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  double h = 0.0;
  if (d > 0.0) h -= d * std::log(d);
  if (d < 1.0) h -= (1.0 - d) * std::log(1.0 - d);
  return h;
}

double binary_entropy_inverse(double h) {
  const double ln2 = std::log(2.0);
  if (!(h >= 0.0) || h > ln2 + 1e-15)
    throw std::invalid_argument("binary_entropy_inverse: argument outside [0, ln 2]");
  if (h <= 0.0) return 0.0;
  if (h >= ln2) return 0.5;
  return bisect([h](double d) { return binary_entropy(d) - h; }, 0.0, 0.5, 1e-14);
}

double binary_kl(double a, double b) {
  if (!(a >= 0.0) || !(a <= 1.0) || !(b >= 0.0) || !(b <= 1.0))
    throw std::invalid_argument("binary_kl: arguments outside [0, 1]");
  double d = 0.0;
  if (a > 0.0) {
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    d += a * std::log(a / b);
  }
  if (a < 1.0) {
    if (b == 1.0) return std::numeric_limits<double>::infinity();
    d += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  }
  return d < 0.0 ? 0.0 : d;
}

TiltResult tilted_measure(const FiniteDistribution& p,
                          std::span<const double> cost, double alpha) {
  if (cost.size() != p.alphabet_size())
    throw std::invalid_argument("tilted_measure: cost length mismatch");
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> t(p.alphabet_size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(cost[i]))
      throw std::invalid_argument("tilted_measure: cost entries must be finite");
    t[i] = p[i] > 0.0 ? std::log(p[i]) + alpha * cost[i] : neg_inf;
  }
  const double log_z = log_sum_exp(t);
  std::vector<double> q(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    q[i] = t[i] == neg_inf ? 0.0 : std::exp(t[i] - log_z);
  return TiltResult{FiniteDistribution(std::move(q)), log_z};
}

FiniteDistribution parse_distribution(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced)
    if (c == ',' || c == '\t' || c == '\r' || c == '\n') c = ' ';
  std::istringstream in(spaced);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(parse_double(tok));
  return FiniteDistribution(std::move(v));
}

FiniteDistribution load_distribution(const std::string& path_or_dash) {
  return parse_distribution(read_text_input(path_or_dash));
}

std::string format_distribution(const FiniteDistribution& p) {
  std::string out;
  for (std::size_t i = 0; i < p.alphabet_size(); ++i) {
    if (i) out += ",";
    out += format_double(p[i]);
  }
  return out;
}

}  // namespace expmoment
