#include "expmoment/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expmoment {

double log_sum_exp(std::span<const double> terms) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double m = neg_inf;
  for (double t : terms) m = std::max(m, t);
  if (m == neg_inf) return neg_inf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect: inverted interval");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change on interval");
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_max: inverted interval");
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

void visit_compositions(std::vector<int>& buf, int pos, int remaining,
                        const std::function<void(std::span<const int>)>& fn) {
  const int parts = static_cast<int>(buf.size());
  if (pos == parts - 1) {
    buf[pos] = remaining;
    fn(std::span<const int>(buf.data(), buf.size()));
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    buf[pos] = k;
    visit_compositions(buf, pos + 1, remaining - k, fn);
  }
}

}  // namespace

void for_each_composition(int parts, int total,
                          const std::function<void(std::span<const int>)>& fn) {
  if (parts < 1 || total < 0)
    throw std::invalid_argument("for_each_composition: bad arguments");
  std::vector<int> buf(static_cast<std::size_t>(parts), 0);
  visit_compositions(buf, 0, total, fn);
}

void for_each_composition_with_first(
    int parts, int total, int first,
    const std::function<void(std::span<const int>)>& fn) {
  if (parts < 1 || total < 0 || first < 0 || first > total)
    throw std::invalid_argument("for_each_composition_with_first: bad arguments");
  std::vector<int> buf(static_cast<std::size_t>(parts), 0);
  buf[0] = first;
  if (parts == 1) {
    if (first == total) fn(std::span<const int>(buf.data(), buf.size()));
    return;
  }
  visit_compositions(buf, 1, total - first, fn);
}

std::uint64_t composition_count(int parts, int total) {
  if (parts < 1 || total < 0)
    throw std::invalid_argument("composition_count: bad arguments");
  // C(total + parts - 1, parts - 1), computed in integers.
  std::uint64_t result = 1;
  for (int i = 1; i < parts; ++i) {
    result = result * static_cast<std::uint64_t>(total + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_multinomial(int n, std::span<const int> counts) {
  int sum = 0;
  double acc = std::lgamma(n + 1.0);
  for (int k : counts) {
    if (k < 0) throw std::invalid_argument("log_multinomial: negative count");
    sum += k;
    acc -= std::lgamma(k + 1.0);
  }
  if (sum != n) throw std::invalid_argument("log_multinomial: counts do not sum to n");
  return acc;
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  GaussHermite rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses follow the standard asymptotic spacing of Hermite roots.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    const double w = 2.0 / (pp * pp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  // Nodes come out descending; flip to ascending for predictable iteration.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

}  // namespace expmoment
