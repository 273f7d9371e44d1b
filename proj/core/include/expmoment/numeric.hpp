#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace expmoment {

// log(sum_i exp(terms[i])). Empty input and all-(-inf) input both yield -inf.
// Shifted by the max term so no finite input can overflow.
double log_sum_exp(std::span<const double> terms);

// Root of a continuous f on [lo, hi] with f(lo) and f(hi) of opposite sign
// (either endpoint may be an exact zero). Bisects until the bracket width
// drops below xtol and returns the midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

// Argmax of a unimodal f on [lo, hi] by golden-section search.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol);

// Visits every tuple (k_0, ..., k_{parts-1}) of nonnegative integers summing
// to total, in lexicographic order. The span passed to fn is reused between
// calls; copy it if it must outlive the visit.
void for_each_composition(int parts, int total,
                          const std::function<void(std::span<const int>)>& fn);

// Same, restricted to tuples with k_0 == first.
void for_each_composition_with_first(
    int parts, int total, int first,
    const std::function<void(std::span<const int>)>& fn);

std::uint64_t composition_count(int parts, int total);

double log_binomial(int n, int k);
double log_multinomial(int n, std::span<const int> counts);

// Nodes and weights for integrating f(x) exp(-x^2) dx over the real line.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Physicists' Gauss-Hermite rule; nodes found by Newton iteration on the
// Hermite recurrence. Exact for polynomials up to degree 2n-1.
GaussHermite gauss_hermite(int n);

}  // namespace expmoment
