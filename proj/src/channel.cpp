#include "poissoncap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "poissoncap/special_fn.hpp"

namespace poissoncap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// P[Y > k | mean x], summed upward from k+1. Forward summation of the tail
// keeps every term positive, so no cancellation.
double tail_above(double x, int k) {
  if (x == 0.0) return 0.0;
  double term = std::exp(log_pmf(x, k + 1));
  double sum = 0.0;
  for (int y = k + 1;; ++y) {
    sum += term;
    term *= x / static_cast<double>(y + 1);
    if (term < sum * 1e-18 + 1e-320) break;
  }
  return sum;
}

}  // namespace

double log_pmf(double x, int y) {
  if (!(x >= 0.0)) throw std::domain_error("log_pmf: x must be >= 0");
  if (y < 0) throw std::domain_error("log_pmf: y must be >= 0");
  if (x == 0.0) return y == 0 ? 0.0 : kNegInf;
  return y * std::log(x) - x - log_factorial(y);
}

double pmf(double x, int y) {
  const double lp = log_pmf(x, y);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

Truncation truncation_index(double x_ref, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("truncation_index: epsilon must be in (0,1)");
  if (!(x_ref >= 0.0)) throw std::domain_error("truncation_index: x_ref < 0");
  if (x_ref > 700.0)
    throw std::invalid_argument("truncation_index: x_ref beyond double exp range");
  if (x_ref == 0.0) return {0, epsilon};

  // First pass: cumulative sum to locate a candidate index, then settle the
  // exact minimal index with forward tail sums (no cancellation).
  double term = std::exp(-x_ref);
  double sum = term;
  int k = 0;
  while (1.0 - sum > 0.5 * epsilon && k < 100000) {
    ++k;
    term *= x_ref / static_cast<double>(k);
    sum += term;
    if (k > x_ref && term < 1e-3 * epsilon) break;
  }
  int k_max = std::max(0, k - 3);
  while (tail_above(x_ref, k_max) > epsilon) ++k_max;
  while (k_max > 0 && tail_above(x_ref, k_max - 1) <= epsilon) --k_max;
  return {k_max, epsilon};
}

TailBoundCheck tail_bound_check(double x0, double amplitude) {
  constexpr double kE = 2.718281828459045;
  if (!(x0 >= 1.0)) throw std::domain_error("tail_bound_check: x0 must be >= 1");
  if (!(amplitude >= kE)) throw std::domain_error("tail_bound_check: A must be >= e");
  const double log_a = std::log(amplitude);
  const double threshold = kE * x0 * log_a;
  const int k0 = static_cast<int>(std::ceil(threshold));
  TailBoundCheck out;
  out.lhs = tail_above(x0, k0 - 1);  // P[Y >= k0] = P[Y > k0-1]
  out.rhs = std::exp(-kE * log_a * std::log(log_a) - 1.0);
  out.holds = out.lhs <= out.rhs && out.rhs <= 1.0 / amplitude;
  return out;
}

double poisson_transform(std::span<const double> xi, double x) {
  if (!(x >= 0.0)) throw std::domain_error("poisson_transform: x < 0");
  if (xi.empty()) return 0.0;
  if (x == 0.0) return xi[0];
  double w = std::exp(-x);
  double sum = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    sum += xi[k] * w;
    w *= x / static_cast<double>(k + 1);
  }
  return sum;
}

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

}  // namespace poissoncap
