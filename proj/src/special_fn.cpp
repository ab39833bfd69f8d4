#include "poissoncap/special_fn.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace poissoncap {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// ln(k!) for k = 0..20, from exact integer factorials.
constexpr std::array<double, 21> kLogFactorialTable = {
    0,
    0,
    0.69314718055994529,
    1.791759469228055,
    3.1780538303479458,
    4.7874917427820458,
    6.5792512120101012,
    8.5251613610654147,
    10.604602902745251,
    12.801827480081469,
    15.104412573075516,
    17.502307845873887,
    19.987214495661885,
    22.552163853123425,
    25.19122118273868,
    27.89927138384089,
    30.671860106080672,
    33.505073450136891,
    36.395445208033053,
    39.339884187199495,
    42.335616460753485,
};

double initial_guess_principal(double x) {
  if (x < -0.3) {
    // Series around the branch point in p = sqrt(2(1 + e*x)).
    double u = 1.0 + x / kInvE;
    if (u < 0.0) u = 0.0;
    const double p = std::sqrt(2.0 * u);
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 1.0) {
    // Truncated Taylor series at 0; rough but inside the Halley basin.
    return x * (1.0 + x * (-1.0 + x * 1.5));
  }
  if (x < 10.0) return std::log1p(x) * 0.7 + 0.2;
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double initial_guess_lower(double x) {
  if (x < -0.27) {
    double u = 1.0 + x / kInvE;
    if (u < 0.0) u = 0.0;
    const double p = -std::sqrt(2.0 * u);
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  // x in [-0.27, 0): the root tracks the logarithmic asymptote.
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w(WBranch branch, double x) {
  if (!(x >= -kInvE)) throw std::domain_error("lambert_w: x < -1/e");
  if (branch == WBranch::LowerNegOne && !(x < 0.0))
    throw std::domain_error("lambert_w: lower branch requires x < 0");
  if (x == -kInvE) return -1.0;
  if (branch == WBranch::Principal && x == 0.0) return 0.0;

  double w = branch == WBranch::Principal ? initial_guess_principal(x)
                                          : initial_guess_lower(x);
  const double tol = 1e-14 * std::max(1.0, std::abs(x));
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= tol) break;
    const double wp1 = w + 1.0;
    // Halley update; falls back to Newton if the correction degenerates.
    double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    if (!std::isfinite(dw)) dw = f / (ew * wp1);
    if (!std::isfinite(dw) || dw == 0.0) break;
    w -= dw;
  }
  return w;
}

double log_factorial(long long k) {
  if (k < 0) throw std::domain_error("log_factorial: k < 0");
  if (k <= 20) return kLogFactorialTable[static_cast<std::size_t>(k)];
  const double n = static_cast<double>(k);
  const double n2 = n * n;
  // Stirling series; the dropped term is O(1/n^9), below 1e-15 for k > 20.
  return (n + 0.5) * std::log(n) - n + 0.91893853320467274 +
         (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * n2)) / n2) / n2) / n;
}

}  // namespace poissoncap
