#include "poissoncap/information.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "poissoncap/special_fn.hpp"

namespace poissoncap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;
constexpr double kDerivativeFloor = 1e-8;

}  // namespace

double info_density(const OutputModel& m, double x) {
  const double amp = m.source().amplitude();
  if (!(x >= 0.0 && x <= amp))
    throw std::domain_error("info_density: x outside [0, A]");
  if (x == 0.0) return -m.log_py(0);

  const double lx = std::log(x);
  double w = std::exp(-x);  // P(Y=k | X=x), advanced by recurrence
  double sum = 0.0;
  for (int k = 0; k <= m.k_max(); ++k) {
    if (w > 0.0) {
      const double lpy = m.log_py(k);
      if (lpy == kNegInf) return kInf;
      sum += w * (k * lx - x - log_factorial(k) - lpy);
    }
    w *= x / static_cast<double>(k + 1);
  }
  return sum;
}

double mutual_information(const OutputModel& m) {
  const auto& xs = m.source().locations();
  const auto& ps = m.source().masses();
  double mi = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    mi += ps[i] * info_density(m, xs[i]);
  return mi;
}

double info_density_derivative(const OutputModel& m, double x) {
  const double amp = m.source().amplitude();
  if (!(x >= kDerivativeFloor && x <= amp))
    throw std::domain_error(
        "info_density_derivative: x below 1e-8 or outside [0, A]");
  double w = std::exp(-x);
  double g1 = 0.0;
  for (int k = 0; k <= m.k_max(); ++k) {
    if (w > 0.0) {
      const double pm = m.posterior_mean(k);
      if (!(pm > 0.0)) return kInf;
      g1 -= w * std::log(pm);
    }
    w *= x / static_cast<double>(k + 1);
  }
  return g1 + std::log(x);
}

double info_density_second_derivative(const OutputModel& m, double x) {
  const double amp = m.source().amplitude();
  if (!(x >= kDerivativeFloor && x <= amp))
    throw std::domain_error(
        "info_density_second_derivative: x below 1e-8 or outside [0, A]");
  double w = std::exp(-x);
  double s = 0.0;
  for (int k = 0; k <= m.k_max(); ++k) {
    if (w > 0.0) {
      const double pm = m.posterior_mean(k + 1);
      if (!(pm > 0.0)) return kNegInf;
      s -= w * std::log(pm);
    }
    w *= x / static_cast<double>(k + 1);
  }
  return s - info_density_derivative(m, x) + std::log(x) + 1.0 / x;
}

PsiSequence psi_sequence(const OutputModel& m, double capacity_nats,
                         double mass_at_amplitude) {
  if (!m.source().has_mass_at_amplitude())
    throw std::domain_error("psi_sequence: amplitude not in the support");
  if (!(mass_at_amplitude > 0.0))
    throw std::domain_error("psi_sequence: mass at amplitude must be > 0");
  if (!(capacity_nats >= 0.0))
    throw std::domain_error("psi_sequence: capacity must be >= 0");

  const double amp = m.source().amplitude();
  const double raw = amp - std::log(mass_at_amplitude) - capacity_nats;
  const int k_star = std::max(0, static_cast<int>(std::ceil(raw)));
  if (k_star > m.k_max() + 1)
    throw std::invalid_argument(
        "psi_sequence: truncation too small for k_star; rebuild the model "
        "with a smaller epsilon");

  PsiSequence seq;
  seq.k_star = k_star;
  seq.values.resize(static_cast<std::size_t>(k_star) + 1);
  seq.values[0] = m.log_py(0) + capacity_nats;
  for (int k = 1; k <= k_star; ++k) {
    seq.values[static_cast<std::size_t>(k)] =
        -k * std::log(m.posterior_mean(k - 1)) + log_factorial(k) +
        m.log_py(k) + capacity_nats + k;
  }
  return seq;
}

int sign_changes(std::span<const double> seq) {
  double max_abs = 0.0;
  for (double v : seq) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0;
  const double zero_tol = 1e-12 * max_abs;
  int changes = 0;
  int prev_sign = 0;
  for (double v : seq) {
    if (std::abs(v) < zero_tol) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (prev_sign != 0 && sign != prev_sign) ++changes;
    prev_sign = sign;
  }
  return changes;
}

}  // namespace poissoncap
