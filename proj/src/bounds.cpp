#include "poissoncap/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "poissoncap/information.hpp"
#include "poissoncap/special_fn.hpp"

namespace poissoncap {

namespace {

constexpr double kE = 2.718281828459045;
constexpr double kMassSlack = 1e-6;
constexpr double kEqualitySlack = 1e-5;

// Validity condition shared by the largest-mass lower bound and the explicit
// support-size upper bound: e^(C/(1-e^-A)) >= 4.
bool strong_regime(double amplitude, double capacity_nats) {
  return capacity_nats / (1.0 - std::exp(-amplitude)) >= std::log(4.0);
}

// max over the open interval (0, A) of i(x; binary(A)) - C(A).
double binary_interior_gap(double amplitude, int grid = 2000) {
  OutputModel m(binary_closed_form(amplitude), 1e-14);
  const double capacity = -m.log_py(0);
  double gap = -1e300;
  for (int j = 1; j < grid; ++j) {
    const double x = amplitude * j / static_cast<double>(grid);
    gap = std::max(gap, info_density(m, x) - capacity);
  }
  return gap;
}

}  // namespace

DiscreteDistribution binary_closed_form(double amplitude) {
  if (!(amplitude > 0.0))
    throw std::invalid_argument("binary_closed_form: amplitude must be > 0");
  const double p_top = 1.0 / (std::exp(amplitude / std::expm1(amplitude)) -
                              std::exp(-amplitude) + 1.0);
  return DiscreteDistribution(amplitude, {0.0, amplitude},
                              {1.0 - p_top, p_top});
}

double binary_capacity(double amplitude) {
  const DiscreteDistribution d = binary_closed_form(amplitude);
  const double p_top = d.masses()[1];
  return -std::log((1.0 - p_top) + std::exp(-amplitude) * p_top);
}

double binary_threshold() {
  static const double threshold = [] {
    double lo = 3.0, hi = 4.0;
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (binary_interior_gap(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return threshold;
}

double contraction_upper(double amplitude) {
  if (!(amplitude >= 0.0))
    throw std::domain_error("contraction_upper: amplitude must be >= 0");
  return -std::expm1(-amplitude);
}

double universal_mass_bound(double amplitude, double capacity_nats) {
  if (!(amplitude > 0.0) || !(capacity_nats >= 0.0))
    throw std::domain_error("universal_mass_bound: need A > 0, C >= 0");
  return std::exp(-capacity_nats / -std::expm1(-amplitude));
}

double location_mass_bound(double x, double capacity_nats) {
  if (!(x > 0.0))
    throw std::domain_error("location_mass_bound: x must be > 0");
  return std::exp(-capacity_nats - x * std::exp(-x) / -std::expm1(-x));
}

std::optional<double> largest_mass_lower_bound_log(double amplitude,
                                                   double capacity_nats) {
  if (!strong_regime(amplitude, capacity_nats)) return std::nullopt;
  const double numerator =
      1.0 - 3.0 * std::exp(-capacity_nats / -std::expm1(-amplitude));
  const double log_a = std::log(amplitude);
  // ln denominator = ln 2 + (2 A e ln A + 2) ln A + (1 - 2A)
  const double log_denominator =
      std::log(2.0) + (2.0 * amplitude * kE * log_a + 2.0) * log_a +
      (1.0 - 2.0 * amplitude);
  return std::log(numerator) - log_denominator;
}

InteriorBracket interior_location_bracket(double amplitude) {
  if (!(amplitude > kE))
    throw std::domain_error("interior_location_bracket: requires A > e");
  InteriorBracket b;
  b.outer_lo = std::exp(-std::sqrt(2.0 * (std::log(amplitude) - 1.0)));
  b.inner_lo = amplitude *
               std::exp(lambert_w(WBranch::LowerNegOne, -1.0 / amplitude));
  b.inner_hi =
      amplitude * std::exp(lambert_w(WBranch::Principal, -1.0 / amplitude));
  b.outer_hi = amplitude - 1.0;
  return b;
}

double support_size_lower(double amplitude, double capacity_nats) {
  if (!(amplitude > 0.0) || !(capacity_nats >= 0.0))
    throw std::domain_error("support_size_lower: need A > 0, C >= 0");
  return std::exp(capacity_nats / -std::expm1(-amplitude));
}

int support_size_upper_implicit(double amplitude, double capacity_nats,
                                double mass_at_amplitude) {
  if (!(mass_at_amplitude > 0.0 && mass_at_amplitude <= 1.0))
    throw std::domain_error(
        "support_size_upper_implicit: mass must be in (0, 1]");
  return static_cast<int>(std::ceil(amplitude - std::log(mass_at_amplitude) -
                                    capacity_nats)) +
         2;
}

std::optional<double> support_size_upper_explicit(double amplitude,
                                                  double capacity_nats) {
  if (!strong_regime(amplitude, capacity_nats)) return std::nullopt;
  const double log_a = std::log(amplitude);
  const double numerator =
      1.0 - 3.0 * std::exp(-capacity_nats / -std::expm1(-amplitude));
  return 2.0 * kE * amplitude * log_a * log_a + 2.0 * log_a - amplitude -
         std::log(numerator / 2.0) - capacity_nats + 4.0;
}

double asymptotic_capacity(double amplitude) {
  if (!(amplitude > 0.0))
    throw std::domain_error("asymptotic_capacity: amplitude must be > 0");
  return 0.5 * std::log(amplitude) - 0.5 * std::log(3.1415926535897931 * kE / 2.0);
}

double mass_identity_residual(const OutputModel& m, double capacity_nats,
                              std::size_t support_index) {
  const auto& xs = m.source().locations();
  const auto& ps = m.source().masses();
  if (support_index >= xs.size())
    throw std::out_of_range("mass_identity_residual: bad support index");
  const double x = xs[support_index];
  const double log_p = std::log(ps[support_index]);
  // E[ln P_{X|Y}(x|Y) | X=x], truncated with the model.
  double expectation = 0.0;
  double w = x == 0.0 ? 1.0 : std::exp(-x);
  for (int k = 0; k <= m.k_max(); ++k) {
    if (w > 0.0) {
      const double log_posterior = log_p + log_pmf(x, k) - m.log_py(k);
      expectation += w * log_posterior;
    }
    if (x == 0.0) break;  // only k = 0 carries weight
    w *= x / static_cast<double>(k + 1);
  }
  return std::abs(log_p - (-capacity_nats + expectation));
}

bool BoundsReport::all_applicable_passed() const {
  for (const BoundCheck& c : checks)
    if (c.applicable && !c.passed) return false;
  return true;
}

BoundsReport evaluate_bounds(double amplitude, double capacity_nats,
                             std::string capacity_source,
                             const OutputModel* model) {
  if (!(amplitude > 0.0) || !(capacity_nats >= 0.0))
    throw std::invalid_argument("evaluate_bounds: need A > 0, C >= 0");

  BoundsReport r;
  r.amplitude = amplitude;
  r.capacity_used = capacity_nats;
  r.capacity_source = std::move(capacity_source);
  r.eta_upper = contraction_upper(amplitude);
  r.universal_mass_bound = universal_mass_bound(amplitude, capacity_nats);
  r.largest_mass_lower_log =
      largest_mass_lower_bound_log(amplitude, capacity_nats);
  if (amplitude > kE)
    r.interior_bracket = interior_location_bracket(amplitude);
  r.support_lower = support_size_lower(amplitude, capacity_nats);
  r.support_upper_explicit =
      support_size_upper_explicit(amplitude, capacity_nats);
  r.asymptotic_capacity = asymptotic_capacity(amplitude);

  if (r.interior_bracket) {
    const InteriorBracket& b = *r.interior_bracket;
    r.checks.push_back({"bracket_chain", true,
                        b.outer_lo <= b.inner_lo && b.inner_lo <= b.inner_hi &&
                            b.inner_hi <= b.outer_hi});
  } else {
    r.checks.push_back({"bracket_chain", false, true});
  }

  if (model == nullptr) return r;

  const DiscreteDistribution& d = model->source();
  const auto& xs = d.locations();
  const auto& ps = d.masses();
  const int support_size = static_cast<int>(d.size());
  const double p_top = d.top_mass();

  bool universal_ok = true;
  bool location_ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    universal_ok = universal_ok && ps[i] <= r.universal_mass_bound + kMassSlack;
    if (xs[i] > 0.0) {
      const double bound = location_mass_bound(xs[i], capacity_nats);
      r.location_mass_bounds.push_back({xs[i], bound, ps[i]});
      location_ok = location_ok && ps[i] <= bound + kMassSlack;
    }
    r.mass_identity_residuals.push_back(
        mass_identity_residual(*model, capacity_nats, i));
  }
  r.checks.push_back({"mass_universal", true, universal_ok});
  r.checks.push_back({"mass_location", true, location_ok});

  const int lower = static_cast<int>(std::ceil(r.support_lower - 1e-9));
  r.checks.push_back({"support_lower", true, lower <= support_size});

  if (d.has_mass_at_amplitude()) {
    r.support_upper_implicit =
        support_size_upper_implicit(amplitude, capacity_nats, p_top);
    r.checks.push_back(
        {"support_upper_implicit", true,
         support_size <= *r.support_upper_implicit});
  } else {
    r.checks.push_back({"support_upper_implicit", false, true});
  }

  // Interior support points (excluding 0 and A) must fall inside the inner
  // bracket whenever the bracket exists.
  if (r.interior_bracket && support_size >= 3) {
    bool inside = true;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i)
      inside = inside && xs[i] >= r.interior_bracket->inner_lo - 1e-9 &&
               xs[i] <= r.interior_bracket->inner_hi + 1e-9;
    r.checks.push_back({"interior_in_bracket", true, inside});
  } else {
    r.checks.push_back({"interior_in_bracket", false, true});
  }

  // Two-point regime: the location-dependent bound at A is an equality.
  if (amplitude <= binary_threshold() && support_size == 2 &&
      d.has_mass_at_amplitude()) {
    const double bound = location_mass_bound(amplitude, capacity_nats);
    r.checks.push_back(
        {"location_equality_binary", true,
         std::abs(bound - p_top) <= kEqualitySlack});
  } else {
    r.checks.push_back({"location_equality_binary", false, true});
  }

  return r;
}

}  // namespace poissoncap
