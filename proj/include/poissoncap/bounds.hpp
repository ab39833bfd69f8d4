// Closed-form two-point regime, the binary threshold, and the analytic
// bounds on the capacity-achieving distribution: mass upper bounds, the
// largest-mass lower bound, interior-location brackets, support-size bounds,
// and the asymptotic capacity. Everything is evaluated in nats; formulas
// whose intermediates overflow doubles are carried in log domain.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poissoncap/dist.hpp"

namespace poissoncap {

// Two-point law on {0, A}: P(A) = 1 / (e^(A/(e^A - 1)) - e^-A + 1).
// Defined for every A > 0; capacity-achieving iff A <= binary_threshold().
DiscreteDistribution binary_closed_form(double amplitude);

// C(A) = -ln(P(0) + e^-A P(A)) for the two-point law, nats.
double binary_capacity(double amplitude);

// Amplitude at which the two-point law first violates the KKT conditions,
// located by bisection on [3, 4] with interior grid maximization of
// i(x) - C; accurate to 1e-3. The reference value is about 3.3679.
double binary_threshold();

// Contraction-coefficient upper bound 1 - e^-A.
double contraction_upper(double amplitude);

// Universal mass bound e^(-C / (1 - e^-A)).
double universal_mass_bound(double amplitude, double capacity_nats);

// Location-dependent mass bound e^(-C - x e^-x / (1 - e^-x)) for x > 0;
// equality when the optimal support has exactly two points.
double location_mass_bound(double x, double capacity_nats);

// Natural log of the lower bound on the mass at A:
//   (1 - 3 e^(-C/(1-e^-A))) / (2 A^(2 A e ln A + 2) e^(-2A+1)).
// Only valid when e^(C/(1-e^-A)) >= 4; nullopt otherwise.
std::optional<double> largest_mass_lower_bound_log(double amplitude,
                                                   double capacity_nats);

// Brackets for interior support points (amplitude > e):
//   outer_lo <= inner_lo <= x* <= inner_hi <= outer_hi with
//   inner_lo = A e^(W_-1(-1/A)), inner_hi = A e^(W_0(-1/A)),
//   outer_lo = e^(-sqrt(2(ln A - 1))), outer_hi = A - 1.
struct InteriorBracket {
  double outer_lo = 0.0;
  double inner_lo = 0.0;
  double inner_hi = 0.0;
  double outer_hi = 0.0;
};
InteriorBracket interior_location_bracket(double amplitude);

// e^(C / (1 - e^-A)); callers take the ceiling for the integer bound.
double support_size_lower(double amplitude, double capacity_nats);

// ceil(A - ln(p_A) - C) + 2.
int support_size_upper_implicit(double amplitude, double capacity_nats,
                                double mass_at_amplitude);

// 2e A ln^2 A + 2 ln A - A - ln((1 - 3 e^(-C/(1-e^-A))) / 2) - C + 4.
// Only valid when e^(C/(1-e^-A)) >= 4; nullopt otherwise.
std::optional<double> support_size_upper_explicit(double amplitude,
                                                  double capacity_nats);

// Two-term large-A asymptote (ln A)/2 - ln(pi e / 2)/2, nats.
double asymptotic_capacity(double amplitude);

// Residual of the exact mass identity
//   ln P(x) = -C + sum_k P(k|x) ln P_{X|Y}(x|k)
// at a support point; near zero for KKT-verified laws.
double mass_identity_residual(const OutputModel& m, double capacity_nats,
                              std::size_t support_index);

struct BoundCheck {
  std::string name;
  bool applicable = false;
  bool passed = false;
};

struct BoundsReport {
  double amplitude = 0.0;
  double capacity_used = 0.0;      // nats
  std::string capacity_source;     // "solver", "explicit", or "asymptotic"
  double eta_upper = 0.0;
  double universal_mass_bound = 0.0;
  // Per support point above 0: location, its bound, its mass.
  struct LocationBound {
    double x = 0.0;
    double bound = 0.0;
    double mass = 0.0;
  };
  std::vector<LocationBound> location_mass_bounds;
  std::optional<double> largest_mass_lower_log;
  std::optional<InteriorBracket> interior_bracket;  // amplitude > e only
  double support_lower = 0.0;
  std::optional<int> support_upper_implicit;     // needs a distribution
  std::optional<double> support_upper_explicit;
  double asymptotic_capacity = 0.0;
  std::vector<double> mass_identity_residuals;   // per support point
  std::vector<BoundCheck> checks;

  bool all_applicable_passed() const;
};

// Evaluates every bound for (A, C); when a model is supplied, also runs the
// distribution-dependent pass/fail checks (with 1e-6 slack on the mass
// bounds, 1e-5 on the two-point equality case).
BoundsReport evaluate_bounds(double amplitude, double capacity_nats,
                             std::string capacity_source,
                             const OutputModel* model = nullptr);

}  // namespace poissoncap
