// Information functionals over an OutputModel: the information density
// i(x; P_X) = D(P_{Y|X}(.|x) || P_Y), its first and second derivatives,
// mutual information, and the psi sequence whose sign-change count bounds
// the optimal support size.
#pragma once

#include <span>
#include <vector>

#include "poissoncap/dist.hpp"

namespace poissoncap {

// i(x; P_X) in nats for x in [0, A]. At x = 0 this is exactly -ln P_Y(0).
// Returns +infinity where the divergence diverges (output symbols the source
// never emits).
double info_density(const OutputModel& m, double x);

// I(X;Y) = sum_i p_i * i(x_i; P_X) in nats.
double mutual_information(const OutputModel& m);

// d/dx i(x; P_X) = G'(x) + ln(x) with
// G'(x) = sum_k P(k|x) ln(1 / E[X|Y=k]).
// Requires x >= 1e-8 (logarithmic singularity at 0).
double info_density_derivative(const OutputModel& m, double x);

// d^2/dx^2 i(x; P_X)
//   = sum_k P(k|x) ln(1 / E[X|Y=k+1]) - i'(x) + ln(x) + 1/x.
// Requires x >= 1e-8.
double info_density_second_derivative(const OutputModel& m, double x);

// psi(k) = k ln(1 / E[X|Y=k-1]) + ln(k! P_Y(k)) + C + k for k = 0..k_star,
// with the first summand defined as 0 at k = 0 and
// k_star = ceil(A - ln(p_A) - C). psi(k) >= 0 for every k >= k_star, so the
// window 0..k_star carries all sign changes. The number of support points of
// an optimal law is at most sign_changes(values) + 2.
struct PsiSequence {
  std::vector<double> values;  // k = 0..k_star
  int k_star = 0;
};

// Requires the source of m to place mass at the amplitude (mass_at_amplitude
// is that mass) and capacity_nats >= 0.
PsiSequence psi_sequence(const OutputModel& m, double capacity_nats,
                         double mass_at_amplitude);

// Sign alternations of the subsequence of nonzero entries; entries with
// |v| < 1e-12 * max|seq| count as zero and are skipped.
int sign_changes(std::span<const double> seq);

}  // namespace poissoncap
