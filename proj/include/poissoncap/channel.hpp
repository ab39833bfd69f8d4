// Poisson transition kernel in log domain, tail control for the countably
// infinite output alphabet, and the Poisson integral transform.
#pragma once

#include <span>

namespace poissoncap {

// Finite representation of the output alphabet: outputs 0..k_max are kept and
// the total tail mass beyond k_max is at most epsilon for every input mean
// x <= x_ref used to build the truncation (Poisson tails are monotone in the
// mean).
struct Truncation {
  int k_max = 0;
  double epsilon = 0.0;
};

// log P(Y=y | X=x) = y*ln(x) - x - ln(y!) in nats, with the conventions
// x=0,y=0 -> 0 (probability one) and x=0,y>0 -> -infinity sentinel.
// Throws std::domain_error for x < 0 or y < 0.
double log_pmf(double x, int y);

// exp(log_pmf); the -infinity sentinel maps to 0.
double pmf(double x, int y);

// Smallest k_max such that P[Y > k_max | X = x_ref] <= epsilon.
// Requires epsilon in (0,1) and 0 <= x_ref <= 700.
Truncation truncation_index(double x_ref, double epsilon);

// Poisson tail inequality holding for A >= e and x0 >= 1:
//   P[Y >= e*x0*ln(A)] <= (1/ln A)^(e ln A) / e <= 1/A,  Y ~ Poisson(x0).
// lhs is computed by direct tail summation, rhs is the middle expression,
// holds requires both inequalities.
struct TailBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
TailBoundCheck tail_bound_check(double x0, double amplitude);

// Xi(x) = sum_k xi[k] * P(Y=k | X=x). The sequence must cover the output
// range that matters for x; terms beyond xi.size()-1 are dropped.
double poisson_transform(std::span<const double> xi, double x);

// Max-shifted log(sum(exp(v))). Empty input or all -infinity give -infinity.
double log_sum_exp(std::span<const double> v);

}  // namespace poissoncap
