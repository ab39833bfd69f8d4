// Real-valued special functions used by the channel kernel and the bounds:
// the two real branches of the Lambert W function and the log-factorial.
#pragma once

namespace poissoncap {

// Real branches of the Lambert W function w*exp(w) = x.
//   Principal   : defined for x >= -1/e, returns w >= -1.
//   LowerNegOne : defined for -1/e <= x < 0, returns w <= -1.
enum class WBranch { Principal, LowerNegOne };

// Solves w*exp(w) = x on the requested branch by Halley iteration from a
// branch-specific initial guess. Relative residual of the returned root is
// below 1e-12. At the branch point x = -1/e both branches return exactly -1.
// Throws std::domain_error outside the branch domain.
double lambert_w(WBranch branch, double x);

// ln(k!) in nats. Exact table for k <= 20, Stirling series above
// (absolute error below 1e-10 over the whole range).
// Throws std::domain_error for k < 0.
double log_factorial(long long k);

}  // namespace poissoncap
