// Per-symbol detection metrics for a solved input law: MAP decoding, symbol
// error probability, equivocation, and the asymptotic floors.
#pragma once

#include <utility>

#include "poissoncap/dist.hpp"

namespace poissoncap {

// MAP decision for output y: argmax over support of p_i * P(y | x_i), ties
// broken toward the smaller location. Throws std::domain_error when
// P_Y(y) = 0.
double map_decode(const OutputModel& m, int y);

// P_e = 1 - sum_{y <= k_max} max_i p_i P(y | x_i). The dropped tail
// contributes at most the truncation epsilon.
double error_probability(const OutputModel& m);

// H(X|Y) = H(X) - I(X;Y), nats.
double equivocation(const OutputModel& m);

// Large-amplitude liminf floors (1 - sqrt(2/pi), 2(1 - sqrt(2/pi))). These
// are asymptotic statements; finite-A values may fall below them.
std::pair<double, double> asymptotic_floors();

struct DetectionReport {
  double pe = 0.0;
  double pe_truncation = 0.0;  // tail-mass bound on the P_e truncation error
  double hx = 0.0;             // input entropy, nats
  double mi = 0.0;             // mutual information, nats
  double hxy = 0.0;            // equivocation = hx - mi, nats
  bool fano_ok = false;        // hxy >= 2 ln(2) pe, i.e. 2 pe in bits
  double asymptotic_pe_floor = 0.0;
  double asymptotic_hxy_floor = 0.0;
};

DetectionReport detection_report(const OutputModel& m);

}  // namespace poissoncap
