#include "poissoncap/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "poissoncap/information.hpp"

namespace poissoncap {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double map_decode(const OutputModel& m, int y) {
  if (y < 0 || y > m.k_max())
    throw std::out_of_range("map_decode: y past truncation");
  if (m.log_py(y) == kNegInf)
    throw std::domain_error("map_decode: P_Y(y) = 0");
  const auto& xs = m.source().locations();
  const auto& ps = m.source().masses();
  double best = kNegInf;
  double decoded = xs[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double score = std::log(ps[i]) + log_pmf(xs[i], y);
    if (score > best) {  // strict: ties keep the smaller location
      best = score;
      decoded = xs[i];
    }
  }
  return decoded;
}

double error_probability(const OutputModel& m) {
  const auto& xs = m.source().locations();
  const auto& ps = m.source().masses();
  double correct = 0.0;
  for (int y = 0; y <= m.k_max(); ++y) {
    double best = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double lp = log_pmf(xs[i], y);
      if (lp == kNegInf) continue;
      best = std::max(best, ps[i] * std::exp(lp));
    }
    correct += best;
  }
  return 1.0 - correct;
}

double equivocation(const OutputModel& m) {
  return entropy(m.source()) - mutual_information(m);
}

std::pair<double, double> asymptotic_floors() {
  const double pe_floor = 1.0 - std::sqrt(2.0 / 3.1415926535897931);
  return {pe_floor, 2.0 * pe_floor};
}

DetectionReport detection_report(const OutputModel& m) {
  DetectionReport r;
  r.pe = error_probability(m);
  r.pe_truncation = m.truncation().epsilon;
  r.hx = entropy(m.source());
  r.mi = mutual_information(m);
  r.hxy = r.hx - r.mi;
  // Entropy-versus-error floor H(X|Y) >= 2 P_e, stated for base-2 entropy;
  // in nats the slope is 2 ln 2. (The nats form with slope 2 is violated
  // already by the optimal law at small amplitudes.)
  r.fano_ok = r.hxy >= 2.0 * std::log(2.0) * r.pe - 1e-9;
  const auto [pe_floor, hxy_floor] = asymptotic_floors();
  r.asymptotic_pe_floor = pe_floor;
  r.asymptotic_hxy_floor = hxy_floor;
  return r;
}

}  // namespace poissoncap
