// Finitely supported input distributions on [0, A] and the induced output
// model: cached log-domain output pmf, posteriors, and posterior means.
#pragma once

#include <cstddef>
#include <vector>

#include "poissoncap/channel.hpp"

namespace poissoncap {

// Input law with strictly increasing support locations in [0, A] and strictly
// positive masses summing to one (within 1e-12). Immutable after
// construction; the constructor rejects duplicate locations closer than
// 1e-9 * A.
class DiscreteDistribution {
 public:
  DiscreteDistribution(double amplitude, std::vector<double> locations,
                       std::vector<double> masses);

  double amplitude() const { return amplitude_; }
  const std::vector<double>& locations() const { return locations_; }
  const std::vector<double>& masses() const { return masses_; }
  std::size_t size() const { return locations_.size(); }

  // True when the largest support point sits at the amplitude.
  bool has_mass_at_amplitude() const;
  // Mass of the largest support point (the point at A for solved laws).
  double top_mass() const { return masses_.back(); }
  // Second largest support point; requires size() >= 2.
  double second_largest() const;

 private:
  double amplitude_;
  std::vector<double> locations_;
  std::vector<double> masses_;
};

// -sum p_i ln(p_i) in nats.
double entropy(const DiscreteDistribution& d);

// Output law induced by a DiscreteDistribution through the Poisson kernel,
// truncated at k_max. log_py and posterior_mean are cached eagerly for
// y = 0..k_max+1; the extra slot backs the k+1 recursions of the information
// density derivatives. Probability accessors are bounded by k_max.
class OutputModel {
 public:
  OutputModel(DiscreteDistribution source, Truncation truncation);
  // Convenience: truncation built at x_ref = amplitude.
  OutputModel(DiscreteDistribution source, double epsilon);

  const DiscreteDistribution& source() const { return source_; }
  const Truncation& truncation() const { return truncation_; }
  int k_max() const { return truncation_.k_max; }

  // ln P_Y(y); valid for y in [0, k_max+1].
  double log_py(int y) const;
  // P_Y(y); valid for y in [0, k_max]. Throws std::out_of_range beyond.
  double output_pmf(int y) const;
  // E[X | Y=y]; valid for y in [0, k_max+1].
  // Throws std::domain_error when P_Y(y) = 0 (degenerate support {0}).
  double posterior_mean(int y) const;
  // P(X = locations()[i] | Y=y); valid for y in [0, k_max].
  double posterior(std::size_t support_index, int y) const;

 private:
  void build();

  DiscreteDistribution source_;
  Truncation truncation_;
  std::vector<double> log_py_;          // y = 0..k_max+1
  std::vector<double> posterior_mean_;  // y = 0..k_max+1, NaN where P_Y = 0
};

}  // namespace poissoncap
