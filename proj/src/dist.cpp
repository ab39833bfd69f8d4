#include "poissoncap/dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace poissoncap {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

DiscreteDistribution::DiscreteDistribution(double amplitude,
                                           std::vector<double> locations,
                                           std::vector<double> masses)
    : amplitude_(amplitude),
      locations_(std::move(locations)),
      masses_(std::move(masses)) {
  if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_))
    throw std::invalid_argument("DiscreteDistribution: amplitude must be > 0");
  if (locations_.empty() || locations_.size() != masses_.size())
    throw std::invalid_argument("DiscreteDistribution: size mismatch");
  const double min_gap = 1e-9 * amplitude_;
  double sum = 0.0;
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    const double x = locations_[i];
    if (!(x >= 0.0 && x <= amplitude_))
      throw std::invalid_argument("DiscreteDistribution: location outside [0, A]");
    if (i > 0 && !(x - locations_[i - 1] > min_gap))
      throw std::invalid_argument(
          "DiscreteDistribution: locations must be strictly ascending; merge "
          "duplicates first");
    if (!(masses_[i] > 0.0))
      throw std::invalid_argument("DiscreteDistribution: masses must be > 0");
    sum += masses_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteDistribution: masses must sum to 1");
}

bool DiscreteDistribution::has_mass_at_amplitude() const {
  return std::abs(locations_.back() - amplitude_) <=
         1e-12 * std::max(1.0, amplitude_);
}

double DiscreteDistribution::second_largest() const {
  if (size() < 2)
    throw std::logic_error("second_largest: support has fewer than 2 points");
  return locations_[size() - 2];
}

double entropy(const DiscreteDistribution& d) {
  double h = 0.0;
  for (double p : d.masses()) h -= p * std::log(p);
  return h;
}

OutputModel::OutputModel(DiscreteDistribution source, Truncation truncation)
    : source_(std::move(source)), truncation_(truncation) {
  build();
}

OutputModel::OutputModel(DiscreteDistribution source, double epsilon)
    : source_(std::move(source)),
      truncation_(truncation_index(source_.amplitude(), epsilon)) {
  build();
}

void OutputModel::build() {
  const auto& xs = source_.locations();
  const auto& ps = source_.masses();
  const std::size_t n = xs.size();
  const int rows = truncation_.k_max + 2;
  log_py_.resize(rows);
  posterior_mean_.resize(rows);

  std::vector<double> log_terms(n);
  std::vector<double> log_p(n);
  for (std::size_t i = 0; i < n; ++i) log_p[i] = std::log(ps[i]);

  for (int y = 0; y < rows; ++y) {
    for (std::size_t i = 0; i < n; ++i)
      log_terms[i] = log_p[i] + log_pmf(xs[i], y);
    const double lpy = log_sum_exp(log_terms);
    log_py_[y] = lpy;
    if (lpy == kNegInf) {
      posterior_mean_[y] = kNaN;
      continue;
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (xs[i] == 0.0 || log_terms[i] == kNegInf) continue;
      mean += xs[i] * std::exp(log_terms[i] - lpy);
    }
    // Guard against last-ulp excursions past the amplitude.
    posterior_mean_[y] = std::min(mean, source_.amplitude());
  }
}

double OutputModel::log_py(int y) const {
  if (y < 0 || y > truncation_.k_max + 1)
    throw std::out_of_range("OutputModel::log_py: y past truncation");
  return log_py_[static_cast<std::size_t>(y)];
}

double OutputModel::output_pmf(int y) const {
  if (y < 0 || y > truncation_.k_max)
    throw std::out_of_range("OutputModel::output_pmf: y past truncation");
  const double lp = log_py_[static_cast<std::size_t>(y)];
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double OutputModel::posterior_mean(int y) const {
  if (y < 0 || y > truncation_.k_max + 1)
    throw std::out_of_range("OutputModel::posterior_mean: y past truncation");
  const double m = posterior_mean_[static_cast<std::size_t>(y)];
  if (std::isnan(m))
    throw std::domain_error("OutputModel::posterior_mean: P_Y(y) = 0");
  return m;
}

double OutputModel::posterior(std::size_t support_index, int y) const {
  if (support_index >= source_.size())
    throw std::out_of_range("OutputModel::posterior: bad support index");
  if (y < 0 || y > truncation_.k_max)
    throw std::out_of_range("OutputModel::posterior: y past truncation");
  const double lpy = log_py_[static_cast<std::size_t>(y)];
  if (lpy == kNegInf)
    throw std::domain_error("OutputModel::posterior: P_Y(y) = 0");
  const double lt = std::log(source_.masses()[support_index]) +
                    log_pmf(source_.locations()[support_index], y);
  return lt == kNegInf ? 0.0 : std::exp(lt - lpy);
}

}  // namespace poissoncap
