#include "poissoncap/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace poissoncap {

namespace {

void append_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  out += ']';
}

std::string config_json(const SolverConfig& cfg) {
  std::string out = "{";
  out += "\"step_size\":" + format_double(cfg.step_size);
  out += ",\"max_iter\":" + std::to_string(cfg.max_iter);
  out += ",\"kkt_tol\":" + format_double(cfg.kkt_tol);
  out += ",\"grid_points\":" + std::to_string(cfg.grid_points);
  out += ",\"n_points\":" + std::to_string(cfg.n_points);
  out += ",\"merge_delta\":" + format_double(cfg.merge_delta);
  out += ",\"prune_mass\":" + format_double(cfg.prune_mass);
  out += ",\"continuation_delta\":" + format_double(cfg.continuation_delta);
  out += '}';
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string manifest_json(const RunManifest& manifest) {
  std::string out = "{";
  out += "\"command\":\"" + manifest.command + "\"";
  out += ",\"config\":" + config_json(manifest.config);
  out += ",\"tool_version\":\"" + manifest.tool_version + "\"";
  out += ",\"units\":\"" + manifest.units + "\"";
  out += ",\"truncation\":{\"k_max\":" + std::to_string(manifest.truncation.k_max) +
         ",\"epsilon\":" + format_double(manifest.truncation.epsilon) + "}";
  out += '}';
  return out;
}

std::string distribution_json(const SolverResult& result,
                              const RunManifest& manifest) {
  std::string out = "{";
  out += "\"amplitude\":" + format_double(result.distribution.amplitude());
  out += ",\"units\":\"nats\"";
  out += ",\"points\":";
  append_array(out, result.distribution.locations());
  out += ",\"masses\":";
  append_array(out, result.distribution.masses());
  out += ",\"capacity_mi\":" + format_double(result.capacity_mi);
  out += ",\"capacity_py0\":" + format_double(result.capacity_py0);
  out += ",\"kkt_gap\":" + format_double(result.kkt_gap);
  out += ",\"manifest\":" + manifest_json(manifest);
  out += "}\n";
  return out;
}

ParsedDistribution parse_distribution_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("distribution JSON: ") + e.what());
  }
  if (!j.contains("amplitude") || !j.contains("points") || !j.contains("masses"))
    throw std::invalid_argument(
        "distribution JSON: amplitude, points, masses are required");
  const double amplitude = j.at("amplitude").get<double>();
  auto points = j.at("points").get<std::vector<double>>();
  auto masses = j.at("masses").get<std::vector<double>>();
  ParsedDistribution out{
      DiscreteDistribution(amplitude, std::move(points), std::move(masses)),
      j.value("capacity_mi", std::nan("")), j.value("capacity_py0", std::nan("")),
      j.value("kkt_gap", std::nan(""))};
  return out;
}

std::string bounds_json(const BoundsReport& report,
                        const RunManifest& manifest) {
  std::string out = "{";
  out += "\"amplitude\":" + format_double(report.amplitude);
  out += ",\"units\":\"nats\"";
  out += ",\"capacity_used\":" + format_double(report.capacity_used);
  out += ",\"capacity_source\":\"" + report.capacity_source + "\"";
  out += ",\"eta_upper\":" + format_double(report.eta_upper);
  out += ",\"universal_mass_bound\":" + format_double(report.universal_mass_bound);
  out += ",\"location_mass_bounds\":[";
  for (std::size_t i = 0; i < report.location_mass_bounds.size(); ++i) {
    const auto& lb = report.location_mass_bounds[i];
    if (i) out += ',';
    out += "{\"x\":" + format_double(lb.x) + ",\"bound\":" + format_double(lb.bound) +
           ",\"mass\":" + format_double(lb.mass) + "}";
  }
  out += ']';
  out += ",\"largest_mass_lower_log\":";
  out += report.largest_mass_lower_log
             ? format_double(*report.largest_mass_lower_log)
             : "null";
  out += ",\"interior_bracket\":";
  if (report.interior_bracket) {
    const auto& b = *report.interior_bracket;
    out += "{\"outer_lo\":" + format_double(b.outer_lo) +
           ",\"inner_lo\":" + format_double(b.inner_lo) +
           ",\"inner_hi\":" + format_double(b.inner_hi) +
           ",\"outer_hi\":" + format_double(b.outer_hi) + "}";
  } else {
    out += "null";
  }
  out += ",\"support_lower\":" + format_double(report.support_lower);
  out += ",\"support_upper_implicit\":";
  out += report.support_upper_implicit
             ? std::to_string(*report.support_upper_implicit)
             : "null";
  out += ",\"support_upper_explicit\":";
  out += report.support_upper_explicit
             ? format_double(*report.support_upper_explicit)
             : "null";
  out += ",\"asymptotic_capacity\":" + format_double(report.asymptotic_capacity);
  out += ",\"mass_identity_residuals\":";
  append_array(out, report.mass_identity_residuals);
  out += ",\"checks\":[";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    if (i) out += ',';
    out += "{\"name\":\"" + c.name + "\",\"applicable\":" +
           (c.applicable ? "true" : "false") +
           ",\"passed\":" + (c.passed ? "true" : "false") + "}";
  }
  out += ']';
  out += ",\"all_applicable_passed\":";
  out += report.all_applicable_passed() ? "true" : "false";
  out += ",\"manifest\":" + manifest_json(manifest);
  out += "}\n";
  return out;
}

SweepRow build_sweep_row(const SolverResult& result) {
  OutputModel model(result.distribution, kReportEpsilon);
  SweepRow row{result, detection_report(model),
               evaluate_bounds(result.distribution.amplitude(),
                               result.capacity_mi, "solver", &model)};
  return row;
}

std::string sweep_csv_header() {
  return "A,capacity_nats,n_points,p0,pA,x_interior_min,x_interior_max,pe,hx,"
         "hxy,eta_upper,universal_mass_bound,support_lower,"
         "support_upper_implicit,checks_passed";
}

std::string sweep_csv_line(const SweepRow& row) {
  const DiscreteDistribution& d = row.solver.distribution;
  const auto& xs = d.locations();
  const auto& ps = d.masses();
  const double nan = std::nan("");

  const bool has_zero = xs.front() == 0.0;
  const bool has_top = d.has_mass_at_amplitude();
  double interior_min = nan, interior_max = nan;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if ((i == 0 && has_zero) || (i + 1 == xs.size() && has_top)) continue;
    if (std::isnan(interior_min)) interior_min = xs[i];
    interior_max = xs[i];
  }

  std::string out;
  out += format_double(d.amplitude());
  out += ',' + format_double(row.solver.capacity_mi);
  out += ',' + std::to_string(d.size());
  out += ',' + format_double(has_zero ? ps.front() : nan);
  out += ',' + format_double(has_top ? ps.back() : nan);
  out += ',' + format_double(interior_min);
  out += ',' + format_double(interior_max);
  out += ',' + format_double(row.detection.pe);
  out += ',' + format_double(row.detection.hx);
  out += ',' + format_double(row.detection.hxy);
  out += ',' + format_double(row.bounds.eta_upper);
  out += ',' + format_double(row.bounds.universal_mass_bound);
  out += ',' + format_double(row.bounds.support_lower);
  out += ',';
  out += row.bounds.support_upper_implicit
             ? std::to_string(*row.bounds.support_upper_implicit)
             : "nan";
  out += ',';
  out += row.bounds.all_applicable_passed() ? '1' : '0';
  return out;
}

}  // namespace poissoncap
