// Persistence for solver results and reports: the distribution JSON schema,
// bounds/verification reports, and the sweep CSV. Serialization is
// deterministic (fixed key order, decimal doubles with 17 significant
// digits), so identical runs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

#include "poissoncap/bounds.hpp"
#include "poissoncap/detection.hpp"
#include "poissoncap/solver.hpp"

namespace poissoncap {

inline constexpr const char* kToolVersion = "0.1.0";
// Output truncation for reporting paths (the solver itself runs at 1e-14).
inline constexpr double kReportEpsilon = 1e-10;

struct RunManifest {
  std::string command;
  SolverConfig config;
  std::string tool_version = kToolVersion;
  std::string units = "nats";
  Truncation truncation;
};

// Shortest-faithful decimal with up to 17 significant digits ("%.17g").
std::string format_double(double v);

std::string manifest_json(const RunManifest& manifest);

// {"amplitude": ..., "units": "nats", "points": [...], "masses": [...],
//  "capacity_mi": ..., "capacity_py0": ..., "kkt_gap": ..., "manifest": {...}}
std::string distribution_json(const SolverResult& result,
                              const RunManifest& manifest);

struct ParsedDistribution {
  DiscreteDistribution distribution;
  double capacity_mi = 0.0;
  double capacity_py0 = 0.0;
  double kkt_gap = 0.0;
};
// Parses the schema above; throws std::invalid_argument on malformed input.
ParsedDistribution parse_distribution_json(const std::string& text);

std::string bounds_json(const BoundsReport& report,
                        const RunManifest& manifest);

// One solved amplitude with its derived reports; the unit of the sweep CSV.
struct SweepRow {
  SolverResult solver;
  DetectionReport detection;
  BoundsReport bounds;
};
SweepRow build_sweep_row(const SolverResult& result);

std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& row);

}  // namespace poissoncap
