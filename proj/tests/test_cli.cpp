#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "poissoncap/cli.hpp"
#include "poissoncap/report_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using poissoncap::cli::run;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("poissoncap_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Captures std::cout for subcommands that print reports.
struct CoutCapture {
  std::ostringstream buffer;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(buffer.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
};

}  // namespace

TEST_CASE("solve writes a parsable distribution and verify accepts it") {
  const std::string path = temp_path("dist1.json");
  CHECK(run({"solve", "--amplitude", "1.0", "--out", path}) == 0);

  const poissoncap::ParsedDistribution parsed =
      poissoncap::parse_distribution_json(slurp(path));
  CHECK(parsed.distribution.size() == 2);
  CHECK(std::abs(parsed.capacity_mi - testutil::binary_capacity_ref(1.0)) <
        1e-4);

  CoutCapture capture;
  CHECK(run({"verify", path, "--tol", "1e-6"}) == 0);
  CHECK(capture.buffer.str().find("\"passed\":true") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("reruns are byte-identical and round trips are stable") {
  const std::string path_a = temp_path("rerun_a.json");
  const std::string path_b = temp_path("rerun_b.json");
  CHECK(run({"solve", "--amplitude", "2.0", "--out", path_a}) == 0);
  CHECK(run({"solve", "--amplitude", "2.0", "--out", path_b}) == 0);
  const std::string text_a = slurp(path_a);
  CHECK(text_a == slurp(path_b));

  // Parse then re-serialize: numbers survive bit-exactly.
  const poissoncap::ParsedDistribution parsed =
      poissoncap::parse_distribution_json(text_a);
  poissoncap::SolverResult result{parsed.distribution, parsed.capacity_mi,
                                  parsed.capacity_py0, parsed.kkt_gap, 0,
                                  true};
  poissoncap::RunManifest manifest;
  manifest.command = "solve";
  manifest.truncation = poissoncap::truncation_index(2.0, 1e-14);
  const std::string reserialized =
      poissoncap::distribution_json(result, manifest);
  CHECK(reserialized == text_a);
  fs::remove(path_a);
  fs::remove(path_b);
}

TEST_CASE("sweep reproduces the closed-form capacity curve") {
  const std::string path = temp_path("sweep.csv");
  CHECK(run({"sweep", "--min", "0.1", "--max", "3.3", "--delta", "0.1",
             "--out", path}) == 0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // manifest comment
  CHECK(line.rfind("# manifest:", 0) == 0);
  std::getline(in, line);  // header
  CHECK(line == poissoncap::sweep_csv_header());
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const double amplitude = std::stod(cell);
    std::getline(ss, cell, ',');
    const double capacity = std::stod(cell);
    CHECK(std::abs(capacity - testutil::binary_capacity_ref(amplitude)) <=
          1e-4);
    ++rows;
  }
  CHECK(rows == 33);
  fs::remove(path);
}

TEST_CASE("bounds subcommand") {
  const std::string dist_path = temp_path("dist_b.json");
  const std::string bounds_path = temp_path("bounds.json");
  CHECK(run({"solve", "--amplitude", "1.0", "--out", dist_path}) == 0);
  CHECK(run({"bounds", "--amplitude", "1.0", "--from", dist_path, "--out",
             bounds_path}) == 0);
  const std::string report = slurp(bounds_path);
  CHECK(report.find("\"all_applicable_passed\":true") != std::string::npos);
  CHECK(report.find("\"capacity_source\":\"solver\"") != std::string::npos);

  {
    CoutCapture capture;
    CHECK(run({"bounds", "--amplitude", "100.0", "--asymptotic"}) == 0);
    CHECK(capture.buffer.str().find("\"largest_mass_lower_log\":") !=
          std::string::npos);
  }
  {
    CoutCapture capture;
    CHECK(run({"bounds", "--amplitude", "5.0", "--capacity", "0.71"}) == 0);
  }

  // Capacity source flags are mutually exclusive.
  CHECK(run({"bounds", "--amplitude", "1.0", "--capacity", "0.3", "--from",
             dist_path}) == 2);
  CHECK(run({"bounds", "--amplitude", "1.0"}) == 2);
  fs::remove(dist_path);
  fs::remove(bounds_path);
}

TEST_CASE("verify flags a tampered capacity") {
  const std::string path = temp_path("tampered.json");
  CHECK(run({"solve", "--amplitude", "1.0", "--out", path}) == 0);
  std::string text = slurp(path);
  const std::string needle = "\"capacity_mi\":";
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size() + 4, needle + "0.99");
  std::ofstream(path, std::ios::binary) << text;
  CoutCapture capture;
  CHECK(run({"verify", path}) == 1);
  fs::remove(path);
}

TEST_CASE("demo-oscillation honors the sign-change bound") {
  const std::string path = temp_path("osc.csv");
  CoutCapture capture;
  CHECK(run({"demo-oscillation", "--out", path}) == 0);
  const std::string summary = capture.buffer.str();
  CHECK(summary.find("\"holds\":true") != std::string::npos);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2002);  // manifest + header + 2000 grid rows
  fs::remove(path);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"solve"}) == 2);                       // missing --amplitude
  CHECK(run({"solve", "--amplitude", "-1"}) == 2);  // invalid value
  CHECK(run({"verify", temp_path("missing_file.json")}) == 2);
}
