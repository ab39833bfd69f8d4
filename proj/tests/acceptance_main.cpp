// Acceptance suite: every release criterion evaluated end to end, one
// PASS/FAIL line per criterion. Returns the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "poissoncap/bounds.hpp"
#include "poissoncap/detection.hpp"
#include "poissoncap/information.hpp"
#include "poissoncap/report_io.hpp"
#include "poissoncap/solver.hpp"
#include "test_util.hpp"

using namespace poissoncap;

namespace {

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%-4s %s  %s\n", id.c_str(), ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---- 1. closed-form regime ------------------------------------------------
void criterion_closed_form() {
  bool ok = true;
  std::string detail;
  for (double amplitude : {0.25, 0.5, 1.0, 2.0, 3.0}) {
    const auto start = std::chrono::steady_clock::now();
    const SolverResult r = solve_capacity(amplitude, SolverConfig{});
    const double elapsed = seconds_since(start);
    const double pa = testutil::binary_top_mass_ref(amplitude);
    const double capacity = testutil::binary_capacity_ref(amplitude);
    bool here = r.converged && r.distribution.size() == 2;
    here = here && r.distribution.locations().front() == 0.0;
    here = here &&
           std::abs(r.distribution.locations().back() - amplitude) <= 1e-9;
    here = here && std::abs(r.distribution.masses()[0] - (1.0 - pa)) <= 1e-4;
    here = here && std::abs(r.distribution.masses()[1] - pa) <= 1e-4;
    here = here && std::abs(r.capacity_mi - capacity) <= 1e-4;
    here = here && elapsed <= 10.0;
    if (!here)
      detail += " A=" + std::to_string(amplitude) + " failed (" +
                std::to_string(elapsed) + "s);";
    ok = ok && here;
  }
  report("1", ok,
         "closed-form regime on A in {0.25,0.5,1,2,3}, masses/capacity to "
         "1e-4" + detail);
}

// ---- 2. reference capacity points ------------------------------------------
void criterion_reference_points(const std::vector<SweepRow>& sweep,
                                double sweep_seconds) {
  const SolverResult r103 = solve_capacity(1.030303, SolverConfig{});
  const bool ok103 =
      r103.converged && std::abs(r103.capacity_mi - 0.309719) <= 5e-3;

  const SweepRow* row15 = nullptr;
  for (const SweepRow& row : sweep)
    if (std::abs(row.solver.distribution.amplitude() - 15.0) < 1e-9)
      row15 = &row;
  const bool ok15 = row15 != nullptr && row15->solver.converged &&
                    std::abs(row15->solver.capacity_mi - 1.044876) <= 2e-2;
  const bool ok_time = sweep_seconds <= 900.0;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "C(1.030303)=%.6f (target 0.309719+-5e-3), C(15)=%.6f "
                "(target 1.044876+-2e-2), sweep %.0fs (cap 900s)",
                r103.capacity_mi,
                row15 ? row15->solver.capacity_mi : std::nan(""),
                sweep_seconds);
  report("2", ok103 && ok15 && ok_time, buf);
}

// ---- 3. binary threshold ---------------------------------------------------
void criterion_threshold() {
  const double abar = binary_threshold();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "binary threshold %.4f in [3.36, 3.38]",
                abar);
  report("3", abar >= 3.36 && abar <= 3.38, buf);
}

// ---- 4. capacity identity over the sweep ------------------------------------
void criterion_capacity_identity(const std::vector<SweepRow>& sweep) {
  int converged = 0;
  int violations = 0;
  double worst = 0.0;
  for (const SweepRow& row : sweep) {
    if (!row.solver.converged) continue;
    ++converged;
    const double gap =
        std::abs(row.solver.capacity_mi - row.solver.capacity_py0);
    worst = std::max(worst, gap);
    if (gap > 2.0 * SolverConfig{}.kkt_tol) ++violations;
  }
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "|I - (-ln P_Y(0))| <= 2e-7 on %d converged solves (%d rows), "
                "worst %.3g, %d violations",
                converged, static_cast<int>(sweep.size()), worst, violations);
  report("4", violations == 0 && converged > 0, buf);
}

// ---- 5. detection reproduction ----------------------------------------------
void criterion_detection() {
  OutputModel m(binary_closed_form(0.377777777777778), kReportEpsilon);
  const double pe = error_probability(m);
  const double hxy = equivocation(m);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "A=0.377778: Pe=%.6f (0.264434+-1e-3), H(X|Y)=%.6f "
                "(0.537432+-1e-3)",
                pe, hxy);
  report("5", std::abs(pe - 0.264434) <= 1e-3 && std::abs(hxy - 0.537432) <= 1e-3,
         buf);
}

// ---- 6. bound suite over the sweep -------------------------------------------
void criterion_bound_suite(const std::vector<SweepRow>& sweep) {
  int converged = 0;
  int failures = 0;
  std::string bad;
  for (const SweepRow& row : sweep) {
    if (!row.solver.converged) continue;
    ++converged;
    if (!row.bounds.all_applicable_passed()) {
      ++failures;
      bad += " A=" +
             std::to_string(row.solver.distribution.amplitude()).substr(0, 5);
    }
  }
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "mass/support/bracket/equality checks on %d converged solves, "
                "%d failures%s",
                converged, failures, bad.c_str());
  report("6", failures == 0 && converged > 0, buf);
}

// ---- 7. gradient correctness ---------------------------------------------------
void criterion_gradient() {
  std::mt19937_64 rng(777);
  const double h = 1e-5;
  int checked = 0;
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_real_distribution<double> amp_dist(0.5, 10.0);
    const double amplitude = amp_dist(rng);
    const DiscreteDistribution d =
        testutil::random_distribution(rng, amplitude, 6, trial % 2 == 0);
    OutputModel m(d, 1e-14);
    const Gradient g = gradient(m);
    const int k_lim = testutil::output_limit(amplitude);
    const std::vector<double>& xs = d.locations();
    const std::vector<double>& ps = d.masses();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<double> hi = ps, lo = ps;
      hi[i] += h;
      lo[i] -= h;
      const double fd_mass =
          (testutil::mi_raw(xs, hi, k_lim) - testutil::mi_raw(xs, lo, k_lim)) /
          (2.0 * h);
      const double err_mass = std::abs(g.d_mass[i] - fd_mass) /
                              std::max(1.0, std::abs(g.d_mass[i]));
      worst = std::max(worst, err_mass);
      ++checked;
      if (err_mass > 1e-5) ++failures;
      if (xs[i] > 0.05) {
        std::vector<double> xhi = xs, xlo = xs;
        xhi[i] += h;
        xlo[i] -= h;
        const double fd_loc = (testutil::mi_raw(xhi, ps, k_lim) -
                               testutil::mi_raw(xlo, ps, k_lim)) /
                              (2.0 * h);
        const double err_loc = std::abs(g.d_location[i] - fd_loc) /
                               std::max(1.0, std::abs(g.d_location[i]));
        worst = std::max(worst, err_loc);
        ++checked;
        if (err_loc > 1e-5) ++failures;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "analytic vs central differences on 100 random laws "
                "(%d components), worst rel err %.3g, %d failures",
                checked, worst, failures);
  report("7", failures == 0, buf);
}

// ---- 8. numerical identities ------------------------------------------------------
void criterion_identities() {
  std::mt19937_64 rng(888);
  int cases = 0;
  int failures = 0;

  // Posterior-mean dual route.
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_real_distribution<double> amp_dist(0.5, 15.0);
    const DiscreteDistribution d =
        testutil::random_distribution(rng, amp_dist(rng), 8, trial % 2 == 0);
    OutputModel m(d, 1e-12);
    for (int y = 0; y <= std::min(m.k_max(), 12); ++y) {
      const double direct = m.posterior_mean(y);
      const double ratio = (y + 1) * std::exp(m.log_py(y + 1) - m.log_py(y));
      ++cases;
      if (std::abs(direct - ratio) > 1e-9 * std::max(1.0, std::abs(direct)))
        ++failures;
    }
  }

  // Decomposition i = G + x ln x - x.
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_real_distribution<double> amp_dist(0.4, 12.0);
    const double amplitude = amp_dist(rng);
    const DiscreteDistribution d =
        testutil::random_distribution(rng, amplitude, 7, trial % 2 == 0);
    OutputModel m(d, 1e-13);
    std::uniform_real_distribution<double> x_dist(0.0, amplitude);
    const double x = trial % 10 == 0 ? 0.0 : x_dist(rng);
    double g = 0.0;
    for (int k = 0; k <= m.k_max(); ++k) {
      const double w = testutil::pmf_ref(x, k);
      if (w > 0.0) g += w * (-std::lgamma(k + 1.0) - m.log_py(k));
    }
    const double xlnx = x > 0.0 ? x * std::log(x) : 0.0;
    ++cases;
    if (std::abs(info_density(m, x) - (g + xlnx - x)) > 1e-9) ++failures;
  }

  // Second derivative against central differences of the first.
  const double h = 1e-5;
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_real_distribution<double> amp_dist(0.5, 10.0);
    const double amplitude = amp_dist(rng);
    const DiscreteDistribution d =
        testutil::random_distribution(rng, amplitude, 6, trial % 2 == 0);
    OutputModel m(d, 1e-13);
    std::uniform_real_distribution<double> x_dist(0.05, amplitude - h);
    const double x = x_dist(rng);
    const double fd = (info_density_derivative(m, x + h) -
                       info_density_derivative(m, x - h)) /
                      (2.0 * h);
    ++cases;
    if (std::abs(info_density_second_derivative(m, x) - fd) > 1e-4) ++failures;
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "posterior dual route / decomposition / curvature: %d "
                "randomized cases, %d failures",
                cases, failures);
  report("8", failures == 0 && cases >= 1000, buf);
}

// ---- 9. oscillation demo ---------------------------------------------------------
void criterion_oscillation() {
  constexpr double kPi = 3.1415926535897931;
  std::vector<double> xi(41);
  for (int k = 0; k <= 40; ++k)
    xi[k] = std::sin(kPi * k / 3.0) + std::sin(kPi * k / 13.0);
  std::vector<double> transform(2000);
  for (int j = 0; j < 2000; ++j) {
    const double x = 40.0 * j / 1999.0;
    transform[j] = poisson_transform(xi, x);
  }
  const int changes = sign_changes(xi);
  const int crossings = sign_changes(transform);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "Poisson transform crossings %d <= input sign changes %d",
                crossings, changes);
  report("9", crossings <= changes, buf);
}

// ---- 10. psi machinery ---------------------------------------------------------
void criterion_psi(const std::vector<SweepRow>& sweep) {
  int converged = 0;
  int failures = 0;
  double worst_psi0 = 0.0;
  for (const SweepRow& row : sweep) {
    if (!row.solver.converged) continue;
    ++converged;
    OutputModel m(row.solver.distribution, kReportEpsilon);
    const PsiSequence psi = psi_sequence(m, row.solver.capacity_mi,
                                         row.solver.distribution.top_mass());
    const int changes = sign_changes(psi.values);
    const bool size_ok =
        static_cast<int>(row.solver.distribution.size()) <= changes + 2;
    worst_psi0 = std::max(worst_psi0, std::abs(psi.values[0]));
    if (!size_ok || std::abs(psi.values[0]) > 1e-6) ++failures;
  }
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "|supp| <= S(psi)+2 and |psi(0)| <= 1e-6 on %d converged "
                "solves, worst |psi(0)| %.3g, %d failures",
                converged, worst_psi0, failures);
  report("10", failures == 0 && converged > 0, buf);
}

// ---- log-domain spot checks at (A, C) = (100, 1.5768) ---------------------------
void criterion_log_domain() {
  // Reference values computed once with 60-digit decimal arithmetic.
  const double expected_mass_log = -11341.513455818357687;
  const double expected_support = 11442.936655818357687;
  const auto mass_log = largest_mass_lower_bound_log(100.0, 1.5768);
  const auto support = support_size_upper_explicit(100.0, 1.5768);
  const bool ok = mass_log.has_value() && support.has_value() &&
                  std::abs(*mass_log - expected_mass_log) <= 1e-9 &&
                  std::abs(*support - expected_support) <= 1e-9;
  char buf[192];
  std::snprintf(
      buf, sizeof(buf),
      "log-domain bounds at (A,C)=(100,1.5768): mass-log err %.3g, "
      "support err %.3g (tol 1e-9)",
      mass_log ? std::abs(*mass_log - expected_mass_log) : std::nan(""),
      support ? std::abs(*support - expected_support) : std::nan(""));
  report("11", ok, buf);
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerances pinned in code)\n");

  criterion_closed_form();

  const auto sweep_start = std::chrono::steady_clock::now();
  const std::vector<SolverResult> solves =
      sweep_capacity(0.1, 15.0, 0.1, SolverConfig{});
  std::vector<SweepRow> sweep;
  sweep.reserve(solves.size());
  for (const SolverResult& r : solves) sweep.push_back(build_sweep_row(r));
  const double sweep_seconds = seconds_since(sweep_start);
  int not_converged = 0;
  for (const SweepRow& row : sweep)
    if (!row.solver.converged) ++not_converged;
  std::printf("info: sweep A in [0.1, 15] step 0.1 -> %d rows, %d not "
              "converged, %.0fs\n",
              static_cast<int>(sweep.size()), not_converged, sweep_seconds);
  for (const SweepRow& row : sweep) {
    if (std::abs(row.solver.distribution.amplitude() - 15.0) < 1e-9)
      std::printf("info: at A=15: Pe=%.6f (reference curve 0.118488), "
                  "H(X|Y)=%.6f, |supp|=%d\n",
                  row.detection.pe, row.detection.hxy,
                  static_cast<int>(row.solver.distribution.size()));
    if (!row.solver.converged)
      std::printf("info: not converged at A=%.2f: gap=%.3g iters=%d "
                  "|supp|=%d\n",
                  row.solver.distribution.amplitude(), row.solver.kkt_gap,
                  row.solver.iterations,
                  static_cast<int>(row.solver.distribution.size()));
  }

  criterion_reference_points(sweep, sweep_seconds);
  criterion_threshold();
  criterion_capacity_identity(sweep);
  criterion_detection();
  criterion_bound_suite(sweep);
  criterion_gradient();
  criterion_identities();
  criterion_oscillation();
  criterion_psi(sweep);
  criterion_log_domain();

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
