#include "poissoncap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "poissoncap/bounds.hpp"
#include "poissoncap/information.hpp"

namespace poissoncap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSolverEpsilon = 1e-14;  // output truncation for solver work
constexpr double kPinRadius = 1e-8;       // locations below are held at 0
constexpr double kMiSlack = 1e-10;        // tolerated decrease per accepted step

struct Iterate {
  std::vector<double> locations;
  std::vector<double> masses;
};

void sort_iterate(Iterate& it) {
  const std::size_t n = it.locations.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return it.locations[a] < it.locations[b];
  });
  Iterate out;
  out.locations.reserve(n);
  out.masses.reserve(n);
  for (std::size_t i : idx) {
    out.locations.push_back(it.locations[i]);
    out.masses.push_back(it.masses[i]);
  }
  it = std::move(out);
}

// Merges sorted locations closer than radius, left to right in one pass.
// Merged points sit at the mass-weighted average position; positions inside
// the pin radius snap to the origin.
bool merge_pass(Iterate& it, double radius) {
  bool merged = false;
  std::vector<double> xs, ps;
  xs.reserve(it.locations.size());
  ps.reserve(it.locations.size());
  for (std::size_t i = 0; i < it.locations.size(); ++i) {
    const double x = it.locations[i];
    const double p = it.masses[i];
    if (!xs.empty() && x - xs.back() < radius) {
      const double w = ps.back() + p;
      xs.back() = w > 0.0 ? (xs.back() * ps.back() + x * p) / w
                          : 0.5 * (xs.back() + x);
      ps.back() = w;
      merged = true;
    } else {
      xs.push_back(x);
      ps.push_back(p);
    }
  }
  for (double& x : xs)
    if (x < kPinRadius) x = 0.0;
  it.locations = std::move(xs);
  it.masses = std::move(ps);
  return merged;
}

DiscreteDistribution positive_part(const Iterate& it, double amplitude) {
  std::vector<double> xs, ps;
  xs.reserve(it.locations.size());
  ps.reserve(it.locations.size());
  for (std::size_t i = 0; i < it.locations.size(); ++i) {
    if (it.masses[i] > 0.0) {
      xs.push_back(it.locations[i]);
      ps.push_back(it.masses[i]);
    }
  }
  return DiscreteDistribution(amplitude, std::move(xs), std::move(ps));
}

std::vector<double> project_simplex(std::vector<double> u) {
  std::vector<double> s = u;
  std::sort(s.begin(), s.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    cum += s[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (s[j] - t > 0.0) theta = t;
  }
  for (double& x : u) x = std::max(x - theta, 0.0);
  return u;
}

double info_at_point(const OutputModel& m, double x) {
  return x == 0.0 ? -m.log_py(0) : info_density(m, x);
}

// max over the uniform grid and the support of i(x) - C.
double grid_gap(const OutputModel& m, double capacity, int grid_points) {
  const double amplitude = m.source().amplitude();
  double gap = -kInf;
  const int n = std::max(grid_points, 2);
  for (int j = 0; j < n; ++j) {
    const double x =
        std::min(amplitude * j / static_cast<double>(n - 1), amplitude);
    gap = std::max(gap, info_at_point(m, x) - capacity);
  }
  for (double x : m.source().locations())
    gap = std::max(gap, info_at_point(m, x) - capacity);
  return gap;
}

int support_cap(double amplitude, const SolverConfig& cfg) {
  return cfg.n_points > 0 ? cfg.n_points
                          : static_cast<int>(std::ceil(amplitude)) + 4;
}

// Spare support point at the midpoint of the widest gap, mass
// 10 * prune_mass, everything renormalized. Skipped when the allocation cap
// is reached or the gap is too narrow to host a distinct point.
void inject_spare(Iterate& it, double amplitude, const SolverConfig& cfg) {
  if (static_cast<int>(it.locations.size()) >= support_cap(amplitude, cfg))
    return;
  std::size_t widest = 0;
  double widest_gap = 0.0;
  for (std::size_t i = 0; i + 1 < it.locations.size(); ++i) {
    const double gap = it.locations[i + 1] - it.locations[i];
    if (gap > widest_gap) {
      widest_gap = gap;
      widest = i;
    }
  }
  const double radius = cfg.merge_delta * amplitude;
  if (widest_gap <= 2.0 * radius) return;
  const double x_new = 0.5 * (it.locations[widest] + it.locations[widest + 1]);
  const double p_new = 10.0 * cfg.prune_mass;
  it.locations.insert(it.locations.begin() + static_cast<long>(widest) + 1,
                      x_new);
  it.masses.insert(it.masses.begin() + static_cast<long>(widest) + 1, p_new);
  const double scale = 1.0 / (1.0 + p_new);
  for (double& p : it.masses) p *= scale;
}

SolverResult refine_binary(double amplitude, const SolverConfig& cfg) {
  return ascend(binary_closed_form(amplitude), cfg);
}

// Location of the worst optimality violation of a solved law; the natural
// seed for a support point the midpoint rule failed to discover.
double violation_argmax(const SolverResult& r, const SolverConfig& cfg) {
  const double amplitude = r.distribution.amplitude();
  OutputModel m(r.distribution, truncation_index(amplitude, kSolverEpsilon));
  const int n = std::max(cfg.grid_points, 2);
  double best_x = 0.5 * amplitude;
  double best = -kInf;
  for (int j = 0; j < n; ++j) {
    const double x =
        std::min(amplitude * j / static_cast<double>(n - 1), amplitude);
    const double value = info_at_point(m, x) - r.capacity_mi;
    if (value > best) {
      best = value;
      best_x = x;
    }
  }
  return best_x;
}

// Spare at an explicit location, same mass/renormalization as inject_spare.
// Skipped when the location falls within min_separation of an existing
// point: a violation next to a live point means that point has not settled
// yet, not that another one is missing.
bool inject_spare_at(Iterate& it, double x_new, double min_separation,
                     const SolverConfig& cfg) {
  for (double x : it.locations)
    if (std::abs(x - x_new) <= min_separation) return false;
  auto pos = std::upper_bound(it.locations.begin(), it.locations.end(), x_new);
  const double p_new = 10.0 * cfg.prune_mass;
  it.masses.insert(it.masses.begin() + (pos - it.locations.begin()), p_new);
  it.locations.insert(pos, x_new);
  const double scale = 1.0 / (1.0 + p_new);
  for (double& p : it.masses) p *= scale;
  return true;
}

// Warm-start continuation from (current, a_current) up to a_target. Each
// step injects one spare at the midpoint of the widest support gap; when a
// step fails to converge, it is retried with the spare seeded at the worst
// violation of the failed iterate instead.
SolverResult advance_chain(SolverResult current, double a_current,
                           double a_target, const SolverConfig& cfg) {
  while (a_current < a_target - 1e-12) {
    const double a_next =
        std::min(a_current + cfg.continuation_delta, a_target);
    Iterate warm{current.distribution.locations(),
                 current.distribution.masses()};
    inject_spare(warm, a_next, cfg);
    DiscreteDistribution init(a_next, std::move(warm.locations),
                              std::move(warm.masses));
    current = ascend(init, cfg);
    for (int retry = 0; retry < 2 && !current.converged; ++retry) {
      Iterate again{current.distribution.locations(),
                    current.distribution.masses()};
      if (static_cast<int>(again.locations.size()) <
          support_cap(a_next, cfg)) {
        const double min_separation =
            std::max(2.0 * cfg.merge_delta, 0.05) * a_next;
        inject_spare_at(again, violation_argmax(current, cfg), min_separation,
                        cfg);
      }
      DiscreteDistribution retry_init(a_next, std::move(again.locations),
                                      std::move(again.masses));
      current = ascend(retry_init, cfg);
    }
    a_current = a_next;
  }
  return current;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> project_feasible(
    std::vector<double> locations, std::vector<double> masses,
    double amplitude) {
  if (locations.size() != masses.size())
    throw std::invalid_argument("project_feasible: size mismatch");
  for (double& x : locations) x = std::clamp(x, 0.0, amplitude);
  return {std::move(locations), project_simplex(std::move(masses))};
}

Gradient gradient(const OutputModel& m) {
  const auto& xs = m.source().locations();
  const auto& ps = m.source().masses();
  Gradient g;
  g.d_mass.resize(xs.size());
  g.d_location.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g.d_mass[i] = info_at_point(m, xs[i]) - 1.0;
    g.d_location[i] =
        xs[i] > kPinRadius
            ? ps[i] * info_density_derivative(m, xs[i])
            : 0.0;
  }
  return g;
}

KktReport kkt_verify(const OutputModel& m, double capacity_nats,
                     int grid_points, double tol) {
  if (grid_points < 2)
    throw std::invalid_argument("kkt_verify: grid_points must be >= 2");
  KktReport report;
  report.grid_size = grid_points;
  report.tol = tol;
  report.max_violation = grid_gap(m, capacity_nats, grid_points);
  for (double x : m.source().locations())
    report.support_residuals.push_back(
        std::abs(info_at_point(m, x) - capacity_nats));
  report.passed = report.max_violation <= tol;
  for (double r : report.support_residuals)
    report.passed = report.passed && r <= tol;
  return report;
}

SolverResult ascend(const DiscreteDistribution& initial,
                    const SolverConfig& cfg, const AscentObserver& observer) {
  const double amplitude = initial.amplitude();
  const Truncation trunc = truncation_index(amplitude, kSolverEpsilon);
  const double merge_radius = cfg.merge_delta * amplitude;

  Iterate cur{initial.locations(), initial.masses()};
  merge_pass(cur, merge_radius);

  OutputModel model(positive_part(cur, amplitude), trunc);
  double mi = mutual_information(model);
  if (observer) observer({0, mi, false});

  double step = cfg.step_size;
  int good_steps = 0;
  double gap = kInf;
  int last_full_check = std::numeric_limits<int>::min() / 2;
  int full_check_wait = 0;
  int iter = 0;

  std::vector<double> info_at;
  for (iter = 0; iter <= cfg.max_iter; ++iter) {
    const std::size_t n = cur.locations.size();
    info_at.resize(n);
    double support_residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      info_at[i] = info_at_point(model, cur.locations[i]);
      if (cur.masses[i] > 0.0)
        support_residual =
            std::max(support_residual, std::abs(info_at[i] - mi));
    }

    // Full-grid KKT check: cadence-limited while the cheap support residual
    // is already tight, forced periodically otherwise.
    const bool residual_ready = support_residual <= cfg.kkt_tol;
    if ((residual_ready && iter - last_full_check >= full_check_wait) ||
        iter - last_full_check >= 2000 || iter == cfg.max_iter) {
      gap = grid_gap(model, mi, cfg.grid_points);
      last_full_check = iter;
      if (gap <= cfg.kkt_tol && residual_ready) break;
      full_check_wait = 200;
    }
    if (iter == cfg.max_iter) break;

    Iterate cand;
    cand.locations.resize(n);
    cand.masses.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = cur.locations[i];
      double dl = 0.0;
      if (x > kPinRadius && cur.masses[i] > 0.0) {
        dl = cur.masses[i] * info_density_derivative(model, x);
        if (!std::isfinite(dl)) dl = 0.0;
      }
      const double dm = std::isfinite(info_at[i]) ? info_at[i] - 1.0 : 1e9;
      cand.locations[i] = std::clamp(x + step * dl, 0.0, amplitude);
      if (cand.locations[i] < kPinRadius) cand.locations[i] = 0.0;
      cand.masses[i] = cur.masses[i] + step * dm;
    }
    cand.masses = project_simplex(std::move(cand.masses));
    sort_iterate(cand);
    const bool merged = merge_pass(cand, merge_radius);

    OutputModel cand_model(positive_part(cand, amplitude), trunc);
    const double cand_mi = mutual_information(cand_model);

    if (!merged && cand_mi < mi - kMiSlack) {
      step *= 0.5;
      good_steps = 0;
      if (step < 1e-15 * cfg.step_size) break;  // stalled
      continue;
    }
    cur = std::move(cand);
    model = std::move(cand_model);
    mi = cand_mi;
    if (++good_steps >= 10) {
      step = cfg.step_size;
      good_steps = 0;
    }
    if (observer) observer({iter + 1, mi, merged});
  }

  // Terminal pruning: drop sub-threshold masses and re-project the rest.
  Iterate pruned;
  for (std::size_t i = 0; i < cur.locations.size(); ++i) {
    if (cur.masses[i] >= cfg.prune_mass) {
      pruned.locations.push_back(cur.locations[i]);
      pruned.masses.push_back(cur.masses[i]);
    }
  }
  if (pruned.locations.empty()) pruned = cur;
  auto [final_locs, final_masses] = project_feasible(
      std::move(pruned.locations), std::move(pruned.masses), amplitude);
  DiscreteDistribution final_dist(amplitude, std::move(final_locs),
                                  std::move(final_masses));
  OutputModel final_model(final_dist, trunc);
  const double final_mi = mutual_information(final_model);
  const double final_gap = grid_gap(final_model, final_mi, cfg.grid_points);
  double final_residual = 0.0;
  for (double x : final_dist.locations())
    final_residual = std::max(final_residual,
                              std::abs(info_at_point(final_model, x) - final_mi));

  // Convergence is a property of the returned law, not of the loop exit:
  // the pruned final state must pass both gates itself.
  SolverResult result{std::move(final_dist), final_mi, -final_model.log_py(0),
                      final_gap, iter,
                      final_gap <= cfg.kkt_tol &&
                          final_residual <= cfg.kkt_tol};
  return result;
}

SolverResult solve_capacity(double amplitude, const SolverConfig& cfg) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("solve_capacity: amplitude must be > 0");
  // The threshold is located to 1e-3; stay strictly inside the two-point
  // regime and let continuation (which can grow the support) cover the rest.
  const double abar = binary_threshold() - 1e-3;
  if (amplitude <= abar) return refine_binary(amplitude, cfg);
  return advance_chain(refine_binary(abar, cfg), abar, amplitude, cfg);
}

std::vector<SolverResult> sweep_capacity(double a_min, double a_max,
                                         double delta,
                                         const SolverConfig& cfg) {
  if (!(a_min > 0.0) || !(a_max >= a_min) || !(delta > 0.0))
    throw std::invalid_argument("sweep_capacity: need 0 < a_min <= a_max, delta > 0");
  std::vector<double> targets;
  for (int k = 0;; ++k) {
    const double a = a_min + k * delta;
    if (a > a_max + 1e-9 * delta) break;
    targets.push_back(std::min(a, a_max));
  }

  const double abar = binary_threshold() - 1e-3;
  std::vector<SolverResult> rows;
  rows.reserve(targets.size());
  std::size_t i = 0;
  for (; i < targets.size() && targets[i] <= abar; ++i)
    rows.push_back(refine_binary(targets[i], cfg));
  if (i < targets.size()) {
    SolverResult chain = refine_binary(abar, cfg);
    double a_current = abar;
    for (; i < targets.size(); ++i) {
      chain = advance_chain(std::move(chain), a_current, targets[i], cfg);
      a_current = targets[i];
      rows.push_back(chain);
    }
  }
  return rows;
}

}  // namespace poissoncap
