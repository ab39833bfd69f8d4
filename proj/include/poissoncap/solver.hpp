// Projected gradient ascent over support locations and masses, with
// warm-start continuation over the amplitude, KKT-gap convergence, and point
// merging/pruning.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "poissoncap/dist.hpp"

namespace poissoncap {

struct SolverConfig {
  double step_size = 0.01;          // ascent step
  int max_iter = 200000;            // per ascend call
  double kkt_tol = 1e-7;            // nats
  int grid_points = 4001;           // KKT verification grid on [0, A]
  int n_points = 0;                 // allocated support cap; 0 = ceil(A) + 4
  double merge_delta = 1e-4;        // merge radius as a fraction of A
  double prune_mass = 1e-7;         // terminal mass floor
  double continuation_delta = 0.05; // amplitude step for warm starts
};

struct SolverResult {
  DiscreteDistribution distribution;
  double capacity_mi = 0.0;   // I(X;Y) at the final iterate, nats
  double capacity_py0 = 0.0;  // -ln P_Y(0), nats
  double kkt_gap = 0.0;       // max over [0, A] of i(x) - capacity_mi
  int iterations = 0;
  bool converged = false;
};

struct KktReport {
  double max_violation = 0.0;             // max over grid of i(x) - C
  std::vector<double> support_residuals;  // |i(x_i) - C| per support point
  int grid_size = 0;
  double tol = 0.0;
  bool passed = false;
};

// Gradient of I(X;Y) with respect to masses and locations:
//   d_mass[i]     = i(x_i; P_X) - 1
//   d_location[i] = p_i * (G'(x_i) + ln x_i)
// The location component is zero for points at (or within 1e-8 of) the
// origin, which the ascent keeps pinned.
struct Gradient {
  std::vector<double> d_mass;
  std::vector<double> d_location;
};
Gradient gradient(const OutputModel& m);

// Clips locations into [0, A] coordinatewise and replaces the masses by their
// Euclidean projection onto the probability simplex.
std::pair<std::vector<double>, std::vector<double>> project_feasible(
    std::vector<double> locations, std::vector<double> masses,
    double amplitude);

// One accepted ascent step (or merge) as seen by an observer.
struct AscentEvent {
  int iteration = 0;
  double mutual_information = 0.0;
  bool merged = false;  // support points were merged at this step
};
using AscentObserver = std::function<void(const AscentEvent&)>;

// Runs projected gradient ascent from a feasible initial law. Stops when the
// KKT gap and the support equality residuals are within kkt_tol, or at
// max_iter. Locations closer than merge_delta * A are merged (mass-weighted
// position, summed mass, left-to-right); masses below prune_mass are pruned
// at termination and the rest re-projected. Non-convergence is reported via
// converged = false, never an exception.
SolverResult ascend(const DiscreteDistribution& initial,
                    const SolverConfig& cfg,
                    const AscentObserver& observer = {});

// Capacity of the amplitude-constrained channel. Below the binary threshold
// this refines the closed-form two-point law; above it runs warm-start
// continuation from the threshold upward in continuation_delta steps,
// injecting one spare point per step at the midpoint of the largest support
// gap (mass 10 * prune_mass, renormalized).
SolverResult solve_capacity(double amplitude, const SolverConfig& cfg = {});

// Continuation sweep: solves every amplitude in {a_min, a_min+delta, ...}
// up to a_max (inclusive within rounding), sharing one warm-start chain above
// the binary threshold. Results are continuation-ordered.
std::vector<SolverResult> sweep_capacity(double a_min, double a_max,
                                         double delta,
                                         const SolverConfig& cfg = {});

// Evaluates i(x) - C on a uniform grid of [0, A] plus all support points.
KktReport kkt_verify(const OutputModel& m, double capacity_nats,
                     int grid_points, double tol);

}  // namespace poissoncap
