#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "poissoncap/bounds.hpp"
#include "poissoncap/detection.hpp"
#include "poissoncap/information.hpp"
#include "poissoncap/report_io.hpp"
#include "poissoncap/solver.hpp"
#include "poissoncap/special_fn.hpp"

namespace py = pybind11;
using namespace poissoncap;

namespace {

SolverConfig config_from_kwargs(double step_size, int max_iter, double kkt_tol,
                                int n_points) {
  SolverConfig cfg;
  cfg.step_size = step_size;
  cfg.max_iter = max_iter;
  cfg.kkt_tol = kkt_tol;
  cfg.n_points = n_points;
  return cfg;
}

OutputModel model_of(double amplitude, std::vector<double> points,
                     std::vector<double> masses) {
  return OutputModel(
      DiscreteDistribution(amplitude, std::move(points), std::move(masses)),
      kReportEpsilon);
}

py::dict result_dict(const SolverResult& r) {
  py::dict d;
  d["amplitude"] = r.distribution.amplitude();
  d["points"] = r.distribution.locations();
  d["masses"] = r.distribution.masses();
  d["capacity_mi"] = r.capacity_mi;
  d["capacity_py0"] = r.capacity_py0;
  d["kkt_gap"] = r.kkt_gap;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_poissoncap, m) {
  m.doc() = "Capacity and capacity-achieving distributions of the "
            "amplitude-constrained Poisson noise channel";

  py::enum_<WBranch>(m, "WBranch")
      .value("Principal", WBranch::Principal)
      .value("LowerNegOne", WBranch::LowerNegOne);

  m.def("lambert_w", &lambert_w, py::arg("branch"), py::arg("x"),
        "Real Lambert W on the requested branch");
  m.def("log_factorial", &log_factorial, py::arg("k"));
  m.def("log_pmf", &log_pmf, py::arg("x"), py::arg("y"),
        "log P(Y=y | X=x) for the Poisson kernel, nats");

  m.def(
      "solve",
      [](double amplitude, double step_size, int max_iter, double kkt_tol,
         int n_points) {
        return result_dict(solve_capacity(
            amplitude,
            config_from_kwargs(step_size, max_iter, kkt_tol, n_points)));
      },
      py::arg("amplitude"), py::arg("step_size") = 0.01,
      py::arg("max_iter") = 200000, py::arg("kkt_tol") = 1e-7,
      py::arg("n_points") = 0,
      "Capacity and optimal input law for one amplitude");

  m.def("binary_closed_form",
        [](double amplitude) {
          const DiscreteDistribution d = binary_closed_form(amplitude);
          return py::make_tuple(d.locations(), d.masses());
        },
        py::arg("amplitude"));
  m.def("binary_capacity", &binary_capacity, py::arg("amplitude"));
  m.def("binary_threshold", &binary_threshold);
  m.def("asymptotic_capacity", &asymptotic_capacity, py::arg("amplitude"));
  m.def("contraction_upper", &contraction_upper, py::arg("amplitude"));

  m.def(
      "mutual_information",
      [](double amplitude, std::vector<double> points,
         std::vector<double> masses) {
        return mutual_information(
            model_of(amplitude, std::move(points), std::move(masses)));
      },
      py::arg("amplitude"), py::arg("points"), py::arg("masses"));

  m.def(
      "info_density",
      [](double amplitude, std::vector<double> points,
         std::vector<double> masses, double x) {
        return info_density(
            model_of(amplitude, std::move(points), std::move(masses)), x);
      },
      py::arg("amplitude"), py::arg("points"), py::arg("masses"), py::arg("x"));

  m.def(
      "kkt_verify",
      [](double amplitude, std::vector<double> points,
         std::vector<double> masses, int grid_points, double tol) {
        const OutputModel model =
            model_of(amplitude, std::move(points), std::move(masses));
        const KktReport r =
            kkt_verify(model, mutual_information(model), grid_points, tol);
        py::dict d;
        d["max_violation"] = r.max_violation;
        d["support_residuals"] = r.support_residuals;
        d["grid_size"] = r.grid_size;
        d["passed"] = r.passed;
        return d;
      },
      py::arg("amplitude"), py::arg("points"), py::arg("masses"),
      py::arg("grid_points") = 4001, py::arg("tol") = 1e-6);

  m.def(
      "detection_report",
      [](double amplitude, std::vector<double> points,
         std::vector<double> masses) {
        const DetectionReport r = detection_report(
            model_of(amplitude, std::move(points), std::move(masses)));
        py::dict d;
        d["pe"] = r.pe;
        d["hx"] = r.hx;
        d["mi"] = r.mi;
        d["hxy"] = r.hxy;
        d["fano_ok"] = r.fano_ok;
        d["asymptotic_pe_floor"] = r.asymptotic_pe_floor;
        d["asymptotic_hxy_floor"] = r.asymptotic_hxy_floor;
        return d;
      },
      py::arg("amplitude"), py::arg("points"), py::arg("masses"));

  m.def(
      "bounds_report",
      [](double amplitude, std::optional<double> capacity,
         std::optional<std::vector<double>> points,
         std::optional<std::vector<double>> masses, bool asymptotic) {
        BoundsReport r;
        if (points && masses) {
          const OutputModel model = model_of(amplitude, *points, *masses);
          const double c =
              capacity ? *capacity : mutual_information(model);
          r = evaluate_bounds(amplitude, c, "solver", &model);
        } else if (asymptotic) {
          r = evaluate_bounds(amplitude, asymptotic_capacity(amplitude),
                              "asymptotic", nullptr);
        } else if (capacity) {
          r = evaluate_bounds(amplitude, *capacity, "explicit", nullptr);
        } else {
          throw std::invalid_argument(
              "bounds_report: provide capacity, a distribution, or "
              "asymptotic=True");
        }
        py::dict d;
        d["amplitude"] = r.amplitude;
        d["capacity_used"] = r.capacity_used;
        d["capacity_source"] = r.capacity_source;
        d["eta_upper"] = r.eta_upper;
        d["universal_mass_bound"] = r.universal_mass_bound;
        d["support_lower"] = r.support_lower;
        if (r.largest_mass_lower_log)
          d["largest_mass_lower_log"] = *r.largest_mass_lower_log;
        if (r.support_upper_implicit)
          d["support_upper_implicit"] = *r.support_upper_implicit;
        if (r.support_upper_explicit)
          d["support_upper_explicit"] = *r.support_upper_explicit;
        if (r.interior_bracket) {
          py::dict b;
          b["outer_lo"] = r.interior_bracket->outer_lo;
          b["inner_lo"] = r.interior_bracket->inner_lo;
          b["inner_hi"] = r.interior_bracket->inner_hi;
          b["outer_hi"] = r.interior_bracket->outer_hi;
          d["interior_bracket"] = b;
        }
        d["asymptotic_capacity"] = r.asymptotic_capacity;
        py::dict checks;
        for (const BoundCheck& c : r.checks)
          checks[c.name.c_str()] =
              py::make_tuple(c.applicable, c.passed);
        d["checks"] = checks;
        d["all_applicable_passed"] = r.all_applicable_passed();
        return d;
      },
      py::arg("amplitude"), py::arg("capacity") = std::nullopt,
      py::arg("points") = std::nullopt, py::arg("masses") = std::nullopt,
      py::arg("asymptotic") = false);

  m.def("sign_changes",
        [](const std::vector<double>& seq) { return sign_changes(seq); },
        py::arg("seq"));

  m.def(
      "psi_sequence",
      [](double amplitude, std::vector<double> points,
         std::vector<double> masses, std::optional<double> capacity) {
        const OutputModel model =
            model_of(amplitude, std::move(points), std::move(masses));
        const double c = capacity ? *capacity : mutual_information(model);
        const PsiSequence psi =
            psi_sequence(model, c, model.source().top_mass());
        py::dict d;
        d["values"] = psi.values;
        d["k_star"] = psi.k_star;
        d["sign_changes"] = sign_changes(psi.values);
        return d;
      },
      py::arg("amplitude"), py::arg("points"), py::arg("masses"),
      py::arg("capacity") = std::nullopt);

#ifdef POISSONCAP_VERSION
  m.attr("__version__") = POISSONCAP_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
