#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ilcconv/error.hpp"
#include "ilcconv/iterdomain.hpp"
#include "ilcconv/lifted.hpp"
#include "ilcconv/plant.hpp"
#include "ilcconv/sweep.hpp"
#include "ilcconv/zdomain.hpp"

namespace py = pybind11;
using namespace ilcconv;

namespace {

py::object tri_to_py(Tri t) {
  switch (t) {
    case Tri::True: return py::bool_(true);
    case Tri::False: return py::bool_(false);
    case Tri::Marginal: return py::str("marginal");
    case Tri::Absent: break;
  }
  return py::none();
}

py::dict report_to_dict(const PointReport& r) {
  py::dict d;
  d["A"] = r.point.a_gain;
  d["B"] = r.point.b_pole;
  d["sup_T"] = r.sup_t;
  d["sigma_sq"] = r.sigma_sq;
  d["rho"] = r.rho;
  d["mc_z"] = tri_to_py(r.mc_z);
  d["mc_sigma"] = tri_to_py(r.mc_sigma);
  d["ac_rho"] = tri_to_py(r.ac_rho);
  d["mc_iter"] = tri_to_py(r.mc_iter);
  d["ac_iter"] = tri_to_py(r.ac_iter);
  d["mc_analytic"] = tri_to_py(r.mc_analytic);
  d["ac_analytic"] = tri_to_py(r.ac_analytic);
  d["flags"] = r.flags;
  return d;
}

LearningFunction learning_of(const py::object& spec, double v) {
  if (py::isinstance<py::str>(spec)) return LearningFunction::named(parse_kind(spec.cast<std::string>()), v);
  std::vector<Tap> taps;
  for (auto item : spec.cast<py::dict>()) taps.push_back({item.first.cast<int>(), item.second.cast<double>()});
  return LearningFunction(std::move(taps), v);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convergence analysis of iterative learning control on a first-order sampled plant";

  // translators run newest first, so the base class goes in before the specific ones
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ZeroDivisionError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);

  m.def(
      "ab_from_plant",
      [](double u, double kp) {
        const ABPoint p = ab_from_plant({u, kp});
        return py::make_tuple(p.a_gain, p.b_pole);
      },
      py::arg("U"), py::arg("Kp"), "(U, Kp) -> (A, B)");
  m.def(
      "plant_from_ab",
      [](double a, double b) {
        const PlantParams p = plant_from_ab({a, b});
        return py::make_tuple(p.u_product, p.kp);
      },
      py::arg("A"), py::arg("B"), "(A, B) -> (U, Kp)");
  m.def(
      "no_ilc_gain_limits",
      [](double u) {
        const GainLimits g = no_ilc_gain_limits(u);
        return py::make_tuple(g.kp_max_stable, g.kp_max_monotone, g.kp_min);
      },
      py::arg("U"), "Kp bounds (B > -1, B > 0, B < 1)");
  m.def(
      "simulate_trial",
      [](double a, double b, double r, int steps) {
        const TrialResponse tr = simulate_trial({a, b}, r, steps);
        return py::make_tuple(tr.samples, std::string(to_string(tr.classification)));
      },
      py::arg("A"), py::arg("B"), py::arg("reference") = 1.0, py::arg("steps") = 40);

  m.def(
      "learning_taps",
      [](const py::object& spec, double v) {
        const LearningFunction lf = learning_of(spec, v);
        py::dict d;
        for (const Tap& t : lf.taps()) d[py::int_(t.shift)] = t.coefficient;
        return d;
      },
      py::arg("learning"), py::arg("v") = 1.0);
  m.def(
      "t_of_theta",
      [](double a, double b, const py::object& spec, double v, double theta) {
        return t_of_theta({a, b}, learning_of(spec, v), theta);
      },
      py::arg("A"), py::arg("B"), py::arg("learning"), py::arg("v"), py::arg("theta"));
  m.def(
      "sup_t",
      [](double a, double b, const py::object& spec, double v, int grid) {
        const TLocus loc = sup_t({a, b}, learning_of(spec, v), grid);
        return py::make_tuple(loc.sup_abs, loc.argmax_theta);
      },
      py::arg("A"), py::arg("B"), py::arg("learning") = "l1", py::arg("v") = 1.0,
      py::arg("grid") = kDefaultThetaGrid, "(sup |T|, argmax theta)");

  m.def(
      "build_lifted",
      [](double a, double b, const py::object& spec, double v, int n) {
        const LiftedOperators ops = build_lifted({a, b}, learning_of(spec, v), n);
        return py::make_tuple(ops.p_lift, ops.l_mat, ops.m);
      },
      py::arg("A"), py::arg("B"), py::arg("learning") = "l1", py::arg("v") = 1.0,
      py::arg("n") = kMapTrialLength, "(P_lift, L_mat, M)");
  m.def("spectral_radius", &spectral_radius, py::arg("m"));
  m.def(
      "lifted_spectral_radius",
      [](double a, double b, const py::object& spec, double v, int n) {
        const SpectralRadius sr = lifted_spectral_radius(build_lifted({a, b}, learning_of(spec, v), n));
        return py::make_tuple(sr.rho, sr.method);
      },
      py::arg("A"), py::arg("B"), py::arg("learning") = "l1", py::arg("v") = 1.0,
      py::arg("n") = kMapTrialLength, "(rho, method) using the banded structure when it allows");
  m.def("max_sv_sq", &max_sv_sq, py::arg("m"));
  m.def("gelfand_radius", &gelfand_radius, py::arg("m"), py::arg("k_max") = 12);
  m.def(
      "iterate",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& x0, int j_max) {
        const IterationTrace t = iterate(mat, x0, j_max);
        py::dict d;
        d["log_norms"] = t.log_norms;
        d["mc_start"] = t.mc_start;
        d["mc_stop"] = t.mc_stop;
        d["ac_log_ratio"] = t.ac_log_ratio;
        d["transient"] = t.has_transient();
        return d;
      },
      py::arg("m"), py::arg("x0"), py::arg("j_max") = kDefaultIterations);

  m.def(
      "mc_region_analytic",
      [](const std::string& kind, double a, double b, double v) {
        return tri_to_py(mc_region_analytic(parse_kind(kind), {a, b}, v).tri());
      },
      py::arg("kind"), py::arg("A"), py::arg("B"), py::arg("v") = 1.0);
  m.def(
      "ac_region_analytic",
      [](const std::string& kind, double a, double b, double v) {
        return tri_to_py(ac_region_analytic(parse_kind(kind), {a, b}, v).tri());
      },
      py::arg("kind"), py::arg("A"), py::arg("B"), py::arg("v") = 1.0);

  m.def(
      "run_sweep",
      [](const py::object& spec, double v, std::tuple<double, double, int> a_range,
         std::tuple<double, double, int> b_range, int n, int j_max, const std::string& methods,
         std::uint64_t seed, int workers) {
        SweepConfig cfg;
        cfg.learning = learning_of(spec, v);
        cfg.a_range = {std::get<0>(a_range), std::get<1>(a_range), std::get<2>(a_range)};
        cfg.b_range = {std::get<0>(b_range), std::get<1>(b_range), std::get<2>(b_range)};
        cfg.n = n;
        cfg.j_max = j_max;
        cfg.methods = parse_methods(methods);
        cfg.seeds.seed = seed;
        cfg.workers = workers;
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = run_sweep(cfg);
        }
        py::list out;
        for (const auto& r : res.reports) out.append(report_to_dict(r));
        return out;
      },
      py::arg("learning"), py::arg("v"), py::arg("a_range"), py::arg("b_range"), py::arg("n") = kMapTrialLength,
      py::arg("j_max") = kDefaultIterations, py::arg("methods") = "all", py::arg("seed") = kDefaultSeed,
      py::arg("workers") = 1, "Grid sweep; ranges are (min, max, steps) with both ends included.");
}
