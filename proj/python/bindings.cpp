#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakkam/config.hpp"
#include "weakkam/convergence.hpp"
#include "weakkam/ctmc.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/lattice.hpp"
#include "weakkam/perron.hpp"
#include "weakkam/rate.hpp"
#include "weakkam/weak_kam.hpp"

namespace py = pybind11;
using namespace weakkam;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) { return to_array(std::span<const double>(v)); }

FineGrid to_grid(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return FineGrid{std::vector<double>(a.data(), a.data() + a.size())};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-to-continuum weak KAM toolkit";

  auto base = py::register_exception<error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<invalid_lattice>(m, "InvalidLattice", base.ptr());
  py::register_exception<invalid_input>(m, "InvalidInput", base.ptr());
  py::register_exception<invalid_resolution>(m, "InvalidResolution", base.ptr());
  py::register_exception<domain_error>(m, "DomainError", base.ptr());
  py::register_exception<range_error>(m, "RangeError", base.ptr());
  py::register_exception<iteration_limit>(m, "IterationLimit", base.ptr());
  py::register_exception<irreducibility_violation>(m, "IrreducibilityViolation", base.ptr());
  py::register_exception<inconsistent_eigendata>(m, "InconsistentEigendata", base.ptr());
  py::register_exception<unsupported_configuration>(m, "UnsupportedConfiguration", base.ptr());
  py::register_exception<numerical_degeneracy>(m, "NumericalDegeneracy", base.ptr());
  py::register_exception<config_error>(m, "ConfigError", base.ptr());

  py::class_<Potential>(m, "Potential")
      .def_static("parse", &Potential::parse, py::arg("spec"))
      .def_static("constant", &Potential::constant, py::arg("value"))
      .def_static("cosine", &Potential::cosine, py::arg("amplitude"), py::arg("phase") = 0.0)
      .def_static("bump", &Potential::bump, py::arg("center"), py::arg("width"), py::arg("height"))
      .def_static("tabulated", &Potential::tabulated, py::arg("samples"))
      .def("__call__", &Potential::operator(), py::arg("x"))
      .def("__call__",
           [](const Potential& V, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
             py::array_t<double> out(x.size());
             for (py::ssize_t i = 0; i < x.size(); ++i) out.mutable_data()[i] = V(x.data()[i]);
             return out;
           })
      .def_property_readonly("max_value", &Potential::max_value)
      .def_property_readonly("min_value", &Potential::min_value)
      .def_property_readonly("argmax", &Potential::argmax)
      .def_property_readonly("unique_max", &Potential::unique_max)
      .def_property_readonly("id", &Potential::id)
      .def("__repr__", [](const Potential& V) { return "Potential('" + V.id() + "')"; });

  m.def("build_generator", [](int k) { return build_generator(k).to_dense(); }, py::arg("k"));
  m.def("schrodinger_matrix", [](int k, const Potential& V) { return schrodinger_matrix(k, V).to_dense(); },
        py::arg("k"), py::arg("V"));
  m.def("nearest_site", &nearest_site, py::arg("x"), py::arg("k"));

  m.def("cumulant_H", &cumulant_H, py::arg("lam"));
  m.def("legendre_L", &legendre_L, py::arg("v"));
  m.def("optimal_tilt", &optimal_tilt, py::arg("v"));
  m.def("hamiltonian", &hamiltonian, py::arg("x"), py::arg("p"), py::arg("V"));
  m.def("lagrangian", &lagrangian, py::arg("x"), py::arg("v"), py::arg("V"));
  m.def(
      "path_rate",
      [](std::vector<double> t, std::vector<double> x) { return path_rate(PiecewisePath::from(std::move(t), std::move(x))); },
      py::arg("times"), py::arg("positions"));
  m.def(
      "action_functional",
      [](std::vector<double> t, std::vector<double> x, const Potential& V, double c) {
        return action_functional(PiecewisePath::from(std::move(t), std::move(x)), V, c);
      },
      py::arg("times"), py::arg("positions"), py::arg("V"), py::arg("c"));

  py::class_<PerronData>(m, "PerronData")
      .def_readonly("k", &PerronData::k)
      .def_readonly("lambda_", &PerronData::lambda)
      .def_readonly("residual", &PerronData::residual)
      .def_readonly("iterations", &PerronData::iterations)
      .def_property_readonly("u", [](const PerronData& p) { return to_array(p.u.values()); })
      .def_property_readonly("mu", [](const PerronData& p) { return to_array(p.mu.values()); });

  m.def("perron_solve", &perron_solve, py::arg("k"), py::arg("V"), py::arg("tol") = default_perron_tol,
        py::arg("max_iters") = default_perron_max_iters);
  m.def(
      "stationary_measure",
      [](const PerronData& pd) {
        const auto sm = stationary_measure(pd);
        return py::make_tuple(to_array(sm.pi.values()), to_array(sm.log_pi));
      },
      py::arg("pd"), "Returns (pi, log_pi).");
  m.def(
      "entropy",
      [](const PerronData& pd, const Potential& V) { return entropy(pd, stationary_measure(pd), pd.k, V); },
      py::arg("pd"), py::arg("V"));
  m.def(
      "empirical_rate_profile",
      [](const PerronData& pd, std::size_t n) { return to_array(empirical_rate_profile(stationary_measure(pd), n).values); },
      py::arg("pd"), py::arg("fine_n"));

  py::enum_<Direction>(m, "Direction").value("positive", Direction::positive).value("negative", Direction::negative);

  py::class_<WeakKamSolution>(m, "WeakKamSolution")
      .def_property_readonly("u", [](const WeakKamSolution& s) { return to_array(s.u.values); })
      .def_readonly("c", &WeakKamSolution::c)
      .def_readonly("x0", &WeakKamSolution::x0)
      .def_readonly("kink_locations", &WeakKamSolution::kink_locations);

  m.def("critical_value", &critical_value, py::arg("V"));
  m.def("mane_potential", &mane_potential, py::arg("x"), py::arg("y"), py::arg("V"), py::arg("n") = 2048);
  m.def("peierls_barrier", &peierls_barrier, py::arg("x"), py::arg("y"), py::arg("V"), py::arg("n") = 2048);
  m.def("weak_kam_plus", &weak_kam_plus, py::arg("V"), py::arg("n"));
  m.def("weak_kam_minus", &weak_kam_minus, py::arg("V"), py::arg("n"));
  m.def(
      "deviation_function", [](const Potential& V, std::size_t n) { return to_array(deviation_function(V, n).values.values); },
      py::arg("V"), py::arg("n"));
  m.def(
      "lax_oleinik_apply",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> u, double t, Direction d, const Potential& V,
         double v_max, int m_vel) { return to_array(lax_oleinik_apply(to_grid(u), t, d, V, v_max, m_vel).u.values); },
      py::arg("u"), py::arg("t"), py::arg("direction"), py::arg("V"), py::arg("v_max"), py::arg("m") = 129);
  m.def(
      "lax_oleinik_fixed_point",
      [](const Potential& V, std::size_t n, double tol) {
        const auto r = lax_oleinik_fixed_point(V, n, tol);
        return py::make_tuple(to_array(r.u.values), r.c_estimate);
      },
      py::arg("V"), py::arg("n"), py::arg("tol") = 1e-8, "Returns (u, c_estimate); u is -u_+ up to a constant.");

  m.def(
      "simulate_walk",
      [](int k, double T, double x0, std::uint64_t seed, std::uint64_t stream) {
        const auto p = simulate_walk(k, T, x0, seed, stream);
        return py::make_tuple(to_array(p.jump_times), p.states);
      },
      py::arg("k"), py::arg("T"), py::arg("x0"), py::arg("seed"), py::arg("stream") = 0,
      "Returns (jump_times, states); states has one more entry than jump_times.");
  m.def(
      "exp_martingale_walk",
      [](int k, double T, double x0, double lam, std::uint64_t seed, std::uint64_t stream) {
        return exp_martingale(simulate_walk(k, T, x0, seed, stream), TiltSchedule::constant(lam, T));
      },
      py::arg("k"), py::arg("T"), py::arg("x0"), py::arg("lam"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "feynman_kac",
      [](int k, double T, double x0, const Potential& V, py::array_t<double, py::array::c_style | py::array::forcecast> u,
         long n, std::uint64_t seed, int threads) {
        const auto e = feynman_kac(k, T, x0, V, to_grid(u), n, seed, threads);
        return py::make_tuple(e.value, e.std_error);
      },
      py::arg("k"), py::arg("T"), py::arg("x0"), py::arg("V"), py::arg("u"), py::arg("n_samples"), py::arg("seed"),
      py::arg("threads") = 1, "Returns (value, std_error).");
  m.def(
      "feynman_kac_exact",
      [](int k, double T, double x0, const Potential& V, py::array_t<double, py::array::c_style | py::array::forcecast> u) {
        return feynman_kac_exact(k, T, x0, V, to_grid(u));
      },
      py::arg("k"), py::arg("T"), py::arg("x0"), py::arg("V"), py::arg("u"));
  m.def("empirical_ldp", py::overload_cast<int, const Potential&, double, double>(&empirical_ldp), py::arg("k"),
        py::arg("V"), py::arg("a"), py::arg("b"));

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("potential", &RunConfig::potential)
      .def_readonly("k_list", &RunConfig::k_list)
      .def_readonly("T", &RunConfig::T)
      .def_readonly("n_grid", &RunConfig::n_grid)
      .def_readonly("n_samples", &RunConfig::n_samples)
      .def_readonly("seed", &RunConfig::seed)
      .def_readonly("tolerances", &RunConfig::tolerances)
      .def_readonly("out", &RunConfig::out);
  m.def("parse_config", &parse_config, py::arg("text"));

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("k", &ConvergenceRow::k)
      .def_readonly("lambda_over_k", &ConvergenceRow::lambda_over_k)
      .def_readonly("max_V_gap", &ConvergenceRow::max_V_gap)
      .def_readonly("entropy_over_k", &ConvergenceRow::entropy_over_k)
      .def_readonly("ldp_sup_gap", &ConvergenceRow::ldp_sup_gap);
  m.def(
      "run_convergence",
      [](const RunConfig& cfg, int threads) {
        const auto rep = run_convergence(cfg, threads);
        return py::make_tuple(rep.rows, rep.passed());
      },
      py::arg("cfg"), py::arg("threads") = 1, "Returns (rows, passed).");
}
