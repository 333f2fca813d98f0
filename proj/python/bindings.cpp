#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "savwave/experiments.hpp"
#include "savwave/model.hpp"
#include "savwave/sav_stepper.hpp"
#include "savwave/spectral.hpp"

namespace py = pybind11;
using namespace savwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Field& f) {
  const int n = f.grid().n();
  Array out({n, n});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Field to_field(const Grid& g, const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != g.n() || a.shape(1) != g.n())
    throw SpectralError("array shape does not match the grid");
  return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

}  // namespace

PYBIND11_MODULE(_savwave, m) {
  m.doc() = "SAV Fourier-spectral solver for the 2D fractional generalized wave equation.";

  py::register_exception<SpectralError>(m, "SpectralError", PyExc_ValueError);
  py::register_exception<ProblemError>(m, "ProblemError", PyExc_ValueError);
  py::register_exception<StudyError>(m, "StudyError", PyExc_ValueError);
  py::register_exception<NonIntegerStepCount>(m, "NonIntegerStepCount", PyExc_ValueError);
  py::register_exception<NonpositiveEnergy>(m, "NonpositiveEnergy", PyExc_RuntimeError);
  py::register_exception<ResidualError>(m, "ResidualError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, double, double, double, double>(), py::arg("n"), py::arg("xmin"),
           py::arg("xmax"), py::arg("ymin"), py::arg("ymax"))
      .def_property_readonly("n", &Grid::n)
      .def_property_readonly("xmin", &Grid::xmin)
      .def_property_readonly("xmax", &Grid::xmax)
      .def_property_readonly("ymin", &Grid::ymin)
      .def_property_readonly("ymax", &Grid::ymax)
      .def_property_readonly("area", &Grid::area)
      .def_property_readonly("kx", &Grid::kx_values)
      .def_property_readonly("ky", &Grid::ky_values)
      .def("x", &Grid::x)
      .def("y", &Grid::y)
      .def("__repr__", [](const Grid& g) {
        return "Grid(n=" + std::to_string(g.n()) + ", [" + std::to_string(g.xmin()) + ", " +
               std::to_string(g.xmax()) + "] x [" + std::to_string(g.ymin()) + ", " +
               std::to_string(g.ymax()) + "])";
      });

  py::enum_<Potential>(m, "Potential")
      .value("SineGordon", Potential::SineGordon)
      .value("DoubleWell", Potential::DoubleWell);
  py::enum_<Example>(m, "Example")
      .value("Example1", Example::Example1)
      .value("Example2", Example::Example2);

  py::class_<Problem>(m, "Problem")
      .def(py::init<>())
      .def_readwrite("alpha", &Problem::alpha)
      .def_readwrite("kappa", &Problem::kappa)
      .def_readwrite("gamma1", &Problem::gamma1)
      .def_readwrite("gamma2", &Problem::gamma2)
      .def_readwrite("potential", &Problem::potential)
      .def_readwrite("c0", &Problem::c0)
      .def_readwrite("grid", &Problem::grid)
      .def_readwrite("T", &Problem::T)
      .def("validate", &Problem::validate);

  m.def("example_problem", &example_problem, py::arg("which"), py::arg("n"), py::arg("alpha"),
        py::arg("gamma1") = 0.0, py::arg("gamma2") = 0.0);
  m.def("default_c0", &default_c0);

  m.def("frac_laplacian", [](const Grid& g, const Array& u, double beta) {
    return to_array(frac_laplacian(to_field(g, u), beta));
  });
  m.def("inner_l2", [](const Grid& g, const Array& a, const Array& b) {
    return inner_l2(to_field(g, a), to_field(g, b));
  });
  m.def("seminorm", [](const Grid& g, const Array& u, double r) {
    return seminorm(to_field(g, u), r);
  });
  m.def("l2_norm", [](const Grid& g, const Array& u) { return l2_norm(to_field(g, u)); });
  m.def("energy_E", [](const Array& u, const Problem& p) { return energy_E(to_field(p.grid, u), p); });
  m.def("initial_state", [](Example which, const Problem& p) {
    const InitialData d = initial_state(which, p);
    return py::make_tuple(to_array(d.u0), to_array(d.v0), d.R0);
  });

  py::class_<EnergyRecord>(m, "EnergyRecord")
      .def_readonly("n", &EnergyRecord::n)
      .def_readonly("t", &EnergyRecord::t)
      .def_readonly("H", &EnergyRecord::H)
      .def_readonly("kinetic", &EnergyRecord::kinetic)
      .def_readonly("fractional", &EnergyRecord::fractional)
      .def_readonly("sav", &EnergyRecord::sav)
      .def_readonly("dissipation_rhs", &EnergyRecord::dissipation_rhs);

  py::class_<Stepper>(m, "Stepper")
      .def(py::init([](const Problem& p, double tau, const Array& u0, const Array& v0) {
             return Stepper(p, tau, make_initial_state(to_field(p.grid, u0), to_field(p.grid, v0), p));
           }),
           py::arg("problem"), py::arg("tau"), py::arg("u0"), py::arg("v0"))
      .def("advance", &Stepper::advance)
      .def("energy", &Stepper::energy)
      .def_property_readonly("n", [](const Stepper& s) { return s.state().n; })
      .def_property_readonly("time", &Stepper::time)
      .def_property_readonly("u", [](const Stepper& s) { return to_array(s.state().u); })
      .def_property_readonly("v", [](const Stepper& s) { return to_array(s.state().v); })
      .def_property_readonly("R", [](const Stepper& s) { return s.state().R; })
      .def_property_readonly("max_residual",
                             [](const Stepper& s) { return s.last_residuals().max(); });

  m.def(
      "run",
      [](const Problem& p, const Array& u0, const Array& v0, double tau) {
        RunResult r = run(p, to_field(p.grid, u0), to_field(p.grid, v0), tau);
        return py::make_tuple(to_array(r.final_state.u), to_array(r.final_state.v),
                              r.final_state.R, r.ledger);
      },
      py::arg("problem"), py::arg("u0"), py::arg("v0"), py::arg("tau"),
      "Runs to problem.T; returns (u, v, R, ledger).");

  py::class_<ErrorRow>(m, "ErrorRow")
      .def_readonly("param", &ErrorRow::param)
      .def_readonly("e_u_inf", &ErrorRow::e_u_inf)
      .def_readonly("e_v_inf", &ErrorRow::e_v_inf)
      .def_readonly("e_r", &ErrorRow::e_r)
      .def_readonly("e_u_seminorm", &ErrorRow::e_u_seminorm)
      .def_readonly("e_u_l2", &ErrorRow::e_u_l2)
      .def_readonly("e_v_l2", &ErrorRow::e_v_l2)
      .def_readonly("rate_u", &ErrorRow::rate_u)
      .def_readonly("rate_v", &ErrorRow::rate_v)
      .def_readonly("rate_r", &ErrorRow::rate_r)
      .def_readonly("rate_semi", &ErrorRow::rate_semi);

  m.def("observed_rate", &observed_rate);
  m.def(
      "temporal_study",
      [](const Problem& p, Example which, std::vector<double> taus, int k_ref) {
        StudyConfig cfg{.problem = p, .example = which, .k_ref = k_ref, .tau_list = std::move(taus)};
        return temporal_study(cfg);
      },
      py::arg("problem"), py::arg("which"), py::arg("tau_list"), py::arg("k_ref") = 1000);
  m.def(
      "spatial_study",
      [](const Problem& p, Example which, std::vector<int> ns, int n_ref, int k_ref) {
        StudyConfig cfg{.problem = p, .example = which, .n_ref = n_ref, .k_ref = k_ref,
                        .n_list = std::move(ns)};
        return spatial_study(cfg);
      },
      py::arg("problem"), py::arg("which"), py::arg("n_list"), py::arg("n_ref") = 64,
      py::arg("k_ref") = 1000);
}
