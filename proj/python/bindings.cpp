#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/iostream.h>
#include <pybind11/stl.h>
#include <pybind11/pybind11.h>

#include <sstream>

#include "necrosim/cli/commands.hpp"
#include "necrosim/errors.hpp"
#include "necrosim/evolution.hpp"
#include "necrosim/linearization.hpp"
#include "necrosim/specfun.hpp"
#include "necrosim/verify.hpp"

namespace py = pybind11;
using namespace necrosim;

namespace {

FourierSeries series(const std::vector<Complex>& c) { return c.empty() ? FourierSeries(0) : FourierSeries(c); }

InterfacePair interfaces(const std::vector<Complex>& rho1, const std::vector<Complex>& rho2, int modes) {
  InterfacePair p{series(rho1).resized(modes), series(rho2).resized(modes), std::nullopt};
  return p;
}

DiscretizationParams discretization(int modes, int radial_points) {
  DiscretizationParams p;
  p.modes = modes;
  p.radial_points = radial_points;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-interface necrotic tumour moving-boundary solver";

  py::register_exception<Error>(m, "NecrosimError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InterfaceCollision>(m, "InterfaceCollision", PyExc_RuntimeError);

  py::class_<GeometryParams>(m, "Geometry")
      .def(py::init([](double R1, double R2) {
             GeometryParams g{R1, R2};
             g.validate();
             return g;
           }),
           py::arg("R1") = 2.0, py::arg("R2") = 1.0)
      .def_readonly("R1", &GeometryParams::R1)
      .def_readonly("R2", &GeometryParams::R2)
      .def("__repr__", [](const GeometryParams& g) {
        std::ostringstream os;
        os << "Geometry(R1=" << g.R1 << ", R2=" << g.R2 << ")";
        return os.str();
      });

  py::class_<BioParams>(m, "Bio")
      .def(py::init([](double A, double G, double psi0) { return BioParams{A, G, psi0}; }), py::arg("A"), py::arg("G"),
           py::arg("psi0") = 1.0)
      .def_readonly("A", &BioParams::A)
      .def_readonly("G", &BioParams::G)
      .def_readonly("psi0", &BioParams::psi0);

  m.def("bessel_i", py::overload_cast<int, double>(&specfun::bessel_i), py::arg("m"), py::arg("x"));
  m.def("bessel_k", py::overload_cast<int, double>(&specfun::bessel_k), py::arg("m"), py::arg("x"));

  m.def(
      "solve_stationary",
      [](const GeometryParams& g, double psi0) {
        const StationaryResult r = solve_stationary(g, psi0);
        py::dict d;
        d["solvable"] = r.solvable;
        d["A"] = static_cast<double>(r.A);
        d["G"] = static_cast<double>(r.G);
        d["psi0_critical"] = r.psi0_critical;
        d["residuals"] = py::make_tuple(r.residuals[0], r.residuals[1]);
        return d;
      },
      py::arg("geometry"), py::arg("psi0"));
  m.def("psi0_critical", &psi0_critical, py::arg("geometry"));

  m.def(
      "principal_symbol", [](const GeometryParams& g, int mode) { return principal_symbol(g, mode).matrix; },
      py::arg("geometry"), py::arg("mode"));

  m.def(
      "phi",
      [](const GeometryParams& g, const BioParams& bio, const std::vector<Complex>& rho1, const std::vector<Complex>& rho2,
         int modes, int radial_points) {
        const PhiEvaluation e = PhiModel(g, discretization(modes, radial_points), bio)(interfaces(rho1, rho2, modes));
        return py::make_tuple(e.phi1.coefficients(), e.phi2.coefficients());
      },
      py::arg("geometry"), py::arg("bio"), py::arg("rho1"), py::arg("rho2"), py::arg("modes") = 32,
      py::arg("radial_points") = 48,
      "Normal velocities (Phi_1, Phi_2) as nonnegative-mode Fourier coefficients.");

  m.def(
      "fd_jacobian_mode",
      [](const GeometryParams& g, const BioParams& bio, int mode, double eps, int modes) {
        return fd_jacobian_mode(PhiModel(g, discretization(modes, 48), bio), mode, eps);
      },
      py::arg("geometry"), py::arg("bio"), py::arg("mode"), py::arg("epsilon") = 1e-5, py::arg("modes") = 64);

  m.def(
      "evolve",
      [](const GeometryParams& g, const BioParams& bio, const std::vector<Complex>& rho1, const std::vector<Complex>& rho2,
         double t_end, double dt, int modes) {
        const PhiModel model(g, discretization(modes, 48), bio);
        EvolveOptions o;
        o.t_end = t_end;
        o.dt = dt;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = evolve(model, interfaces(rho1, rho2, modes), o);
        }
        py::list times, c1, c2;
        for (const EvolutionState& s : tr.snapshots) {
          times.append(s.time);
          c1.append(s.interfaces.rho1.coefficients());
          c2.append(s.interfaces.rho2.coefficients());
        }
        py::dict d;
        d["t"] = times;
        d["rho1"] = c1;
        d["rho2"] = c2;
        d["reason"] = to_string(tr.termination);
        d["max_drift"] = tr.max_drift;
        return d;
      },
      py::arg("geometry"), py::arg("bio"), py::arg("rho1"), py::arg("rho2"), py::arg("t_end"), py::arg("dt"),
      py::arg("modes") = 32);

  m.def(
      "verify",
      [] {
        const VerificationReport r = run_verification({});
        py::list out;
        for (const CheckResult& c : r.checks) out.append(py::make_tuple(c.name, c.measured, c.tolerance, c.passed));
        return out;
      },
      "Runs the invariant suite; returns (name, measured, tolerance, passed) tuples.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a necrosim command; returns (exit_code, stdout, stderr).");
}
