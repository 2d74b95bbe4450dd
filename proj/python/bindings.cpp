#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "enpp/error.hpp"
#include "enpp/experiments.hpp"

namespace py = pybind11;
using namespace enpp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid grid_of_shape(const std::vector<py::ssize_t>& shape, double length) {
  if (shape.empty() || shape.size() > 3) throw InvalidArgument("field must have 1 to 3 axes");
  for (auto n : shape) {
    if (n != shape.front()) throw InvalidArgument("field must be sampled on a cubic grid");
  }
  return make_grid(static_cast<int>(shape.size()), static_cast<int>(shape.front()), length);
}

Grid scalar_grid(const Array& a, double length) {
  return grid_of_shape({a.shape(), a.shape() + a.ndim()}, length);
}

Field to_field(const Grid& g, const Array& a) {
  if (static_cast<std::size_t>(a.size()) != g.size()) throw GridMismatch("array size does not match the grid");
  return Field::from_real(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Field to_field(const Array& a, double length) { return to_field(scalar_grid(a, length), a); }

VectorField to_vector(const Array& a, double length) {
  if (a.ndim() < 2) throw InvalidArgument("vector field needs a leading component axis");
  const Grid g = grid_of_shape({a.shape() + 1, a.shape() + a.ndim()}, length);
  if (a.shape(0) != g.dim()) throw InvalidArgument("vector field must have one component per axis");
  std::vector<Field> comps;
  for (int i = 0; i < g.dim(); ++i) {
    const double* start = a.data() + i * g.size();
    comps.push_back(Field::from_real(g, std::vector<double>(start, start + g.size())));
  }
  return VectorField(std::move(comps));
}

std::vector<py::ssize_t> field_shape(const Grid& g) {
  return std::vector<py::ssize_t>(static_cast<std::size_t>(g.dim()), g.points());
}

Array to_array(const Field& f) {
  Array out(field_shape(f.grid()));
  std::copy(f.real().begin(), f.real().end(), out.mutable_data());
  return out;
}

Array to_array(const VectorField& v) {
  auto shape = field_shape(v.grid());
  shape.insert(shape.begin(), v.dim());
  Array out(shape);
  double* dst = out.mutable_data();
  for (const auto& c : v.components()) dst = std::copy(c.real().begin(), c.real().end(), dst);
  return out;
}

py::tuple state_tuple(const SimState& s) { return py::make_tuple(to_array(s.u), to_array(s.n), to_array(s.p)); }

SimState to_state(const Array& u, const Array& n, const Array& p, double nu, double length) {
  const VectorField uf = to_vector(u, length);
  return SimState{uf, to_field(uf.grid(), n), to_field(uf.grid(), p), 0.0, nu};
}

Formulation parse_formulation(const std::string& name) {
  if (name == "enpp") return Formulation::enpp;
  if (name == "modified") return Formulation::modified;
  throw InvalidArgument("formulation must be 'enpp' or 'modified'");
}

py::dict report_dict(const InvariantReport& report) {
  py::list violations;
  for (const auto& v : report.violations) {
    violations.append(py::dict(py::arg("invariant") = v.invariant, py::arg("first_time") = v.first_time,
                               py::arg("detail") = v.detail));
  }
  std::vector<double> t, div, min_n, min_p;
  for (const auto& s : report.samples) {
    t.push_back(s.t);
    div.push_back(s.div_u_l2);
    min_n.push_back(s.min_n);
    min_p.push_back(s.min_p);
  }
  return py::dict(py::arg("ok") = report.ok(), py::arg("violations") = violations, py::arg("t") = t,
                  py::arg("div_u_l2") = div, py::arg("min_n") = min_n, py::arg("min_p") = min_p);
}

}  // namespace

PYBIND11_MODULE(_enpp, m) {
  m.doc() = "Spectral solver for the Euler-Nernst-Planck-Poisson system";
  constexpr double two_pi = 2.0 * std::numbers::pi;

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);
  py::register_exception<NonNeutral>(m, "NonNeutral", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<CflViolation>(m, "CflViolation", PyExc_ArithmeticError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("points"), py::arg("length") = two_pi)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("points", &Grid::points)
      .def_property_readonly("length", &Grid::length)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("max_wavenumber", &Grid::max_wavenumber)
      .def("coordinates", [](const Grid& g) {
        std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), g.points());
        shape.insert(shape.begin(), g.dim());
        Array out(shape);
        double* dst = out.mutable_data();
        for (int a = 0; a < g.dim(); ++a) {
          for (std::size_t s = 0; s < g.size(); ++s) *dst++ = g.coordinate(s)[a];
        }
        return out;
      })
      .def_property_readonly("j_max", [](const Grid& g) { return DyadicPartition(g).j_max(); });

  m.def(
      "besov_norm",
      [](const Array& f, double s, double p, double r, double length) {
        const Field field = to_field(f, length);
        return besov_norm(field, BesovSpec(s, p, r), DyadicPartition(field.grid()));
      },
      py::arg("field"), py::arg("s"), py::arg("p"), py::arg("r"), py::arg("length") = two_pi,
      "Nonhomogeneous Besov norm of a scalar field sampled on a periodic cubic grid.");

  m.def(
      "lp_norm", [](const Array& f, double p, double length) { return lp_norm(to_field(f, length), p); },
      py::arg("field"), py::arg("p"), py::arg("length") = two_pi);

  m.def(
      "dyadic_block",
      [](const Array& f, int j, double length) {
        const Field field = to_field(f, length);
        return to_array(dyadic_block(field, j, DyadicPartition(field.grid())));
      },
      py::arg("field"), py::arg("j"), py::arg("length") = two_pi, "Littlewood-Paley block Delta_j f.");

  m.def(
      "dyadic_blocks",
      [](const Array& f, double length) {
        const Field field = to_field(f, length);
        std::vector<Array> out;
        for (const auto& b : dyadic_blocks(field, DyadicPartition(field.grid()))) out.push_back(to_array(b));
        return out;
      },
      py::arg("field"), py::arg("length") = two_pi, "All blocks Delta_{-1} .. Delta_{j_max}.");

  m.def(
      "leray_project", [](const Array& u, double length) { return to_array(leray_project(to_vector(u, length))); },
      py::arg("u"), py::arg("length") = two_pi, "Projection onto divergence-free fields, shape (d, N, ...).");

  m.def(
      "solve_potential",
      [](const Array& n, const Array& p, bool renormalize, double length) {
        const Field nf = to_field(n, length);
        const auto pot = solve_potential(nf, to_field(nf.grid(), p),
                                         renormalize ? ChargePolicy::renormalize : ChargePolicy::strict);
        return py::make_tuple(to_array(pot.phi), to_array(pot.grad_phi));
      },
      py::arg("n"), py::arg("p"), py::arg("renormalize") = false, py::arg("length") = two_pi,
      "Returns (phi, grad_phi) with Laplacian(phi) = n - p.");

  m.def(
      "step",
      [](const Array& u, const Array& n, const Array& p, double dt, double nu, const std::string& formulation,
         double cfl, double length) {
        const SimState s = to_state(u, n, p, nu, length);
        StepOptions opts;
        opts.formulation = parse_formulation(formulation);
        opts.cfl = cfl;
        const DyadicPartition part(s.grid());
        return state_tuple(step(s, dt, opts, &part));
      },
      py::arg("u"), py::arg("n"), py::arg("p"), py::arg("dt"), py::arg("nu") = 0.0,
      py::arg("formulation") = "enpp", py::arg("cfl") = 0.5, py::arg("length") = two_pi,
      "One time step; returns (u, n, p).");

  m.def(
      "integrate",
      [](const Array& u, const Array& n, const Array& p, double horizon, int steps, double nu,
         const std::string& formulation, double length) {
        const SimState s = to_state(u, n, p, nu, length);
        StepOptions opts;
        opts.formulation = parse_formulation(formulation);
        const DyadicPartition part(s.grid());
        return state_tuple(integrate(s, horizon, steps, steps, opts, &part).back());
      },
      py::arg("u"), py::arg("n"), py::arg("p"), py::arg("horizon"), py::arg("steps"), py::arg("nu") = 0.0,
      py::arg("formulation") = "enpp", py::arg("length") = two_pi, "Advance to t = horizon; returns (u, n, p).");

  m.def(
      "lifespan_lower_bound",
      [](const Array& u, const Array& n, const Array& p, double c, double r, double length) {
        const SimState s = to_state(u, n, p, 0.0, length);
        return lifespan_lower_bound(s.u, s.n, s.p, c, r, MeasureIndices{}, DyadicPartition(s.grid()));
      },
      py::arg("u"), py::arg("n"), py::arg("p"), py::arg("c") = 1.0, py::arg("r") = 4.0,
      py::arg("length") = two_pi, "c / (1 + E0^r) with the default measuring indices.");

  m.def(
      "simulate",
      [](const std::filesystem::path& config, bool write_outputs) {
        SimulationOutcome out;
        {
          py::gil_scoped_release release;
          out = run_simulation(parse_config(config), write_outputs);
        }
        const SimState& last = out.trajectory.back();
        py::dict result = report_dict(out.report);
        result["steps"] = out.steps;
        result["dt"] = out.dt;
        result["grad_u_integral"] = out.monitor.total();
        result["u"] = to_array(last.u);
        result["n"] = to_array(last.n);
        result["p"] = to_array(last.p);
        return result;
      },
      py::arg("config"), py::arg("write_outputs") = false, "Run a configuration file; returns a summary dict.");

  m.def(
      "check_trajectory",
      [](const std::filesystem::path& directory) { return report_dict(check_trajectory(directory, {})); },
      py::arg("directory"));
}
