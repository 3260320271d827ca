#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "so21osc/cyclic.hpp"
#include "so21osc/model.hpp"
#include "so21osc/oracles.hpp"
#include "so21osc/propagate.hpp"
#include "so21osc/wavepacket.hpp"

namespace py = pybind11;
using namespace so21;

namespace {

FamilySpec make_spec(const std::string& family, double n1, double n3, double lambda, double n2,
                     double rate) {
  FamilySpec f;
  f.family = family_from_string(family);
  f.n1 = n1;
  f.n2 = n2;
  f.n3 = n3;
  f.lambda = lambda;
  f.phase = PhaseFn::linear(rate);
  validate(f);
  return f;
}

py::dict phase_dict(const PhaseReport& p) {
  py::dict d;
  d["u0"] = p.u0;
  d["alpha"] = p.alpha_tau;
  d["hannay"] = p.hannay;
  d["dynamical"] = p.dynamical;
  d["total"] = p.total;
  d["geometric"] = p.geometric;
  return d;
}

// Rows of a list of vectors as an (n, 3) array.
Eigen::MatrixXd stack(const std::vector<Vec3>& v) {
  Eigen::MatrixXd m(v.size(), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(i) = v[i].transpose();
  return m;
}

}  // namespace

PYBIND11_MODULE(_so21osc, m) {
  m.doc() = "SO(2,1) dynamics of the time-dependent harmonic oscillator";

  py::register_exception<Error>(m, "So21Error", PyExc_ValueError);

  m.def("mdot", &mdot);
  m.def("param_to_vec", [](double xi, double phi) { return param_to_vec({xi, phi}); }, py::arg("xi"),
        py::arg("phi"));
  m.def("vec_to_param", [](const Vec3& v) {
    ParamResult r = vec_to_param(v);
    return py::make_tuple(r.p.xi, r.p.phi);
  });
  m.def("adjoint_rep", [](double xi, const Vec3& b) { return adjoint_rep(xi, b); });
  m.def("quad_rep", [](double xi, const Vec3& b) { return quad_rep(xi, b); });
  m.def("trace_map", &trace_map);
  m.def("group_violation", &group_violation);
  m.def("wrap_angle", &wrap_angle);

  py::class_<FamilySpec>(m, "FamilySpec")
      .def(py::init(&make_spec), py::arg("family"), py::arg("n1"), py::arg("n3"), py::arg("lam"),
           py::arg("n2") = 0.0, py::arg("rate") = 1.0)
      .def_property_readonly("family", [](const FamilySpec& f) { return std::string(to_string(f.family)); })
      .def_readonly("n1", &FamilySpec::n1)
      .def_readonly("n2", &FamilySpec::n2)
      .def_readonly("n3", &FamilySpec::n3)
      .def_readonly("lam", &FamilySpec::lambda)
      .def("n_at", &FamilySpec::n_at);

  m.def("regime", [](const FamilySpec& f) {
    RegimeLabel r = regime(f);
    py::dict d;
    d["kind"] = to_string(r.kind);
    d["Lambda"] = r.Lambda;
    d["branch"] = r.branch;
    d["boundaries"] = r.boundary_lambdas;
    return d;
  });

  m.def("oracle_E", &oracle_E);
  m.def("oracle_Eq", &oracle_Eq);
  m.def("oracle_eta", &oracle_eta);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("t", &Trajectory::t)
      .def_readonly("phi", &Trajectory::phi)
      .def_property_readonly("e", [](const Trajectory& t) { return stack(t.e); })
      .def_readonly("E", &Trajectory::E)
      .def_readonly("Eq", &Trajectory::Eq)
      .def_readonly("A1", &Trajectory::A1)
      .def_readonly("A2", &Trajectory::A2)
      .def_readonly("drift_max", &Trajectory::drift_max)
      .def_readonly("group_violation_max", &Trajectory::group_violation_max)
      .def_readonly("substeps", &Trajectory::substeps)
      .def("__len__", &Trajectory::size);

  m.def(
      "integrate",
      [](const FamilySpec& f, double t_max, std::size_t nodes, const Vec3& e0, double step_bound) {
        IntegrateOptions o;
        o.step_bound = step_bound;
        py::gil_scoped_release unlock;
        return integrate(family_profile(f, t_max), e0, uniform_grid(t_max, nodes), o);
      },
      py::arg("spec"), py::arg("t_max"), py::arg("nodes") = 201, py::arg("e0") = Vec3(0, 0, 1),
      py::arg("step_bound") = 1e-3);
  m.def(
      "integrate_table",
      [](const std::vector<std::array<double, 5>>& rows, std::size_t nodes, const Vec3& e0) {
        std::vector<ProfileSample> s;
        for (const auto& r : rows) s.push_back({r[0], r[1], r[2], r[3], r[4]});
        Profile p = tabulated_profile(s);
        return integrate(p, e0, uniform_grid(p.t_max, nodes));
      },
      py::arg("rows"), py::arg("nodes") = 201, py::arg("e0") = Vec3(0, 0, 1),
      "rows of (t, omega, n1, n2, n3)");

  m.def(
      "phases",
      [](const Trajectory& t, double u0, long index) {
        std::size_t k = index < 0 ? t.size() - std::size_t(-index) : std::size_t(index);
        return phase_dict(phases(t, u0, k));
      },
      py::arg("traj"), py::arg("u0") = 0.5, py::arg("index") = -1);

  m.def(
      "verdict",
      [](const Mat3& E, const Mat2& Eq, std::optional<AlphaFn> alpha) {
        AlphaFn fn = alpha ? *alpha : AlphaFn([](const Vec3&) { return 0.0; });
        CyclicVerdict v = verdict(E, Eq, fn);
        py::dict d;
        d["kind"] = to_string(v.kind);
        d["eta"] = v.eta;
        d["eta_sq"] = v.eta_sq;
        d["boundary"] = v.boundary;
        d["alpha_tau"] = v.alpha_tau;
        d["N"] = v.N;
        d["parity_phases"] = v.parity_phases;
        return d;
      },
      py::arg("E"), py::arg("Eq"), py::arg("alpha_fn") = py::none());
  m.def("denumerable_phases", &denumerable_phases);
  m.def(
      "general_geometric_phase",
      [](double u0, double hannay, long N, std::optional<int> parity) {
        return parity ? general_geometric_phase(u0, hannay, OddCase{N, *parity})
                      : general_geometric_phase(u0, hannay, EvenCase{N});
      },
      py::arg("u0"), py::arg("hannay"), py::arg("N"), py::arg("parity") = py::none());

  m.def("measure_growth", [](const FamilySpec& f) {
    GrowthFit g = measure_growth(f, regime(f));
    py::dict d;
    d["loglin_slope"] = g.loglin_slope;
    d["loglog_slope"] = g.loglog_slope;
    d["agrees"] = g.agrees;
    return d;
  });

  py::class_<MomentState>(m, "MomentState")
      .def(py::init<>())
      .def_readwrite("xbar", &MomentState::xbar)
      .def_readwrite("pbar", &MomentState::pbar)
      .def_readwrite("u", &MomentState::u);
  m.def("squeezed_state", [](double u0, const Vec3& e0) { return squeezed_state(u0, e0); });
  m.def("evolve_state", [](const MomentState& s, const Mat3& E, const Mat2& Eq) { return evolve_state(s, E, Eq); });
  m.def("variances", [](const MomentState& s) {
    Variances v = variances(s);
    return py::make_tuple(v.dx, v.dp, v.cov);
  });
  m.def("classical_ellipse", [](const Vec3& e, double I) {
    EllipseCoeffs c = classical_ellipse(e, I);
    return py::make_tuple(c.A_pp, c.A_qp, c.A_qq);
  });
}
