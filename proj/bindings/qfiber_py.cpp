// Python bindings: the check catalog/runner plus the most useful primitives.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfiber/checks.hpp"
#include "qfiber/clifford.hpp"
#include "qfiber/geometry.hpp"
#include "qfiber/grassmann.hpp"
#include "qfiber/hyperbolic.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(json_to_py(v));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      throw std::runtime_error("unsupported JSON payload");
  }
}

py::list list_checks() {
  py::list out;
  for (const auto& def : qfiber::checks::catalog()) {
    py::dict d;
    d["id"] = def.id;
    d["paper_ref"] = def.ref;
    d["summary"] = def.summary;
    out.append(d);
  }
  return out;
}

py::object run_checks(const std::vector<std::string>& ids, uint64_t seed, bool parallel,
                      const std::map<std::string, double>& tolerances,
                      const std::map<std::string, std::string>& params_json,
                      const std::string& scenario) {
  qfiber::checks::RunOptions opt;
  opt.seed = seed;
  opt.parallel = parallel;
  opt.ids = ids;
  opt.tolerance_override = tolerances;
  for (const auto& [id, body] : params_json) {
    json prm = json::parse(body);
    if (!prm.is_object()) throw std::invalid_argument("params for '" + id + "' must be an object");
    opt.params[id] = prm;
  }
  qfiber::checks::SuiteReport rep = qfiber::checks::run_suite(opt, scenario);
  return json_to_py(qfiber::checks::report_json(rep));
}

py::dict gamma_matrices(int n) {
  qfiber::GammaRep rep = qfiber::build_gamma(n);
  py::list gammas, eta;
  for (const auto& g : rep.gamma) gammas.append(Eigen::MatrixXcd(g.to_complex()));
  for (int a = 0; a <= rep.n; ++a) eta.append(rep.eta(a));
  py::dict out;
  out["n"] = rep.n;
  out["n1"] = rep.n1;
  out["eta"] = eta;
  out["gamma"] = gammas;
  return out;
}

py::dict car_check(int sites, int n2, int n1) {
  qfiber::GrassmannLayout layout{sites, n2, n1};
  qfiber::CarReport rep = qfiber::car_check(layout);
  py::dict out;
  out["pass"] = rep.pass;
  out["max_violation"] = rep.max_violation;
  out["violations"] = rep.violations;
  out["generators"] = layout.total();
  return out;
}

py::dict dewitt(const Eigen::MatrixXd& g) {
  qfiber::DeWitt dw = qfiber::dewitt_metric(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dw.flat);
  int neg = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0) ++neg;
  py::dict out;
  out["flat"] = dw.flat;
  out["negative"] = neg;
  out["positive"] = static_cast<int>(es.eigenvalues().size()) - neg;
  out["trace_value"] = qfiber::dewitt_trace_value(g);
  return out;
}

Eigen::MatrixXd green_field(int Nt, int Nx, double ht, double hx, double c,
                            const std::string& mode, double t0, double t1, double x0,
                            double x1) {
  qfiber::LatticeFiber lat = qfiber::flat_lattice(Nt, Nx, ht, hx, c);
  lat.validate();
  qfiber::GreenMode m;
  if (mode == "retarded")
    m = qfiber::GreenMode::Retarded;
  else if (mode == "advanced")
    m = qfiber::GreenMode::Advanced;
  else if (mode == "pauli-jordan")
    m = qfiber::GreenMode::PauliJordan;
  else
    throw std::invalid_argument("mode must be retarded, advanced, or pauli-jordan");
  return qfiber::green_apply(lat, qfiber::box_bump(lat, t0, t1, x0, x1), m).comp[0];
}

}  // namespace

PYBIND11_MODULE(qfiber_py, m) {
  m.doc() = "desk-scale verification toolkit for fiber quantization";
  m.attr("__version__") = qfiber::checks::kVersion;

  m.def("list_checks", &list_checks,
        "Full catalog as a list of {id, paper_ref, summary} dicts.");
  m.def("run_checks", &run_checks, py::arg("ids") = std::vector<std::string>{},
        py::arg("seed") = qfiber::checks::kDefaultSeed, py::arg("parallel") = false,
        py::arg("tolerances") = std::map<std::string, double>{},
        py::arg("params") = std::map<std::string, std::string>{},
        py::arg("scenario") = "python",
        "Run catalog checks (all when ids is empty) and return the report dict. "
        "params maps check ids to JSON-encoded parameter objects.");
  m.def("check_clifford", [](int n) { return qfiber::check_clifford(qfiber::build_gamma(n)); },
        py::arg("n"), "Identity violations of the generated gamma matrices (empty = pass).");
  m.def("gamma_matrices", &gamma_matrices, py::arg("n"),
        "Gamma matrices as complex arrays with their metric signs.");
  m.def("car_check", &car_check, py::arg("sites") = 1, py::arg("n2") = 1,
        py::arg("n1") = 2, "Anticommutation-relation check for the layout.");
  m.def("real_imag_check",
        [](int n1, int n2) {
          qfiber::RealImagReport rep = qfiber::real_imag_identity_check(n1, n2);
          return py::make_tuple(rep.pass, rep.max_violation);
        },
        py::arg("n1") = 1, py::arg("n2") = 1,
        "Kinetic-term identity between complex generators and their real parts.");
  m.def("dewitt", &dewitt, py::arg("g"),
        "Flattened supermetric of an SPD metric with its eigenvalue signature.");
  m.def("dewitt_trace_value", &qfiber::dewitt_trace_value, py::arg("g"),
        "Supermetric value on the pure-trace direction (equals n - n^2).");
  m.def("conformal_factor", &qfiber::conformal_factor, py::arg("g"), py::arg("rho"),
        "Scalar density sqrt(det g / det rho).");
  m.def("green_field", &green_field, py::arg("Nt"), py::arg("Nx"), py::arg("ht"),
        py::arg("hx"), py::arg("c"), py::arg("mode"), py::arg("t0"), py::arg("t1"),
        py::arg("x0"), py::arg("x1"),
        "Propagator applied to a box bump on a flat lattice; returns the field sheet.");
}
