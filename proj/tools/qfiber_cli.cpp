// qfiber: scenario runner and per-module probes for the fiber-quantization
// toolkit.  Exit codes: 0 all checks pass, 1 at least one check failed,
// 2 configuration error (bad flags, malformed config, missing files).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfiber/ccr.hpp"
#include "qfiber/checks.hpp"
#include "qfiber/clifford.hpp"
#include "qfiber/geometry.hpp"
#include "qfiber/grassmann.hpp"
#include "qfiber/hamiltonian.hpp"
#include "qfiber/hyperbolic.hpp"
#include "qfiber/localnets.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

[[noreturn]] void config_error(const std::string& what) {
  throw CLI::ValidationError("config", what);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    config_error("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// clifford --n <k> [--dump <path>]
// ---------------------------------------------------------------------------

json gamma_pairs_json(const qfiber::GammaRep& rep) {
  json j;
  j["n"] = rep.n;
  j["n1"] = rep.n1;
  json eta = json::array();
  for (int a = 0; a <= rep.n; ++a) eta.push_back(rep.eta(a));
  j["eta"] = eta;
  json gs = json::array();
  for (const auto& g : rep.gamma) {
    json rows = json::array();
    for (int i = 0; i < g.rows; ++i) {
      json row = json::array();
      for (int k = 0; k < g.cols; ++k)
        row.push_back(json::array({g.at(i, k).re_str(), g.at(i, k).im_str()}));
      rows.push_back(std::move(row));
    }
    gs.push_back(std::move(rows));
  }
  j["gamma"] = gs;
  return j;
}

int cmd_clifford(int n, const std::string& dump_path) {
  qfiber::GammaRep rep;
  try {
    rep = qfiber::build_gamma(n);
  } catch (const std::exception& e) {
    config_error(e.what());
  }
  auto violations = qfiber::check_clifford(rep);
  json out = gamma_pairs_json(rep);
  out["identities"] = violations.empty() ? "pass" : "fail";
  out["violations"] = violations;
  if (!dump_path.empty()) {
    std::ofstream of(dump_path);
    if (!of) config_error("cannot write '" + dump_path + "'");
    of << out.dump(2) << "\n";
    json note = {{"n", n}, {"n1", rep.n1}, {"identities", out["identities"]},
                 {"dumped_to", dump_path}};
    emit(note);
  } else {
    emit(out);
  }
  return violations.empty() ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// grassmann car-check --n1 <a> --n2 <b> [--sites <s>]
// ---------------------------------------------------------------------------

int cmd_grassmann_car(int n1, int n2, int sites) {
  qfiber::GrassmannLayout layout{sites, n2, n1};
  if (layout.total() < 1 || layout.total() > 10)
    config_error("generator count sites*n2*n1 must lie in [1, 10] for the dense check");
  qfiber::CarReport rep = qfiber::car_check(layout);
  json out = {
      {"identity", "canonical anticommutation relations with matrix-level adjoints"},
      {"status", rep.pass ? "pass" : "fail"},
      {"max_violation", rep.max_violation},
      {"generators", layout.total()},
  };
  if (!rep.pass) out["violations"] = rep.violations;
  emit(out);
  return rep.pass ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// geometry signature --config <file>
// config: {"n": 2, "h": 0.1, "points": [[g11, g12, ...], ...]}
// ---------------------------------------------------------------------------

Eigen::MatrixXd metric_from_row(const json& row, int n) {
  if (!row.is_array()) config_error("each point must be an array of metric entries");
  std::vector<double> v;
  for (const auto& x : row) {
    if (!x.is_number()) config_error("metric entries must be numbers");
    v.push_back(x.get<double>());
  }
  Eigen::MatrixXd g(n, n);
  if (static_cast<int>(v.size()) == n * n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = v[i * n + j];
    if ((g - g.transpose()).norm() > 1e-12 * (1.0 + g.norm()))
      config_error("row-major metric point is not symmetric");
  } else if (static_cast<int>(v.size()) == n * (n + 1) / 2) {
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        g(i, j) = v[k];
        g(j, i) = v[k];
        ++k;
      }
  } else {
    config_error("each point needs n*n or n*(n+1)/2 entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0)
    config_error("metric point is not positive definite");
  return g;
}

int cmd_geometry_signature(const std::string& config_path) {
  json cfg = load_json_file(config_path);
  reject_unknown_keys(cfg, {"n", "h", "points"}, "geometry config");
  if (!cfg.contains("n") || !cfg.at("n").is_number_integer())
    config_error("geometry config requires integer 'n'");
  int n = cfg.at("n").get<int>();
  if (n < 1 || n > 6) config_error("'n' must lie in [1, 6]");
  if (!cfg.contains("points") || !cfg.at("points").is_array() || cfg.at("points").empty())
    config_error("geometry config requires a nonempty 'points' array");

  json records = json::array();
  bool all_ok = true;
  int idx = 0;
  for (const auto& row : cfg.at("points")) {
    Eigen::MatrixXd g = metric_from_row(row, n);
    qfiber::DeWitt dw = qfiber::dewitt_metric(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dw.flat);
    int neg = 0, pos = 0, zero = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      double ev = es.eigenvalues()(i);
      if (ev < -1e-12)
        ++neg;
      else if (ev > 1e-12)
        ++pos;
      else
        ++zero;
    }
    bool ok = neg == 1 && zero == 0;
    all_ok = all_ok && ok;
    double tr = qfiber::dewitt_trace_value(g);
    records.push_back({{"point", idx++},
                       {"negative", neg},
                       {"positive", pos},
                       {"null", zero},
                       {"trace_value", tr},
                       {"trace_expected", static_cast<double>(n - n * n)},
                       {"pass", ok}});
  }
  emit(json{{"n", n}, {"points", records}, {"pass", all_ok}});
  return all_ok ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// hamiltonian check --sector ... --config <file>
// config: {"seed": 1, "trials": 50, "mass": 0.4}   (all optional)
// ---------------------------------------------------------------------------

int cmd_hamiltonian_check(const std::string& sector, const std::string& config_path) {
  json cfg = config_path.empty() ? json::object() : load_json_file(config_path);
  reject_unknown_keys(cfg, {"seed", "trials", "mass"}, "hamiltonian config");
  qfiber::checks::RunOptions opt;
  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_integer() || cfg.at("seed").get<int64_t>() < 0)
      config_error("'seed' must be a nonnegative integer");
    opt.seed = cfg.at("seed").get<uint64_t>();
  }
  json prm = json::object();
  if (cfg.contains("trials")) {
    if (!cfg.at("trials").is_number_integer() || cfg.at("trials").get<int>() < 1)
      config_error("'trials' must be a positive integer");
    prm["trials"] = cfg.at("trials");
  }
  json mass_prm = json::object();
  if (cfg.contains("mass")) {
    if (!cfg.at("mass").is_number()) config_error("'mass' must be a number");
    mass_prm["mass"] = cfg.at("mass");
  }

  struct SectorChecks {
    const char* sector;
    std::vector<const char*> ids;
  };
  static const std::vector<SectorChecks> table = {
      {"gravity", {"hamiltonian.gravity_legendre.eq5_19"}},
      {"ym", {"hamiltonian.ym_legendre.eq3_51"}},
      {"higgs", {"hamiltonian.higgs_legendre.eq4_10"}},
      {"dirac",
       {"hamiltonian.dirac_hermitian.eq4_65", "hamiltonian.dirac_fock.eq3_46",
        "hamiltonian.dirac_conjugation.eq4_65"}},
  };
  std::vector<std::pair<std::string, std::string>> selected;  // (sector, id)
  for (const auto& sc : table)
    if (sector == "all" || sector == sc.sector)
      for (const char* id : sc.ids) selected.emplace_back(sc.sector, id);
  if (sector == "all") {
    selected.emplace_back("all", "hamiltonian.constraint.sec4");
    selected.emplace_back("all", "hamiltonian.wdw_symmetry.sec4");
  }
  if (selected.empty()) config_error("unknown sector '" + sector + "'");

  for (const auto& [sec, id] : selected) {
    const bool legendre = std::string(id).find("legendre") != std::string::npos;
    const bool dirac = std::string(id).find("dirac") != std::string::npos;
    json p = json::object();
    if (legendre && !prm.empty()) p.update(prm);
    if (dirac && !mass_prm.empty()) p.update(mass_prm);
    if (!p.empty()) opt.params[id] = p;
    opt.ids.push_back(id);
  }
  std::sort(opt.ids.begin(), opt.ids.end());

  qfiber::checks::SuiteReport rep = qfiber::checks::run_suite(opt, "hamiltonian." + sector);
  json records = json::array();
  for (const auto& rec : rep.records) {
    std::string sec = "all";
    for (const auto& [s, id] : selected)
      if (id == rec.id) sec = s;
    json r = {{"sector", sec},
              {"check", rec.id},
              {"residual", rec.measured},
              {"tolerance", rec.tolerance},
              {"pass", rec.pass}};
    if (!rec.error.empty()) r["error"] = rec.error;
    records.push_back(std::move(r));
  }
  emit(json{{"sector", sector}, {"checks", records}, {"pass", rep.pass()}});
  return rep.pass() ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// hyperbolic green --mode ... --config <file>
// config: {"Nt":65,"Nx":64,"ht":...,"hx":...,"metric":"flat"|{"sigma":s},
//          "c":1.0,"source":{...}}
// ---------------------------------------------------------------------------

qfiber::GridField source_from_json(const qfiber::LatticeFiber& lat, const json& src) {
  static const std::set<std::string> box_keys = {"type", "t0", "t1", "x0", "x1", "pi", "pj"};
  static const std::set<std::string> fourier_keys = {"type", "t0", "t1", "k", "sine"};
  if (!src.is_object() || !src.contains("type") || !src.at("type").is_string())
    config_error("'source' must be an object with a string 'type'");
  auto need = [&](const char* key) {
    if (!src.contains(key) || !src.at(key).is_number())
      config_error(std::string("source requires numeric '") + key + "'");
    return src.at(key).get<double>();
  };
  std::string type = src.at("type").get<std::string>();
  if (type == "box_bump") {
    reject_unknown_keys(src, box_keys, "source");
    int pi = src.value("pi", 0), pj = src.value("pj", 0);
    return qfiber::box_bump(lat, need("t0"), need("t1"), need("x0"), need("x1"), pi, pj);
  }
  if (type == "fourier") {
    reject_unknown_keys(src, fourier_keys, "source");
    if (!src.contains("k") || !src.at("k").is_number_integer())
      config_error("fourier source requires integer 'k'");
    bool sine = src.value("sine", false);
    return qfiber::fourier_source(lat, need("t0"), need("t1"), src.at("k").get<int>(), sine);
  }
  config_error("source type must be 'box_bump' or 'fourier'");
}

int cmd_hyperbolic_green(const std::string& mode_str, const std::string& config_path) {
  json cfg = load_json_file(config_path);
  reject_unknown_keys(cfg, {"Nt", "Nx", "ht", "hx", "metric", "c", "source"},
                      "hyperbolic config");
  auto geti = [&](const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_number_integer())
      config_error(std::string("config requires integer '") + key + "'");
    return cfg.at(key).get<int>();
  };
  auto getd = [&](const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_number())
      config_error(std::string("config requires numeric '") + key + "'");
    return cfg.at(key).get<double>();
  };
  int Nt = geti("Nt"), Nx = geti("Nx");
  double ht = getd("ht"), hx = getd("hx");
  double c = cfg.contains("c") ? getd("c") : 0.0;

  qfiber::LatticeFiber lat;
  try {
    if (!cfg.contains("metric") || (cfg.at("metric").is_string() &&
                                    cfg.at("metric").get<std::string>() == "flat")) {
      lat = qfiber::flat_lattice(Nt, Nx, ht, hx, c);
    } else if (cfg.at("metric").is_object()) {
      reject_unknown_keys(cfg.at("metric"), {"sigma"}, "metric");
      if (!cfg.at("metric").contains("sigma") || !cfg.at("metric").at("sigma").is_number())
        config_error("inline metric requires numeric 'sigma'");
      lat = qfiber::exponential_trace_section(Nt, Nx, ht, hx,
                                              cfg.at("metric").at("sigma").get<double>(), c);
    } else {
      config_error("'metric' must be \"flat\" or an inline object {\"sigma\": ...}");
    }
    lat.validate();
  } catch (const std::exception& e) {
    config_error(e.what());
  }

  if (!cfg.contains("source")) config_error("config requires 'source'");
  qfiber::GridField u = source_from_json(lat, cfg.at("source"));

  qfiber::GreenMode mode;
  if (mode_str == "retarded")
    mode = qfiber::GreenMode::Retarded;
  else if (mode_str == "advanced")
    mode = qfiber::GreenMode::Advanced;
  else if (mode_str == "pauli-jordan")
    mode = qfiber::GreenMode::PauliJordan;
  else
    config_error("mode must be retarded, advanced, or pauli-jordan");

  qfiber::GridField g = qfiber::green_apply(lat, u, mode);
  std::ostringstream os;
  os << "t,x";
  for (int f = 0; f < g.fd; ++f) os << ",u" << f;
  os << "\n";
  os << std::setprecision(17);
  for (int m = 0; m < g.Nt; ++m)
    for (int j = 0; j < g.Nx; ++j) {
      os << lat.tcoord(m) << "," << lat.xcoord(j);
      for (int f = 0; f < g.fd; ++f) os << "," << g.comp[f](m, j);
      os << "\n";
    }
  std::cout << os.str();
  return kExitPass;
}

// ---------------------------------------------------------------------------
// ccr check --config <file>
// config: {"den":64,"modes":8,"Nmax":6,"M_row":48,"pairs":[{"id":...,
//          "u":{"k":1,"sine":false,"t0":..,"t1":..}, "v":{...}}]}
// ---------------------------------------------------------------------------

qfiber::GridField window_source(const qfiber::LatticeFiber& lat, const json& w,
                                const std::string& where) {
  reject_unknown_keys(w, {"k", "sine", "t0", "t1"}, where);
  if (!w.contains("k") || !w.at("k").is_number_integer())
    config_error(where + " requires integer 'k'");
  if (!w.contains("t0") || !w.at("t0").is_number() || !w.contains("t1") ||
      !w.at("t1").is_number())
    config_error(where + " requires numeric 't0' and 't1'");
  return qfiber::fourier_source(lat, w.at("t0").get<double>(), w.at("t1").get<double>(),
                                w.at("k").get<int>(), w.value("sine", false));
}

int cmd_ccr_check(const std::string& config_path) {
  json cfg = config_path.empty() ? json::object() : load_json_file(config_path);
  reject_unknown_keys(cfg, {"den", "modes", "Nmax", "M_row", "pairs"}, "ccr config");
  int den = cfg.value("den", 64);
  int modes = cfg.value("modes", 8);
  int Nmax = cfg.value("Nmax", 6);
  if (den < 16 || den % 8 != 0) config_error("'den' must be a multiple of 8, at least 16");
  if (modes < 2 || modes > 16) config_error("'modes' must lie in [2, 16]");
  if (Nmax < 3 || Nmax > 8) config_error("'Nmax' must lie in [3, 8]");
  json pairs = cfg.contains("pairs") ? cfg.at("pairs") : json::array({json{
      {"id", "default-window-pair"},
      {"u", {{"k", 1}, {"sine", false}, {"t0", 0.15}, {"t1", 0.5}}},
      {"v", {{"k", 1}, {"sine", false}, {"t0", 0.3}, {"t1", 0.62}}},
  }});
  if (!pairs.is_array() || pairs.empty()) config_error("'pairs' must be a nonempty array");

  json records = json::array();
  bool all_ok = true;
  for (const auto& pr : pairs) {
    reject_unknown_keys(pr, {"id", "u", "v"}, "pair");
    if (!pr.contains("id") || !pr.at("id").is_string())
      config_error("each pair requires a string 'id'");
    if (!pr.contains("u") || !pr.contains("v"))
      config_error("each pair requires 'u' and 'v' window sources");
    double defect[2];
    double omega = 0.0, scalar = 0.0, residual = 0.0;
    int idx = 0;
    for (int d : {den, 2 * den}) {
      qfiber::LatticeFiber lat = qfiber::flat_lattice(d + 1, d, 1.0 / d, 1.0 / d, 1.0);
      int M = 3 * d / 4;
      qfiber::OneParticleSpace sp = qfiber::fourier_space(lat, M, modes);
      qfiber::FockSpace fock = qfiber::fock_space(modes, d == den ? Nmax : Nmax - 2);
      qfiber::GridField u = window_source(lat, pr.at("u"), "pair.u");
      qfiber::GridField v = window_source(lat, pr.at("v"), "pair.v");
      qfiber::CcrReport rep;
      try {
        rep = qfiber::ccr_commutator_check(lat, sp, fock, u, v, M);
      } catch (const std::exception& e) {
        config_error(std::string("pair '") + pr.at("id").get<std::string>() + "': " + e.what());
      }
      defect[idx++] = std::abs(rep.commutator_scalar - rep.omega);
      if (d == den) {
        omega = rep.omega;
        scalar = rep.commutator_scalar;
        residual = rep.residual;
      }
    }
    qfiber::OrderFit fit = qfiber::order_estimate(defect[0], defect[1]);
    bool ok = fit.below_floor || fit.order >= 1.8;
    all_ok = all_ok && ok;
    records.push_back({{"pair_id", pr.at("id")},
                       {"omega", omega},
                       {"commutator_scalar", scalar},
                       {"residual", residual},
                       {"order_estimate", fit.below_floor ? json(nullptr) : json(fit.order)},
                       {"pass", ok}});
  }
  emit(json{{"den", den}, {"modes", modes}, {"Nmax", Nmax}, {"pairs", records},
            {"pass", all_ok}});
  return all_ok ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// haag-kastler run --scenario <file>
// scenario: {"den":64,"orders":4,"rows":{"M":52,"M_recon":40},
//            "regions":[[t0,t1,x0,x1] x3], "dictionary":{"orders":4}, ...}
// ---------------------------------------------------------------------------

qfiber::Region region_from_json(const json& r, const std::string& where) {
  if (!r.is_array() || r.size() != 4) config_error(where + " must be [t0, t1, x0, x1]");
  for (const auto& x : r)
    if (!x.is_number_integer()) config_error(where + " entries must be integers");
  return qfiber::Region{r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<int>()};
}

int cmd_haag_kastler(const std::string& scenario_path) {
  json cfg = load_json_file(scenario_path);
  reject_unknown_keys(cfg, {"den", "regions", "dictionary", "rows"}, "haag-kastler scenario");
  int den = cfg.value("den", 64);
  if (den < 64 || den % 64 != 0) config_error("'den' must be a positive multiple of 64");
  int s = den / 64;
  int orders = 4;
  if (cfg.contains("dictionary")) {
    reject_unknown_keys(cfg.at("dictionary"), {"orders"}, "dictionary");
    orders = cfg.at("dictionary").value("orders", 4);
    if (orders < 2 || orders > 6) config_error("'dictionary.orders' must lie in [2, 6]");
  }
  int M = 52 * s, M_recon = 40 * s;
  if (cfg.contains("rows")) {
    reject_unknown_keys(cfg.at("rows"), {"M", "M_recon"}, "rows");
    M = cfg.at("rows").value("M", M);
    M_recon = cfg.at("rows").value("M_recon", M_recon);
  }
  qfiber::Region r1{26 * s, 32 * s, 6 * s, 16 * s};
  qfiber::Region r2{26 * s, 32 * s, 38 * s, 48 * s};
  qfiber::Region r3{34 * s, 40 * s, 6 * s, 16 * s};
  if (cfg.contains("regions")) {
    const json& rg = cfg.at("regions");
    if (!rg.is_array() || rg.size() != 3)
      config_error("'regions' must list exactly three boxes");
    r1 = region_from_json(rg[0], "regions[0]");
    r2 = region_from_json(rg[1], "regions[1]");
    r3 = region_from_json(rg[2], "regions[2]");
  }
  qfiber::Region inner{r1.t0 + 1, r1.t1 - 1, r1.x0 + 1, r1.x1 - 1};

  qfiber::LatticeFiber lat = qfiber::flat_lattice(den + 1, den, 1.0 / den, 1.0 / den, 1.0);
  json out;
  bool all_ok = true;
  try {
    qfiber::LocalNet net_iso = qfiber::make_net(lat, {inner, r1, r2}, orders);
    qfiber::LocalNet net = qfiber::make_net(lat, {r1, r2, r3}, orders);

    qfiber::Axiom1Report a1 = qfiber::axiom1_isotony_check(net_iso, inner, r1);
    out["axiom1"] = {{"nested", a1.nested},
                     {"supports_ok", a1.supports_ok},
                     {"n_inner", a1.n_inner},
                     {"n_outer", a1.n_outer},
                     {"pass", a1.pass()}};
    all_ok = all_ok && a1.pass();

    qfiber::Axiom2Report a2 = qfiber::axiom2_primitivity_surrogate(net, M);
    bool a2_ok = a2.commutant_dim == 1;
    out["axiom2"] = {{"commutant_dim", a2.commutant_dim},
                     {"block_dim", a2.block_dim},
                     {"pass", a2_ok}};
    all_ok = all_ok && a2_ok;

    qfiber::Axiom3Report a3 = qfiber::axiom3_causality_check(net, r1, r2, M);
    qfiber::Axiom3Report control = qfiber::causal_pair_scan(net, r1, r3, M);
    bool a3_ok = a3.max_omega <= 1e-6 && a3.max_commutation <= 1e-8 &&
                 control.max_omega > 1e-5;
    out["axiom3"] = {{"pairs", a3.pairs},
                     {"max_omega", a3.max_omega},
                     {"max_sigma", a3.max_sigma},
                     {"max_commutation", a3.max_commutation},
                     {"control_max_omega", control.max_omega},
                     {"pass", a3_ok}};
    all_ok = all_ok && a3_ok;

    qfiber::Region r_dep{46 * s, 52 * s, 26 * s, 38 * s};
    qfiber::Region r_src{20 * s, 45 * s, 6 * s, 58 * s};
    qfiber::GridField u =
        qfiber::box_bump(lat, lat.tcoord(47 * s), lat.tcoord(51 * s), lat.xcoord(27 * s),
                         lat.xcoord(37 * s));
    qfiber::Axiom4Report a4 =
        qfiber::axiom4_second_causality_check(lat, r_dep, r_src, M_recon, u, 0.125);
    bool a4_ok = a4.residual <= 1e-3 && a4.tail == 0.0;
    out["axiom4"] = {{"residual", a4.residual},
                     {"gu_scale", a4.gu_scale},
                     {"tail", a4.tail},
                     {"pass", a4_ok}};
    all_ok = all_ok && a4_ok;
  } catch (const std::exception& e) {
    config_error(e.what());
  }
  out["pass"] = all_ok;
  emit(out);
  return all_ok ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// run <scenario.json> [--parallel] [--out <dir>]
// ---------------------------------------------------------------------------

int cmd_run(const std::string& scenario_path, bool parallel, const std::string& out_dir) {
  json scenario = load_json_file(scenario_path);
  std::string name, output;
  qfiber::checks::RunOptions opt;
  try {
    opt = qfiber::checks::parse_scenario(scenario, &name, &output);
  } catch (const std::invalid_argument& e) {
    config_error(e.what());
  }
  opt.parallel = parallel;
  qfiber::checks::SuiteReport rep = qfiber::checks::run_suite(opt, name);
  json report = qfiber::checks::report_json(rep);
  std::cout << report.dump(2) << "\n";

  auto write_file = [&](const fs::path& p, const std::string& body) {
    std::ofstream of(p);
    if (!of) config_error("cannot write '" + p.string() + "'");
    of << body;
  };
  if (!output.empty()) {
    fs::path p = fs::path(scenario_path).parent_path() / output;
    fs::create_directories(p.parent_path().empty() ? fs::path(".") : p.parent_path());
    write_file(p, report.dump(2) + "\n");
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    write_file(fs::path(out_dir) / "report.md", qfiber::checks::report_markdown(rep));
  }
  return rep.pass() ? kExitPass : kExitCheckFailure;
}

int cmd_list_checks() {
  json out = json::array();
  for (const auto& def : qfiber::checks::catalog())
    out.push_back({{"id", def.id}, {"paper_ref", def.ref}, {"summary", def.summary}});
  emit(out);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale verification toolkit for fiber quantization"};
  app.set_version_flag("--version", std::string(qfiber::checks::kVersion));
  app.require_subcommand(1);

  // clifford
  auto* clifford = app.add_subcommand("clifford", "build gamma matrices and verify identities");
  int cl_n = 0;
  std::string cl_dump;
  clifford->add_option("--n", cl_n, "spatial dimension (1..11)")->required();
  clifford->add_option("--dump", cl_dump, "write the matrices as JSON to this path");

  // grassmann car-check
  auto* grassmann = app.add_subcommand("grassmann", "anticommuting-polynomial checks");
  auto* car = grassmann->add_subcommand("car-check", "verify anticommutation relations");
  int gr_n1 = 2, gr_n2 = 2, gr_sites = 1;
  car->add_option("--n1", gr_n1, "spinor components per site")->required();
  car->add_option("--n2", gr_n2, "colour components per site")->required();
  car->add_option("--sites", gr_sites, "grid sites (default 1)");
  grassmann->require_subcommand(1);

  // geometry signature
  auto* geometry = app.add_subcommand("geometry", "metric-space probes");
  auto* signature = geometry->add_subcommand("signature", "supermetric eigen-signature");
  std::string geo_config;
  signature->add_option("--config", geo_config, "JSON config {n, h, points}")->required();
  geometry->require_subcommand(1);

  // hamiltonian check
  auto* hamiltonian = app.add_subcommand("hamiltonian", "sector Hamiltonian checks");
  auto* hcheck = hamiltonian->add_subcommand("check", "Legendre and fermion-sector checks");
  std::string h_sector = "all", h_config;
  hcheck->add_option("--sector", h_sector, "gravity|ym|higgs|dirac|all")
      ->check(CLI::IsMember({"gravity", "ym", "higgs", "dirac", "all"}));
  hcheck->add_option("--config", h_config, "JSON config {seed, trials, mass}");
  hamiltonian->require_subcommand(1);

  // hyperbolic green
  auto* hyperbolic = app.add_subcommand("hyperbolic", "lattice wave-operator probes");
  auto* green = hyperbolic->add_subcommand("green", "apply a propagator, dump CSV");
  std::string hy_mode = "retarded", hy_config;
  green->add_option("--mode", hy_mode, "retarded|advanced|pauli-jordan")
      ->check(CLI::IsMember({"retarded", "advanced", "pauli-jordan"}));
  green->add_option("--config", hy_config, "JSON lattice + source config")->required();
  hyperbolic->require_subcommand(1);

  // ccr check
  auto* ccr = app.add_subcommand("ccr", "field-commutator probes");
  auto* ccr_check = ccr->add_subcommand("check", "commutator scalar vs pairing form");
  std::string ccr_config;
  ccr_check->add_option("--config", ccr_config, "JSON config {den, modes, Nmax, pairs}");
  ccr->require_subcommand(1);

  // haag-kastler run
  auto* haag = app.add_subcommand("haag-kastler", "local-net axiom checks");
  auto* haag_run = haag->add_subcommand("run", "evaluate all four axioms");
  std::string haag_scenario;
  haag_run->add_option("--scenario", haag_scenario, "JSON scenario {regions, dictionary, rows}")
      ->required();
  haag->require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute a verification scenario");
  std::string run_scenario, run_out;
  bool run_parallel = false;
  run->add_option("scenario", run_scenario, "scenario JSON path")->required();
  run->add_flag("--parallel", run_parallel, "run independent checks concurrently");
  run->add_option("--out", run_out, "directory for report.json and report.md");

  // list-checks
  app.add_subcommand("list-checks", "print the full check catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (app.got_subcommand("clifford")) return cmd_clifford(cl_n, cl_dump);
    if (app.got_subcommand("grassmann")) return cmd_grassmann_car(gr_n1, gr_n2, gr_sites);
    if (app.got_subcommand("geometry")) return cmd_geometry_signature(geo_config);
    if (app.got_subcommand("hamiltonian")) return cmd_hamiltonian_check(h_sector, h_config);
    if (app.got_subcommand("hyperbolic")) return cmd_hyperbolic_green(hy_mode, hy_config);
    if (app.got_subcommand("ccr")) return cmd_ccr_check(ccr_config);
    if (app.got_subcommand("haag-kastler")) return cmd_haag_kastler(haag_scenario);
    if (app.got_subcommand("run")) return cmd_run(run_scenario, run_parallel, run_out);
    if (app.got_subcommand("list-checks")) return cmd_list_checks();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitConfigError;
}
