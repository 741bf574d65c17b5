#include "qfiber/clifford.hpp"

#include <stdexcept>

namespace qfiber {

namespace {

ExactMat sigma_x() {
  ExactMat m(2, 2);
  m.at(0, 1) = Exact(1);
  m.at(1, 0) = Exact(1);
  return m;
}
ExactMat sigma_y() {
  ExactMat m(2, 2);
  m.at(0, 1) = -Exact::i();
  m.at(1, 0) = Exact::i();
  return m;
}
ExactMat sigma_z() {
  ExactMat m(2, 2);
  m.at(0, 0) = Exact(1);
  m.at(1, 1) = -Exact(1);
  return m;
}

// Irreducible representation for even spacetime dimension d.
std::vector<ExactMat> even_rep(int d) {
  std::vector<ExactMat> g;
  ExactMat g0(2, 2);
  g0.at(0, 1) = Exact(1);
  g0.at(1, 0) = -Exact(1);
  g.push_back(g0);
  g.push_back(sigma_x());
  for (int dim = 2; dim < d; dim += 2) {
    std::vector<ExactMat> next;
    int id_n = g[0].rows;
    for (const auto& m : g) next.push_back(ExactMat::kron(m, sigma_z()));
    next.push_back(ExactMat::kron(ExactMat::identity(id_n), sigma_x()));
    next.push_back(ExactMat::kron(ExactMat::identity(id_n), sigma_y()));
    g = std::move(next);
  }
  return g;
}

}  // namespace

GammaRep build_gamma(int n) {
  if (n < 1 || n > 11)
    throw std::invalid_argument("build_gamma: supported spatial dimensions are 1..11");
  GammaRep rep;
  rep.n = n;
  int d = n + 1;
  if (d % 2 == 0) {
    rep.gamma = even_rep(d);
  } else {
    auto base = even_rep(d - 1);
    // Chirality-like closer: product of all even-dimensional generators,
    // scaled to be hermitian with square I.
    ExactMat prod = base[0];
    for (size_t a = 1; a < base.size(); ++a) prod = prod * base[a];
    int m = ((d - 1) * (d - 2)) / 2;
    ExactMat star = (m % 2 == 1) ? prod : prod.scaled(Exact::i());
    for (const auto& g : base) rep.gamma.push_back(ExactMat::block_diag(g, g));
    rep.gamma.push_back(ExactMat::block_diag(star, -star));
  }
  rep.n1 = rep.gamma[0].rows;
  return rep;
}

std::vector<std::string> check_clifford(const GammaRep& rep) {
  std::vector<std::string> bad;
  int d = rep.n + 1;
  const auto I = ExactMat::identity(rep.n1);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      ExactMat anti = rep.gamma[a] * rep.gamma[b] + rep.gamma[b] * rep.gamma[a];
      ExactMat want = (a == b) ? I.scaled(Exact(2 * rep.eta(a))) : ExactMat(rep.n1, rep.n1);
      if (!(anti == want))
        bad.push_back("anticommutator(" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
  if (!(rep.gamma[0].adjoint() == -rep.gamma[0])) bad.push_back("gamma^0 antihermitian");
  for (int a = 1; a < d; ++a)
    if (!(rep.gamma[a].adjoint() == rep.gamma[a]))
      bad.push_back("gamma^" + std::to_string(a) + " hermitian");
  // Index-lowering identities used by the fermionic sector.
  for (int a = 1; a < d; ++a) {
    if (!(rep.gamma[0] * rep.gamma[a] == -(rep.gamma[a] * rep.gamma[0])))
      bad.push_back("gamma_0 anticommutes with gamma^" + std::to_string(a));
    ExactMat p = rep.gamma[0] * rep.gamma[a];
    if (!(p.adjoint() == p)) bad.push_back("gamma^0 gamma^" + std::to_string(a) + " hermitian");
    ExactMat q = lower_index(rep, a) * rep.gamma[0];
    if (!(q.adjoint() == q)) bad.push_back("gamma_" + std::to_string(a) + " gamma^0 hermitian");
  }
  return bad;
}

ExactMat lower_index(const GammaRep& rep, int a) {
  if (a < 0 || a > rep.n) throw std::invalid_argument("lower_index: index out of range");
  return a == 0 ? -rep.gamma[0] : rep.gamma[a];
}

nlohmann::json gamma_json(const GammaRep& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["n1"] = rep.n1;
  auto eta = nlohmann::json::array();
  for (int a = 0; a <= rep.n; ++a) eta.push_back(rep.eta(a));
  j["eta"] = eta;
  auto gs = nlohmann::json::array();
  for (const auto& g : rep.gamma) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < g.rows; ++i) {
      auto row = nlohmann::json::array();
      for (int k = 0; k < g.cols; ++k)
        row.push_back({{"re", g.at(i, k).re_str()}, {"im", g.at(i, k).im_str()}});
      rows.push_back(row);
    }
    gs.push_back(rows);
  }
  j["gamma"] = gs;
  return j;
}

}  // namespace qfiber
