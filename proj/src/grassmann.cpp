#include "qfiber/grassmann.hpp"

#include "qfiber/rng.hpp"

namespace qfiber {

namespace {
using EOp = GOp<Exact>;
using EPoly = GPoly<Exact>;

void record(CarReport& rep, const std::string& what, const EPoly& residual) {
  if (residual.is_zero()) return;
  rep.violations.push_back(what);
  rep.max_violation = std::max(rep.max_violation, residual.max_abs());
}
}  // namespace

CarReport car_check(const GrassmannLayout& layout) {
  int N = layout.total();
  if (N < 1 || N > kGrassmannCap)
    throw std::length_error("car_check: generator count outside 1.." +
                            std::to_string(kGrassmannCap));
  CarReport rep;
  uint32_t dim = 1u << N;
  for (int g = 0; g < N; ++g) {
    for (int h = 0; h < N; ++h) {
      EOp dg_mh = EOp::compose(EOp::derivative(g), EOp::generator(h));
      EOp mh_dg = EOp::compose(EOp::generator(h), EOp::derivative(g));
      EOp mm = EOp::compose(EOp::generator(g), EOp::generator(h));
      EOp mm2 = EOp::compose(EOp::generator(h), EOp::generator(g));
      EOp dd = EOp::compose(EOp::derivative(g), EOp::derivative(h));
      EOp dd2 = EOp::compose(EOp::derivative(h), EOp::derivative(g));
      for (uint32_t m = 0; m < dim; ++m) {
        EPoly e = EPoly::monomial(N, m);
        EPoly acar = dg_mh.apply(e) + mh_dg.apply(e);
        EPoly want = (g == h) ? e : EPoly::zero(N);
        record(rep, "car(" + std::to_string(g) + "," + std::to_string(h) + ")",
               acar - want);
        record(rep, "gen_anticommute(" + std::to_string(g) + "," + std::to_string(h) + ")",
               mm.apply(e) + mm2.apply(e));
        record(rep, "der_anticommute(" + std::to_string(g) + "," + std::to_string(h) + ")",
               dd.apply(e) + dd2.apply(e));
      }
    }
  }
  if (N <= 10) {
    for (int g = 0; g < N; ++g) {
      ExactMat d = operator_matrix(EOp::derivative(g), N);
      ExactMat m = operator_matrix(EOp::generator(g), N);
      if (!(d == m.adjoint()))
        rep.violations.push_back("derivative_matrix_adjoint(" + std::to_string(g) + ")");
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

double rotated_basis_orthonormality(int ngen, uint64_t seed) {
  using C = std::complex<double>;
  using CPoly = GPoly<C>;
  if (ngen < 1 || ngen > 8)
    throw std::length_error("rotated_basis_orthonormality: use 1..8 generators");
  Rng rng(seed);
  Eigen::MatrixXcd U = rng.unitary(ngen);
  std::vector<CPoly> rotated;
  for (int gidx = 0; gidx < ngen; ++gidx) {
    CPoly p = CPoly::zero(ngen);
    for (int h = 0; h < ngen; ++h)
      p = p + CPoly::generator(ngen, h).scaled(U(gidx, h));
    rotated.push_back(p);
  }
  uint32_t dim = 1u << ngen;
  std::vector<CPoly> monos;
  monos.reserve(dim);
  for (uint32_t m = 0; m < dim; ++m) {
    CPoly p = CPoly::unit(ngen);
    for (int gidx = 0; gidx < ngen; ++gidx)
      if (m & (1u << gidx)) p = p * rotated[gidx];
    monos.push_back(std::move(p));
  }
  double worst = 0;
  for (uint32_t u = 0; u < dim; ++u)
    for (uint32_t v = u; v < dim; ++v) {
      C got = CPoly::inner(monos[u], monos[v]);
      C want = (u == v) ? C(1, 0) : C(0, 0);
      worst = std::max(worst, std::abs(got - want));
    }
  return worst;
}

RealImagReport real_imag_identity_check(int n1, int n2) {
  int nc = n1 * n2;
  int N = 4 * nc;
  if (N > kGrassmannCap)
    throw std::length_error("real_imag_identity_check: 4*n1*n2 exceeds generator cap");
  // kind stride layout: xi | eta | xidot | etadot, each block n1*n2 wide
  auto idx = [&](int kind, int c) { return kind * nc + c; };
  const Exact half_i = Exact::i() * Exact::rational(1, 2);
  const Exact inv_s2 = Exact::inv_sqrt2();

  EPoly lhs = EPoly::zero(N), rhs = EPoly::zero(N);
  RealImagReport rep;
  double roundtrip_violation = 0.0;
  for (int c = 0; c < nc; ++c) {
    EPoly xi = EPoly::generator(N, idx(0, c));
    EPoly eta = EPoly::generator(N, idx(1, c));
    EPoly xid = EPoly::generator(N, idx(2, c));
    EPoly etad = EPoly::generator(N, idx(3, c));
    EPoly chi = (xi + eta.scaled(Exact::i())).scaled(inv_s2);
    EPoly chibar = (xi - eta.scaled(Exact::i())).scaled(inv_s2);
    EPoly chid = (xid + etad.scaled(Exact::i())).scaled(inv_s2);
    EPoly chibard = (xid - etad.scaled(Exact::i())).scaled(inv_s2);

    lhs = lhs + (chibar * chid - chibard * chi).scaled(half_i);
    rhs = rhs + (xi * xid + eta * etad).scaled(half_i);

    // substitution roundtrip: recover the real generators from chi, chibar
    EPoly xi_rt = (chi + chibar).scaled(inv_s2);
    EPoly eta_rt = (chi - chibar).scaled(inv_s2 * (Exact(0) - Exact::i()));
    roundtrip_violation =
        std::max(roundtrip_violation, (xi_rt - xi).max_abs());
    roundtrip_violation =
        std::max(roundtrip_violation, (eta_rt - eta).max_abs());
  }
  EPoly diff = lhs - rhs;
  rep.max_violation = std::max(diff.max_abs(), roundtrip_violation);
  rep.pass = diff.is_zero() && roundtrip_violation == 0.0;
  return rep;
}

}  // namespace qfiber
