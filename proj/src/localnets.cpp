#include "qfiber/localnets.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <stdexcept>

namespace qfiber {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

bool region_within(const LatticeFiber& lat, const Region& r) {
  return r.t0 >= lat.margin && r.t1 <= lat.Nt - 1 - lat.margin && r.t0 < r.t1 &&
         r.x0 >= 0 && r.x1 <= lat.Nx - 1 && r.x0 < r.x1;
}

bool region_subset(const Region& inner, const Region& outer) {
  return inner.t0 >= outer.t0 && inner.t1 <= outer.t1 && inner.x0 >= outer.x0 &&
         inner.x1 <= outer.x1;
}

LocalNet make_net(const LatticeFiber& lat, const std::vector<Region>& regions,
                  int orders) {
  require(orders >= 1, "make_net: need at least one modulation order");
  require(!regions.empty(), "make_net: empty region list");
  LocalNet net;
  net.lat = lat;
  for (const Region& r : regions) {
    require(region_within(lat, r), "make_net: region outside grid margins");
    double t0 = lat.tcoord(r.t0), t1 = lat.tcoord(r.t1);
    double x0 = lat.xcoord(r.x0), x1 = lat.xcoord(r.x1);
    for (int pi = 0; pi < orders; ++pi)
      for (int pj = 0; pj < orders; ++pj) {
        DictEntry e;
        e.support = r;
        e.pi = pi;
        e.pj = pj;
        e.field = box_bump(lat, t0, t1, x0, x1, pi, pj);
        double tail = 0.0;
        e.field.clipped(r, &tail);
        require(tail == 0.0, "make_net: dictionary field escapes its region");
        net.dict.push_back(std::move(e));
      }
  }
  return net;
}

std::vector<int> generators(const LocalNet& net, const Region& r) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(net.dict.size()); ++i)
    if (region_subset(net.dict[i].support, r)) idx.push_back(i);
  return idx;
}

Axiom1Report axiom1_isotony_check(const LocalNet& net, const Region& r1,
                                  const Region& r2) {
  require(region_subset(r1, r2), "axiom1: r1 must be contained in r2");
  Axiom1Report rep;
  std::vector<int> g1 = generators(net, r1), g2 = generators(net, r2);
  rep.n_inner = static_cast<int>(g1.size());
  rep.n_outer = static_cast<int>(g2.size());
  rep.nested = std::includes(g2.begin(), g2.end(), g1.begin(), g1.end());
  rep.supports_ok = true;
  for (const DictEntry& e : net.dict) {
    double tail = 0.0;
    e.field.clipped(e.support, &tail);
    if (tail != 0.0) rep.supports_ok = false;
  }
  return rep;
}

Axiom3Report causal_pair_scan(const LocalNet& net, const Region& r1,
                              const Region& r2, int M_row) {
  const LatticeFiber& lat = net.lat;
  require(M_row >= 2 && M_row <= lat.Nt - 3, "causal_pair_scan: M_row out of range");
  std::vector<int> g1 = generators(net, r1), g2 = generators(net, r2);
  require(!g1.empty() && !g2.empty(), "causal_pair_scan: a region has no generators");

  std::vector<GridField> prop2;
  std::vector<Eigen::VectorXcd> dat1, dat2;
  for (int k : g2)
    prop2.push_back(green_apply(lat, net.dict[k].field, GreenMode::PauliJordan));
  for (int i : g1) dat1.push_back(surface_datum(lat, net.dict[i].field, M_row));
  for (int k : g2) dat2.push_back(surface_datum(lat, net.dict[k].field, M_row));

  Axiom3Report rep;
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t k = 0; k < g2.size(); ++k) {
      double om = sym_inner(lat, net.dict[g1[i]].field, prop2[k]);
      rep.max_omega = std::max(rep.max_omega, std::abs(om));
      OneParticleSpace sp = adapted_space(lat, M_row, {dat1[i], dat2[k]});
      if (sp.dim() > 0) {
        Eigen::VectorXcd ci = sp.project(dat1[i]), ck = sp.project(dat2[k]);
        WeylPairReport wr = weyl_pair_check(ci, ck);
        rep.max_sigma = std::max(rep.max_sigma, std::abs(wr.sigma));
        rep.max_commutation = std::max(rep.max_commutation, wr.commutation_residual);
        rep.max_relation = std::max(rep.max_relation, wr.relation_residual);
      }
      ++rep.pairs;
    }
  return rep;
}

Axiom3Report axiom3_causality_check(const LocalNet& net, const Region& r1,
                                    const Region& r2, int M_row) {
  require(spacelike_separated(net.lat, r1, r2),
          "axiom3: regions are not spacelike separated");
  return causal_pair_scan(net, r1, r2, M_row);
}

Axiom4Report axiom4_second_causality_check(const LatticeFiber& lat, const Region& r_dep,
                                           const Region& r_src, int M_row,
                                           const GridField& u, double width) {
  require(region_within(lat, r_dep) && region_within(lat, r_src),
          "axiom4: region outside grid margins");
  if (width <= 0.0) width = 4.0 * lat.ht;
  double T = lat.tcoord(M_row);

  std::vector<double> theta(lat.Nt);
  for (int m = 0; m < lat.Nt; ++m)
    theta[m] = smooth_step((lat.tcoord(m) - (T - 0.5 * width)) / width);
  int band_lo = 0, band_hi = lat.Nt - 1;
  for (int m = 0; m < lat.Nt && theta[m] == 0.0; ++m) band_lo = m;
  for (int m = lat.Nt - 1; m >= 0 && theta[m] == 1.0; --m) band_hi = m;
  require(band_lo >= lat.margin && band_hi <= lat.Nt - 1 - lat.margin &&
              band_lo < band_hi,
          "axiom4: cutoff band hits the time margins");

  double leak = 0.0;
  u.clipped(r_dep, &leak);
  require(leak == 0.0, "axiom4: u is not supported in r_dep");
  bool dep_future = r_dep.t0 > band_hi;
  require(dep_future || r_dep.t1 < band_lo,
          "axiom4: r_dep must lie on one side of the cutoff band");

  // every causal curve through r_dep crosses the band inside r_src
  require(r_src.t0 <= band_lo && r_src.t1 >= band_hi,
          "axiom4: r_src does not span the cutoff band");
  Eigen::ArrayXXi shadow =
      dep_future ? causal_past(lat, r_dep) : causal_future(lat, r_dep);
  for (int m = band_lo; m <= band_hi; ++m)
    for (int j = 0; j < lat.Nx; ++j)
      if (shadow(m, j) != 0 && (j < r_src.x0 || j > r_src.x1))
        throw std::invalid_argument("axiom4: causal shadow of r_dep escapes r_src");

  GridField gu = green_apply(lat, u, GreenMode::PauliJordan);
  GridField v = apply_wdw(lat, gu.time_profile(theta));
  // Cauchy-band localization: the symmetric operator annihilates the
  // propagated field only to O(h^2), so restrict to the transition band ...
  Region band{band_lo, band_hi, 0, lat.Nx - 1};
  v = v.clipped(band, nullptr);
  // ... and record as tail what the causal-shadow box still cuts (cone
  // leakage, zero up to round-off when the precondition holds).
  Axiom4Report rep;
  rep.band_lo = band_lo;
  rep.band_hi = band_hi;
  rep.v = v.clipped(r_src, &rep.tail);

  GridField gv = green_apply(lat, rep.v, GreenMode::PauliJordan);
  for (int m = band_hi + 1; m < lat.Nt; ++m)
    for (int c = 0; c < gu.fd; ++c) {
      rep.residual = std::max(
          rep.residual, (gu.comp[c].row(m) - gv.comp[c].row(m)).cwiseAbs().maxCoeff());
      rep.gu_scale = std::max(rep.gu_scale, gu.comp[c].row(m).cwiseAbs().maxCoeff());
    }
  return rep;
}

Axiom2Report commutant_dimension(const std::vector<Eigen::VectorXcd>& coeffs, int d,
                                 int Nmax, double rel_tol) {
  require(d >= 1 && Nmax >= 2, "commutant_dimension: degenerate Fock parameters");
  FockSpace fock = fock_space(d, Nmax);
  int s = fock.safe_dim();
  Axiom2Report rep;
  rep.block_dim = s;
  Eigen::MatrixXcd normal = Eigen::MatrixXcd::Zero(s * s, s * s);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(s, s);
  int used = 0;
  for (const Eigen::VectorXcd& c : coeffs) {
    require(c.size() == d, "commutant_dimension: coefficient dimension mismatch");
    if (c.norm() <= 1e-12) continue;
    Eigen::MatrixXcd W = weyl(fock, segal_field_coeff(fock, c)).U.topLeftCorner(s, s);
    for (const Eigen::MatrixXcd& B : {W, Eigen::MatrixXcd(W.adjoint())}) {
      // vec([X, B]) = (B^T (x) I - I (x) B) vec(X), column-major
      Eigen::MatrixXcd C = Eigen::kroneckerProduct(B.transpose(), eye) -
                           Eigen::kroneckerProduct(eye, B);
      normal += C.adjoint() * C;
    }
    ++used;
  }
  if (used == 0) {
    rep.commutant_dim = s * s;
    rep.spectrum_head.assign(std::min(8, s * s), 0.0);
    return rep;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(normal);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  rep.scale = ev(ev.size() - 1);
  int dim = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) <= rel_tol * std::max(rep.scale, 1e-30)) ++dim;
  rep.commutant_dim = dim;
  for (int i = 0; i < std::min<int>(8, ev.size()); ++i)
    rep.spectrum_head.push_back(ev(i));
  return rep;
}

Axiom2Report axiom2_primitivity_surrogate(const LocalNet& net, int M_row, int d,
                                          int Nmax, double rel_tol) {
  OneParticleSpace space = fourier_space(net.lat, M_row, d);
  std::vector<Eigen::VectorXcd> coeffs;
  for (const DictEntry& e : net.dict)
    coeffs.push_back(space.project(surface_datum(net.lat, e.field, M_row)));
  return commutant_dimension(coeffs, d, Nmax, rel_tol);
}

}  // namespace qfiber
