#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <stdexcept>

#include "doctest.h"
#include "qfiber/localnets.hpp"

using namespace qfiber;

namespace {

LatticeFiber kg(int den) {
  return flat_lattice(den + 1, den, 1.0 / den, 1.0 / den, 1.0);
}

// standard region layout at mesh density `den` (scaled from the den=64 chart)
struct Layout {
  Region r1, r2, r3, inner;
  int M;
};

Layout layout(int den) {
  int s = den / 64;
  Layout L;
  L.r1 = Region{26 * s, 32 * s, 6 * s, 16 * s};     // spacelike to r2
  L.r2 = Region{26 * s, 32 * s, 38 * s, 48 * s};    // same rows, wide gap
  L.r3 = Region{34 * s, 40 * s, 6 * s, 16 * s};     // causally above r1
  L.inner = Region{27 * s, 31 * s, 7 * s, 15 * s};  // strictly inside r1
  L.M = 52 * s;
  return L;
}

// reconstruction chart: dependent region above the cutoff band at M_row
struct ReconChart {
  Region r_dep, r_src;
  GridField u;
  int M;
};

ReconChart recon(const LatticeFiber& lat, int den) {
  int s = den / 64;
  ReconChart c;
  c.r_dep = Region{46 * s, 52 * s, 26 * s, 38 * s};
  c.r_src = Region{20 * s, 45 * s, 6 * s, 58 * s};
  c.u = box_bump(lat, lat.tcoord(47 * s), lat.tcoord(51 * s), lat.xcoord(27 * s),
                 lat.xcoord(37 * s));
  c.M = 40 * s;
  return c;
}

}  // namespace

TEST_CASE("regions and dictionary supports") {
  LatticeFiber lat = kg(64);
  Region r1{26, 32, 6, 16};
  CHECK(region_within(lat, r1));
  CHECK_FALSE(region_within(lat, Region{0, 5, 6, 16}));    // inside time margin
  CHECK_FALSE(region_within(lat, Region{26, 32, 16, 6}));  // empty box
  CHECK(region_subset(Region{27, 31, 7, 15}, r1));
  CHECK_FALSE(region_subset(r1, Region{27, 31, 7, 15}));

  LocalNet net = make_net(lat, {r1}, 4);
  CHECK(net.dict.size() == 16);
  for (const DictEntry& e : net.dict) {
    double tail = 0.0;
    e.field.clipped(e.support, &tail);
    CHECK(tail == 0.0);  // supported strictly inside the declared box
    CHECK(e.field.max_abs() > 0.0);
  }
  CHECK_THROWS_AS(make_net(lat, {Region{0, 5, 6, 16}}), std::invalid_argument);
  CHECK_THROWS_AS(make_net(lat, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_net(lat, {r1}, 0), std::invalid_argument);
}

TEST_CASE("isotony: nested regions give nested generator sets") {
  LatticeFiber lat = kg(64);
  Layout L = layout(64);
  LocalNet net = make_net(lat, {L.inner, L.r1, L.r2});
  CHECK(net.dict.size() == 48);

  Axiom1Report rep = axiom1_isotony_check(net, L.inner, L.r1);
  CHECK(rep.nested);
  CHECK(rep.supports_ok);
  CHECK(rep.pass());
  CHECK(rep.n_inner == 16);  // inner's own fields
  CHECK(rep.n_outer == 32);  // r1's fields plus the nested region's

  Axiom1Report same = axiom1_isotony_check(net, L.r1, L.r1);
  CHECK(same.pass());
  CHECK(same.n_inner == same.n_outer);

  // three-level chain stays monotone
  Region hull{25, 33, 5, 17};
  Axiom1Report top = axiom1_isotony_check(net, L.r1, hull);
  CHECK(top.pass());
  CHECK(top.n_inner == 32);
  CHECK(top.n_outer == 32);

  CHECK_THROWS_AS(axiom1_isotony_check(net, L.r1, L.r2), std::invalid_argument);
}

TEST_CASE("spacelike generator pairs commute") {
  LatticeFiber lat = kg(64);
  Layout L = layout(64);
  LocalNet net = make_net(lat, {L.r1, L.r2, L.r3});
  REQUIRE(spacelike_separated(lat, L.r1, L.r2));

  Axiom3Report rep = axiom3_causality_check(net, L.r1, L.r2, L.M);
  CHECK(rep.pairs == 256);
  // leapfrog cones are exact, so disjoint causal hulls give exact zeros
  CHECK(rep.max_omega <= 1e-12);
  CHECK(rep.max_sigma <= 1e-12);
  CHECK(rep.max_commutation <= 1e-8);
  CHECK(rep.max_relation <= 1e-9);

  // symmetry of the check under swapping the regions
  Axiom3Report swapped = axiom3_causality_check(net, L.r2, L.r1, L.M);
  CHECK(swapped.pairs == rep.pairs);
  CHECK(std::abs(swapped.max_omega - rep.max_omega) <= 1e-12);
  CHECK(std::abs(swapped.max_sigma - rep.max_sigma) <= 1e-12);
  CHECK(std::abs(swapped.max_commutation - rep.max_commutation) <= 1e-10);

  CHECK_THROWS_AS(axiom3_causality_check(net, L.r1, L.r3, L.M),
                  std::invalid_argument);
}

TEST_CASE("causally connected control shows a strong violation") {
  LatticeFiber lat = kg(64);
  Layout L = layout(64);
  LocalNet net = make_net(lat, {L.r1, L.r3});
  CHECK_FALSE(spacelike_separated(lat, L.r1, L.r3));
  Axiom3Report rep = causal_pair_scan(net, L.r1, L.r3, L.M);
  CHECK(rep.pairs == 256);
  // more than 10x the spacelike tolerance of 1e-6
  CHECK(rep.max_omega > 1e-5);
  CHECK(rep.max_commutation > 1e-5);
}

TEST_CASE("band reconstruction matches the propagated field above the band") {
  double resid[2];
  int idx = 0;
  for (int den : {64, 128}) {
    LatticeFiber lat = kg(den);
    ReconChart c = recon(lat, den);
    Axiom4Report rep = axiom4_second_causality_check(lat, c.r_dep, c.r_src, c.M, c.u,
                                                     0.125);
    CHECK(rep.tail == 0.0);           // exact cone: nothing clipped
    CHECK(rep.residual <= 1e-3);
    CHECK(rep.gu_scale > 1e-4);       // non-vacuous comparison
    CHECK(rep.band_lo < rep.band_hi);
    CHECK(rep.band_hi < c.r_dep.t0);
    double t2 = 0.0;
    rep.v.clipped(c.r_src, &t2);
    CHECK(t2 == 0.0);                 // v supported in r_src
    CHECK(rep.v.max_abs() > 0.0);
    resid[idx++] = rep.residual;
  }
  OrderFit fit = order_estimate(resid[0], resid[1]);
  CHECK(fit.order >= 0.9);

  // default four-level cutoff also reconstructs
  LatticeFiber lat = kg(64);
  ReconChart c = recon(lat, 64);
  Axiom4Report rep = axiom4_second_causality_check(lat, c.r_dep, c.r_src, c.M, c.u);
  CHECK(rep.residual <= 1e-3);
  CHECK(rep.tail == 0.0);
}

TEST_CASE("reconstruction from a region below the band") {
  LatticeFiber lat = kg(64);
  Region r_dep{28, 34, 26, 38};
  Region r_src{35, 45, 6, 58};
  GridField u = box_bump(lat, lat.tcoord(29), lat.tcoord(33), lat.xcoord(27),
                         lat.xcoord(37));
  Axiom4Report rep = axiom4_second_causality_check(lat, r_dep, r_src, 40, u, 0.125);
  CHECK(rep.band_lo > r_dep.t1);
  CHECK(rep.residual <= 1e-3);
  CHECK(rep.gu_scale > 1e-4);
  CHECK(rep.tail == 0.0);
}

TEST_CASE("degenerate and failing reconstruction inputs") {
  LatticeFiber lat = kg(64);
  ReconChart c = recon(lat, 64);

  // a source already in the range of the marching operator propagates to
  // round-off: forward and backward solves cancel, so v carries no content
  GridField w = box_bump(lat, lat.tcoord(47), lat.tcoord(51), lat.xcoord(27),
                         lat.xcoord(37));
  GridField hw = apply_wdw_solver_form(lat, w);
  Axiom4Report rep = axiom4_second_causality_check(lat, c.r_dep, c.r_src, c.M, hw,
                                                   0.125);
  CHECK(rep.gu_scale <= 1e-12);
  CHECK(rep.v.max_abs() <= 1e-10);  // round-off amplified by the 1/h^2 stencil
  CHECK(rep.residual <= 1e-12);

  // causal shadow escaping a shrunk source region is rejected
  Region narrow{20, 45, 20, 44};
  CHECK_THROWS_AS(axiom4_second_causality_check(lat, c.r_dep, narrow, c.M, c.u, 0.125),
                  std::invalid_argument);
  // source field outside the dependent region is rejected
  GridField far = box_bump(lat, lat.tcoord(47), lat.tcoord(51), lat.xcoord(45),
                           lat.xcoord(55));
  CHECK_THROWS_AS(axiom4_second_causality_check(lat, c.r_dep, c.r_src, c.M, far, 0.125),
                  std::invalid_argument);
  // dependent region intersecting the cutoff band is rejected
  Region touching{42, 52, 26, 38};
  GridField ut = box_bump(lat, lat.tcoord(47), lat.tcoord(51), lat.xcoord(27),
                          lat.xcoord(37));
  CHECK_THROWS_AS(axiom4_second_causality_check(lat, touching, c.r_src, c.M, ut, 0.125),
                  std::invalid_argument);
  // source region that does not span the band is rejected
  Region thin{39, 41, 6, 58};
  CHECK_THROWS_AS(axiom4_second_causality_check(lat, c.r_dep, thin, c.M, c.u, 0.125),
                  std::invalid_argument);
}

TEST_CASE("commutant of the full dictionary is trivial") {
  LatticeFiber lat = kg(64);
  Layout L = layout(64);
  LocalNet net = make_net(lat, {L.r1, L.r2, L.r3});

  Axiom2Report full = axiom2_primitivity_surrogate(net, L.M);
  CHECK(full.block_dim == 10);  // d = 3, Nmax = 4, totals <= 2
  CHECK(full.commutant_dim == 1);
  REQUIRE(full.spectrum_head.size() >= 2);
  // clear spectral gap between the scalar direction and the rest
  CHECK(full.spectrum_head[1] / std::max(full.spectrum_head[0], 1e-300) > 1e6);

  // block-structure oracle: coefficients confined to two of the three modes
  // leave one occupation sector per third-mode level, hence commutant 3
  OneParticleSpace sp = fourier_space(lat, L.M, 3);
  std::vector<Eigen::VectorXcd> restricted;
  for (const DictEntry& e : net.dict) {
    Eigen::VectorXcd cf = sp.project(surface_datum(lat, e.field, L.M));
    cf(2) = 0.0;
    restricted.push_back(cf);
  }
  Axiom2Report part = commutant_dimension(restricted, 3, 4);
  CHECK(part.commutant_dim == 3);

  Axiom2Report empty = commutant_dimension({}, 3, 4);
  CHECK(empty.commutant_dim == 100);
  CHECK(empty.block_dim == 10);
}
