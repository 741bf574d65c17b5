#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "qfiber/geometry.hpp"
#include "qfiber/rng.hpp"

using namespace qfiber;

TEST_CASE("pinned flat-metric supermetric values in two dimensions") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd ginv = g.inverse();
  CHECK(dewitt_component(ginv, 0, 1, 0, 1) == doctest::Approx(0.5));
  CHECK(dewitt_component(ginv, 0, 0, 1, 1) == doctest::Approx(-1.0));
  CHECK(dewitt_component(ginv, 0, 0, 0, 0) == doctest::Approx(0.0));

  DeWitt dw = dewitt_metric(g);
  REQUIRE(dw.pairs.size() == 3);
  Eigen::MatrixXd want(3, 3);
  want << 0, 0, -1, 0, 2, 0, -1, 0, 0;
  CHECK((dw.flat - want).norm() == doctest::Approx(0.0));
}

TEST_CASE("signature has exactly one negative direction for random metrics") {
  Rng rng(101);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd g = rng.spd(n);
      DeWitt dw = dewitt_metric(g);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dw.flat);
      int neg = 0;
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < 0) ++neg;
      CHECK(neg == 1);
      CHECK(dewitt_trace_value(g) == doctest::Approx(n - n * n).epsilon(1e-10));
    }
  }
}

TEST_CASE("scalar density scales and composes") {
  Rng rng(7);
  Eigen::MatrixXd g = rng.spd(3), rho = rng.spd(3), sig = rng.spd(3);
  CHECK(conformal_factor(rho, rho) == doctest::Approx(1.0));
  double c = 1.7;
  CHECK(conformal_factor(c * c * g, rho) ==
        doctest::Approx(std::pow(c, 3) * conformal_factor(g, rho)));
  CHECK(conformal_factor(g, rho) ==
        doctest::Approx(conformal_factor(g, sig) * conformal_factor(sig, rho)));
}

TEST_CASE("gauge data: commutators close on the structure constants") {
  for (const auto& ym : {su2_data(), abelian_data()}) {
    for (int a = 0; a < ym.n0; ++a) {
      CHECK((ym.t[a] + ym.t[a].adjoint()).norm() <= 1e-14);
      for (int b = 0; b < ym.n0; ++b) {
        Eigen::MatrixXcd lhs = ym.t[a] * ym.t[b] - ym.t[b] * ym.t[a];
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(ym.n2, ym.n2);
        for (int c = 0; c < ym.n0; ++c) rhs += ym.f[c](a, b) * ym.t[c];
        CHECK((lhs - rhs).norm() <= 1e-14);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ym.gamma);
    CHECK(es.eigenvalues().minCoeff() > 0);
  }
}

TEST_CASE("fiber metric blocks, signature and scaling") {
  Rng rng(23);
  YangMillsData ym = su2_data();
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd g = rng.spd(2);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(2, 2);
    double alphaN = 0.8;
    FiberMetric fm = fiber_metric(g, rho, ym, alphaN);
    CHECK(fm.grav_dim == 3);
    CHECK(fm.ym_dim == 6);
    CHECK(fm.higgs_dim == 6);
    REQUIRE(fm.G.rows() == 15);

    double phi = conformal_factor(g, rho);
    Eigen::MatrixXd gauge_want = 2.0 * phi * kron_r(ym.gamma, g.inverse());
    CHECK((fm.G.block(3, 3, 6, 6) - gauge_want).norm() <= 1e-12);
    CHECK((fm.G.topRightCorner(3, 12)).norm() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fm.G);
    int neg = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 0) ++neg;
    CHECK(neg == 1);
  }
}

TEST_CASE("frame reconstructs the metric and inverts") {
  Rng rng(5);
  for (int n : {1, 2, 3}) {
    Eigen::MatrixXd g = rng.spd(n);
    Vielbein vb = vielbein_from_metric(g, 1.5);
    CHECK((vb.e.transpose() * vb.e - g).norm() <= 1e-12);
    CHECK((vb.e * vb.E - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-12);
    CHECK(vb.w == 1.5);
    // Cholesky transpose: upper triangular frame, fixed deterministic choice
    for (int a = 1; a < n; ++a)
      for (int i = 0; i < a; ++i) CHECK(vb.e(a, i) == 0.0);
  }
}

TEST_CASE("spin connection vanishes identically for constant metrics") {
  Rng rng(31);
  Eigen::MatrixXd g0 = rng.spd(2);
  auto f = [&](double, double) { return g0; };
  MetricGrid grid = sample_metric(f, 2, 5, 5, 0.1);
  auto rep = build_gamma(2);
  SpinConnection sc = spin_connection(grid, rep);
  CHECK(sc.herm_defect == 0.0);
  for (int iy = 1; iy < 4; ++iy)
    for (int ix = 1; ix < 4; ++ix) {
      REQUIRE(sc.evaluated(ix, iy));
      for (int k = 0; k < 2; ++k) CHECK(sc.Gk[iy * 5 + ix][k].norm() == 0.0);
    }
}

namespace {
double family_error(double h, double eps) {
  auto f = [&](double, double y) {
    Eigen::MatrixXd g(2, 2);
    double A = std::exp(eps * y);
    g << A * A, 0, 0, 1;
    return g;
  };
  MetricGrid grid = sample_metric(f, 2, 5, 5, h, -2 * h, -2 * h);
  auto rep = build_gamma(2);
  SpinConnection sc = spin_connection(grid, rep);
  // exact value at y = 0: -(1/2) A_y gamma^2 gamma^1 with A_y = eps
  Eigen::MatrixXcd exact =
      -0.5 * eps * (rep.gamma[2].to_complex() * rep.gamma[1].to_complex());
  return (sc.Gk[2 * 5 + 2][0] - exact).norm() + sc.Gk[2 * 5 + 2][1].norm();
}
}  // namespace

TEST_CASE("spin connection matches the closed form at second order") {
  double e1 = family_error(0.02, 0.3);
  double e2 = family_error(0.01, 0.3);
  CHECK(e1 > 1e-12);
  double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
}

TEST_CASE("hermitian defect of a generic metric shrinks at second order") {
  auto f = [](double x, double y) {
    Eigen::MatrixXd g(2, 2);
    double a = 1.0 + 0.2 * std::sin(x + 2 * y);
    double b = 1.3 + 0.15 * std::cos(2 * x - y);
    double c = 0.1 * std::cos(x - y);
    g << a, c, c, b;
    return g;
  };
  auto defect = [&](double h) {
    MetricGrid grid = sample_metric(f, 2, 5, 5, h, 0.3 - 2 * h, 0.4 - 2 * h);
    return spin_connection(grid, build_gamma(2)).herm_defect;
  };
  double d1 = defect(0.02), d2 = defect(0.01);
  CHECK(d1 > 1e-12);
  CHECK(d1 / d2 >= 3.0);
  CHECK(d1 / d2 <= 5.0);
}

TEST_CASE("covariant derivative is gauge covariant") {
  Rng rng(55);
  YangMillsData ym = su2_data();
  auto rep = build_gamma(1);
  int n1 = rep.n1, n2 = ym.n2, sites = 8;
  double h = 0.1;
  auto flat = [](double, double) { return Eigen::MatrixXd::Identity(1, 1); };
  MetricGrid grid = sample_metric(flat, 1, sites, 1, h, 0, 0, true);
  SpinConnection sc = spin_connection(grid, rep);

  std::vector<std::vector<Eigen::VectorXd>> coeff(sites);
  SpinorField chi(sites);
  for (int s = 0; s < sites; ++s) {
    coeff[s].push_back(rng.gaussian_vec(ym.n0));
    chi[s] = Eigen::VectorXcd::Zero(n1 * n2);
    for (int q = 0; q < n1 * n2; ++q) chi[s](q) = std::complex<double>(rng.normal(), rng.normal());
  }
  GaugeField gf = gauge_from_coefficients(ym, coeff);

  // constant group element: exponential of an algebra element
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n2, n2);
  Eigen::VectorXd th = rng.gaussian_vec(ym.n0);
  for (int c = 0; c < ym.n0; ++c) X += th(c) * ym.t[c];
  Eigen::MatrixXcd U = X.exp();

  GaugeField gf_rot(sites);
  SpinorField chi_rot(sites);
  Eigen::MatrixXcd Ufull = kron_c(U, Eigen::MatrixXcd::Identity(n1, n1));
  for (int s = 0; s < sites; ++s) {
    gf_rot[s].push_back(U * gf[s][0] * U.adjoint());
    chi_rot[s] = Ufull * chi[s];
  }

  SpinorField d = covariant_dirac_derivative(grid, sc, &gf, chi, 0, n1, n2);
  SpinorField d_rot = covariant_dirac_derivative(grid, sc, &gf_rot, chi_rot, 0, n1, n2);
  for (int s = 0; s < sites; ++s) {
    REQUIRE(d[s].size() > 0);
    CHECK((d_rot[s] - Ufull * d[s]).norm() <= 1e-10);
  }
}

TEST_CASE("stereographic sphere has scalar curvature two") {
  auto lam = [](double x, double y) {
    double r2 = x * x + y * y;
    return 4.0 / ((1.0 + r2) * (1.0 + r2));
  };
  for (auto [x, y] : {std::pair{0.0, 0.0}, {0.4, -0.3}, {1.0, 0.5}}) {
    double R = scalar_curvature_diag2(lam, lam, x, y, 1e-3);
    CHECK(std::abs(R - 2.0) <= 1e-5);
  }
}
