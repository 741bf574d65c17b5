#include "qfiber/geometry.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace qfiber {

double dewitt_component(const Eigen::MatrixXd& ginv, int i, int j, int k, int l) {
  return 0.5 * (ginv(i, k) * ginv(j, l) + ginv(i, l) * ginv(j, k)) -
         ginv(i, j) * ginv(k, l);
}

DeWitt dewitt_metric(const Eigen::MatrixXd& g) {
  int n = static_cast<int>(g.rows());
  DeWitt dw;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) dw.pairs.emplace_back(i, j);
  int m1 = static_cast<int>(dw.pairs.size());
  Eigen::MatrixXd ginv = g.inverse();
  dw.flat.resize(m1, m1);
  for (int r = 0; r < m1; ++r) {
    auto [i, j] = dw.pairs[r];
    double wr = (i == j) ? 1.0 : 2.0;
    for (int s = 0; s < m1; ++s) {
      auto [k, l] = dw.pairs[s];
      double ws = (k == l) ? 1.0 : 2.0;
      dw.flat(r, s) = wr * ws * dewitt_component(ginv, i, j, k, l);
    }
  }
  return dw;
}

Eigen::VectorXd flatten_sym(const DeWitt& dw, const Eigen::MatrixXd& s) {
  Eigen::VectorXd v(dw.pairs.size());
  for (size_t r = 0; r < dw.pairs.size(); ++r) v(r) = s(dw.pairs[r].first, dw.pairs[r].second);
  return v;
}

double dewitt_trace_value(const Eigen::MatrixXd& g) {
  DeWitt dw = dewitt_metric(g);
  Eigen::VectorXd v = flatten_sym(dw, g);
  return v.dot(dw.flat * v);
}

double conformal_factor(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rho) {
  double dg = g.determinant(), dr = rho.determinant();
  if (dg <= 0 || dr <= 0)
    throw std::invalid_argument("conformal_factor: metrics must be positive definite");
  return std::sqrt(dg / dr);
}

YangMillsData su2_data() {
  YangMillsData ym;
  ym.n0 = 3;
  ym.n2 = 2;
  ym.gamma = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  ym.f.assign(3, Eigen::MatrixXd::Zero(3, 3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        // Levi-Civita
        int e = (a - b) * (b - c) * (c - a) / 2;
        ym.f[c](a, b) = e;
      }
  const std::complex<double> I(0, 1);
  Eigen::MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  ym.t = {-0.5 * I * sx, -0.5 * I * sy, -0.5 * I * sz};
  return ym;
}

YangMillsData abelian_data() {
  YangMillsData ym;
  ym.n0 = 1;
  ym.n2 = 1;
  ym.gamma = Eigen::MatrixXd::Identity(1, 1);
  ym.f.assign(1, Eigen::MatrixXd::Zero(1, 1));
  Eigen::MatrixXcd t(1, 1);
  t(0, 0) = std::complex<double>(0, -1);
  ym.t = {t};
  return ym;
}

FiberMetric fiber_metric(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rho,
                         const YangMillsData& ym, double alphaN) {
  int n = static_cast<int>(g.rows());
  DeWitt dw = dewitt_metric(g);
  int gd = static_cast<int>(dw.pairs.size());
  int yd = ym.n0 * n;
  int hd = 2 * ym.n0;
  double phi = conformal_factor(g, rho);

  FiberMetric fm;
  fm.grav_dim = gd;
  fm.ym_dim = yd;
  fm.higgs_dim = hd;
  fm.G = Eigen::MatrixXd::Zero(gd + yd + hd, gd + yd + hd);
  fm.G.topLeftCorner(gd, gd) = (1.0 / alphaN) * dw.flat;
  // gauge block: gamma (x) g^{-1}, colour index outer
  Eigen::MatrixXd gb = kron_r(ym.gamma, g.inverse());
  fm.G.block(gd, gd, yd, yd) = 2.0 * gb;
  Eigen::MatrixXd hb = Eigen::MatrixXd::Zero(hd, hd);
  hb.topLeftCorner(ym.n0, ym.n0) = ym.gamma;
  hb.bottomRightCorner(ym.n0, ym.n0) = ym.gamma;
  fm.G.block(gd + yd, gd + yd, hd, hd) = 2.0 * hb;
  fm.G *= phi;
  return fm;
}

Vielbein vielbein_from_metric(const Eigen::MatrixXd& g, double w) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("vielbein_from_metric: metric not positive definite");
  Vielbein vb;
  Eigen::MatrixXd L = llt.matrixL();
  vb.e = L.transpose();
  vb.E = vb.e.inverse();
  vb.w = w;
  return vb;
}

bool MetricGrid::has_point(int ix, int iy) const {
  return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
}

MetricGrid sample_metric(const std::function<Eigen::MatrixXd(double, double)>& f, int n,
                         int nx, int ny, double h, double x0, double y0, bool periodic) {
  MetricGrid grid;
  grid.n = n;
  grid.nx = nx;
  grid.ny = ny;
  grid.h = h;
  grid.periodic = periodic;
  grid.g.resize(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) grid.at(ix, iy) = f(x0 + ix * h, y0 + iy * h);
  return grid;
}

namespace {

int wrap(int i, int m) { return ((i % m) + m) % m; }

// Centered difference of an arbitrary matrix field along chart direction k.
template <class Field>
Eigen::MatrixXd centered_diff(const MetricGrid& grid, const Field& value, int ix, int iy,
                              int k) {
  int px = ix + (k == 0 ? 1 : 0), py = iy + (k == 1 ? 1 : 0);
  int mx = ix - (k == 0 ? 1 : 0), my = iy - (k == 1 ? 1 : 0);
  if (grid.periodic) {
    px = wrap(px, grid.nx);
    py = wrap(py, grid.ny);
    mx = wrap(mx, grid.nx);
    my = wrap(my, grid.ny);
  }
  return (value(px, py) - value(mx, my)) / (2.0 * grid.h);
}

bool stencil_ok(const MetricGrid& grid, int ix, int iy, int radius) {
  if (grid.periodic) return true;
  bool okx = ix - radius >= 0 && ix + radius < grid.nx;
  bool oky = grid.n < 2 || (iy - radius >= 0 && iy + radius < grid.ny);
  return okx && oky;
}

}  // namespace

SpinConnection spin_connection(const MetricGrid& grid,
                               const std::vector<Eigen::MatrixXcd>& gam) {
  if (static_cast<int>(gam.size()) != grid.n + 1)
    throw std::invalid_argument("spin_connection: gamma representation dimension mismatch");
  int n = grid.n;
  int n1 = static_cast<int>(gam[0].rows());
  SpinConnection sc;
  sc.nx = grid.nx;
  sc.ny = grid.ny;
  sc.Gk.resize(grid.g.size());

  // precompute frames
  std::vector<Eigen::MatrixXd> e(grid.g.size()), E(grid.g.size());
  for (size_t p = 0; p < grid.g.size(); ++p) {
    Vielbein vb = vielbein_from_metric(grid.g[p]);
    e[p] = vb.e;
    E[p] = vb.E;
  }
  auto gval = [&](int ix, int iy) -> const Eigen::MatrixXd& { return grid.at(ix, iy); };
  auto eval = [&](int ix, int iy) -> const Eigen::MatrixXd& {
    return e[static_cast<size_t>(iy) * grid.nx + ix];
  };

  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      // the frame derivative needs neighbours whose own value is direct; radius 1
      if (!stencil_ok(grid, ix, iy, 1)) continue;
      size_t p = static_cast<size_t>(iy) * grid.nx + ix;
      Eigen::MatrixXd ginv = grid.g[p].inverse();
      std::vector<Eigen::MatrixXd> dg(n), de(n);
      for (int k = 0; k < n; ++k) {
        dg[k] = centered_diff(grid, gval, ix, iy, k);
        de[k] = centered_diff(grid, eval, ix, iy, k);
      }
      // Christoffels of the sampled metric
      auto chris = [&](int l, int j, int k) {
        double s = 0;
        for (int m = 0; m < n; ++m)
          s += ginv(l, m) * (dg[j](m, k) + dg[k](m, j) - dg[m](j, k));
        return 0.5 * s;
      };
      std::vector<Eigen::MatrixXcd> Gks;
      for (int k = 0; k < n; ++k) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n1, n1);
        for (int b = 0; b < n; ++b)
          for (int j = 0; j < n; ++j) {
            double cov = de[k](b, j);
            for (int l = 0; l < n; ++l) cov -= chris(l, j, k) * e[p](b, l);
            if (cov == 0.0) continue;
            for (int a = 0; a < n; ++a) {
              double Eja = E[p](j, a);
              if (Eja == 0.0) continue;
              // spatial frame indices shift by one into the gamma list
              A -= 0.25 * cov * Eja * (gam[b + 1] * gam[a + 1]);
            }
          }
        Eigen::MatrixXcd anti = 0.5 * (A - A.adjoint());
        sc.herm_defect = std::max(sc.herm_defect, 0.5 * (A + A.adjoint()).norm());
        Gks.push_back(anti);
      }
      sc.Gk[p] = std::move(Gks);
    }
  return sc;
}

SpinConnection spin_connection(const MetricGrid& grid, const GammaRep& rep) {
  std::vector<Eigen::MatrixXcd> gam(rep.gamma.size());
  for (size_t a = 0; a < rep.gamma.size(); ++a) gam[a] = rep.gamma[a].to_complex();
  return spin_connection(grid, gam);
}

GaugeField gauge_from_coefficients(const YangMillsData& ym,
                                   const std::vector<std::vector<Eigen::VectorXd>>& coeff) {
  GaugeField gf(coeff.size());
  for (size_t p = 0; p < coeff.size(); ++p) {
    for (const auto& a : coeff[p]) {
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(ym.n2, ym.n2);
      for (int c = 0; c < ym.n0; ++c) M += a(c) * ym.t[c];
      gf[p].push_back(M);
    }
  }
  return gf;
}

SpinorField covariant_dirac_derivative(const MetricGrid& grid, const SpinConnection& sc,
                                       const GaugeField* gauge, const SpinorField& chi,
                                       int k, int n1, int n2) {
  SpinorField out(chi.size());
  Eigen::MatrixXcd In1 = Eigen::MatrixXcd::Identity(n1, n1);
  Eigen::MatrixXcd In2 = Eigen::MatrixXcd::Identity(n2, n2);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      size_t p = static_cast<size_t>(iy) * grid.nx + ix;
      if (!stencil_ok(grid, ix, iy, 1) || !sc.evaluated(ix, iy)) continue;
      int px = ix + (k == 0 ? 1 : 0), py = iy + (k == 1 ? 1 : 0);
      int mx = ix - (k == 0 ? 1 : 0), my = iy - (k == 1 ? 1 : 0);
      if (grid.periodic) {
        px = wrap(px, grid.nx);
        py = wrap(py, grid.ny);
        mx = wrap(mx, grid.nx);
        my = wrap(my, grid.ny);
      }
      Eigen::VectorXcd d = (chi[static_cast<size_t>(py) * grid.nx + px] -
                            chi[static_cast<size_t>(my) * grid.nx + mx]) /
                           (2.0 * grid.h);
      d += kron_c(In2, sc.Gk[p][k]) * chi[p];
      if (gauge) d += kron_c((*gauge)[p][k], In1) * chi[p];
      out[p] = d;
    }
  return out;
}

double scalar_curvature_diag2(const std::function<double(double, double)>& g11,
                              const std::function<double(double, double)>& g22, double x,
                              double y, double h) {
  auto sq = [&](double u, double v) { return std::sqrt(g11(u, v) * g22(u, v)); };
  auto Gx_over = [&](double u, double v) {
    return (g22(u + h, v) - g22(u - h, v)) / (2 * h) / sq(u, v);
  };
  auto Ey_over = [&](double u, double v) {
    return (g11(u, v + h) - g11(u, v - h)) / (2 * h) / sq(u, v);
  };
  double term = (Gx_over(x + h, y) - Gx_over(x - h, y)) / (2 * h) +
                (Ey_over(x, y + h) - Ey_over(x, y - h)) / (2 * h);
  double K = -term / (2 * sq(x, y));
  return 2.0 * K;
}

Eigen::MatrixXcd kron_c(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return m;
}

Eigen::MatrixXd kron_r(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return m;
}

}  // namespace qfiber
