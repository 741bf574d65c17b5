#include "qfiber/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfiber/geometry.hpp"

namespace qfiber {

void LatticeFiber::validate() const {
  if (Nt < 5 || Nx < 4) throw std::invalid_argument("LatticeFiber: grid too small");
  if (ht <= 0 || hx <= 0) throw std::invalid_argument("LatticeFiber: nonpositive spacing");
  if (a.rows() != Nt || a.cols() != Nx || b.rows() != Nt || b.cols() != Nx ||
      c.rows() != Nt || c.cols() != Nx)
    throw std::invalid_argument("LatticeFiber: coefficient shape mismatch");
  for (int m = 0; m < Nt; ++m)
    for (int j = 0; j < Nx; ++j) {
      if (!(a(m, j) > 0) || !(b(m, j) > 0))
        throw std::invalid_argument("LatticeFiber: metric coefficients must be positive");
      if (ht * speed(m, j) > hx * (1.0 + 1e-12))
        throw std::invalid_argument("LatticeFiber: CFL bound violated");
    }
  if (has_coupling() && (Cmat.rows() != fiber_dim || Cmat.cols() != fiber_dim))
    throw std::invalid_argument("LatticeFiber: coupling shape mismatch");
}

LatticeFiber flat_lattice(int Nt, int Nx, double ht, double hx, double cval, int fiber_dim) {
  LatticeFiber lat;
  lat.Nt = Nt;
  lat.Nx = Nx;
  lat.ht = ht;
  lat.hx = hx;
  lat.fiber_dim = fiber_dim;
  lat.a = Eigen::ArrayXXd::Ones(Nt, Nx);
  lat.b = Eigen::ArrayXXd::Ones(Nt, Nx);
  lat.c = Eigen::ArrayXXd::Constant(Nt, Nx, cval);
  lat.validate();
  return lat;
}

LatticeFiber exponential_trace_section(int Nt, int Nx, double ht, double hx, double sigma,
                                       double cval) {
  LatticeFiber lat;
  lat.Nt = Nt;
  lat.Nx = Nx;
  lat.ht = ht;
  lat.hx = hx;
  lat.fiber_dim = 1;
  lat.a.resize(Nt, Nx);
  lat.b.resize(Nt, Nx);
  lat.c = Eigen::ArrayXXd::Constant(Nt, Nx, cval);
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(2, 2);
  YangMillsData ym = abelian_data();
  for (int m = 0; m < Nt; ++m) {
    double t = m * ht;
    Eigen::MatrixXd g = std::exp(sigma * t) * rho;
    FiberMetric fm = fiber_metric(g, rho, ym, 1.0);
    DeWitt dw = dewitt_metric(g);
    Eigen::VectorXd gdot = flatten_sym(dw, sigma * g);
    double a_t = -gdot.dot(fm.G.topLeftCorner(3, 3) * gdot);
    double b_t = fm.G(fm.grav_dim, fm.grav_dim);
    for (int j = 0; j < Nx; ++j) {
      lat.a(m, j) = a_t;
      lat.b(m, j) = b_t;
    }
  }
  lat.validate();
  return lat;
}

double GridField::max_abs() const {
  double m = 0;
  for (const auto& s : comp) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}
GridField& GridField::add_scaled(const GridField& v, double s) {
  for (int d = 0; d < fd; ++d) comp[d] += s * v.comp[d];
  return *this;
}
GridField GridField::scaled(double s) const {
  GridField r = *this;
  for (auto& m : r.comp) m *= s;
  return r;
}
GridField GridField::time_profile(const std::vector<double>& theta) const {
  GridField r = *this;
  for (auto& m : r.comp)
    for (int row = 0; row < Nt; ++row) m.row(row) *= theta[row];
  return r;
}
GridField GridField::clipped(const CellBox& box, double* tail) const {
  GridField r = *this;
  double worst = 0;
  for (auto& m : r.comp)
    for (int row = 0; row < Nt; ++row)
      for (int j = 0; j < Nx; ++j)
        if (row < box.t0 || row > box.t1 || j < box.x0 || j > box.x1) {
          worst = std::max(worst, std::abs(m(row, j)));
          m(row, j) = 0;
        }
  if (tail) *tail = worst;
  return r;
}

GridField zero_field(const LatticeFiber& lat) {
  GridField u;
  u.Nt = lat.Nt;
  u.Nx = lat.Nx;
  u.fd = lat.fiber_dim;
  u.comp.assign(lat.fiber_dim, Eigen::MatrixXd::Zero(lat.Nt, lat.Nx));
  return u;
}

double smooth_bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double smooth_step(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  double s4 = s * s * s * s;
  return s4 * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}

namespace {
double cheb(int p, double s) { return std::cos(p * std::acos(std::clamp(s, -1.0, 1.0))); }
}  // namespace

GridField box_bump(const LatticeFiber& lat, double t0, double t1, double x0, double x1,
                   int pi, int pj, int comp) {
  GridField u = zero_field(lat);
  for (int m = 0; m < lat.Nt; ++m) {
    double ts = 2.0 * (lat.tcoord(m) - t0) / (t1 - t0) - 1.0;
    if (std::abs(ts) >= 1.0) continue;
    for (int j = 0; j < lat.Nx; ++j) {
      double xs = 2.0 * (lat.xcoord(j) - x0) / (x1 - x0) - 1.0;
      if (std::abs(xs) >= 1.0) continue;
      u.comp[comp](m, j) = smooth_bump(ts) * smooth_bump(xs) * cheb(pi, ts) * cheb(pj, xs);
    }
  }
  return u;
}

GridField fourier_source(const LatticeFiber& lat, double t0, double t1, int k, bool sine,
                         int comp) {
  GridField u = zero_field(lat);
  double L = lat.length();
  for (int m = 0; m < lat.Nt; ++m) {
    double ts = 2.0 * (lat.tcoord(m) - t0) / (t1 - t0) - 1.0;
    if (std::abs(ts) >= 1.0) continue;
    double bt = smooth_bump(ts);
    for (int j = 0; j < lat.Nx; ++j) {
      double ph = 2.0 * M_PI * k * lat.xcoord(j) / L;
      u.comp[comp](m, j) = bt * (sine ? std::sin(ph) : std::cos(ph));
    }
  }
  return u;
}

namespace {

// shared coefficient helpers
struct Coef {
  const LatticeFiber& lat;
  explicit Coef(const LatticeFiber& l) : lat(l) {}
  double q(int m, int j) const { return lat.w(m, j) / lat.a(m, j); }
  double p(int m, int j) const { return lat.w(m, j) / lat.b(m, j); }
  // first-order expansion coefficients of the solver form
  double r(int m, int j) const {
    int mp = std::min(m + 1, lat.Nt - 1), mm = std::max(m - 1, 0);
    return (q(mp, j) - q(mm, j)) / ((mp - mm) * lat.ht) / lat.w(m, j);
  }
  double s(int m, int j) const {
    int jr = (j + 1) % lat.Nx, jl = (j + lat.Nx - 1) % lat.Nx;
    return (p(m, jr) - p(m, jl)) / (2.0 * lat.hx) / lat.w(m, j);
  }
};

Eigen::VectorXd point_vec(const GridField& u, int m, int j) {
  Eigen::VectorXd v(u.fd);
  for (int d = 0; d < u.fd; ++d) v(d) = u.comp[d](m, j);
  return v;
}

// spatial part of the solver form at (m, j): (1/b) d2x u + s d1x u
Eigen::VectorXd solver_space(const LatticeFiber& lat, const Coef& co, const GridField& u,
                             int m, int j) {
  int jr = (j + 1) % lat.Nx, jl = (j + lat.Nx - 1) % lat.Nx;
  Eigen::VectorXd d2 = (point_vec(u, m, jr) - 2.0 * point_vec(u, m, j) + point_vec(u, m, jl)) /
                       (lat.hx * lat.hx);
  Eigen::VectorXd d1 = (point_vec(u, m, jr) - point_vec(u, m, jl)) / (2.0 * lat.hx);
  return d2 / lat.b(m, j) + co.s(m, j) * d1;
}

}  // namespace

GridField apply_wdw(const LatticeFiber& lat, const GridField& u) {
  Coef co(lat);
  GridField out = zero_field(lat);
  for (int m = 1; m < lat.Nt - 1; ++m)
    for (int j = 0; j < lat.Nx; ++j) {
      int jr = (j + 1) % lat.Nx, jl = (j + lat.Nx - 1) % lat.Nx;
      double qp = 0.5 * (co.q(m, j) + co.q(m + 1, j));
      double qm = 0.5 * (co.q(m, j) + co.q(m - 1, j));
      double pp = 0.5 * (co.p(m, j) + co.p(m, jr));
      double pm = 0.5 * (co.p(m, j) + co.p(m, jl));
      double w = lat.w(m, j);
      Eigen::VectorXd uc = point_vec(u, m, j);
      Eigen::VectorXd val =
          (qp * (point_vec(u, m + 1, j) - uc) - qm * (uc - point_vec(u, m - 1, j))) /
              (lat.ht * lat.ht) / w -
          (pp * (point_vec(u, m, jr) - uc) - pm * (uc - point_vec(u, m, jl))) /
              (lat.hx * lat.hx) / w +
          lat.c(m, j) * uc;
      if (lat.has_coupling()) val += lat.Cmat * uc;
      for (int d = 0; d < u.fd; ++d) out.comp[d](m, j) = val(d);
    }
  return out;
}

GridField apply_wdw_solver_form(const LatticeFiber& lat, const GridField& u) {
  Coef co(lat);
  GridField out = zero_field(lat);
  for (int m = 1; m < lat.Nt - 1; ++m)
    for (int j = 0; j < lat.Nx; ++j) {
      Eigen::VectorXd up = point_vec(u, m + 1, j), uc = point_vec(u, m, j),
                      um = point_vec(u, m - 1, j);
      Eigen::VectorXd avg = 0.5 * (up + um);
      Eigen::VectorXd val = (up - 2.0 * uc + um) / (lat.ht * lat.ht) / lat.a(m, j) +
                            co.r(m, j) * (up - um) / (2.0 * lat.ht) -
                            solver_space(lat, co, u, m, j) + lat.c(m, j) * avg;
      if (lat.has_coupling()) val += lat.Cmat * avg;
      for (int d = 0; d < u.fd; ++d) out.comp[d](m, j) = val(d);
    }
  return out;
}

GridField solve_cauchy(const LatticeFiber& lat, const GridField& f,
                       const Eigen::MatrixXd& u0, const Eigen::MatrixXd& v0, int row0,
                       bool forward) {
  lat.validate();
  Coef co(lat);
  int fd = lat.fiber_dim;
  GridField u = zero_field(lat);
  for (int d = 0; d < fd; ++d) u.comp[d].row(row0) = u0.row(d);
  int dir = forward ? 1 : -1;
  int next = row0 + dir;
  if (next < 0 || next >= lat.Nt) return u;

  // second-order Taylor start: u(row0 +- ht) from data and the equation at row0
  for (int j = 0; j < lat.Nx; ++j) {
    Eigen::VectorXd uc = u0.col(j), vc = v0.col(j);
    Eigen::VectorXd acc = point_vec(f, row0, j) + solver_space(lat, co, u, row0, j) -
                          co.r(row0, j) * vc - lat.c(row0, j) * uc;
    if (lat.has_coupling()) acc -= lat.Cmat * uc;
    acc *= lat.a(row0, j);
    Eigen::VectorXd un =
        uc + dir * lat.ht * vc + 0.5 * lat.ht * lat.ht * acc;
    for (int d = 0; d < fd; ++d) u.comp[d](next, j) = un(d);
  }

  // leapfrog: equation at row m determines row m + dir from rows m, m - dir
  for (int m = next; m + dir >= 0 && m + dir < lat.Nt; m += dir) {
    for (int j = 0; j < lat.Nx; ++j) {
      double alpha = 1.0 / lat.a(m, j);
      double rr = co.r(m, j);
      double lead = alpha / (lat.ht * lat.ht) + dir * rr / (2.0 * lat.ht) +
                    0.5 * lat.c(m, j);
      Eigen::VectorXd uc = point_vec(u, m, j), ub = point_vec(u, m - dir, j);
      Eigen::VectorXd rhs = point_vec(f, m, j) + solver_space(lat, co, u, m, j) +
                            2.0 * alpha / (lat.ht * lat.ht) * uc -
                            (alpha / (lat.ht * lat.ht) - dir * rr / (2.0 * lat.ht) +
                             0.5 * lat.c(m, j)) *
                                ub;
      if (lat.has_coupling()) rhs -= 0.5 * lat.Cmat * ub;
      Eigen::VectorXd un;
      if (lat.has_coupling()) {
        Eigen::MatrixXd A = lead * Eigen::MatrixXd::Identity(fd, fd) + 0.5 * lat.Cmat;
        un = A.partialPivLu().solve(rhs);
      } else {
        un = rhs / lead;
      }
      for (int d = 0; d < fd; ++d) u.comp[d](m + dir, j) = un(d);
    }
  }
  return u;
}

namespace {
void check_margin(const LatticeFiber& lat, const GridField& u) {
  for (int d = 0; d < u.fd; ++d)
    for (int m = 0; m < lat.Nt; ++m) {
      if (m > lat.margin && m < lat.Nt - 1 - lat.margin) continue;
      if (u.comp[d].row(m).cwiseAbs().maxCoeff() > 0)
        throw std::invalid_argument(
            "green_apply: source must vanish within the margin rows of the time boundary");
    }
}
}  // namespace

GridField green_apply(const LatticeFiber& lat, const GridField& u, GreenMode mode) {
  check_margin(lat, u);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(lat.fiber_dim, lat.Nx);
  switch (mode) {
    case GreenMode::Retarded:
      return solve_cauchy(lat, u, zero, zero, 0, true);
    case GreenMode::Advanced:
      return solve_cauchy(lat, u, zero, zero, lat.Nt - 1, false);
    case GreenMode::PauliJordan: {
      GridField g = solve_cauchy(lat, u, zero, zero, 0, true);
      g.add_scaled(solve_cauchy(lat, u, zero, zero, lat.Nt - 1, false), -1.0);
      return g;
    }
  }
  return zero_field(lat);
}

double sym_inner(const LatticeFiber& lat, const GridField& u, const GridField& v) {
  double acc = 0;
  for (int d = 0; d < u.fd; ++d)
    for (int m = 0; m < lat.Nt; ++m)
      for (int j = 0; j < lat.Nx; ++j)
        acc += u.comp[d](m, j) * v.comp[d](m, j) * lat.w(m, j);
  return acc * lat.ht * lat.hx;
}

double symplectic_form(const LatticeFiber& lat, const GridField& u, const GridField& v) {
  return sym_inner(lat, u, green_apply(lat, v, GreenMode::PauliJordan));
}

Eigen::MatrixXd row_values(const GridField& u, int row) {
  Eigen::MatrixXd r(u.fd, u.Nx);
  for (int d = 0; d < u.fd; ++d) r.row(d) = u.comp[d].row(row);
  return r;
}

Eigen::MatrixXd d_nu(const GridField& u, int row, double ht) {
  Eigen::MatrixXd r(u.fd, u.Nx);
  for (int d = 0; d < u.fd; ++d)
    r.row(d) = (u.comp[d].row(row + 1) - u.comp[d].row(row - 1)) / (2.0 * ht);
  return r;
}

Eigen::VectorXd mrow_weights(const LatticeFiber& lat, int row) {
  Eigen::VectorXd w(lat.Nx);
  for (int j = 0; j < lat.Nx; ++j) w(j) = lat.hx * std::sqrt(lat.b(row, j));
  return w;
}

PairingResult pairing_identity(const LatticeFiber& lat, const GridField& u,
                               const GridField& v, int M_row) {
  GridField gu = green_apply(lat, u, GreenMode::PauliJordan);
  GridField gv = green_apply(lat, v, GreenMode::PauliJordan);
  PairingResult res;
  res.lhs = sym_inner(lat, u, gv);
  Eigen::MatrixXd du = d_nu(gu, M_row, lat.ht), dv = d_nu(gv, M_row, lat.ht);
  Eigen::MatrixXd ru = row_values(gu, M_row), rv = row_values(gv, M_row);
  double acc = 0;
  for (int j = 0; j < lat.Nx; ++j) {
    double qq = lat.w(M_row, j) / lat.a(M_row, j);
    for (int d = 0; d < u.fd; ++d)
      acc += qq * (du(d, j) * rv(d, j) - ru(d, j) * dv(d, j));
  }
  res.rhs = acc * lat.hx;
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

namespace {

Eigen::ArrayXXi causal_mask(const LatticeFiber& lat, const CellBox& K, bool future) {
  Eigen::ArrayXXi mask = Eigen::ArrayXXi::Zero(lat.Nt, lat.Nx);
  double L = lat.length();
  double eps = 1e-9 * lat.hx;
  double xl = 0, xr = -1;  // empty
  bool active = false;
  int begin = future ? K.t0 : K.t1;
  int end = future ? lat.Nt - 1 : 0;
  int step = future ? 1 : -1;
  for (int m = begin;; m += step) {
    bool inbox = m >= K.t0 && m <= K.t1;
    if (inbox) {
      double bx0 = K.x0 * lat.hx, bx1 = K.x1 * lat.hx;
      if (!active) {
        xl = bx0;
        xr = bx1;
        active = true;
      } else {
        xl = std::min(xl, bx0);
        xr = std::max(xr, bx1);
      }
    }
    if (active) {
      if (xr - xl >= L) {
        mask.row(m).setOnes();
      } else {
        int jl = static_cast<int>(std::ceil((xl - 2 * lat.hx - eps) / lat.hx));
        int jr = static_cast<int>(std::floor((xr + 2 * lat.hx + eps) / lat.hx));
        for (int j = jl; j <= jr; ++j) mask(m, ((j % lat.Nx) + lat.Nx) % lat.Nx) = 1;
      }
    }
    if (m == end) break;
    if (active && xr - xl < L) {
      // local characteristic speed over the current extent plus one cell
      int jl = static_cast<int>(std::floor((xl - lat.hx) / lat.hx));
      int jr = static_cast<int>(std::ceil((xr + lat.hx) / lat.hx));
      double s = 0;
      for (int j = jl; j <= jr; ++j) {
        int jj = ((j % lat.Nx) + lat.Nx) % lat.Nx;
        s = std::max(s, std::max(lat.speed(m, jj), lat.speed(m + step, jj)));
      }
      xl -= lat.ht * s;
      xr += lat.ht * s;
    }
  }
  return mask;
}

}  // namespace

Eigen::ArrayXXi causal_future(const LatticeFiber& lat, const CellBox& K) {
  return causal_mask(lat, K, true);
}
Eigen::ArrayXXi causal_past(const LatticeFiber& lat, const CellBox& K) {
  return causal_mask(lat, K, false);
}

bool spacelike_separated(const LatticeFiber& lat, const CellBox& r1, const CellBox& r2) {
  Eigen::ArrayXXi jf = causal_future(lat, r1), jp = causal_past(lat, r1);
  for (int m = r2.t0; m <= r2.t1; ++m)
    for (int j = r2.x0; j <= r2.x1; ++j)
      if (jf(m, j) || jp(m, j)) return false;
  return true;
}

double max_abs_outside(const GridField& u, const Eigen::ArrayXXi& mask) {
  double worst = 0;
  for (int d = 0; d < u.fd; ++d)
    for (int m = 0; m < u.Nt; ++m)
      for (int j = 0; j < u.Nx; ++j)
        if (!mask(m, j)) worst = std::max(worst, std::abs(u.comp[d](m, j)));
  return worst;
}

OrderFit order_estimate(double e_coarse, double e_fine, double floor) {
  OrderFit fit;
  fit.e_coarse = e_coarse;
  fit.e_fine = e_fine;
  if (e_coarse <= floor && e_fine <= floor) {
    fit.below_floor = true;
    fit.order = std::numeric_limits<double>::infinity();
  } else {
    fit.order = std::log2(e_coarse / std::max(e_fine, 1e-300));
  }
  return fit;
}

}  // namespace qfiber
