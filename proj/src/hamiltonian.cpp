#include "qfiber/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "qfiber/rng.hpp"

namespace qfiber {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& A, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw std::invalid_argument(std::string(what) + ": singular metric");
  return lu.inverse();
}

void check_field_strength(const FiberPoint& p, const YangMillsData& ym, int n) {
  require(static_cast<int>(p.F.size()) == ym.n0, "field strength: one block per colour");
  for (const auto& Fa : p.F) {
    require(Fa.rows() == n && Fa.cols() == n, "field strength: block dimension");
    require((Fa + Fa.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "field strength: blocks must be antisymmetric");
  }
}

}  // namespace

double h_gravity(const FiberPoint& p, const DeWitt& G, double phi, double alphaN) {
  require(phi > 0, "h_gravity: phi must be positive");
  require(alphaN > 0, "h_gravity: alphaN must be positive");
  require(p.pi.size() == G.flat.rows(), "h_gravity: momentum dimension");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G.flat);
  if (!lu.isInvertible()) throw std::invalid_argument("h_gravity: singular pair metric");
  double kin = alphaN / phi * p.pi.dot(G.flat * p.pi);
  return kin - (p.Rcurv - 2.0 * p.Lambda) * phi / alphaN;
}

double h_gravity_hat(const FiberPoint& p, const DeWitt& G, double phi, double alphaN) {
  require(p.w > 0, "h_gravity_hat: lapse must be positive");
  return h_gravity(p, G, phi, alphaN) * p.w;
}

double l_gravity(const FiberPoint& p, const Eigen::VectorXd& xidot, const DeWitt& G,
                 double phi, double alphaN) {
  require(phi > 0, "l_gravity: phi must be positive");
  require(xidot.size() == G.flat.rows(), "l_gravity: velocity dimension");
  Eigen::MatrixXd inv = checked_inverse(G.flat, "l_gravity");
  return phi / (4.0 * alphaN) * xidot.dot(inv * xidot) +
         (p.Rcurv - 2.0 * p.Lambda) * phi / alphaN;
}

Eigen::MatrixXd ym_momentum_metric(const Eigen::MatrixXd& g, const YangMillsData& ym) {
  Eigen::MatrixXd gam_up = checked_inverse(ym.gamma, "ym_momentum_metric");
  return kron_r(gam_up, g);
}

double magnetic_energy(const Eigen::MatrixXd& g, const YangMillsData& ym,
                       const std::vector<Eigen::MatrixXd>& F) {
  int n = static_cast<int>(g.rows());
  Eigen::MatrixXd ginv = checked_inverse(g, "magnetic_energy");
  double s = 0;
  for (int a = 0; a < ym.n0; ++a)
    for (int b = 0; b < ym.n0; ++b) {
      if (ym.gamma(a, b) == 0.0) continue;
      // F^{ij}_b = g^{ik} g^{jl} F_{kl}^b, then the full contraction with F_a
      Eigen::MatrixXd Fup = ginv * F[b] * ginv.transpose();
      s += ym.gamma(a, b) * (F[a].array() * Fup.array()).sum();
    }
  (void)n;
  return 0.25 * s;
}

double h_yangmills(const FiberPoint& p, const Eigen::MatrixXd& Gpq, double phi,
                   const Eigen::MatrixXd& g, const YangMillsData& ym) {
  require(phi > 0, "h_yangmills: phi must be positive");
  require(p.pit.size() == Gpq.rows(), "h_yangmills: momentum dimension");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Gpq);
  if (!lu.isInvertible()) throw std::invalid_argument("h_yangmills: singular momentum metric");
  check_field_strength(p, ym, static_cast<int>(g.rows()));
  double kin = 0.5 / phi * p.pit.dot(Gpq * p.pit);
  return kin + magnetic_energy(g, ym, p.F) * phi;
}

double l_yangmills(const FiberPoint& p, const Eigen::VectorXd& zetadot,
                   const Eigen::MatrixXd& Gpq, double phi, const Eigen::MatrixXd& g,
                   const YangMillsData& ym) {
  require(phi > 0, "l_yangmills: phi must be positive");
  require(zetadot.size() == Gpq.rows(), "l_yangmills: velocity dimension");
  check_field_strength(p, ym, static_cast<int>(g.rows()));
  Eigen::MatrixXd inv = checked_inverse(Gpq, "l_yangmills");
  return 0.5 * phi * zetadot.dot(inv * zetadot) - magnetic_energy(g, ym, p.F) * phi;
}

Eigen::MatrixXd doubled_scalar_metric(const YangMillsData& ym) {
  int n0 = ym.n0;
  Eigen::MatrixXd gd = Eigen::MatrixXd::Zero(2 * n0, 2 * n0);
  gd.topLeftCorner(n0, n0) = ym.gamma;
  gd.bottomRightCorner(n0, n0) = ym.gamma;
  return gd;
}

double h_higgs(const FiberPoint& p, double phi, const Eigen::MatrixXd& g,
               const YangMillsData& ym) {
  require(phi > 0, "h_higgs: phi must be positive");
  Eigen::MatrixXd gd = doubled_scalar_metric(ym);
  require(p.pth.size() == gd.rows(), "h_higgs: momentum dimension");
  Eigen::MatrixXd gd_up = checked_inverse(gd, "h_higgs");
  double kin = 0.5 / phi * p.pth.dot(gd_up * p.pth);
  double grad = 0;
  if (p.gradPhi.size() > 0) {
    require(p.gradPhi.rows() == gd.rows() && p.gradPhi.cols() == g.rows(),
            "h_higgs: gradient dimensions");
    Eigen::MatrixXd ginv = checked_inverse(g, "h_higgs");
    grad = 0.5 * (ginv.array() * (p.gradPhi.transpose() * gd * p.gradPhi).array()).sum();
  }
  double pot = p.V ? p.V(p.theta) : 0.0;
  return kin + grad * phi + pot * phi;
}

double l_higgs(const FiberPoint& p, const Eigen::VectorXd& thetadot, double phi,
               const Eigen::MatrixXd& g, const YangMillsData& ym) {
  require(phi > 0, "l_higgs: phi must be positive");
  Eigen::MatrixXd gd = doubled_scalar_metric(ym);
  require(thetadot.size() == gd.rows(), "l_higgs: velocity dimension");
  double kin = 0.5 * phi * thetadot.dot(gd * thetadot);
  double grad = 0;
  if (p.gradPhi.size() > 0) {
    Eigen::MatrixXd ginv = checked_inverse(g, "l_higgs");
    grad = 0.5 * (ginv.array() * (p.gradPhi.transpose() * gd * p.gradPhi).array()).sum();
  }
  double pot = p.V ? p.V(p.theta) : 0.0;
  return kin - grad * phi - pot * phi;
}

double legendre_roundtrip(const std::function<double(const Eigen::VectorXd&)>& L,
                          const std::function<double(const Eigen::VectorXd&)>& H,
                          const Eigen::VectorXd& qdot, double step) {
  if (!(step > 0) || step < 1e-10)
    throw std::invalid_argument("legendre_roundtrip: step underflow");
  Eigen::VectorXd p(qdot.size());
  for (int r = 0; r < qdot.size(); ++r) {
    Eigen::VectorXd qp = qdot, qm = qdot;
    qp(r) += step;
    qm(r) -= step;
    p(r) = (L(qp) - L(qm)) / (2.0 * step);
  }
  return std::abs(H(p) - (p.dot(qdot) - L(qdot)));
}

DiracHamiltonianData h_dirac(const MetricGrid& grid,
                             const std::vector<Eigen::MatrixXcd>& gammas,
                             const SpinConnection& sc, const GaugeField* gauge, int n2,
                             double m) {
  require(grid.n == 1 && grid.ny == 1 && grid.periodic,
          "h_dirac: expects a periodic 1d chart");
  require(static_cast<int>(gammas.size()) >= 2, "h_dirac: need gamma^0 and gamma^1");
  int ns = grid.nx;
  int n1 = static_cast<int>(gammas[0].rows());
  int dim = ns * n2 * n1;
  if (dim > kGrassmannCap)
    throw std::length_error("h_dirac: generator count exceeds the function-space cap");

  // local symbol gamma^0 E^1_1 gamma^1 per site
  std::vector<Eigen::MatrixXcd> S(ns);
  for (int j = 0; j < ns; ++j) {
    Vielbein vb = vielbein_from_metric(grid.g[j]);
    S[j] = vb.E(0, 0) * (gammas[0] * gammas[1]);
  }

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(dim, dim);
  int site_dim = n2 * n1;
  for (int col = 0; col < dim; ++col) {
    SpinorField chi(ns, Eigen::VectorXcd::Zero(site_dim));
    chi[col / site_dim](col % site_dim) = 1.0;
    SpinorField dchi = covariant_dirac_derivative(grid, sc, gauge, chi, 0, n1, n2);
    for (int j = 0; j < ns; ++j) {
      require(dchi[j].size() == site_dim, "h_dirac: derivative undefined at a site");
      Eigen::MatrixXcd Sc = kron_c(Eigen::MatrixXcd::Identity(n2, n2), S[j]);
      D.block(j * site_dim, col, site_dim, 1) = Sc * dchi[j];
    }
  }

  DiracHamiltonianData out;
  out.m = m;
  Eigen::MatrixXcd mass =
      kron_c(Eigen::MatrixXcd::Identity(ns * n2, ns * n2), gammas[0]);
  std::complex<double> iu(0.0, 1.0);
  out.M = 0.5 * iu * (D - D.adjoint()) - iu * m * mass;
  out.herm_defect = (out.M - out.M.adjoint()).cwiseAbs().maxCoeff();
  if (out.herm_defect > 1e-10)
    throw std::runtime_error("h_dirac: assembled operator is not Hermitian");
  out.fock_op = fock_from_one_particle(out.M);
  return out;
}

GOp<std::complex<double>> fock_from_one_particle(const Eigen::MatrixXcd& M) {
  using Op = GOp<std::complex<double>>;
  std::vector<Op> terms;
  for (int g = 0; g < M.rows(); ++g)
    for (int h = 0; h < M.cols(); ++h) {
      if (M(g, h) == std::complex<double>(0.0, 0.0)) continue;
      terms.push_back(Op::scaled(M(g, h), Op::compose(Op::derivative(g), Op::generator(h))));
    }
  if (terms.empty()) return Op::scaled(std::complex<double>(0.0, 0.0), Op::identity());
  return Op::sum(std::move(terms));
}

GOp<Exact> fock_from_one_particle(const ExactMat& M) {
  using Op = GOp<Exact>;
  std::vector<Op> terms;
  for (int g = 0; g < M.rows; ++g)
    for (int h = 0; h < M.cols; ++h) {
      if (M.at(g, h).is_zero()) continue;
      terms.push_back(Op::scaled(M.at(g, h), Op::compose(Op::derivative(g), Op::generator(h))));
    }
  if (terms.empty()) return Op::scaled(Exact(), Op::identity());
  return Op::sum(std::move(terms));
}

ExactMat rationalize_hermitian(const Eigen::MatrixXcd& M, int bits) {
  require(bits > 0 && bits < 62, "rationalize_hermitian: bits out of range");
  ExactMat R(static_cast<int>(M.rows()), static_cast<int>(M.cols()));
  double scale = std::ldexp(1.0, bits);
  mpz_class den = mpz_class(1) << bits;
  auto snap = [&](double x) {
    double r = std::nearbyint(x * scale);  // exact in mpz below 2^53
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), r);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  };
  for (int i = 0; i < R.rows; ++i)
    for (int j = 0; j < R.cols; ++j) {
      Exact e;
      e.re = snap(M(i, j).real());
      e.im = snap(M(i, j).imag());
      R.at(i, j) = e;
    }
  ExactMat sym = (R + R.adjoint()).scaled(Exact::rat(1, 2));
  return sym;
}

Eigen::VectorXd hermitian_spectrum(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  return es.eigenvalues();
}

std::complex<double> fock_expectation(const GOp<std::complex<double>>& op, int ngen,
                                      const Eigen::VectorXcd& state) {
  Eigen::MatrixXcd A = operator_matrix(op, ngen);
  require(state.size() == A.rows(), "fock_expectation: state dimension");
  double nrm = state.squaredNorm();
  require(nrm > 0, "fock_expectation: zero state");
  return state.dot(A * state) / nrm;
}

ConstraintReport solve_constraint(FiberPoint p, const DeWitt& G, const Eigen::MatrixXd& Gpq,
                                  const Eigen::MatrixXd& g, const YangMillsData& ym,
                                  double phi, double alphaN, double dirac_expectation) {
  require(p.pit.size() == Gpq.rows() && p.pit.size() > 0, "solve_constraint: gauge momenta");

  // everything except the part of the gauge kinetic term involving pit(0)
  FiberPoint rest = p;
  rest.pit(0) = 0.0;
  double others = h_gravity(rest, G, phi, alphaN) + h_higgs(rest, phi, g, ym) +
                  h_yangmills(rest, Gpq, phi, g, ym) + dirac_expectation;

  double A = 0.5 / phi * Gpq(0, 0);
  double B = (Gpq.row(0) * rest.pit).value() / phi;
  require(A > 0, "solve_constraint: momentum metric not positive on the solved component");

  // raise the slice curvature if needed so the quadratic has a real root
  double disc = B * B - 4.0 * A * others;
  double adjusted = p.Rcurv;
  if (disc < 0) {
    // d(others)/dR = -phi/alphaN, so increasing R lowers the offset
    double need = (others - (B * B) / (4.0 * A)) * alphaN / phi + 1.0;
    adjusted += need;
    rest.Rcurv = adjusted;
    others -= need * phi / alphaN;
    disc = B * B - 4.0 * A * others;
  }
  double root = (-B + std::sqrt(disc)) / (2.0 * A);
  rest.pit(0) = root;

  ConstraintReport rep;
  rep.adjusted_Rcurv = adjusted;
  rep.grav = h_gravity(rest, G, phi, alphaN);
  rep.ym = h_yangmills(rest, Gpq, phi, g, ym);
  rep.higgs = h_higgs(rest, phi, g, ym);
  rep.dirac = dirac_expectation;
  rep.total = rep.grav + rep.ym + rep.higgs + rep.dirac;
  rep.point = std::move(rest);
  return rep;
}

double wdw_symmetry_residual(const LatticeFiber& lat, int pairs, std::uint64_t seed) {
  Rng rng(seed);
  double T = (lat.Nt - 1) * lat.ht, L = lat.Nx * lat.hx;
  double worst = 0;
  auto window = [&](double lo, double hi, double minw) {
    double a = rng.uniform(lo, hi - minw);
    double b = rng.uniform(a + minw, hi);
    return std::pair<double, double>(a, b);
  };
  for (int k = 0; k < pairs; ++k) {
    auto [t0, t1] = window(4 * lat.ht, T - 4 * lat.ht, 4 * lat.ht);
    auto [x0, x1] = window(0.05 * L, 0.95 * L, 4 * lat.hx);
    GridField u = box_bump(lat, t0, t1, x0, x1, rng.uniform_int(0, 3), rng.uniform_int(0, 3));
    auto [s0, s1] = window(4 * lat.ht, T - 4 * lat.ht, 4 * lat.ht);
    auto [y0, y1] = window(0.05 * L, 0.95 * L, 4 * lat.hx);
    GridField v = box_bump(lat, s0, s1, y0, y1, rng.uniform_int(0, 3), rng.uniform_int(0, 3));
    GridField Hu = apply_wdw(lat, u), Hv = apply_wdw(lat, v);
    double a = sym_inner(lat, Hu, v), b = sym_inner(lat, u, Hv);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return worst;
}

}  // namespace qfiber
