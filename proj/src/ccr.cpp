#include "qfiber/ccr.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace qfiber {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double wnorm(const Eigen::VectorXd& w, const Eigen::VectorXcd& f) {
  return std::sqrt((w.array() * f.array().abs2()).sum());
}

}  // namespace

std::complex<double> OneParticleSpace::inner(const Eigen::VectorXcd& f,
                                             const Eigen::VectorXcd& g) const {
  require(f.size() == Nx && g.size() == Nx, "one-particle inner: row length");
  return (weights.array() * (f.conjugate().array() * g.array())).sum();
}

Eigen::VectorXcd OneParticleSpace::project(const Eigen::VectorXcd& row,
                                           double* residual) const {
  Eigen::VectorXcd coeff(dim());
  for (int k = 0; k < dim(); ++k) coeff(k) = inner(basis.row(k), row);
  if (residual) {
    Eigen::VectorXcd rem = row;
    for (int k = 0; k < dim(); ++k) rem -= coeff(k) * basis.row(k).transpose();
    *residual = wnorm(weights, rem);
  }
  return coeff;
}

double OneParticleSpace::orthonormality_defect() const {
  double worst = 0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      std::complex<double> v = inner(basis.row(i), basis.row(j));
      worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

OneParticleSpace fourier_space(const LatticeFiber& lat, int M_row, int modes) {
  require(modes >= 1 && M_row >= 0 && M_row < lat.Nt, "fourier_space: arguments");
  OneParticleSpace sp;
  sp.Nx = lat.Nx;
  sp.M_row = M_row;
  sp.weights = mrow_weights(lat, M_row);
  double L = lat.length();
  Eigen::MatrixXcd raw(modes, lat.Nx);
  for (int k = 0; k < modes; ++k) {
    int m = (k + 1) / 2;
    bool sine = (k % 2 == 0) && k > 0;
    for (int j = 0; j < lat.Nx; ++j) {
      double x = 2 * M_PI * m * lat.xcoord(j) / L;
      raw(k, j) = k == 0 ? 1.0 : (sine ? std::sin(x) : std::cos(x));
    }
  }
  // modified Gram-Schmidt against the row weights
  sp.basis = raw;
  for (int k = 0; k < modes; ++k) {
    for (int p = 0; p < k; ++p) {
      std::complex<double> c = sp.inner(sp.basis.row(p), sp.basis.row(k));
      sp.basis.row(k) -= c * sp.basis.row(p);
    }
    double n = wnorm(sp.weights, sp.basis.row(k));
    require(n > 1e-12, "fourier_space: degenerate mode family");
    sp.basis.row(k) /= n;
  }
  return sp;
}

OneParticleSpace adapted_space(const LatticeFiber& lat, int M_row,
                               const std::vector<Eigen::VectorXcd>& data, double tol) {
  OneParticleSpace sp;
  sp.Nx = lat.Nx;
  sp.M_row = M_row;
  sp.weights = mrow_weights(lat, M_row);
  std::vector<Eigen::VectorXcd> kept;
  for (const auto& v : data) {
    require(v.size() == lat.Nx, "adapted_space: row length");
    double n0 = wnorm(sp.weights, v);
    if (n0 <= 0) continue;
    Eigen::VectorXcd r = v;
    for (const auto& b : kept) {
      std::complex<double> c = (sp.weights.array() * (b.conjugate().array() * r.array())).sum();
      r -= c * b;
    }
    double n1 = wnorm(sp.weights, r);
    if (n1 > tol * n0) kept.push_back(r / n1);
  }
  sp.basis.resize(static_cast<int>(kept.size()), lat.Nx);
  for (size_t k = 0; k < kept.size(); ++k) sp.basis.row(static_cast<int>(k)) = kept[k];
  return sp;
}

Eigen::VectorXcd surface_datum(const LatticeFiber& lat, const GridField& u, int M_row) {
  require(u.fd == 1, "surface_datum: scalar sections only");
  require(M_row >= 2 && M_row <= lat.Nt - 3, "surface_datum: row too close to the boundary");
  GridField g = green_apply(lat, u, GreenMode::PauliJordan);
  Eigen::MatrixXd val = row_values(g, M_row);
  Eigen::MatrixXd dt = d_nu(g, M_row, lat.ht);
  Eigen::VectorXcd f(lat.Nx);
  std::complex<double> iu(0.0, 1.0);
  for (int j = 0; j < lat.Nx; ++j)
    f(j) = -(iu * val(0, j) + dt(0, j) / std::sqrt(lat.a(M_row, j)));
  return f;
}

FockSpace fock_space(int d, int Nmax) {
  require(d >= 1 && Nmax >= 0, "fock_space: arguments");
  FockSpace fs;
  fs.d = d;
  fs.Nmax = Nmax;
  std::vector<int> cur(d, 0);
  // lexicographic compositions of each total, totals ascending
  std::function<void(int, int)> gen = [&](int pos, int left) {
    if (pos == d - 1) {
      cur[pos] = left;
      fs.occ.push_back(cur);
      return;
    }
    for (int take = left; take >= 0; --take) {
      cur[pos] = take;
      gen(pos + 1, left - take);
    }
  };
  for (int N = 0; N <= Nmax; ++N) gen(0, N);
  return fs;
}

int FockSpace::safe_dim() const { return prefix_dim(Nmax - 2); }

int FockSpace::prefix_dim(int total_cap) const {
  int c = 0;
  for (const auto& n : occ) {
    int t = 0;
    for (int v : n) t += v;
    if (t <= total_cap) ++c;
  }
  return c;
}

int FockSpace::total(int idx) const {
  int t = 0;
  for (int v : occ[idx]) t += v;
  return t;
}

SpOp creation(const FockSpace& fock, const Eigen::VectorXcd& f) {
  require(f.size() == fock.d, "creation: coefficient dimension");
  std::map<std::vector<int>, int> index;
  for (int s = 0; s < fock.dim(); ++s) index[fock.occ[s]] = s;
  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  for (int s = 0; s < fock.dim(); ++s) {
    if (fock.total(s) >= fock.Nmax) continue;  // truncation edge
    for (int k = 0; k < fock.d; ++k) {
      if (f(k) == std::complex<double>(0.0, 0.0)) continue;
      std::vector<int> up = fock.occ[s];
      up[k] += 1;
      int t = index.at(up);
      trips.emplace_back(t, s, f(k) * std::sqrt(double(up[k])));
    }
  }
  SpOp A(fock.dim(), fock.dim());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SpOp annihilation(const FockSpace& fock, const Eigen::VectorXcd& f) {
  return SpOp(creation(fock, f).adjoint());
}

SpOp segal_field_coeff(const FockSpace& fock, const Eigen::VectorXcd& coeff) {
  SpOp c = creation(fock, coeff);
  return SpOp((c + SpOp(c.adjoint())) / std::sqrt(2.0));
}

SpOp segal_field(const OneParticleSpace& space, const FockSpace& fock,
                 const Eigen::VectorXcd& f_row) {
  require(fock.d == space.dim(), "segal_field: space and Fock dimensions differ");
  double res = 0;
  Eigen::VectorXcd coeff = space.project(f_row, &res);
  double n = wnorm(space.weights, f_row);
  if (n > 0 && res > 1e-9 * n)
    throw std::domain_error("segal_field: argument outside the one-particle span");
  return segal_field_coeff(fock, coeff);
}

QuantumField quantum_field(const LatticeFiber& lat, const OneParticleSpace& space,
                           const FockSpace& fock, const GridField& u, int M_row,
                           double max_rel_residual) {
  require(fock.d == space.dim(), "quantum_field: space and Fock dimensions differ");
  require(space.Nx == lat.Nx, "quantum_field: space built for another lattice");
  QuantumField out;
  Eigen::VectorXcd datum = surface_datum(lat, u, M_row);
  out.datum_norm = wnorm(space.weights, datum);
  out.coeff = space.project(datum, &out.residual);
  if (out.datum_norm > 0 && out.residual > max_rel_residual * out.datum_norm)
    throw std::domain_error(
        "quantum_field: datum projection residual " + std::to_string(out.residual) +
        " exceeds the declared basis tolerance; enlarge the one-particle basis");
  out.op = segal_field_coeff(fock, out.coeff);
  return out;
}

namespace {

Eigen::MatrixXcd dense_block(const SpOp& A, int s) {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(s, s);
  for (int o = 0; o < A.outerSize(); ++o)
    for (SpOp::InnerIterator it(A, o); it; ++it)
      if (it.row() < s && it.col() < s) D(it.row(), it.col()) = it.value();
  return D;
}

}  // namespace

CcrReport ccr_commutator_check(const LatticeFiber& lat, const OneParticleSpace& space,
                               const FockSpace& fock, const GridField& u,
                               const GridField& v, int M_row) {
  QuantumField qu = quantum_field(lat, space, fock, u, M_row);
  QuantumField qv = quantum_field(lat, space, fock, v, M_row);
  SpOp comm = SpOp(qu.op * qv.op) - SpOp(qv.op * qu.op);
  int s = fock.safe_dim();
  Eigen::MatrixXcd C = dense_block(comm, s);
  CcrReport rep;
  rep.commutator_scalar = C(0, 0).imag();
  rep.omega = symplectic_form(lat, u, v);
  std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(s, s);
  rep.residual = (C - iu * rep.omega * I).cwiseAbs().maxCoeff();
  rep.centrality = (C - iu * rep.commutator_scalar * I).cwiseAbs().maxCoeff();
  return rep;
}

SurfaceIndependence surface_independence_check(const LatticeFiber& lat,
                                               const OneParticleSpace& space1,
                                               const OneParticleSpace& space2,
                                               const GridField& u, const GridField& v,
                                               int M_row1, int M_row2) {
  SurfaceIndependence si;
  Eigen::VectorXcd fu1 = surface_datum(lat, u, M_row1), fv1 = surface_datum(lat, v, M_row1);
  Eigen::VectorXcd fu2 = surface_datum(lat, u, M_row2), fv2 = surface_datum(lat, v, M_row2);
  si.s1 = space1.inner(fu1, fv1).imag();
  si.s2 = space2.inner(fu2, fv2).imag();
  si.diff = std::abs(si.s1 - si.s2);
  return si;
}

WeylElement weyl(const FockSpace& fock, const SpOp& phi) {
  Eigen::MatrixXcd D(phi);
  require(D.rows() == fock.dim(), "weyl: operator dimension");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D);
  std::complex<double> iu(0.0, 1.0);
  Eigen::VectorXcd ph =
      (iu * es.eigenvalues().array().cast<std::complex<double>>()).exp().matrix();
  WeylElement w;
  w.U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  int s = fock.safe_dim();
  w.unitarity_defect =
      ((w.U * w.U.adjoint()).topLeftCorner(s, s) - Eigen::MatrixXcd::Identity(s, s))
          .cwiseAbs()
          .maxCoeff();
  return w;
}

WeylPairReport weyl_pair_check(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                               int Nmax, int probe_total) {
  require(f.size() == g.size(), "weyl_pair_check: dimension mismatch");
  require(probe_total >= 0 && probe_total <= Nmax - 4,
          "weyl_pair_check: probe block needs >= 4 levels of truncation buffer");
  WeylPairReport rep;
  rep.sigma = f.dot(g).imag();

  // orthonormal basis of span{f, g}
  std::vector<Eigen::VectorXcd> basis;
  for (const Eigen::VectorXcd& v : {f, g}) {
    Eigen::VectorXcd r = v;
    for (const auto& b : basis) r -= b.dot(r) * b;
    double n = r.norm();
    if (n > 1e-13 * std::max(1.0, v.norm())) basis.push_back(r / n);
  }
  int deff = static_cast<int>(basis.size());
  if (deff == 0) return rep;  // both null: everything is the identity

  auto coords = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd c(deff);
    for (int k = 0; k < deff; ++k) c(k) = basis[k].dot(v);
    return c;
  };
  FockSpace factor = fock_space(deff, Nmax);
  Eigen::VectorXcd cf = coords(f), cg = coords(g);
  WeylElement Wf = weyl(factor, segal_field_coeff(factor, cf));
  WeylElement Wg = weyl(factor, segal_field_coeff(factor, cg));
  WeylElement Wfg = weyl(factor, segal_field_coeff(factor, cf + cg));

  int s = factor.prefix_dim(probe_total);
  std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd lhs = (Wf.U * Wg.U).topLeftCorner(s, s);
  Eigen::MatrixXcd rhs = std::exp(-iu * rep.sigma / 2.0) * Wfg.U.topLeftCorner(s, s);
  rep.relation_residual = (lhs - rhs).cwiseAbs().maxCoeff();
  rep.commutation_residual =
      ((Wf.U * Wg.U - Wg.U * Wf.U).topLeftCorner(s, s)).cwiseAbs().maxCoeff();
  rep.unitarity_defect = std::max(Wf.unitarity_defect,
                                  std::max(Wg.unitarity_defect, Wfg.unitarity_defect));
  return rep;
}

}  // namespace qfiber
