#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "qfiber/clifford.hpp"

namespace qfiber {

// DeWitt-type supermetric on symmetric rank-2 tensors,
//   G^{ij,kl} = 1/2 (g^{ik} g^{jl} + g^{il} g^{jk}) - g^{ij} g^{kl},
// flattened over the ordered pair basis {(i,j): i <= j} with multiplicity
// weights so that v^T flat v reproduces the full contraction.
struct DeWitt {
  std::vector<std::pair<int, int>> pairs;
  Eigen::MatrixXd flat;
};

double dewitt_component(const Eigen::MatrixXd& ginv, int i, int j, int k, int l);
DeWitt dewitt_metric(const Eigen::MatrixXd& g);

// Value of the supermetric along the pure-trace velocity gdot = g: equals
// n - n^2, the single negative direction.
double dewitt_trace_value(const Eigen::MatrixXd& g);

// Flatten a symmetric matrix into the ordered pair basis (no weights).
Eigen::VectorXd flatten_sym(const DeWitt& dw, const Eigen::MatrixXd& s);

// phi = sqrt(det g / det rho), the scalar density relating g to the reference
// metric rho.
double conformal_factor(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rho);

// Gauge sector data: algebra dimension n0, SPD inner metric gamma, structure
// constants f[c](a,b) (so [t_a, t_b] = f[c](a,b) t_c), antihermitian
// representation matrices t_c of size n2 x n2.
struct YangMillsData {
  int n0 = 0;
  int n2 = 0;
  Eigen::MatrixXd gamma;
  std::vector<Eigen::MatrixXd> f;
  std::vector<Eigen::MatrixXcd> t;
};

YangMillsData su2_data();
YangMillsData abelian_data();

// Block-diagonal metric on the full fiber at a configuration point:
//   phi * diag(alphaN^{-1} G_rs, 2 gamma (x) g^{-1}, 2 gamma, 2 gamma),
// with exactly one negative direction (inherited from the trace part).
struct FiberMetric {
  Eigen::MatrixXd G;
  int grav_dim = 0, ym_dim = 0, higgs_dim = 0;
};

FiberMetric fiber_metric(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rho,
                         const YangMillsData& ym, double alphaN);

// Frame from the Cholesky factorization g = L L^T: e^{a}_i = L(i, a), E its
// inverse; time leg lifted by the lapse w with zero shift.
struct Vielbein {
  Eigen::MatrixXd e;  // e(a, i)
  Eigen::MatrixXd E;  // E(i, a)
  double w = 1.0;
};

Vielbein vielbein_from_metric(const Eigen::MatrixXd& g, double w = 1.0);

// Spatial metric sampled on a 1d or 2d chart grid with spacing h.
struct MetricGrid {
  int n = 2;  // metric dimension == chart dimension (1 or 2)
  int nx = 1, ny = 1;
  double h = 0.0;
  bool periodic = false;
  std::vector<Eigen::MatrixXd> g;

  const Eigen::MatrixXd& at(int ix, int iy) const { return g[iy * nx + ix]; }
  Eigen::MatrixXd& at(int ix, int iy) { return g[iy * nx + ix]; }
  bool has_point(int ix, int iy) const;
};

MetricGrid sample_metric(const std::function<Eigen::MatrixXd(double, double)>& f, int n,
                         int nx, int ny, double h, double x0 = 0.0, double y0 = 0.0,
                         bool periodic = false);

// Spin connection from centered differences of the Cholesky frame:
//   Gamma_k = -1/4 E^j_a (d_k e^b_j - Gamma^l_{jk} e^b_l) gamma_b gamma^a,
// projected onto its antihermitian part; the discarded hermitian defect is
// reported (it measures the discretization error, O(h^2)).
struct SpinConnection {
  int nx = 0, ny = 0;
  std::vector<std::vector<Eigen::MatrixXcd>> Gk;  // [iy*nx+ix][k], empty if not evaluated
  double herm_defect = 0.0;

  bool evaluated(int ix, int iy) const { return !Gk[iy * nx + ix].empty(); }
};

SpinConnection spin_connection(const MetricGrid& grid, const GammaRep& rep);
SpinConnection spin_connection(const MetricGrid& grid,
                               const std::vector<Eigen::MatrixXcd>& gammas);

// Colour connection: per grid point, per chart direction, an antihermitian
// n2 x n2 matrix A^c_k t_c.
using GaugeField = std::vector<std::vector<Eigen::MatrixXcd>>;

GaugeField gauge_from_coefficients(const YangMillsData& ym,
                                   const std::vector<std::vector<Eigen::VectorXd>>& coeff);

// Spinor-colour field on the grid, colour index outer, spinor inner.
using SpinorField = std::vector<Eigen::VectorXcd>;

// D_k chi = d_k chi + (I_{n2} (x) Gamma_k) chi + (A_k (x) I_{n1}) chi at every
// point where both the difference stencil and the connection exist.  Points
// that cannot be evaluated hold empty vectors.
SpinorField covariant_dirac_derivative(const MetricGrid& grid, const SpinConnection& sc,
                                       const GaugeField* gauge, const SpinorField& chi,
                                       int k, int n1, int n2);

// Scalar curvature of a 2d diagonal metric diag(g11, g22) by nested centered
// differences at (x, y).
double scalar_curvature_diag2(const std::function<double(double, double)>& g11,
                              const std::function<double(double, double)>& g22, double x,
                              double y, double h);

// Kronecker helpers shared by the fermionic sector.
Eigen::MatrixXcd kron_c(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::MatrixXd kron_r(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace qfiber
