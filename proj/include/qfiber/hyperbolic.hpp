#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace qfiber {

// Inclusive cell-index box on the lattice.
struct CellBox {
  int t0 = 0, t1 = 0, x0 = 0, x1 = 0;
};

// 1+1 lattice for a normally hyperbolic operator on a section of the fiber:
// metric diag(-a(t,x), b(t,x)), volume weight w = sqrt(ab), zero-order
// coefficient c plus an optional constant symmetric fiber coupling.  Space is
// periodic; time rows [0, Nt) with sources kept `margin` rows away from the
// boundary.
struct LatticeFiber {
  int Nt = 0, Nx = 0;
  double ht = 0, hx = 0;
  int fiber_dim = 1;
  Eigen::ArrayXXd a, b, c;  // Nt x Nx
  Eigen::MatrixXd Cmat;     // fiber coupling, 0x0 when absent
  int margin = 2;

  double w(int m, int j) const { return std::sqrt(a(m, j) * b(m, j)); }
  // characteristic dx/dt
  double speed(int m, int j) const { return std::sqrt(a(m, j) / b(m, j)); }
  double tcoord(int m) const { return m * ht; }
  double xcoord(int j) const { return j * hx; }
  double length() const { return Nx * hx; }
  bool has_coupling() const { return Cmat.size() > 0; }
  void validate() const;  // positivity and the CFL bound ht * speed <= hx
};

LatticeFiber flat_lattice(int Nt, int Nx, double ht, double hx, double cval = 0.0,
                          int fiber_dim = 1);

// Section through the fiber metric spanned by the conformal trace direction
// (timelike) and one gauge coordinate direction, along the curve
// g(t) = exp(sigma t) g0 with g0 = rho = I in dimension two and the abelian
// gauge data; a(t) and b(t) are read off the fiber metric itself.
LatticeFiber exponential_trace_section(int Nt, int Nx, double ht, double hx, double sigma,
                                       double cval);

// Real field on the lattice, one Nt x Nx sheet per fiber component.
struct GridField {
  int Nt = 0, Nx = 0, fd = 1;
  std::vector<Eigen::MatrixXd> comp;

  double max_abs() const;
  GridField& add_scaled(const GridField& v, double s);
  GridField scaled(double s) const;
  // multiply every row by a time profile value
  GridField time_profile(const std::vector<double>& theta) const;
  // zero outside the box; returns the largest magnitude clipped away
  GridField clipped(const CellBox& box, double* tail = nullptr) const;
};

GridField zero_field(const LatticeFiber& lat);

// C-infinity bump exp(1 - 1/(1-s^2)) on (-1,1).
double smooth_bump(double s);
// C^4 polynomial step: 0 for s<=0, 1 for s>=1.
double smooth_step(double s);

// Tensor bump supported on a physical box, modulated by Chebyshev factors
// T_pi(t), T_pj(x) in box-normalized coordinates; deterministic.
GridField box_bump(const LatticeFiber& lat, double t0, double t1, double x0, double x1,
                   int pi = 0, int pj = 0, int comp = 0);

// Full-period Fourier mode in x times a smooth time bump on [t0, t1].
GridField fourier_source(const LatticeFiber& lat, double t0, double t1, int k, bool sine,
                         int comp = 0);

// Conservative symmetric form of the operator (volume-weighted divergence
// stencil, pointwise zero-order term); zero on the two boundary rows.
GridField apply_wdw(const LatticeFiber& lat, const GridField& u);

// Expanded nonconservative form actually enforced by the marching solver:
// coefficients sampled pointwise, first-order terms by centered differences of
// the coefficient fields, zero-order term time-averaged.  Agrees with
// apply_wdw to O(h^2); identical for constant coefficients with c = 0.
GridField apply_wdw_solver_form(const LatticeFiber& lat, const GridField& u);

// Leapfrog Cauchy solve of (solver form) u = f from data (u, du/dt) on row0,
// marching forward (rows > row0) or backward; untouched rows stay zero.
GridField solve_cauchy(const LatticeFiber& lat, const GridField& f,
                       const Eigen::MatrixXd& u0, const Eigen::MatrixXd& v0, int row0,
                       bool forward);

enum class GreenMode { Retarded, Advanced, PauliJordan };

// Green operators by marching with zero data from the respective boundary;
// requires the source to vanish within `margin` rows of both time boundaries.
GridField green_apply(const LatticeFiber& lat, const GridField& u, GreenMode mode);

// Volume inner product Sum u.v w ht hx.
double sym_inner(const LatticeFiber& lat, const GridField& u, const GridField& v);

// omega(u, v) = <u, G v> with the causal propagator G = G+ - G-.
double symplectic_form(const LatticeFiber& lat, const GridField& u, const GridField& v);

// Row extraction (fd x Nx) and the centered discrete normal derivative.
Eigen::MatrixXd row_values(const GridField& u, int row);
Eigen::MatrixXd d_nu(const GridField& u, int row, double ht);

// Surface measure weights on a constant-time row: hx * sqrt(b(row, j)).
Eigen::VectorXd mrow_weights(const LatticeFiber& lat, int row);

// Volume pairing vs boundary pairing at M_row:
//   <u, Gv>_vol  =  Sum_j (w/a) [ D_nu(Gu) Gv - Gu D_nu(Gv) ](M_row, j) hx
struct PairingResult {
  double lhs = 0, rhs = 0, residual = 0;
};
PairingResult pairing_identity(const LatticeFiber& lat, const GridField& u,
                               const GridField& v, int M_row);

// Discrete causal futures/pasts of a cell box: per-row interval growth at the
// local characteristic speed, dilated by a 2-cell halo.  Masks are Nt x Nx
// arrays of 0/1.
Eigen::ArrayXXi causal_future(const LatticeFiber& lat, const CellBox& K);
Eigen::ArrayXXi causal_past(const LatticeFiber& lat, const CellBox& K);

bool spacelike_separated(const LatticeFiber& lat, const CellBox& r1, const CellBox& r2);

// Largest |u| on cells where mask == 0.
double max_abs_outside(const GridField& u, const Eigen::ArrayXXi& mask);

// log2 error ratio under mesh halving; below_floor marks both errors under the
// round-off floor (treated as converged-exactly by callers).
struct OrderFit {
  double e_coarse = 0, e_fine = 0, order = 0;
  bool below_floor = false;
};
OrderFit order_estimate(double e_coarse, double e_fine, double floor = 1e-13);

}  // namespace qfiber
