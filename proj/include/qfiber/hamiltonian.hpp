#pragma once
// Sector Hamiltonians on the fiber (gravity / gauge / scalar / fermion),
// Legendre-transform round trips, the lattice Dirac one-particle operator with
// its realization on the fermionic function space, and checks for the
// hyperbolic constraint operator.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "qfiber/clifford.hpp"
#include "qfiber/exact_matrix.hpp"
#include "qfiber/geometry.hpp"
#include "qfiber/grassmann.hpp"
#include "qfiber/hyperbolic.hpp"

namespace qfiber {

// All fiber variables entering the constraint at one spatial point.  Momenta
// use the same bases as the corresponding flattened metrics, so the kinetic
// terms are plain quadratic forms (pair basis with the i<j doubling for
// gravity, colour index outer for the gauge sector, doubled real components
// for the scalar).
struct FiberPoint {
  Eigen::VectorXd pi;       // gravity momenta, pair basis
  Eigen::VectorXd pit;      // gauge momenta, colour outer, chart inner
  Eigen::VectorXd pth;      // scalar momenta, doubled real components
  Eigen::VectorXd theta;    // scalar coordinates, doubled real components
  Eigen::MatrixXd gradPhi;  // (2 n0) x n spatial gradients of the scalar
  std::vector<Eigen::MatrixXd> F;  // per colour: antisymmetric n x n strengths
  double w = 1.0;                  // lapse
  double Lambda = 0.0;             // cosmological constant
  double Rcurv = 0.0;              // slice scalar curvature
  std::function<double(const Eigen::VectorXd&)> V;  // scalar potential
};

// H_G = alphaN phi^{-1} G^{rs} pi_r pi_s - alphaN^{-1} (R - 2 Lambda) phi.
// Throws if the pair-basis metric is singular or phi/alphaN not positive.
double h_gravity(const FiberPoint& p, const DeWitt& G, double phi, double alphaN);
// Same, multiplied by the lapse.
double h_gravity_hat(const FiberPoint& p, const DeWitt& G, double phi, double alphaN);
// Matching Lagrangian: phi/(4 alphaN) xidot^T G^{-1} xidot + (R-2L) phi/alphaN.
double l_gravity(const FiberPoint& p, const Eigen::VectorXd& xidot, const DeWitt& G,
                 double phi, double alphaN);

// Upper-index momentum metric for the gauge kinetic term: gamma^{ab} g_{ij},
// colour outer.  Its inverse (gamma_ab g^{ij}) is the velocity metric.
Eigen::MatrixXd ym_momentum_metric(const Eigen::MatrixXd& g, const YangMillsData& ym);
// (1/4) gamma_ab g^{ik} g^{jl} F^a_{ij} F^b_{kl}; nonnegative for SPD gamma.
double magnetic_energy(const Eigen::MatrixXd& g, const YangMillsData& ym,
                       const std::vector<Eigen::MatrixXd>& F);
// H_YM = (1/2) phi^{-1} G^{pq} pit_p pit_q + magnetic * phi.
double h_yangmills(const FiberPoint& p, const Eigen::MatrixXd& Gpq, double phi,
                   const Eigen::MatrixXd& g, const YangMillsData& ym);
double l_yangmills(const FiberPoint& p, const Eigen::VectorXd& zetadot,
                   const Eigen::MatrixXd& Gpq, double phi, const Eigen::MatrixXd& g,
                   const YangMillsData& ym);

// Doubled algebra metric diag(gamma, gamma) on the real scalar components.
Eigen::MatrixXd doubled_scalar_metric(const YangMillsData& ym);
// H_H = (1/2) phi^{-1} gd^{ab} p_a p_b
//     + (1/2) g^{ij} gd_ab gradPhi^a_i gradPhi^b_j phi + V(theta) phi.
double h_higgs(const FiberPoint& p, double phi, const Eigen::MatrixXd& g,
               const YangMillsData& ym);
double l_higgs(const FiberPoint& p, const Eigen::VectorXd& thetadot, double phi,
               const Eigen::MatrixXd& g, const YangMillsData& ym);

// p_r = dL/dqdot_r by central differences (given step), then the defect
// |H(p) - (p . qdot - L(qdot))| of the Legendre identity.  The configuration
// point is baked into both closures.  Throws on step underflow.
double legendre_roundtrip(const std::function<double(const Eigen::VectorXd&)>& L,
                          const std::function<double(const Eigen::VectorXd&)>& H,
                          const Eigen::VectorXd& qdot, double step = 1e-4);

// One-particle operator of the fermion sector on a periodic 1d chart:
//   D = gamma^0 E^k_a gamma^a (d_k + spin connection + gauge connection),
//   M = (i/2)(D - D^dagger) - i m I (x) gamma^0,
// assembled site (x) colour (x) spinor, Hermitian by construction.
struct DiracHamiltonianData {
  Eigen::MatrixXcd M;
  GOp<std::complex<double>> fock_op;  // sum_{g,h} M_gh  conj-field_g field_h
  double m = 0.0;
  double herm_defect = 0.0;  // ||M - M^dagger||_max before enforcing
};

DiracHamiltonianData h_dirac(const MetricGrid& grid,
                             const std::vector<Eigen::MatrixXcd>& gammas,
                             const SpinConnection& sc, const GaugeField* gauge, int n2,
                             double m);

// Quadratic operator sum_{g,h} M_gh der_g gen_h on the function space.
GOp<std::complex<double>> fock_from_one_particle(const Eigen::MatrixXcd& M);
GOp<Exact> fock_from_one_particle(const ExactMat& M);

// Snap a numerically Hermitian matrix to exact rational entries (dyadic with
// the given number of fractional bits) and enforce Hermiticity exactly.
ExactMat rationalize_hermitian(const Eigen::MatrixXcd& M, int bits = 32);

// Sorted eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_spectrum(const Eigen::MatrixXcd& M);

// <state| op |state> via the dense operator matrix on ngen generators; the
// imaginary part (a consistency check for Hermitian op) is returned too.
std::complex<double> fock_expectation(const GOp<std::complex<double>>& op, int ngen,
                                      const Eigen::VectorXcd& state);

// Constraint assembly: solve for the first gauge momentum component so that
//   h_gravity + h_yangmills + h_higgs + fermion expectation = 0.
// If the quadratic has no real root, the slice curvature is raised (lowering
// the gravity potential) until it does; the adjusted point is returned.
struct ConstraintReport {
  double grav = 0.0, ym = 0.0, higgs = 0.0, dirac = 0.0, total = 0.0;
  double adjusted_Rcurv = 0.0;
  FiberPoint point;
};

ConstraintReport solve_constraint(FiberPoint p, const DeWitt& G, const Eigen::MatrixXd& Gpq,
                                  const Eigen::MatrixXd& g, const YangMillsData& ym,
                                  double phi, double alphaN, double dirac_expectation);

// Max over random compactly supported pairs of |<Hu,v> - <u,Hv>| /
// max(1, |<Hu,v>|) for the lattice constraint operator.
double wdw_symmetry_residual(const LatticeFiber& lat, int pairs, std::uint64_t seed);

}  // namespace qfiber
