#pragma once
// Truncated symmetric Fock space over a Cauchy-row one-particle space, Segal
// fields, the row-localized quantum field, canonical commutation checks, and
// Weyl elements with their exchange relations.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "qfiber/hyperbolic.hpp"

namespace qfiber {

using SpOp = Eigen::SparseMatrix<std::complex<double>>;

// Finite orthonormal family of complex row functions on a fixed Cauchy row,
// orthonormal for <f,g> = sum_j w_j conj(f_j) g_j with w_j = hx sqrt(b).
struct OneParticleSpace {
  int Nx = 0;
  int M_row = 0;
  Eigen::VectorXd weights;   // per column
  Eigen::MatrixXcd basis;    // dim x Nx, rows orthonormal

  int dim() const { return static_cast<int>(basis.rows()); }
  std::complex<double> inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const;
  // coefficients of the best approximation in the basis; *residual gets the
  // norm of the orthogonal remainder
  Eigen::VectorXcd project(const Eigen::VectorXcd& row, double* residual = nullptr) const;
  double orthonormality_defect() const;
};

// Trigonometric modes 1, cos x, sin x, ..., orthonormalized; `modes` total.
OneParticleSpace fourier_space(const LatticeFiber& lat, int M_row, int modes = 8);

// Orthonormal basis spanning the given row data (Gram-Schmidt, vectors whose
// remainder falls below tol * own norm are dropped).
OneParticleSpace adapted_space(const LatticeFiber& lat, int M_row,
                               const std::vector<Eigen::VectorXcd>& data,
                               double tol = 1e-8);

// Complex Cauchy datum of the propagated source on the given row:
//   f_u(j) = -( i (Gu)(M,j) + (d_t Gu)(M,j) / sqrt(a(M,j)) ),
// the unit-normal-derivative pairing convention that makes the field
// commutator come out as +i times the volume symplectic form.
Eigen::VectorXcd surface_datum(const LatticeFiber& lat, const GridField& u, int M_row);

// Occupation-number truncation of the symmetric Fock space over C^d, total
// particle number <= Nmax; states ordered by total number so the "safe"
// sub-block (total <= Nmax - 2, edge effects excluded) is a prefix.
struct FockSpace {
  int d = 0;
  int Nmax = 0;
  std::vector<std::vector<int>> occ;

  int dim() const { return static_cast<int>(occ.size()); }
  int safe_dim() const;
  int prefix_dim(int total_cap) const;  // states with total occupation <= cap
  int total(int idx) const;
};

FockSpace fock_space(int d, int Nmax);

// a^dagger(f) = sum_k f_k a^dagger_k with <n+e_k| a^dagger_k |n> = sqrt(n_k+1).
SpOp creation(const FockSpace& fock, const Eigen::VectorXcd& f);
// a(f) = creation(f)^dagger (antilinear slot).
SpOp annihilation(const FockSpace& fock, const Eigen::VectorXcd& f);
// Segal field (a(f) + a^dagger(f)) / sqrt(2) from basis coefficients.
SpOp segal_field_coeff(const FockSpace& fock, const Eigen::VectorXcd& coeff);
// Same from a row function; throws if the projection residual exceeds 1e-9
// relative to the row norm.
SpOp segal_field(const OneParticleSpace& space, const FockSpace& fock,
                 const Eigen::VectorXcd& f_row);

// Row-localized quantum field of a compactly supported source.
struct QuantumField {
  Eigen::VectorXcd coeff;    // one-particle coefficients of the datum
  double datum_norm = 0.0;   // M-norm of the unprojected datum
  double residual = 0.0;     // M-norm of the part outside the basis
  SpOp op;
};

// Throws std::domain_error when residual > max_rel_residual * datum_norm:
// the basis is too small for this source and must be enlarged, not clipped.
QuantumField quantum_field(const LatticeFiber& lat, const OneParticleSpace& space,
                           const FockSpace& fock, const GridField& u, int M_row,
                           double max_rel_residual = 1e-6);

// Commutator of two quantum fields against i * omega * identity on the safe
// sub-block (where no truncation edge is reachable).
struct CcrReport {
  double commutator_scalar = 0.0;  // Im part of the vacuum diagonal entry
  double omega = 0.0;              // volume symplectic form of the sources
  double residual = 0.0;           // max |[Phi_u, Phi_v] - i omega I| on safe block
  double centrality = 0.0;         // max |[Phi_u, Phi_v] - i scalar I| on safe block
};

CcrReport ccr_commutator_check(const LatticeFiber& lat, const OneParticleSpace& space,
                               const FockSpace& fock, const GridField& u,
                               const GridField& v, int M_row);

// Same scalar evaluated from surface data on two different rows.
struct SurfaceIndependence {
  double s1 = 0.0, s2 = 0.0, diff = 0.0;
};

SurfaceIndependence surface_independence_check(const LatticeFiber& lat,
                                               const OneParticleSpace& space1,
                                               const OneParticleSpace& space2,
                                               const GridField& u, const GridField& v,
                                               int M_row1, int M_row2);

// exp(i Phi) by dense Hermitian eigendecomposition; intended for small Fock
// spaces (pair factors, reduced nets).
struct WeylElement {
  Eigen::MatrixXcd U;
  double unitarity_defect = 0.0;  // on the safe sub-block
};

WeylElement weyl(const FockSpace& fock, const SpOp& phi);

// Exchange relations of the pair (f, g) evaluated on the Fock space over
// span{f, g} (dimension <= 2, so the truncated factor stays tiny).  The
// central phase convention fixed here is W(f) W(g) = e^{-i Im<f,g>/2} W(f+g).
//
// Truncation caveat: truncated Segal fields fail to commute on the top shell
// (total occupation == Nmax) even for orthogonal arguments, because raise-then-
// lower paths through the shell survive while lower-then-raise paths are cut.
// That shell defect contaminates matrix elements within two levels of the
// edge, so exponential identities are probed on a fixed low prefix (total
// occupation <= probe_total) kept at least four levels below Nmax; leakage
// into the probe block then needs >= 2*(Nmax - probe_total) ladder steps and
// sits at the roundoff floor for arguments of norm O(1).
struct WeylPairReport {
  double sigma = 0.0;                // Im<f,g> in the one-particle space
  double relation_residual = 0.0;    // Weyl relation defect on the probe block
  double commutation_residual = 0.0; // ||W(f)W(g) - W(g)W(f)|| on the probe block
  double unitarity_defect = 0.0;     // on the safe sub-block (<= Nmax - 2)
};

WeylPairReport weyl_pair_check(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                               int Nmax = 10, int probe_total = 2);

}  // namespace qfiber
