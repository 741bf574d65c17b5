#pragma once
// Net of local algebra probes over cell-box regions of a lattice fiber.
// Each region carries a finite dictionary of compactly supported test fields;
// the "algebra" attached to a region is represented by its generating family
// together with the truncated-Fock images of those generators.  The checks
// here verify, at desk scale: isotony of the net, commutation of generators
// attached to spacelike-separated regions, reconstruction of a field from
// Cauchy-band data localized in a causal shadow, and an irreducibility
// surrogate (trivial commutant of the generator images on a reduced space).

#include <vector>

#include "qfiber/ccr.hpp"
#include "qfiber/hyperbolic.hpp"

namespace qfiber {

// Open, relatively compact region: an inclusive box of grid cells kept within
// the lattice margins.
using Region = CellBox;

bool region_within(const LatticeFiber& lat, const Region& r);
bool region_subset(const Region& inner, const Region& outer);

// One dictionary entry: a test field together with its declared support box
// and the Chebyshev modulation orders it was built with.
struct DictEntry {
  Region support;
  int pi = 0, pj = 0;
  GridField field;
};

struct LocalNet {
  LatticeFiber lat;
  std::vector<DictEntry> dict;
};

// Tensor-product dictionary: orders x orders Chebyshev-modulated bumps per
// region (default 16 per region), each supported strictly inside its region.
LocalNet make_net(const LatticeFiber& lat, const std::vector<Region>& regions,
                  int orders = 4);

// Generating family of the local algebra probe attached to r: indices of all
// dictionary fields whose support box lies inside r.  Isotony of the net is
// then monotonicity of this index set in r.
std::vector<int> generators(const LocalNet& net, const Region& r);

struct Axiom1Report {
  bool nested = false;       // generators(r1) is a subset of generators(r2)
  bool supports_ok = false;  // every field vanishes outside its declared box
  int n_inner = 0, n_outer = 0;
  bool pass() const { return nested && supports_ok; }
};

// Pre: r1 contained in r2 (throws std::invalid_argument otherwise).
Axiom1Report axiom1_isotony_check(const LocalNet& net, const Region& r1,
                                  const Region& r2);

struct Axiom3Report {
  int pairs = 0;
  double max_omega = 0.0;        // volume symplectic form across generator pairs
  double max_sigma = 0.0;        // Cauchy-datum pairing (discretizes omega)
  double max_commutation = 0.0;  // Weyl commutation residual, probe block
  double max_relation = 0.0;     // Weyl exchange-relation residual, probe block
};

// Scan every generator pair of (r1, r2) without any causality precondition;
// used directly for negative controls on causally connected regions.
Axiom3Report causal_pair_scan(const LocalNet& net, const Region& r1,
                              const Region& r2, int M_row);

// Pre: spacelike_separated(r1, r2) (throws std::invalid_argument otherwise).
// For spacelike regions every |omega| is a cone-leakage residual and the Weyl
// commutation defects are O(h^2) datum-discretization residuals.
Axiom3Report axiom3_causality_check(const LocalNet& net, const Region& r1,
                                    const Region& r2, int M_row);

struct Axiom4Report {
  GridField v;            // reconstructed source, supported in r_src
  double residual = 0.0;  // max |Gu - Gv| on rows above the cutoff band
  double gu_scale = 0.0;  // max |Gu| on the same rows
  double tail = 0.0;      // magnitude clipped away outside r_src
  int band_lo = 0, band_hi = 0;  // rows where the cutoff transitions
};

// Reconstruction across a Cauchy band: with theta a smooth time cutoff (0 in
// the past of the band around M_row, 1 in its future), v = H_sym(theta * Gu)
// is supported in the band inside the causal shadow of r_dep and satisfies
// Gv = Gu above the band up to the O(h^2) disparity between the symmetric
// operator and the marching form.  `width` is the physical transition width;
// width <= 0 selects the default of four time levels.
// Pre (throws std::invalid_argument): u supported in r_dep; r_dep strictly on
// one side of the band; the causal shadow of r_dep over the band, 2-cell halo
// included, lies inside r_src.
Axiom4Report axiom4_second_causality_check(const LatticeFiber& lat, const Region& r_dep,
                                           const Region& r_src, int M_row,
                                           const GridField& u, double width = 0.0);

struct Axiom2Report {
  int commutant_dim = 0;  // eigenvalues of the commutation normal matrix ~ 0
  int block_dim = 0;      // probe block size s (matrices are s x s)
  double scale = 0.0;     // largest eigenvalue of the normal matrix
  std::vector<double> spectrum_head;  // smallest eight eigenvalues
};

// Dimension of the joint commutant of the truncated Weyl images W(c_k) and
// their adjoints on the safe sub-block, via the spectrum of the positive
// normal matrix sum_k C_k^* C_k with C_k X = [X, W_k].  Trivial commutant
// (dimension 1) is the irreducibility surrogate.
Axiom2Report commutant_dimension(const std::vector<Eigen::VectorXcd>& coeffs, int d,
                                 int Nmax, double rel_tol = 1e-8);

// Projects every dictionary field's Cauchy datum at M_row onto a reduced
// trigonometric one-particle space of dimension d and runs the commutant
// computation on the truncated Fock space over it.
Axiom2Report axiom2_primitivity_surrogate(const LocalNet& net, int M_row, int d = 3,
                                          int Nmax = 4, double rel_tol = 1e-8);

}  // namespace qfiber
