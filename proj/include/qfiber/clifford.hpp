#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qfiber/exact_matrix.hpp"

namespace qfiber {

// Gamma matrices for signature (-, +, ..., +) in n spatial dimensions
// (n+1 spacetime): gamma^a gamma^b + gamma^b gamma^a = 2 eta^{ab} I,
// gamma^0 antihermitian, spatial gamma hermitian.  Entries are exact and
// lie in {0, +-1, +-i}.
struct GammaRep {
  int n = 0;   // spatial dimension
  int n1 = 0;  // spinor dimension: 2^((n+1)/2) for odd n, 2*2^(n/2) for even n
  std::vector<ExactMat> gamma;  // gamma[a], a = 0..n, index up

  int eta(int a) const { return a == 0 ? -1 : 1; }
};

// Deterministic construction (same bits on every call):
//   base (2d spacetime): gamma^0 = [[0,1],[-1,0]], gamma^1 = [[0,1],[1,0]];
//   step d -> d+2:       G^a = gamma^a (x) sigma_z, G^d = I (x) sigma_x,
//                        G^{d+1} = I (x) sigma_y;
//   odd spacetime dim:   two blocks diag(gamma^a, gamma^a) closed by
//                        diag(g, -g) with g the (possibly i-scaled) product
//                        of the even-dimensional generators, fixed so that
//                        g is hermitian with g^2 = I.
// Throws std::invalid_argument outside 1 <= n <= 11.
GammaRep build_gamma(int n);

// Returns human-readable descriptions of violated identities (empty = pass):
// anticommutators, (anti)hermiticity, squares, and the index-lowering
// product identities used by the derivative operators downstream.
std::vector<std::string> check_clifford(const GammaRep& rep);

// gamma_a = eta_{ab} gamma^b: flips the sign of gamma^0 only.
ExactMat lower_index(const GammaRep& rep, int a);

// Serialization with exact rational entry strings; layout is stable so that
// repeated builds are byte-identical.
nlohmann::json gamma_json(const GammaRep& rep);

}  // namespace qfiber
