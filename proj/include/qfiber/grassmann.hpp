#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfiber/exact.hpp"
#include "qfiber/exact_matrix.hpp"

namespace qfiber {

// Generator count cap: polynomials live in a 2^N-dimensional space.
inline constexpr int kGrassmannCap = 12;

// Generators carry (site, colour I, spinor A) labels flattened in that order,
// spinor index fastest.
struct GrassmannLayout {
  int sites = 1, n2 = 1, n1 = 1;
  int total() const { return sites * n2 * n1; }
  int flat(int site, int I, int A) const { return (site * n2 + I) * n1 + A; }
};

// Sign of concatenating ordered monomials u, v (disjoint masks): counts the
// transpositions needed to interleave v into u.
inline int merge_sign(uint32_t u, uint32_t v) {
  int inv = 0;
  while (v) {
    int b = std::countr_zero(v);
    inv += std::popcount(u >> (b + 1));
    v &= v - 1;
  }
  return (inv & 1) ? -1 : 1;
}

// Grassmann polynomial: monomial bitmask -> coefficient, zero coefficients
// never stored, so equality is structural.
template <class S>
struct GPoly {
  int ngen = 0;
  std::map<uint32_t, S> terms;

  static GPoly zero(int n) { return GPoly{n, {}}; }
  static GPoly unit(int n) {
    GPoly p{n, {}};
    p.terms[0] = ScalarOps<S>::one();
    return p;
  }
  static GPoly generator(int n, int g) {
    if (g < 0 || g >= n) throw std::invalid_argument("GPoly: generator out of range");
    GPoly p{n, {}};
    p.terms[1u << g] = ScalarOps<S>::one();
    return p;
  }
  static GPoly monomial(int n, uint32_t mask) {
    GPoly p{n, {}};
    p.terms[mask] = ScalarOps<S>::one();
    return p;
  }

  void add_term(uint32_t mask, const S& c) {
    if (ScalarOps<S>::is_zero(c)) return;
    auto it = terms.find(mask);
    if (it == terms.end()) {
      terms[mask] = c;
    } else {
      it->second = it->second + c;
      if (ScalarOps<S>::is_zero(it->second)) terms.erase(it);
    }
  }

  friend GPoly operator+(const GPoly& x, const GPoly& y) {
    GPoly r = x;
    for (const auto& [m, c] : y.terms) r.add_term(m, c);
    return r;
  }
  friend GPoly operator-(const GPoly& x, const GPoly& y) {
    GPoly r = x;
    for (const auto& [m, c] : y.terms) r.add_term(m, ScalarOps<S>::zero() - c);
    return r;
  }
  GPoly scaled(const S& s) const {
    GPoly r{ngen, {}};
    for (const auto& [m, c] : terms) r.add_term(m, c * s);
    return r;
  }
  friend GPoly operator*(const GPoly& x, const GPoly& y) {
    GPoly r{x.ngen, {}};
    for (const auto& [u, cu] : x.terms)
      for (const auto& [v, cv] : y.terms) {
        if (u & v) continue;
        S c = cu * cv;
        if (merge_sign(u, v) < 0) c = ScalarOps<S>::zero() - c;
        r.add_term(u | v, c);
      }
    return r;
  }

  // Left derivative: kills monomials without g, otherwise removes it with the
  // sign of moving it to the front past the smaller-index generators.
  GPoly left_derivative(int g) const {
    GPoly r{ngen, {}};
    uint32_t bit = 1u << g;
    for (const auto& [m, c] : terms) {
      if (!(m & bit)) continue;
      int below = std::popcount(m & (bit - 1));
      r.add_term(m & ~bit, (below & 1) ? ScalarOps<S>::zero() - c : c);
    }
    return r;
  }

  // Conjugate-linear in the first argument; monomials are orthonormal.
  static S inner(const GPoly& x, const GPoly& y) {
    S acc = ScalarOps<S>::zero();
    const auto& small = x.terms.size() <= y.terms.size() ? x.terms : y.terms;
    const auto& other = x.terms.size() <= y.terms.size() ? y.terms : x.terms;
    for (const auto& [m, c] : small) {
      auto it = other.find(m);
      if (it == other.end()) continue;
      const S& cx = (&small == &x.terms) ? c : it->second;
      const S& cy = (&small == &x.terms) ? it->second : c;
      acc = acc + ScalarOps<S>::conj(cx) * cy;
    }
    return acc;
  }

  bool is_zero() const { return terms.empty(); }
  double max_abs() const {
    double m = 0;
    for (const auto& [mask, c] : terms) m = std::max(m, ScalarOps<S>::abs(c));
    return m;
  }
  friend bool operator==(const GPoly& x, const GPoly& y) {
    return x.ngen == y.ngen && x.terms == y.terms;
  }
};

// Operator on Grassmann polynomials as a composition tree.  Products apply
// right-to-left (kids.back() acts first); adjoints follow the swap rules
// generator <-> derivative, conjugated scalars, reversed products.
template <class S>
struct GOp {
  enum class K { Id, Gen, Der, Scale, Sum, Prod };
  K k = K::Id;
  int g = -1;
  S c = ScalarOps<S>::one();
  std::vector<GOp> kids;

  static GOp identity() { return GOp{}; }
  static GOp generator(int g) {
    GOp o;
    o.k = K::Gen;
    o.g = g;
    return o;
  }
  static GOp derivative(int g) {
    GOp o;
    o.k = K::Der;
    o.g = g;
    return o;
  }
  static GOp scaled(const S& c, GOp a) {
    GOp o;
    o.k = K::Scale;
    o.c = c;
    o.kids.push_back(std::move(a));
    return o;
  }
  static GOp sum(std::vector<GOp> ops) {
    GOp o;
    o.k = K::Sum;
    o.kids = std::move(ops);
    return o;
  }
  static GOp compose(GOp first_applied_last, GOp first_applied) {
    GOp o;
    o.k = K::Prod;
    o.kids.push_back(std::move(first_applied_last));
    o.kids.push_back(std::move(first_applied));
    return o;
  }

  GPoly<S> apply(const GPoly<S>& p) const {
    switch (k) {
      case K::Id:
        return p;
      case K::Gen: {
        GPoly<S> r{p.ngen, {}};
        uint32_t bit = 1u << g;
        for (const auto& [m, cm] : p.terms) {
          if (m & bit) continue;
          int below = std::popcount(m & (bit - 1));
          r.add_term(m | bit, (below & 1) ? ScalarOps<S>::zero() - cm : cm);
        }
        return r;
      }
      case K::Der:
        return p.left_derivative(g);
      case K::Scale:
        return kids[0].apply(p).scaled(c);
      case K::Sum: {
        GPoly<S> r{p.ngen, {}};
        for (const auto& o : kids) r = r + o.apply(p);
        return r;
      }
      case K::Prod: {
        GPoly<S> r = p;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) r = it->apply(r);
        return r;
      }
    }
    return p;
  }

  GOp adjoint() const {
    GOp o;
    switch (k) {
      case K::Id:
        return identity();
      case K::Gen:
        return derivative(g);
      case K::Der:
        return generator(g);
      case K::Scale:
        return scaled(ScalarOps<S>::conj(c), kids[0].adjoint());
      case K::Sum: {
        std::vector<GOp> a;
        for (const auto& kid : kids) a.push_back(kid.adjoint());
        return sum(std::move(a));
      }
      case K::Prod: {
        o.k = K::Prod;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
          o.kids.push_back(it->adjoint());
        return o;
      }
    }
    return o;
  }
};

namespace detail {
inline void matrix_cap(int ngen, int cap) {
  if (ngen < 0 || ngen > cap)
    throw std::length_error("operator_matrix: generator count exceeds dense cap " +
                            std::to_string(cap));
}
}  // namespace detail

// Dense matrix in the monomial basis ordered by mask value (column j is the
// image of monomial j).
inline ExactMat operator_matrix(const GOp<Exact>& op, int ngen) {
  detail::matrix_cap(ngen, 10);
  int dim = 1 << ngen;
  ExactMat m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    auto q = op.apply(GPoly<Exact>::monomial(ngen, static_cast<uint32_t>(j)));
    for (const auto& [mask, c] : q.terms) m.at(static_cast<int>(mask), j) = c;
  }
  return m;
}

inline Eigen::MatrixXcd operator_matrix(const GOp<std::complex<double>>& op, int ngen) {
  detail::matrix_cap(ngen, kGrassmannCap);
  int dim = 1 << ngen;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    auto q =
        op.apply(GPoly<std::complex<double>>::monomial(ngen, static_cast<uint32_t>(j)));
    for (const auto& [mask, c] : q.terms) m(static_cast<int>(mask), j) = c;
  }
  return m;
}

struct CarReport {
  bool pass = false;
  std::vector<std::string> violations;
  double max_violation = 0.0;
};

// Canonical anticommutation checks on every basis monomial, the adjoint
// pairing between derivatives and multiplication operators, and (for dense
// feasible sizes) the matrix-level conjugate-transpose identity.
CarReport car_check(const GrassmannLayout& layout);

// Gram deviation from identity for the monomial basis of unitarily rotated
// generators (floating scalars).
double rotated_basis_orthonormality(int ngen, uint64_t seed);

struct RealImagReport {
  bool pass = false;
  double max_violation = 0.0;
};

// Checks the kinetic-term identity between complex generators chi = (xi + i
// eta)/sqrt2 and their real/imaginary parts, with dotted generators treated as
// independent: (i/2)(chibar chidot - chibardot chi) summed over colour/spinor
// equals (i/2)(xi xidot + eta etadot).  Exact.
RealImagReport real_imag_identity_check(int n1, int n2);

}  // namespace qfiber
