#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qfiber {

// Scalar in Q(i, sqrt2): (re + i*im) + (re2 + i*im2)*sqrt2 with rational parts.
// All arithmetic is exact; sqrt2 is irrational over Q(i), so the representation
// is unique and z == 0 iff all four parts vanish.
struct Exact {
  mpq_class re, im, re2, im2;

  Exact() : re(0), im(0), re2(0), im2(0) {}
  Exact(long v) : re(v), im(0), re2(0), im2(0) {}
  Exact(const mpq_class& a) : re(a), im(0), re2(0), im2(0) {}
  Exact(mpq_class a, mpq_class b, mpq_class c, mpq_class d)
      : re(std::move(a)), im(std::move(b)), re2(std::move(c)), im2(std::move(d)) {}

  static Exact i() { return Exact(0, 1, 0, 0); }
  static Exact sqrt2() { return Exact(0, 0, 1, 0); }
  static Exact inv_sqrt2() { return Exact(0, 0, rat(1, 2), 0); }
  static mpq_class rat(long p, long q) {
    mpq_class r(p, q);
    r.canonicalize();
    return r;
  }
  static Exact rational(long p, long q) { return Exact(rat(p, q)); }

  bool is_zero() const { return re == 0 && im == 0 && re2 == 0 && im2 == 0; }
  // True when the value lies in Q(i), i.e. carries no sqrt2 part.
  bool in_gaussian_field() const { return re2 == 0 && im2 == 0; }

  Exact operator-() const { return Exact(-re, -im, -re2, -im2); }
  Exact conj() const { return Exact(re, -im, re2, -im2); }

  friend Exact operator+(const Exact& x, const Exact& y) {
    return Exact(x.re + y.re, x.im + y.im, x.re2 + y.re2, x.im2 + y.im2);
  }
  friend Exact operator-(const Exact& x, const Exact& y) {
    return Exact(x.re - y.re, x.im - y.im, x.re2 - y.re2, x.im2 - y.im2);
  }
  friend Exact operator*(const Exact& x, const Exact& y) {
    // (A + B s)(C + D s) = (AC + 2BD) + (AD + BC) s over the Gaussian parts.
    mpq_class r = gre(x.re, x.im, y.re, y.im) + 2 * gre(x.re2, x.im2, y.re2, y.im2);
    mpq_class i = gim(x.re, x.im, y.re, y.im) + 2 * gim(x.re2, x.im2, y.re2, y.im2);
    mpq_class r2 = gre(x.re, x.im, y.re2, y.im2) + gre(x.re2, x.im2, y.re, y.im);
    mpq_class i2 = gim(x.re, x.im, y.re2, y.im2) + gim(x.re2, x.im2, y.re, y.im);
    return Exact(r, i, r2, i2);
  }
  Exact& operator+=(const Exact& y) { *this = *this + y; return *this; }
  Exact& operator-=(const Exact& y) { *this = *this - y; return *this; }
  Exact& operator*=(const Exact& y) { *this = *this * y; return *this; }

  friend bool operator==(const Exact& x, const Exact& y) {
    return x.re == y.re && x.im == y.im && x.re2 == y.re2 && x.im2 == y.im2;
  }
  friend bool operator!=(const Exact& x, const Exact& y) { return !(x == y); }

  // z = A + B s: z * (A - B s) = A^2 - 2 B^2, Gaussian and nonzero for z != 0
  // (sqrt2 is not in Q(i)).  Then invert the Gaussian remainder.
  Exact inverse() const {
    if (is_zero()) throw std::domain_error("Exact: division by zero");
    mpq_class wr = gre(re, im, re, im) - 2 * gre(re2, im2, re2, im2);
    mpq_class wi = gim(re, im, re, im) - 2 * gim(re2, im2, re2, im2);
    mpq_class n = wr * wr + wi * wi;
    // (A - B s) * conj(W) / |W|^2
    Exact t(re, im, -re2, -im2);
    Exact wbar(wr / n, -wi / n, 0, 0);
    return t * wbar;
  }

  std::complex<double> to_complex() const {
    const double s = std::sqrt(2.0);
    return {re.get_d() + s * re2.get_d(), im.get_d() + s * im2.get_d()};
  }

  // Rational string forms for serialization; require no sqrt2 part.
  std::string re_str() const { return part_str(re, re2); }
  std::string im_str() const { return part_str(im, im2); }

  std::string str() const {
    std::string s = re.get_str() + (sgn(im) < 0 ? "" : "+") + im.get_str() + "i";
    if (re2 != 0 || im2 != 0)
      s += "+(" + re2.get_str() + (sgn(im2) < 0 ? "" : "+") + im2.get_str() + "i)r2";
    return s;
  }

 private:
  static mpq_class gre(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                       const mpq_class& d) {
    return a * c - b * d;
  }
  static mpq_class gim(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                       const mpq_class& d) {
    return a * d + b * c;
  }
  static std::string part_str(const mpq_class& q, const mpq_class& q2) {
    if (q2 != 0) throw std::domain_error("Exact: sqrt2 part not serializable as rational");
    return q.get_str();
  }
};

// Scalar abstraction shared by the exact and floating Grassmann instantiations.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Exact> {
  static Exact zero() { return Exact(); }
  static Exact one() { return Exact(1); }
  static Exact conj(const Exact& s) { return s.conj(); }
  static bool is_zero(const Exact& s) { return s.is_zero(); }
  static double abs(const Exact& s) { return std::abs(s.to_complex()); }
};

template <>
struct ScalarOps<std::complex<double>> {
  static std::complex<double> zero() { return {0.0, 0.0}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> conj(const std::complex<double>& s) { return std::conj(s); }
  static bool is_zero(const std::complex<double>& s) { return s == std::complex<double>(0.0, 0.0); }
  static double abs(const std::complex<double>& s) { return std::abs(s); }
};

}  // namespace qfiber
