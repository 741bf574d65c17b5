#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qfiber/exact.hpp"

using qfiber::Exact;

TEST_CASE("field arithmetic in Q(i, sqrt2)") {
  Exact one(1), two(2);
  Exact i = Exact::i();
  Exact s = Exact::sqrt2();

  CHECK((one + i) * (one - i) == two);
  CHECK(s * s == two);
  CHECK(i * i == -one);
  CHECK(Exact::inv_sqrt2() * Exact::inv_sqrt2() == Exact::rational(1, 2));
  CHECK(Exact::inv_sqrt2() * s == one);

  Exact z = Exact(Exact::rat(3, 4), Exact::rat(-2, 5), Exact::rat(1, 3), Exact::rat(7, 2));
  CHECK(z * z.inverse() == one);
  CHECK(z.inverse() * z == one);

  Exact w = Exact(1, 2, 3, 4);
  CHECK((z * w).conj() == z.conj() * w.conj());
  CHECK((z + w).conj() == z.conj() + w.conj());
  CHECK(z - z == Exact());
  CHECK(z.is_zero() == false);
  CHECK(Exact().is_zero());
}

TEST_CASE("zero handling and errors") {
  CHECK_THROWS_AS(Exact().inverse(), std::domain_error);
  // sqrt2 parts cannot be serialized as plain rationals
  CHECK_THROWS_AS(Exact::sqrt2().re_str(), std::domain_error);
  CHECK(Exact::i().in_gaussian_field());
  CHECK(!Exact::sqrt2().in_gaussian_field());
}

TEST_CASE("serialization strings are exact rationals") {
  Exact q = Exact::rational(-6, 4);  // canonicalizes to -3/2
  CHECK(q.re_str() == "-3/2");
  CHECK(q.im_str() == "0");
  CHECK(Exact::i().im_str() == "1");
}

TEST_CASE("floating conversion is consistent") {
  Exact z = Exact(Exact::rat(1, 2), Exact::rat(-1, 3), Exact::rat(2, 7), Exact::rat(0, 1));
  auto c = z.to_complex();
  CHECK(c.real() == doctest::Approx(0.5 + std::sqrt(2.0) * 2.0 / 7.0));
  CHECK(c.imag() == doctest::Approx(-1.0 / 3.0));
}
