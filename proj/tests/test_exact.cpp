#include "doctest.h"
#include "kohn/linalg.hpp"

using namespace kohn;

TEST_CASE("rationals print and parse canonically") {
  CHECK(to_string(Rational(3, 8)) == "3/8");
  CHECK(to_string(Rational(-6, 3)) == "-2");
  CHECK(parse_rational("10/4") == Rational(5, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("gaussian rational field operations") {
  GaussianRational a(Rational(1, 2), Rational(3));
  GaussianRational b(Rational(-2), Rational(1, 3));
  CHECK((a * b) / b == a);
  CHECK(a * conj(a) == GaussianRational(abs2(a)));
  CHECK((a - a).is_zero());
  CHECK(to_string(GaussianRational(Rational(1, 2), Rational(-3))) == "1/2-3i");
  CHECK_THROWS_AS(a / GaussianRational(0), std::domain_error);
}

TEST_CASE("exact scalars track the power of pi") {
  ExactScalar a(Rational(4, 3), 3), b(Rational(2, 3), 3);
  CHECK(a + b == ExactScalar(2, 3));
  CHECK(a / b == ExactScalar(2, 0));
  CHECK((a * b).pi_power() == 6);
  CHECK(ExactScalar(0, 2) == ExactScalar(0, 5));
  CHECK_THROWS_AS(a + ExactScalar(1, 2), std::domain_error);
  CHECK(to_string(a) == "4/3*pi^3");
}

TEST_CASE("exact rank and consistent solves") {
  Mat<GaussianRational> a(3, 3);
  a << 1, 2, 3, 2, 4, 6, GaussianRational(0, 1), 1, 0;
  CHECK(exact_rank(a) == 2);
  Mat<Rational> h(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) h(i, k) = Rational(1, i + k + 1);
  CHECK(exact_rank(h) == 4);
  Vec<Rational> x(4);
  x << 1, -2, Rational(1, 3), 5;
  auto sol = solve_consistent<Rational>(h, Vec<Rational>(h * x));
  REQUIRE(sol);
  CHECK(*sol == x);
  Vec<GaussianRational> off(3);
  off << 1, 0, 0;
  CHECK_FALSE(solve_consistent<GaussianRational>(a, off));
}

TEST_CASE("sparse echelon tracks rank of sparse vectors") {
  SparseEchelon<int> e;
  CHECK(e.insert({{1, 2}, {3, 1}}));
  CHECK(e.insert({{3, 1}, {5, 1}}));
  CHECK_FALSE(e.insert({{1, 4}, {3, 4}, {5, 2}}));
  CHECK(e.rank() == 2);
  CHECK(e.contains({{1, 2}, {5, -1}}));
  CHECK_FALSE(e.contains({{5, 1}}));
}
