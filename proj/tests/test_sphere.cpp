#include "doctest.h"
#include "kohn/sphere.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <cmath>
#include <numbers>

using namespace kohn;

namespace {

// Monte Carlo mean of z^a zbar^b times sigma over uniform points.
McEstimate mc_monomial(const std::vector<int>& a, const std::vector<int>& b, std::size_t samples,
                       std::uint64_t seed) {
  const int n = static_cast<int>(a.size());
  SphereSampler s(n, seed);
  const double sigma = surface_measure(n).to_double();
  std::complex<double> sum = 0;
  double sum_sq = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const FloatPoint z = s();
    std::complex<double> v = 1;
    for (int m = 0; m < n; ++m) v *= std::pow(z(m), a[m]) * std::pow(std::conj(z(m)), b[m]);
    sum += v;
    sum_sq += std::norm(v);
  }
  const double c = static_cast<double>(samples);
  McEstimate e;
  e.samples = samples;
  e.mean = sigma * (sum / c).real();
  e.std_error = sigma * std::sqrt(std::max(0.0, sum_sq / c - std::norm(sum / c)) / c);
  return e;
}

ExactPoint point(std::initializer_list<GaussianRational> coords) {
  ExactPoint z(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (const auto& c : coords) z(i++) = c;
  return z;
}

}  // namespace

// Runs first: every exact inner product downstream is built from this formula.
TEST_CASE("monomial integral formula against Monte Carlo") {
  const double pi3 = std::pow(std::numbers::pi, 3);
  CHECK(monomial_integral({1, 0, 0}, {1, 0, 0}) == ExactScalar(Rational(1, 3), 3));
  CHECK(monomial_integral({2, 0, 0}, {2, 0, 0}) == ExactScalar(Rational(1, 6), 3));
  CHECK(monomial_integral({1, 0, 0}, {0, 1, 0}).is_zero());
  CHECK(monomial_integral({0, 0, 0}, {0, 0, 0}) == surface_measure(3));
  const auto m1 = mc_monomial({1, 0, 0}, {1, 0, 0}, 16'000'000, 11);
  CHECK(std::abs(m1.mean / (pi3 / 3) - 1) < 1e-3);
  const auto m2 = mc_monomial({2, 0, 0}, {2, 0, 0}, 16'000'000, 12);
  CHECK(std::abs(m2.mean / (pi3 / 6) - 1) < 1e-3);
  // Mixed monomials, including unequal exponents that must vanish.
  boost::random::mt19937_64 rng(5);
  boost::random::uniform_int_distribution<int> e(0, 2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<int> a(n), b(n);
    for (int m = 0; m < n; ++m) a[m] = e(rng);
    b = a;
    if (trial % 2) {
      a[1] += 1;
      b[0] += 1;
    }
    const auto mc = mc_monomial(a, b, 2'000'000, 100 + trial);
    const double exact = monomial_integral(a, b).to_double();
    CHECK(std::abs(mc.mean - exact) <= 4 * mc.std_error + 1e-12);
  }
}

TEST_CASE("surface measure") {
  CHECK(surface_measure(2) == ExactScalar(2, 2));
  CHECK(surface_measure(3) == ExactScalar(1, 3));
  CHECK(surface_measure(4) == ExactScalar(Rational(1, 3), 4));
  // Volume of the unit ball in R^4 by rejection; the sphere measure is 4 times it.
  boost::random::mt19937_64 rng(3);
  boost::random::uniform_real_distribution<double> u(-1, 1);
  const std::size_t samples = 4'000'000;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    double r = 0;
    for (int d = 0; d < 4; ++d) {
      const double x = u(rng);
      r += x * x;
    }
    hits += r < 1;
  }
  const double frac = static_cast<double>(hits) / samples;
  const double est = 4 * 16 * frac;
  const double se = 4 * 16 * std::sqrt(frac * (1 - frac) / samples);
  CHECK(std::abs(est - surface_measure(2).to_double()) < 3 * se);
}

TEST_CASE("monomial integral identities") {
  // sum_m |z_m|^2 = 1 on the sphere.
  for (int n = 2; n <= 4; ++n)
    for (int a0 = 0; a0 <= 3; ++a0)
      for (int a1 = 0; a1 <= 2; ++a1) {
        std::vector<int> a(n, 0);
        a[0] = a0;
        a[1] = a1;
        ExactScalar total(0, n);
        for (int m = 0; m < n; ++m) {
          auto b = a;
          b[m] += 1;
          total += monomial_integral(b, b);
        }
        CHECK(total == monomial_integral(a, a));
        CHECK(monomial_integral(a, a).coefficient().real() > 0);
      }
}

TEST_CASE("distance and weight") {
  const ExactPoint e1 = point({1, 0, 0}), e2 = point({0, 1, 0});
  const ExactPoint m1 = point({-1, 0, 0});
  const ExactPoint w = point({Rational(3, 5), GaussianRational(0, Rational(4, 5)), 0});
  CHECK(dist(e1, e1) == 0);
  CHECK(dist(e1, e2) == doctest::Approx(2.0));
  CHECK(dist(e1, m1) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(weight(e1, e1) == 0);
  CHECK(weight(e1, e2) == doctest::Approx(1.0));
  CHECK(weight_sq(e1, w) == Rational(16, 25));
  CHECK(weight(e1, w) == doctest::Approx(0.8));
  CHECK(is_unit(w));
  CHECK_THROWS_AS(dist(point({1, 1, 0}), e1), std::invalid_argument);
}

TEST_CASE("rational sphere points") {
  const auto pts = rational_sphere_points(3, 40, 9);
  REQUIRE(pts.size() == 40);
  for (int m = 0; m < 3; ++m) CHECK(pts[m](m) == GaussianRational(1));
  for (const auto& z : pts) CHECK(is_unit(z));
  const auto again = rational_sphere_points(3, 40, 9);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(pts[k] == again[k]);
}

TEST_CASE("triangle inequality on random triples") {
  SphereSampler s(3, 21);
  int failures = 0;
  for (int k = 0; k < 100000; ++k) {
    const FloatPoint a = s(), b = s(), c = s();
    if (dist(a, c) > dist(a, b) + dist(b, c) + 1e-12) ++failures;
    if (std::abs(dist(a, b) - dist(b, a)) > 1e-12) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("ball statistics") {
  SphereSampler s(3, 1);
  const FloatPoint z = s();
  const auto whole = mc_ball_statistics(z, 3.0, 0.5, 100000, 4);
  const double sigma = surface_measure(3).to_double();
  CHECK(std::abs(whole.ball_measure.mean - sigma) <= 3 * whole.ball_measure.std_error + 1e-9);
  for (int n = 2; n <= 4; ++n) {
    FloatPoint e1 = FloatPoint::Zero(n);
    e1(0) = 1;
    for (double t : {0.1, 0.2, 0.4, 0.5, 1.0}) {
      const auto b = mc_ball_statistics(e1, t, 0.5, 100000, 7);
      const double q = ball_measure_quadrature(n, t);
      CHECK(std::abs(b.ball_measure.mean - q) <= 3 * b.ball_measure.std_error);
      const double wq = weighted_ball_integral_quadrature(n, t, 0.5);
      CHECK(std::abs(b.weighted_integral.mean - wq) <= 3 * b.weighted_integral.std_error);
      CHECK(b.doubling_ratio.mean <= std::pow(2.0, 2 * n + 1));
    }
  }
}

TEST_CASE("argument checks") {
  FloatPoint e1 = FloatPoint::Zero(3);
  e1(0) = 1;
  CHECK_THROWS_AS(mc_ball_statistics(e1, 0.5, 0.5, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_ball_statistics(e1, -1, 0.5, 100000, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_ball_statistics(e1, 1, 1.5, 100000, 1), std::invalid_argument);
}
