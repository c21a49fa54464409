#include "kohn/sphere.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace kohn {

Rational surface_measure_coefficient(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  return Rational(Integer(2), factorial(n - 1));
}

ExactScalar surface_measure(int n) { return {surface_measure_coefficient(n), n}; }

ExactScalar monomial_integral(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-indices of different lengths");
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (a != b) return {0, n};
  Integer num = 2;
  int total = 0;
  for (int e : a) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    num *= factorial(e);
    total += e;
  }
  return {Rational(num, factorial(n - 1 + total)), n};
}

bool is_unit(const ExactPoint& z) {
  Rational s = 0;
  for (Eigen::Index m = 0; m < z.size(); ++m) s += abs2(z(m));
  return s == 1;
}

bool is_unit(const FloatPoint& z, double tol) { return std::abs(z.squaredNorm() - 1.0) <= tol; }

FloatPoint to_float(const ExactPoint& z) {
  FloatPoint f(z.size());
  for (Eigen::Index m = 0; m < z.size(); ++m) f(m) = z(m).to_complex();
  return f;
}

double dist(const FloatPoint& z, const FloatPoint& w) {
  return 2.0 * std::sqrt(std::abs(1.0 - hermitian(z, w)));
}

namespace {

void require_unit(const ExactPoint& z) {
  if (!is_unit(z)) throw std::invalid_argument("point is not on the unit sphere");
}

}  // namespace

double dist(const ExactPoint& z, const ExactPoint& w) {
  require_unit(z);
  require_unit(w);
  const GaussianRational d = GaussianRational(1) - hermitian(z, w);
  return 2.0 * std::sqrt(std::sqrt(to_double(abs2(d))));
}

double weight(const FloatPoint& z, const FloatPoint& w) {
  return std::sqrt(std::abs(1.0 - std::norm(hermitian(z, w))));
}

Rational weight_sq(const ExactPoint& z, const ExactPoint& w) {
  require_unit(z);
  require_unit(w);
  return 1 - abs2(hermitian(z, w));
}

double weight(const ExactPoint& z, const ExactPoint& w) { return std::sqrt(to_double(weight_sq(z, w))); }

namespace {

Integer isqrt(const Integer& x) { return boost::multiprecision::sqrt(x); }

}  // namespace

std::vector<ExactPoint> rational_sphere_points(int n, int count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  std::vector<ExactPoint> out;
  for (int m = 0; m < n && static_cast<int>(out.size()) < count; ++m) {
    ExactPoint e = ExactPoint::Constant(n, GaussianRational(0));
    e(m) = 1;
    out.push_back(e);
  }
  boost::random::mt19937_64 engine(seed);
  boost::random::uniform_int_distribution<int> entry(-7, 7);
  std::set<std::vector<std::pair<Rational, Rational>>> seen;
  while (static_cast<int>(out.size()) < count) {
    std::vector<int> v(static_cast<std::size_t>(2 * n));
    long long norm2 = 0;
    int nonzero = 0;
    for (int& x : v) {
      x = entry(engine);
      norm2 += static_cast<long long>(x) * x;
      nonzero += x != 0;
    }
    if (nonzero < 2) continue;
    const Integer root = isqrt(Integer(norm2));
    if (root * root != norm2) continue;
    ExactPoint z(n);
    std::vector<std::pair<Rational, Rational>> key;
    for (int m = 0; m < n; ++m) {
      z(m) = GaussianRational(Rational(Integer(v[2 * m]), root), Rational(Integer(v[2 * m + 1]), root));
      key.emplace_back(z(m).real(), z(m).imag());
    }
    if (!seen.insert(key).second) continue;
    out.push_back(z);
  }
  return out;
}

struct SphereSampler::Engine {
  explicit Engine(std::uint64_t seed) : rng(seed) {}
  boost::random::mt19937_64 rng;
  boost::random::normal_distribution<double> normal{0.0, 1.0};
};

SphereSampler::SphereSampler(int n, std::uint64_t seed) : n_(n), engine_(std::make_shared<Engine>(seed)) {
  if (n < 1) throw std::invalid_argument("n must be positive");
}

FloatPoint SphereSampler::gaussian() {
  FloatPoint z(n_);
  for (int m = 0; m < n_; ++m) {
    const double re = engine_->normal(engine_->rng);
    const double im = engine_->normal(engine_->rng);
    z(m) = {re, im};
  }
  return z;
}

FloatPoint SphereSampler::operator()() {
  FloatPoint z = gaussian();
  return z / z.norm();
}

double SphereSampler::uniform(double lo, double hi) {
  boost::random::uniform_real_distribution<double> u(lo, hi);
  return u(engine_->rng);
}

Eigen::MatrixXcd unitary_with_first_column(const FloatPoint& w) {
  const Eigen::Index n = w.size();
  Eigen::MatrixXcd u(n, n);
  u.col(0) = w / w.norm();
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < n && filled < n; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < filled; ++c) v -= u.col(c) * u.col(c).dot(v);
    const double norm = v.norm();
    if (norm < 1e-6) continue;
    u.col(filled++) = v / norm;
  }
  return u;
}

namespace {

McEstimate summarize(double sum, double sum_sq, std::size_t count) {
  McEstimate e;
  e.samples = count;
  const double c = static_cast<double>(count);
  e.mean = sum / c;
  const double var = std::max(0.0, sum_sq / c - e.mean * e.mean);
  e.std_error = std::sqrt(var / (c - 1.0));
  return e;
}

struct BallPass {
  McEstimate measure;
  McEstimate weighted;
};

// Samples u in a box around 1 and completes it to a point y of the sphere with <y,z> = u.
BallPass ball_pass(const FloatPoint& z, double t, double theta, std::size_t samples, SphereSampler& sampler,
                   const Eigen::MatrixXcd& frame) {
  const int n = static_cast<int>(z.size());
  const double rho = std::min(t * t / 4.0, 2.0);
  const double x_lo = std::max(-1.0, 1.0 - rho);
  const double y_hi = std::min(rho, 1.0);
  const double area = (1.0 - x_lo) * 2.0 * y_hi;
  const double sigma = 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(n);
  const double density_scale = area * sigma * (n - 1) / std::numbers::pi;
  double s1 = 0, s1q = 0, s2 = 0, s2q = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::complex<double> u(sampler.uniform(x_lo, 1.0), sampler.uniform(-y_hi, y_hi));
    const double r2 = std::norm(u);
    double f = 0, g = 0;
    if (r2 < 1.0) {
      FloatPoint tail = sampler.gaussian();
      FloatPoint y_local(n);
      y_local(0) = std::conj(u);
      const double s = std::sqrt(1.0 - r2);
      double tail_norm = 0;
      for (int m = 1; m < n; ++m) tail_norm += std::norm(tail(m));
      tail_norm = std::sqrt(tail_norm);
      for (int m = 1; m < n; ++m) y_local(m) = s * tail(m) / tail_norm;
      const FloatPoint y = frame * y_local;
      if (dist(z, y) < t) {
        f = density_scale * std::pow(1.0 - r2, n - 2);
        const double w = weight(z, y);
        g = w > 0 ? f * std::pow(w, -theta) : 0.0;
      }
    }
    s1 += f;
    s1q += f * f;
    s2 += g;
    s2q += g * g;
  }
  return {summarize(s1, s1q, samples), summarize(s2, s2q, samples)};
}

}  // namespace

BallStatistics mc_ball_statistics(const FloatPoint& z, double t, double theta, std::size_t samples,
                                  std::uint64_t seed) {
  if (!is_unit(z)) throw std::invalid_argument("point is not on the unit sphere");
  if (t <= 0) throw std::invalid_argument("radius must be positive");
  if (theta <= 0 || theta >= 1) throw std::invalid_argument("theta must lie in (0,1)");
  if (samples < 10000) throw std::invalid_argument("at least 10^4 samples are required");
  const int n = static_cast<int>(z.size());
  SphereSampler sampler(n, seed);
  const Eigen::MatrixXcd frame = unitary_with_first_column(z);
  BallPass small = ball_pass(z, t, theta, samples, sampler, frame);
  BallPass large = ball_pass(z, 2 * t, theta, samples, sampler, frame);
  BallStatistics s;
  s.n = n;
  s.t = t;
  s.theta = theta;
  s.ball_measure = small.measure;
  s.weighted_integral = small.weighted;
  s.doubling_ratio.samples = samples;
  s.doubling_ratio.mean = large.measure.mean / small.measure.mean;
  s.doubling_ratio.std_error =
      s.doubling_ratio.mean * std::hypot(large.measure.std_error / large.measure.mean,
                                         small.measure.std_error / small.measure.mean);
  return s;
}

namespace {

// sigma (n-1)/pi times the integral over {|1-u| < rho, |u| < 1} of (1-|u|^2)^{n-2-theta/2},
// in polar coordinates u = 1 - r e^{i phi} where 1 - |u|^2 = 2 r cos(phi) - r^2.
double ball_quadrature(int n, double t, double theta) {
  const double rho = std::min(t * t / 4.0, 2.0);
  const double power = n - 2 - theta / 2.0;
  boost::math::quadrature::tanh_sinh<double> inner_rule;
  auto inner = [&](double r) {
    if (r <= 0) return 0.0;
    const double phi0 = std::acos(std::min(1.0, r / 2.0));
    if (phi0 <= 0) return 0.0;
    auto f = [&](double phi) {
      const double v = 2.0 * r * std::cos(phi) - r * r;
      return v > 0 ? std::pow(v, power) : 0.0;
    };
    return 2.0 * r * inner_rule.integrate(f, 0.0, phi0);
  };
  const double outer = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, 0.0, rho, 12, 1e-12);
  const double sigma = 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(n);
  return sigma * (n - 1) / std::numbers::pi * outer;
}

}  // namespace

double ball_measure_quadrature(int n, double t) { return ball_quadrature(n, t, 0.0); }

double weighted_ball_integral_quadrature(int n, double t, double theta) { return ball_quadrature(n, t, theta); }

}  // namespace kohn
