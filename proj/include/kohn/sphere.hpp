// The unit sphere in C^n: exact monomial integrals, the distance and weight, sample points and
// Monte Carlo ball statistics.
#pragma once

#include "kohn/exact.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace kohn {

template <class Scalar>
using Point = Vec<Scalar>;
using ExactPoint = Point<GaussianRational>;
using FloatPoint = Point<std::complex<double>>;

/// sigma(S^{2n-1}) = 2 pi^n / (n-1)!.
ExactScalar surface_measure(int n);
/// Rational coefficient of pi^n in surface_measure(n).
Rational surface_measure_coefficient(int n);

/// Integral of z^a zbar^b over the sphere: 2 pi^n a! / (n-1+|a|)! if a == b, else 0.
ExactScalar monomial_integral(const std::vector<int>& a, const std::vector<int>& b);

/// Hermitian product <z,w> = sum z_m conj(w_m).
template <class Scalar>
Scalar hermitian(const Point<Scalar>& z, const Point<Scalar>& w) {
  Scalar s(0);
  for (Eigen::Index m = 0; m < z.size(); ++m) s += z(m) * conj(w(m));
  return s;
}

bool is_unit(const ExactPoint& z);
bool is_unit(const FloatPoint& z, double tol = 1e-12);
FloatPoint to_float(const ExactPoint& z);

/// dist(z,w) = 2 |1 - <z,w>|^{1/2}. The exact overload rejects non-unit points.
double dist(const FloatPoint& z, const FloatPoint& w);
double dist(const ExactPoint& z, const ExactPoint& w);
/// weight(z,w) = |1 - |<z,w>|^2|^{1/2}.
double weight(const FloatPoint& z, const FloatPoint& w);
double weight(const ExactPoint& z, const ExactPoint& w);
/// weight^2 as an exact rational.
Rational weight_sq(const ExactPoint& z, const ExactPoint& w);

/// Standard basis vectors first, then points v/|v| for integer v with |v|^2 a perfect square.
std::vector<ExactPoint> rational_sphere_points(int n, int count, std::uint64_t seed);

/// Uniform points from normalized complex Gaussian vectors.
class SphereSampler {
 public:
  SphereSampler(int n, std::uint64_t seed);
  FloatPoint operator()();
  /// Standard complex Gaussian vector (not normalized).
  FloatPoint gaussian();
  double uniform(double lo, double hi);

 private:
  struct Engine;
  int n_;
  std::shared_ptr<Engine> engine_;
};

/// A unitary matrix whose first column is w.
Eigen::MatrixXcd unitary_with_first_column(const FloatPoint& w);

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

struct BallStatistics {
  int n = 2;
  double t = 0;
  double theta = 0;
  McEstimate ball_measure;       // sigma(B(z,t))
  McEstimate doubling_ratio;     // sigma(B(z,2t)) / sigma(B(z,t))
  McEstimate weighted_integral;  // integral over B(z,t) of weight(z,.)^{-theta}
};

/// Importance-sampled estimates: the first coordinate u = <y,z> is drawn from a box covering
/// {|1-u| < t^2/4} and weighted by its density on the sphere; the rest of y is uniform.
BallStatistics mc_ball_statistics(const FloatPoint& z, double t, double theta, std::size_t samples,
                                  std::uint64_t seed);

/// Deterministic quadrature of sigma(B(z,t)) and of the weighted ball integral (oracles).
double ball_measure_quadrature(int n, double t);
double weighted_ball_integral_quadrature(int n, double t, double theta);

}  // namespace kohn
