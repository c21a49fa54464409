// Exact scalar types: GMP rationals, Gaussian rationals and rationals times a power of pi.
#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

namespace kohn {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Canonical "a/b" text, or "a" for integers.
std::string to_string(const Rational& q);
/// Accepts "a", "-a", "a/b".
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);
Integer factorial(int k);
Integer binomial(int n, int k);

/// A complex number with rational real and imaginary parts.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(long long re) : re_(re) {}  // NOLINT
  GaussianRational(const Integer& re) : re_(re) {}  // NOLINT
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {to_double(re_), to_double(im_)}; }

 private:
  Rational re_;
  Rational im_;
};

inline const Rational& real(const GaussianRational& x) { return x.real(); }
inline const Rational& imag(const GaussianRational& x) { return x.imag(); }
inline GaussianRational conj(const GaussianRational& x) { return {x.real(), -x.imag()}; }
/// |x|^2.
inline Rational abs2(const GaussianRational& x) {
  return x.real() * x.real() + x.imag() * x.imag();
}
std::string to_string(const GaussianRational& x);
std::ostream& operator<<(std::ostream& os, const GaussianRational& x);

/// Coefficient times pi^pi_power. Sums need equal powers; zero adopts the other power.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(GaussianRational coefficient, int pi_power)
      : coefficient_(std::move(coefficient)), pi_power_(pi_power) {}

  const GaussianRational& coefficient() const { return coefficient_; }
  int pi_power() const { return pi_power_; }
  bool is_zero() const { return coefficient_.is_zero(); }

  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);
  ExactScalar operator-() const { return {-coefficient_, pi_power_}; }

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  std::complex<double> to_complex() const;
  double to_double() const { return to_complex().real(); }

 private:
  GaussianRational coefficient_;
  int pi_power_ = 0;
};

std::string to_string(const ExactScalar& x);
std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

}  // namespace kohn

namespace Eigen {

template <>
struct NumTraits<kohn::Rational> : GenericNumTraits<kohn::Rational> {
  using Real = kohn::Rational;
  using NonInteger = kohn::Rational;
  using Literal = kohn::Rational;
  using Nested = kohn::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 20,
    MulCost = 40
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static int digits10() { return 0; }
};

template <>
struct NumTraits<kohn::GaussianRational> : GenericNumTraits<kohn::GaussianRational> {
  using Real = kohn::Rational;
  using NonInteger = kohn::GaussianRational;
  using Literal = kohn::GaussianRational;
  using Nested = kohn::GaussianRational;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 20,
    AddCost = 40,
    MulCost = 160
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static int digits10() { return 0; }
};

}  // namespace Eigen
