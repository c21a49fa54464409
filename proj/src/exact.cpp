#include "kohn/exact.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace kohn {

std::string to_string(const Rational& q) { return q.str(); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Integer factorial(int k) {
  if (k < 0) throw std::invalid_argument("factorial of a negative integer");
  Integer r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

Integer binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  if (!o.im_.is_zero()) im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  if (!o.im_.is_zero()) im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (im_.is_zero() && o.im_.is_zero()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (o.im_.is_zero()) {
    re_ /= o.re_;
    if (!im_.is_zero()) im_ /= o.re_;
    return *this;
  }
  Rational den = abs2(o);
  *this *= conj(o);
  re_ /= den;
  im_ /= den;
  return *this;
}

std::string to_string(const GaussianRational& x) {
  if (x.is_real()) return to_string(x.real());
  if (x.real().is_zero()) return to_string(x.imag()) + "i";
  std::string im = to_string(x.imag());
  if (im.front() != '-') im = "+" + im;
  return to_string(x.real()) + im + "i";
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << to_string(x); }

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (pi_power_ != o.pi_power_) throw std::domain_error("adding ExactScalars with different pi powers");
  coefficient_ += o.coefficient_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  coefficient_ *= o.coefficient_;
  pi_power_ += o.pi_power_;
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  coefficient_ /= o.coefficient_;
  pi_power_ -= o.pi_power_;
  return *this;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return a.pi_power_ == b.pi_power_ && a.coefficient_ == b.coefficient_;
}

std::complex<double> ExactScalar::to_complex() const {
  return coefficient_.to_complex() * std::pow(std::numbers::pi, pi_power_);
}

std::string to_string(const ExactScalar& x) {
  std::string c = to_string(x.coefficient());
  if (x.pi_power() == 0 || x.is_zero()) return c;
  if (!x.coefficient().is_real()) c = "(" + c + ")";
  return c + "*pi^" + std::to_string(x.pi_power());
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << to_string(x); }

}  // namespace kohn
