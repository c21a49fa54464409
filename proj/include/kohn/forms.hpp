// Polynomial (0,j)-forms on the sphere written over the wedges of zeta_c = dbar_b zbar_c, with
// exact L^2 pairings and the tangential Cauchy-Riemann operators.
#pragma once

#include "kohn/exact.hpp"
#include "kohn/sphere.hpp"
#include "kohn/spectrum.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kohn {

inline constexpr int kMaxN = 8;

using Exponents = std::array<std::uint8_t, kMaxN>;
/// Bit c set means zeta_{c+1} is a factor; wedges are always read in increasing order.
using WedgeMask = std::uint16_t;
/// Torus weight; entries beyond n are zero.
using Weight = std::array<int, kMaxN>;

/// z^z_exp zbar^zbar_exp zeta_wedge.
struct FormTerm {
  Exponents z_exp{};
  Exponents zbar_exp{};
  WedgeMask wedge = 0;

  friend auto operator<=>(const FormTerm&, const FormTerm&) = default;
};

/// Weight of a term: zbar exponents plus wedge indicator minus z exponents.
Weight term_weight(const FormTerm& t);
std::string to_string(const Weight& w, int n);
Weight to_weight(const std::vector<int>& w);

int popcount(WedgeMask m);
/// The wedges of size j in lexicographic order of their sorted index lists.
std::vector<WedgeMask> wedge_basis(int n, int j);
/// Position of mask in wedge_basis(n, popcount(mask)).
int wedge_position(int n, WedgeMask mask);
/// Sign of moving zeta_m to its sorted place in zeta_m ^ zeta_C; 0 if m is in C.
int insertion_sign(WedgeMask c, int m);

class PolyForm {
 public:
  using Terms = std::map<FormTerm, GaussianRational>;

  PolyForm() = default;
  PolyForm(int n, int j);

  int n() const { return n_; }
  int j() const { return j_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const FormTerm& t, const GaussianRational& c);

  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm& operator*=(const GaussianRational& c);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const GaussianRational& c, PolyForm a) { return a *= c; }
  /// Coefficientwise equality of the representations (not L^2 equality).
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.n_ == b.n_ && a.j_ == b.j_ && a.terms_ == b.terms_;
  }

  /// Splits into torus-weight components, which are mutually L^2-orthogonal.
  std::map<Weight, PolyForm> by_weight() const;

 private:
  int n_ = 2;
  int j_ = 0;
  Terms terms_;
};

/// The constant function c (a 0-form).
PolyForm constant_form(int n, const GaussianRational& c);
/// c z^a zbar^b zeta_C from explicit data (1-based wedge indices).
PolyForm monomial_form(int n, const std::vector<int>& a, const std::vector<int>& b,
                       const std::vector<int>& wedge, const GaussianRational& c = 1);
/// zeta_{c} for 1-based c.
PolyForm zeta(int n, int c);

/// Pointwise Gram matrix 2(delta_ab - conj(z_a) z_b) of the zeta_a at an exact unit point.
Mat<GaussianRational> zeta_gram(const ExactPoint& z);

/// Coefficient of pi^n in the L^2 pairing.
GaussianRational l2_inner_coefficient(const PolyForm& alpha, const PolyForm& beta);
ExactScalar l2_inner(const PolyForm& alpha, const PolyForm& beta);
ExactScalar l2_norm_sq(const PolyForm& alpha);
bool l2_equal(const PolyForm& alpha, const PolyForm& beta);

/// dbar_b(f zeta_C) = sum_m df/dzbar_m zeta_m ^ zeta_C. Requires j <= n-2.
PolyForm dbar_b(const PolyForm& alpha);
/// Multiplies by z_m (conjugate = false) or zbar_m (1-based m).
PolyForm multiply_coordinate(const PolyForm& alpha, int m, bool conjugate);
/// Multiplies by sum_m c_m z_m (conjugate = false) or sum_m c_m zbar_m.
PolyForm multiply_linear(const PolyForm& alpha, const std::vector<GaussianRational>& c, bool conjugate);
/// The matrix unit E_ab (1-based) acting on forms by the derivative of the pullback action.
PolyForm gl_action(int a, int b, const PolyForm& alpha);

/// All monomial j-forms with |z exponent| = zdeg, |zbar exponent| = zbardeg and the given weight.
std::vector<PolyForm> monomial_family(int n, int j, int zdeg, int zbardeg, const Weight& weight);

struct AdjointResult {
  PolyForm form;
  bool certified = false;  // adjoint identity verified on the test family
};

/// The element gamma of span(ambient) with <<gamma, d>> = <<beta, dbar_b d>> for all d in ambient,
/// certified on test_family. Throws std::runtime_error if the Gram system is inconsistent.
AdjointResult dbar_b_star(const PolyForm& beta, std::span<const PolyForm> ambient,
                          std::span<const PolyForm> test_family);
/// Default ambient: monomial (j-1)-forms of each weight of beta and the bidegree forced by
/// duality; the certificate uses the family one degree higher. Throws if not certified.
PolyForm dbar_b_star(const PolyForm& beta);

/// dbar_b dbar_b* + dbar_b* dbar_b with default ambients.
PolyForm box_b(const PolyForm& alpha);

/// The explicit highest weight form of a component.
PolyForm highest_weight_form(const FormIndex& idx);
/// Closed-form squared norm of the highest weight form.
ExactScalar highest_weight_norm_sq(const FormIndex& idx);

/// Value of the form at z in coordinates of Lambda^j C^n, using zeta_c(z) = sqrt2 (e_c - conj(z_c) z)
/// with the factor 2^{j/2} omitted.
Vec<GaussianRational> evaluate(const PolyForm& alpha, const ExactPoint& z);
Eigen::VectorXcd evaluate(const PolyForm& alpha, const FloatPoint& z);

}  // namespace kohn
