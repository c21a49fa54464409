#include "doctest.h"
#include "kohn/coefficients.hpp"

using namespace kohn;

namespace {

FormIndex phi(int n, int j, int p, int q) { return {n, j, p, q, Kind::Phi}; }
FormIndex psi(int n, int j, int p, int q) { return {n, j, p, q, Kind::Psi}; }

std::vector<FormIndex> sources(int n, int cap) {
  std::vector<FormIndex> out;
  for (int j = 0; j <= n - 1; ++j)
    for (const auto& idx : indices_in_box(n, j, cap, cap)) out.push_back(idx);
  return out;
}

}  // namespace

TEST_CASE("worked coefficient values") {
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), phi(3, 1, 1, 1)) == Rational(1, 4));
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), psi(3, 1, 0, 1)) == Rational(1, 2));
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), phi(3, 1, 2, 1)) == 0);
  CHECK(coeff(Direction::ZBar, phi(3, 1, 0, 1), phi(3, 1, 0, 2)) == Rational(3, 8));
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), psi(3, 1, 0, 2)) == 0);
  CHECK(epsilon(phi(3, 1, 0, 1), phi(3, 1, 0, 1)) == Rational(3, 8));
  CHECK(epsilon(phi(3, 1, 0, 1), phi(3, 1, 3, 1)) == 0);
  const Rational gap = 1 - epsilon(phi(3, 1, 0, 1), phi(3, 1, 0, 1));
  CHECK(gap == Rational(5, 8));
  CHECK(gap <= Rational(2 * 3, 9));
}

TEST_CASE("support patterns") {
  const auto s = phi(4, 1, 2, 2);
  CHECK(support(Direction::ZBar, s) == std::vector<FormIndex>{phi(4, 1, 1, 2), phi(4, 1, 2, 3)});
  CHECK(support(Direction::Z, psi(4, 2, 2, 2)) == std::vector<FormIndex>{psi(4, 2, 2, 1), psi(4, 2, 3, 2)});
  auto zb = support(Direction::ZBar, psi(4, 2, 2, 2));
  CHECK(zb == std::vector<FormIndex>{psi(4, 2, 1, 2), phi(4, 2, 2, 2), psi(4, 2, 2, 3)});
  for (int n = 2; n <= 5; ++n)
    for (const auto& src : sources(n, 6))
      for (Direction d : {Direction::Z, Direction::ZBar}) {
        auto sup = support(d, src);
        CHECK(sup.size() <= 3);
        for (const auto& dst : sup) {
          CHECK(is_valid(dst));
          const Rational c = coeff(d, src, dst);
          CHECK(c > 0);
          CHECK(c <= 1);
        }
      }
}

TEST_CASE("invalid destinations give zero") {
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), phi(3, 1, 0, 0)) == 0);
  CHECK(coeff(Direction::ZBar, phi(3, 0, 0, 0), phi(3, 0, -1, 0)) == 0);
  CHECK(coeff(Direction::Z, phi(3, 0, 2, 0), psi(3, 0, 2, 0)) == 0);
  CHECK(coeff(Direction::Z, phi(3, 1, 0, 1), phi(4, 1, 1, 1)) == 0);
}

TEST_CASE("zero over zero conventions") {
  // q/(q+j) with q = j = 0, and (p+1)/(p+n-j) with p = -1, j = n-1.
  CHECK(coeff(Direction::ZBar, phi(3, 0, 2, 0), phi(3, 0, 2, 1)) == Rational(1, 5));
  CHECK(coeff(Direction::Z, psi(3, 2, -1, 2), psi(3, 2, 0, 2)) == Rational(1, 4));
}

TEST_CASE("destination sums equal one") {
  CHECK(Rational(dimension(phi(3, 1, 1, 1)), dimension(phi(3, 1, 0, 1))) * Rational(1, 4) +
            Rational(1, 2) ==
        1);
  for (int n = 2; n <= 5; ++n)
    for (const auto& src : sources(n, 12))
      for (Direction d : {Direction::Z, Direction::ZBar}) CHECK(destination_sum(d, src) == 1);
}

TEST_CASE("gamma relation") {
  // Psi-Psi at degree j+1 is the Phi-Phi coefficient at degree j scaled by lambda'^2/lambda^2 in the
  // Z direction; in the ZBar direction the roles of Phi and Psi swap.
  for (int n = 2; n <= 5; ++n)
    for (int j = 0; j <= n - 2; ++j)
      for (int p = 0; p <= 10; ++p)
        for (int q = 1; q <= 10; ++q)
          for (Direction d : {Direction::Z, Direction::ZBar})
            for (const auto& dst : candidate_destinations(d, phi(n, j, p, q))) {
              if (dst.kind != Kind::Phi || !is_valid(dst) || dst.q < 1) continue;
              const Rational ratio(lambda_sq(n, dst.p, dst.q, j), lambda_sq(n, p, q, j));
              const Rational c_phi = coeff(d, phi(n, j, p, q), dst);
              const Rational c_psi = coeff(d, psi(n, j + 1, p, q), psi(n, j + 1, dst.p, dst.q));
              if (d == Direction::Z)
                CHECK(c_psi == ratio * c_phi);
              else
                CHECK(c_phi == ratio * c_psi);
            }
}

TEST_CASE("hodge symmetry of the table") {
  for (int n = 2; n <= 5; ++n)
    for (const auto& src : sources(n, 8))
      for (Direction d : {Direction::Z, Direction::ZBar}) {
        const Direction dbar = d == Direction::Z ? Direction::ZBar : Direction::Z;
        for (const auto& dst : candidate_destinations(d, src)) {
          if (!is_valid(dst)) continue;
          CHECK(coeff(d, src, dst) == coeff(dbar, hodge_dual(src), hodge_dual(dst)));
        }
      }
}

TEST_CASE("epsilon composition orders agree and lie in (0,1)") {
  for (int n = 2; n <= 5; ++n)
    for (const auto& src : sources(n, 8)) {
      for (const auto& [dst, v] : epsilon_row(src)) {
        CHECK(epsilon_z_first(src, dst) == v);
        CHECK(epsilon(src, dst) == v);
      }
      const Rational e = epsilon(src, src);
      CHECK(e > 0);
      CHECK(e < 1);
      CHECK(epsilon(src, src) == epsilon(hodge_dual(src), hodge_dual(src)));
    }
}

TEST_CASE("diagonal epsilon matches the two displayed formulas") {
  for (int n = 2; n <= 5; ++n)
    for (const auto& s : sources(n, 8)) {
      const int p = s.p, q = s.q, j = s.j;
      Rational expect;
      if (s.kind == Kind::Phi) {
        expect = coeff(Direction::ZBar, s, phi(n, j, p, q + 1)) * coeff(Direction::Z, phi(n, j, p, q + 1), s) +
                 coeff(Direction::ZBar, s, phi(n, j, p - 1, q)) *
                     (is_valid(phi(n, j, p - 1, q)) ? coeff(Direction::Z, phi(n, j, p - 1, q), s) : Rational(0));
      } else {
        expect = coeff(Direction::Z, s, psi(n, j, p + 1, q)) * coeff(Direction::ZBar, psi(n, j, p + 1, q), s) +
                 coeff(Direction::Z, s, psi(n, j, p, q - 1)) *
                     (is_valid(psi(n, j, p, q - 1)) ? coeff(Direction::ZBar, psi(n, j, p, q - 1), s) : Rational(0));
      }
      CHECK(epsilon(s, s) == expect);
    }
}

TEST_CASE("conti bound over a large range") {
  for (int n = 2; n <= 4; ++n)
    for (int j = 0; j <= n - 1; ++j) {
      const Rational c = conti_constant(n, j, 60);
      CHECK(c > 0);
      CHECK(c < 8);
    }
}
