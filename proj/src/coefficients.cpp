#include "kohn/coefficients.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>

namespace kohn {

std::string to_string(Direction d) { return d == Direction::Z ? "z" : "zbar"; }

Direction parse_direction(std::string_view text) {
  if (text == "z" || text == "Z") return Direction::Z;
  if (text == "zbar" || text == "ZBAR" || text == "ZBar") return Direction::ZBar;
  throw std::invalid_argument("unknown direction '" + std::string(text) + "' (expected z or zbar)");
}

namespace {

template <class T>
T frac(long long num, long long den) {
  if (den == 0) throw std::logic_error("zero denominator in coefficient table");
  if constexpr (std::is_same_v<T, double>)
    return static_cast<double>(num) / static_cast<double>(den);
  else
    return Rational(num, den);
}

// Fractions that are read as 1 when of the form 0/0.
template <class T>
T frac_or_one(long long num, long long den) {
  if (num == 0 && den == 0) return T(1);
  return frac<T>(num, den);
}

bool same_degree(const FormIndex& a, const FormIndex& b) { return a.n == b.n && a.j == b.j; }

// Table value for a valid destination in the candidate list, or 0.
template <class T>
T table_value(Direction direction, const FormIndex& s, const FormIndex& d) {
  const long long n = s.n, j = s.j, p = s.p, q = s.q;
  const int dp = d.p - s.p, dq = d.q - s.q;
  if (direction == Direction::Z) {
    if (s.kind == Kind::Psi && d.kind == Kind::Psi) {
      if (dp == 1 && dq == 0) return frac<T>(p + n + 1 - j, p + q + n) * frac_or_one<T>(p + 1, p + n - j);
      if (dp == 0 && dq == -1) return frac<T>(q + n - 2, p + q + n - 2) * frac<T>(q - 2 + j, q - 1 + j);
    } else if (s.kind == Kind::Phi && d.kind == Kind::Phi) {
      if (dp == 0 && dq == -1) return frac<T>(q + n - 2, p + q + n - 2);
      if (dp == 1 && dq == 0) return frac<T>(p + 1, p + q + n);
    } else if (s.kind == Kind::Phi && d.kind == Kind::Psi) {
      if (dp == 0 && dq == 0) return frac<T>(n - 1 - j, (q + j) * (p + n - 1 - j));
    }
  } else {
    if (s.kind == Kind::Phi && d.kind == Kind::Phi) {
      if (dp == 0 && dq == 1) return frac<T>(q + 1 + j, p + q + n) * frac_or_one<T>(q, q + j);
      if (dp == -1 && dq == 0) return frac<T>(p + n - 1, p + q + n - 2) * frac<T>(p + n - 2 - j, p + n - 1 - j);
    } else if (s.kind == Kind::Psi && d.kind == Kind::Psi) {
      if (dp == -1 && dq == 0) return frac<T>(p + n - 1, p + q + n - 2);
      if (dp == 0 && dq == 1) return frac<T>(q, p + q + n);
    } else if (s.kind == Kind::Psi && d.kind == Kind::Phi) {
      if (dp == 0 && dq == 0) return frac<T>(j, (q - 1 + j) * (p + n - j));
    }
  }
  return T(0);
}

}  // namespace

std::vector<FormIndex> candidate_destinations(Direction direction, const FormIndex& s) {
  const int n = s.n, j = s.j, p = s.p, q = s.q;
  if (direction == Direction::Z) {
    if (s.kind == Kind::Phi)
      return {{n, j, p, q - 1, Kind::Phi}, {n, j, p + 1, q, Kind::Phi}, {n, j, p, q, Kind::Psi}};
    return {{n, j, p + 1, q, Kind::Psi}, {n, j, p, q - 1, Kind::Psi}};
  }
  if (s.kind == Kind::Phi)
    return {{n, j, p, q + 1, Kind::Phi}, {n, j, p - 1, q, Kind::Phi}};
  return {{n, j, p - 1, q, Kind::Psi}, {n, j, p, q + 1, Kind::Psi}, {n, j, p, q, Kind::Phi}};
}

Rational coeff(Direction direction, const FormIndex& src, const FormIndex& dst) {
  if (!is_valid(src)) throw std::invalid_argument("invalid source " + to_string(src));
  if (!same_degree(src, dst)) return 0;
  if (!is_valid_index(dst.n, dst.j, dst.p, dst.q, dst.kind)) return 0;
  return table_value<Rational>(direction, src, dst);
}

double coeff_double(Direction direction, const FormIndex& src, const FormIndex& dst) {
  if (!is_valid(src)) throw std::invalid_argument("invalid source " + to_string(src));
  if (!same_degree(src, dst)) return 0;
  if (!is_valid_index(dst.n, dst.j, dst.p, dst.q, dst.kind)) return 0;
  return table_value<double>(direction, src, dst);
}

std::vector<FormIndex> support(Direction direction, const FormIndex& src) {
  std::vector<FormIndex> out;
  for (const auto& d : candidate_destinations(direction, src))
    if (!coeff(direction, src, d).is_zero()) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

CoeffTable coeff_table(Direction direction, const FormIndex& src) {
  CoeffTable t{src, direction, {}};
  for (const auto& d : support(direction, src)) t.entries.emplace(d, coeff(direction, src, d));
  return t;
}

namespace {

Rational compose(Direction first, const FormIndex& src, const FormIndex& dst) {
  const Direction second = first == Direction::Z ? Direction::ZBar : Direction::Z;
  Rational total = 0;
  for (const auto& mid : support(first, src)) total += coeff(first, src, mid) * coeff(second, mid, dst);
  return total;
}

}  // namespace

Rational epsilon(const FormIndex& src, const FormIndex& dst) { return compose(Direction::ZBar, src, dst); }

Rational epsilon_z_first(const FormIndex& src, const FormIndex& dst) {
  return compose(Direction::Z, src, dst);
}

std::map<FormIndex, Rational> epsilon_row(const FormIndex& src) {
  std::map<FormIndex, Rational> row;
  for (const auto& mid : support(Direction::ZBar, src)) {
    const Rational a = coeff(Direction::ZBar, src, mid);
    for (const auto& dst : support(Direction::Z, mid)) row[dst] += a * coeff(Direction::Z, mid, dst);
  }
  std::erase_if(row, [](const auto& e) { return e.second.is_zero(); });
  return row;
}

std::map<FormIndex, double> epsilon_row_double(const FormIndex& src) {
  std::map<FormIndex, double> row;
  for (const auto& mid : candidate_destinations(Direction::ZBar, src)) {
    const double a = coeff_double(Direction::ZBar, src, mid);
    if (a == 0) continue;
    for (const auto& dst : candidate_destinations(Direction::Z, mid)) {
      const double b = coeff_double(Direction::Z, mid, dst);
      if (b != 0) row[dst] += a * b;
    }
  }
  return row;
}

Rational destination_sum(Direction direction, const FormIndex& src) {
  const Rational ds(dimension(src));
  Rational total = 0;
  for (const auto& d : support(direction, src)) total += Rational(dimension(d)) / ds * coeff(direction, src, d);
  return total;
}

Rational conti_constant(int n, int j, int cap) {
  Rational best = 0;
  for (const auto& idx : indices_in_box(n, j, cap, cap)) {
    const Rational one_minus = 1 - epsilon(idx, idx);
    const Rational scaled = one_minus * Rational((2 + idx.p + idx.q) * (2 + idx.p + idx.q)) /
                            Rational((2 + idx.p) * (2 + idx.q));
    best = std::max(best, scaled);
  }
  return best;
}

}  // namespace kohn
