// Exact linear algebra over Rational and GaussianRational: rank, consistent solves, sparse echelon bases.
#pragma once

#include "kohn/exact.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kohn {

inline Integer denominator_of(const Rational& x) { return boost::multiprecision::denominator(x); }
inline Integer denominator_of(const GaussianRational& x) {
  return boost::multiprecision::lcm(denominator_of(x.real()), denominator_of(x.imag()));
}

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }

/// Rank by fraction-free (Bareiss) elimination after scaling each row to integral entries.
template <class Scalar>
Eigen::Index exact_rank(Mat<Scalar> a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  for (Eigen::Index r = 0; r < rows; ++r) {
    Integer l = 1;
    for (Eigen::Index c = 0; c < cols; ++c) l = boost::multiprecision::lcm(l, denominator_of(a(r, c)));
    if (l != 1)
      for (Eigen::Index c = 0; c < cols; ++c) a(r, c) *= Scalar(Rational(l));
  }
  Scalar prev(1);
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index piv = rank;
    while (piv < rows && is_zero(a(piv, c))) ++piv;
    if (piv == rows) continue;
    a.row(piv).swap(a.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      for (Eigen::Index k = c + 1; k < cols; ++k)
        a(r, k) = (a(rank, c) * a(r, k) - a(r, c) * a(rank, k)) / prev;
      a(r, c) = Scalar(0);
    }
    prev = a(rank, c);
    ++rank;
  }
  return rank;
}

/// Some solution x of a x = b (free unknowns set to zero), or nullopt if inconsistent.
template <class Scalar>
std::optional<Mat<Scalar>> solve_consistent(Mat<Scalar> a, Mat<Scalar> b) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index piv = rank;
    while (piv < rows && is_zero(a(piv, c))) ++piv;
    if (piv == rows) continue;
    a.row(piv).swap(a.row(rank));
    b.row(piv).swap(b.row(rank));
    const Scalar inv = Scalar(1) / a(rank, c);
    for (Eigen::Index k = c; k < cols; ++k) a(rank, k) *= inv;
    for (Eigen::Index k = 0; k < b.cols(); ++k) b(rank, k) *= inv;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == rank || is_zero(a(r, c))) continue;
      const Scalar f = a(r, c);
      for (Eigen::Index k = c; k < cols; ++k)
        if (!is_zero(a(rank, k))) a(r, k) -= f * a(rank, k);
      for (Eigen::Index k = 0; k < b.cols(); ++k)
        if (!is_zero(b(rank, k))) b(r, k) -= f * b(rank, k);
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (Eigen::Index r = rank; r < rows; ++r)
    for (Eigen::Index k = 0; k < b.cols(); ++k)
      if (!is_zero(b(r, k))) return std::nullopt;
  Mat<Scalar> x = Mat<Scalar>::Zero(cols, b.cols());
  for (Eigen::Index r = 0; r < rank; ++r) x.row(pivot_cols[static_cast<std::size_t>(r)]) = b.row(r);
  return x;
}

template <class Scalar>
std::optional<Vec<Scalar>> solve_consistent(const Mat<Scalar>& a, const Vec<Scalar>& b) {
  auto x = solve_consistent<Scalar>(a, Mat<Scalar>(b));
  if (!x) return std::nullopt;
  return Vec<Scalar>(x->col(0));
}

/// Exact inverse, or nullopt if singular.
template <class Scalar>
std::optional<Mat<Scalar>> exact_inverse(const Mat<Scalar>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const Eigen::Index d = a.rows();
  if (exact_rank(a) != d) return std::nullopt;
  return solve_consistent<Scalar>(a, Mat<Scalar>(Mat<Scalar>::Identity(d, d)));
}

/// Incrementally maintained row-echelon basis of sparse vectors keyed by an ordered Key.
/// Every stored row has leading coefficient 1 at its smallest key.
template <class Key>
class SparseEchelon {
 public:
  using Vector = std::map<Key, GaussianRational>;

  /// Reduces v against the stored rows; the result has no pivot keys.
  Vector reduce(Vector v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto row = rows_.find(it->first);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      const Key key = it->first;
      const GaussianRational f = it->second;
      for (const auto& [k, c] : row->second) {
        auto [pos, inserted] = v.try_emplace(k);
        pos->second -= f * c;
        if (pos->second.is_zero()) v.erase(pos);
      }
      it = v.upper_bound(key);
    }
    return v;
  }

  /// Adds v if independent of the current rows; returns whether the rank grew.
  bool insert(const Vector& v) {
    Vector r = reduce(v);
    if (r.empty()) return false;
    const GaussianRational lead = r.begin()->second;
    if (lead != GaussianRational(1))
      for (auto& [k, c] : r) c /= lead;
    const Key pivot = r.begin()->first;
    rows_.emplace(pivot, std::move(r));
    return true;
  }

  bool contains(const Vector& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }

  std::vector<Vector> basis() const {
    std::vector<Vector> out;
    out.reserve(rows_.size());
    for (const auto& [k, row] : rows_) out.push_back(row);
    return out;
  }

 private:
  std::map<Key, Vector> rows_;
};

}  // namespace kohn
