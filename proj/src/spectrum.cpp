#include "kohn/spectrum.hpp"

#include <algorithm>
#include <stdexcept>

namespace kohn {

std::string to_string(Kind kind) { return kind == Kind::Phi ? "Phi" : "Psi"; }

Kind parse_kind(std::string_view text) {
  if (text == "Phi" || text == "phi" || text == "PHI") return Kind::Phi;
  if (text == "Psi" || text == "psi" || text == "PSI") return Kind::Psi;
  throw std::invalid_argument("unknown kind '" + std::string(text) + "' (expected Phi or Psi)");
}

std::string to_string(const FormIndex& idx) {
  return to_string(idx.kind) + "(p=" + std::to_string(idx.p) + ",q=" + std::to_string(idx.q) +
         ",j=" + std::to_string(idx.j) + ",n=" + std::to_string(idx.n) + ")";
}

namespace {

bool in_index_set(int n, int j, int p, int q) {
  if (j == 0) return p >= 0 && q >= 0;
  if (j == n - 1) return p >= -1 && q >= 1;
  return p >= 0 && q >= 1;
}

void check_degree(int n, int j) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (j < 0 || j > n - 1) throw std::invalid_argument("j must lie in [0, n-1]");
}

}  // namespace

bool is_valid_index(int n, int j, int p, int q, Kind kind) {
  check_degree(n, j);
  if (kind == Kind::Phi && j > n - 2) return false;
  if (kind == Kind::Psi && j < 1) return false;
  return in_index_set(n, j, p, q);
}

bool is_valid(const FormIndex& idx) { return is_valid_index(idx.n, idx.j, idx.p, idx.q, idx.kind); }

FormIndex make_index(int n, int j, int p, int q, Kind kind) {
  FormIndex idx{n, j, p, q, kind};
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  return idx;
}

long long lambda_sq(int n, int p, int q, int j) {
  return 2LL * (q + j) * (p + n - 1 - j);
}

long long eigenvalue_sq(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  return idx.kind == Kind::Phi ? lambda_sq(idx.n, idx.p, idx.q, idx.j)
                               : lambda_sq(idx.n, idx.p, idx.q, idx.j - 1);
}

Integer weyl_dimension(const std::vector<int>& weight) {
  const int n = static_cast<int>(weight.size());
  Rational d = 1;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const int num = weight[i] - weight[k] + k - i;
      if (num <= 0) return 0;
      d *= Rational(num, k - i);
    }
  return boost::multiprecision::numerator(d);
}

std::vector<int> highest_weight(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  const int n = idx.n;
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  // Phi_{pqj} ~ (q, 1_j, 0, ..., 0, -p); Psi_{pqj} ~ (q, 1_{j-1}, 0, ..., 0, -p).
  const int ones = idx.kind == Kind::Phi ? idx.j : idx.j - 1;
  w[0] = idx.q;
  for (int i = 1; i <= ones; ++i) w[static_cast<std::size_t>(i)] = 1;
  w[static_cast<std::size_t>(n - 1)] += -idx.p;
  return w;
}

namespace {

Rational ratio_or_one(long long num, long long den) {
  if (num == 0 && den == 0) return 1;
  if (den == 0) throw std::logic_error("zero denominator in dimension formula");
  return Rational(num, den);
}

// The closed formula for dim Phi_{pqk}, also valid for dim Psi_{pq(k+1)}.
Integer dimension_formula(int n, int k, int p, int q) {
  Rational d = ratio_or_one(p + 1, p + n - 1 - k) * ratio_or_one(q, q + k) *
               Rational(p + q + n - 1, n - 1);
  d *= Rational(binomial(n - 2, k) * binomial(p + n - 1, n - 2) * binomial(q + n - 2, n - 2));
  if (boost::multiprecision::denominator(d) != 1)
    throw std::logic_error("non-integral dimension");
  return boost::multiprecision::numerator(d);
}

}  // namespace

Integer dimension(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  if (idx.kind == Kind::Phi) return dimension_formula(idx.n, idx.j, idx.p, idx.q);
  return dimension_formula(idx.n, idx.j - 1, idx.p, idx.q);
}

FormIndex hodge_dual(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  const Kind k = idx.kind == Kind::Phi ? Kind::Psi : Kind::Phi;
  return make_index(idx.n, idx.n - 1 - idx.j, idx.q - 1, idx.p + 1, k);
}

namespace {

// Appends valid indices of one kind with lo <= eigenvalue_sq <= hi. Zero eigenvalues fill a whole
// row (j = 0, q = 0) or column (j = n-1, p = -1); elsewhere eigenvalue_sq increases in p and q.
void scan_kind(int n, int j, Kind kind, long long lo, long long hi, std::vector<FormIndex>& out) {
  if (kind == Kind::Phi && j > n - 2) return;
  if (kind == Kind::Psi && j < 1) return;
  int pmin = j == n - 1 ? -1 : 0;
  int qmin = j == 0 ? 0 : 1;
  const bool kernel_column = kind == Kind::Psi && j == n - 1;
  const bool kernel_row = kind == Kind::Phi && j == 0;
  if ((kernel_column || kernel_row) && lo == 0)
    throw std::domain_error("range contains the infinite-dimensional kernel of the Kohn Laplacian");
  if (kernel_column) pmin = 0;
  if (kernel_row) qmin = 1;
  for (int q = qmin; eigenvalue_sq({n, j, pmin, q, kind}) <= hi; ++q)
    for (int p = pmin;; ++p) {
      const long long l = eigenvalue_sq({n, j, p, q, kind});
      if (l > hi) break;
      if (l >= lo) out.push_back({n, j, p, q, kind});
    }
}

}  // namespace

SpectralShell shell(int n, int j, int i) {
  check_degree(n, j);
  if (i < 1) throw std::invalid_argument("shell index must be at least 1");
  SpectralShell s{i, {}};
  const long long lo = static_cast<long long>(i - 1) * (i - 1);
  const long long hi = static_cast<long long>(i) * i;
  scan_kind(n, j, Kind::Phi, lo, hi, s.members);
  scan_kind(n, j, Kind::Psi, lo, hi, s.members);
  std::sort(s.members.begin(), s.members.end());
  return s;
}

std::vector<FormIndex> indices_up_to(int n, int j, long long max_lambda_sq) {
  check_degree(n, j);
  std::vector<FormIndex> out;
  scan_kind(n, j, Kind::Phi, 1, max_lambda_sq, out);
  scan_kind(n, j, Kind::Psi, 1, max_lambda_sq, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FormIndex> indices_in_box(int n, int j, int pmax, int qmax) {
  check_degree(n, j);
  std::vector<FormIndex> out;
  for (Kind kind : {Kind::Phi, Kind::Psi})
    for (int p = -1; p <= pmax; ++p)
      for (int q = 0; q <= qmax; ++q)
        if (is_valid_index(n, j, p, q, kind)) out.push_back({n, j, p, q, kind});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kohn
