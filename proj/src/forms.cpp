#include "kohn/forms.hpp"

#include "kohn/linalg.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace kohn {

namespace {

void require_n(int n) {
  if (n < 2 || n > kMaxN) throw std::invalid_argument("n must lie in [2, " + std::to_string(kMaxN) + "]");
}

WedgeMask bit(int c) { return static_cast<WedgeMask>(1u << c); }

bool has(WedgeMask m, int c) { return (m >> c) & 1u; }

// Number of elements of m strictly below c.
int below(WedgeMask m, int c) { return std::popcount(static_cast<unsigned>(m & (bit(c) - 1))); }

// 1-based position of c in the sorted wedge m.
int position(WedgeMask m, int c) { return below(m, c) + 1; }

int sign_of(int k) { return k % 2 == 0 ? 1 : -1; }

// 2 A! / (n-1+|A|)!, the sphere integral of |z^A|^2 over pi^n, memoized per call site.
class IntegralCache {
 public:
  explicit IntegralCache(int n) : n_(n) {}

  const Rational& operator()(const Exponents& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    Integer num = 2;
    int total = 0;
    for (int m = 0; m < n_; ++m) {
      num *= fact(a[m]);
      total += a[m];
    }
    return cache_.emplace(a, Rational(num, fact(n_ - 1 + total))).first->second;
  }

 private:
  const Integer& fact(int k) {
    while (static_cast<int>(factorials_.size()) <= k)
      factorials_.push_back(factorials_.empty() ? Integer(1)
                                                : factorials_.back() * static_cast<long>(factorials_.size()));
    return factorials_[static_cast<std::size_t>(k)];
  }

  int n_;
  std::map<Exponents, Rational> cache_;
  std::vector<Integer> factorials_;
};

Exponents plus(Exponents a, const Exponents& b, int n) {
  for (int m = 0; m < n; ++m) a[m] = static_cast<std::uint8_t>(a[m] + b[m]);
  return a;
}

}  // namespace

Weight term_weight(const FormTerm& t) {
  Weight w{};
  for (int m = 0; m < kMaxN; ++m) w[m] = t.zbar_exp[m] + (has(t.wedge, m) ? 1 : 0) - t.z_exp[m];
  return w;
}

std::string to_string(const Weight& w, int n) {
  std::ostringstream os;
  os << '(';
  for (int m = 0; m < n; ++m) os << (m ? "," : "") << w[m];
  os << ')';
  return os.str();
}

Weight to_weight(const std::vector<int>& w) {
  if (w.size() > static_cast<std::size_t>(kMaxN)) throw std::invalid_argument("weight too long");
  Weight out{};
  for (std::size_t m = 0; m < w.size(); ++m) out[m] = w[m];
  return out;
}

int popcount(WedgeMask m) { return std::popcount(static_cast<unsigned>(m)); }

std::vector<WedgeMask> wedge_basis(int n, int j) {
  require_n(n);
  if (j < 0 || j > n) throw std::invalid_argument("wedge degree out of range");
  std::vector<WedgeMask> out;
  std::vector<int> c(static_cast<std::size_t>(j));
  for (int i = 0; i < j; ++i) c[i] = i;
  while (true) {
    WedgeMask m = 0;
    for (int x : c) m |= bit(x);
    out.push_back(m);
    int i = j - 1;
    while (i >= 0 && c[i] == n - j + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int k = i + 1; k < j; ++k) c[k] = c[k - 1] + 1;
  }
  return out;
}

int wedge_position(int n, WedgeMask mask) {
  const auto basis = wedge_basis(n, popcount(mask));
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == mask) return static_cast<int>(i);
  throw std::invalid_argument("wedge outside {1..n}");
}

int insertion_sign(WedgeMask c, int m) {
  if (has(c, m)) return 0;
  return sign_of(below(c, m));
}

PolyForm::PolyForm(int n, int j) : n_(n), j_(j) {
  require_n(n);
  if (j < 0 || j > n - 1) throw std::invalid_argument("form degree must lie in [0, n-1]");
}

void PolyForm::add(const FormTerm& t, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (o.n_ != n_ || o.j_ != j_) throw std::invalid_argument("adding forms of different type");
  for (const auto& [t, c] : o.terms_) add(t, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  if (o.n_ != n_ || o.j_ != j_) throw std::invalid_argument("subtracting forms of different type");
  for (const auto& [t, c] : o.terms_) add(t, -c);
  return *this;
}

PolyForm& PolyForm::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [t, x] : terms_) x *= c;
  return *this;
}

std::map<Weight, PolyForm> PolyForm::by_weight() const {
  std::map<Weight, PolyForm> out;
  for (const auto& [t, c] : terms_) {
    auto [it, inserted] = out.try_emplace(term_weight(t), n_, j_);
    it->second.add(t, c);
  }
  return out;
}

PolyForm constant_form(int n, const GaussianRational& c) {
  PolyForm f(n, 0);
  f.add(FormTerm{}, c);
  return f;
}

PolyForm monomial_form(int n, const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& wedge,
                       const GaussianRational& c) {
  require_n(n);
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("exponent vectors must have length n");
  FormTerm t;
  for (int m = 0; m < n; ++m) {
    if (a[m] < 0 || b[m] < 0 || a[m] > 255 || b[m] > 255) throw std::invalid_argument("exponent out of range");
    t.z_exp[m] = static_cast<std::uint8_t>(a[m]);
    t.zbar_exp[m] = static_cast<std::uint8_t>(b[m]);
  }
  int sign = 1;
  for (int x : wedge) {
    if (x < 1 || x > n) throw std::invalid_argument("wedge index out of range");
    const int s = insertion_sign(t.wedge, x - 1);
    if (s == 0) return PolyForm(n, static_cast<int>(wedge.size()));
    // Appending x after the current factors: sign of moving it past the larger ones.
    sign *= sign_of(popcount(t.wedge) - below(t.wedge, x - 1));
    t.wedge |= bit(x - 1);
  }
  PolyForm f(n, static_cast<int>(wedge.size()));
  f.add(t, sign == 1 ? c : -c);
  return f;
}

PolyForm zeta(int n, int c) { return monomial_form(n, std::vector<int>(n, 0), std::vector<int>(n, 0), {c}); }

Mat<GaussianRational> zeta_gram(const ExactPoint& z) {
  if (!is_unit(z)) throw std::invalid_argument("point is not on the unit sphere");
  const Eigen::Index n = z.size();
  Mat<GaussianRational> g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      g(a, b) = GaussianRational(a == b ? 2 : 0) - GaussianRational(2) * conj(z(a)) * z(b);
  return g;
}

GaussianRational l2_inner_coefficient(const PolyForm& alpha, const PolyForm& beta) {
  if (alpha.n() != beta.n() || alpha.j() != beta.j()) throw std::invalid_argument("pairing forms of different type");
  const int n = alpha.n();
  const int j = alpha.j();
  std::map<Weight, std::vector<std::pair<const FormTerm*, const GaussianRational*>>> groups;
  for (const auto& [t, c] : beta.terms()) groups[term_weight(t)].emplace_back(&t, &c);
  IntegralCache integral(n);
  GaussianRational total;
  for (const auto& [s, x] : alpha.terms()) {
    auto g = groups.find(term_weight(s));
    if (g == groups.end()) continue;
    for (const auto& [tp, yp] : g->second) {
      const FormTerm& t = *tp;
      // Terms of equal weight: the integrand is a monomial times the minor of the zeta Gram matrix.
      const Exponents base = plus(s.z_exp, t.zbar_exp, n);
      Rational val = 0;
      if (s.wedge == t.wedge) {
        val += integral(base);
        for (int c = 0; c < n; ++c) {
          if (!has(s.wedge, c)) continue;
          Exponents e = base;
          ++e[c];
          val -= integral(e);
        }
      } else {
        const WedgeMask only_s = s.wedge & ~t.wedge;
        const WedgeMask only_t = t.wedge & ~s.wedge;
        if (popcount(only_s) != 1 || popcount(only_t) != 1) continue;
        const int c = std::countr_zero(static_cast<unsigned>(only_s));
        const int d = std::countr_zero(static_cast<unsigned>(only_t));
        Exponents e = base;
        ++e[d];
        const Rational& v = integral(e);
        if (sign_of(position(s.wedge, c) + position(t.wedge, d)) == 1)
          val -= v;
        else
          val += v;
      }
      if (!val.is_zero()) total += x * conj(*yp) * GaussianRational(val);
    }
  }
  return total * GaussianRational(Rational(Integer(1) << j));
}

ExactScalar l2_inner(const PolyForm& alpha, const PolyForm& beta) {
  return {l2_inner_coefficient(alpha, beta), alpha.n()};
}

ExactScalar l2_norm_sq(const PolyForm& alpha) { return l2_inner(alpha, alpha); }

bool l2_equal(const PolyForm& alpha, const PolyForm& beta) { return l2_norm_sq(alpha - beta).is_zero(); }

PolyForm dbar_b(const PolyForm& alpha) {
  const int n = alpha.n();
  if (alpha.j() > n - 2) throw std::invalid_argument("dbar_b is zero on top-degree forms; input degree must be <= n-2");
  PolyForm out(n, alpha.j() + 1);
  for (const auto& [t, c] : alpha.terms()) {
    for (int m = 0; m < n; ++m) {
      if (t.zbar_exp[m] == 0) continue;
      const int s = insertion_sign(t.wedge, m);
      if (s == 0) continue;
      FormTerm u = t;
      --u.zbar_exp[m];
      u.wedge |= bit(m);
      out.add(u, c * GaussianRational(s * t.zbar_exp[m]));
    }
  }
  return out;
}

PolyForm multiply_coordinate(const PolyForm& alpha, int m, bool conjugate) {
  if (m < 1 || m > alpha.n()) throw std::invalid_argument("coordinate index out of range");
  PolyForm out(alpha.n(), alpha.j());
  for (const auto& [t, c] : alpha.terms()) {
    FormTerm u = t;
    auto& e = conjugate ? u.zbar_exp[m - 1] : u.z_exp[m - 1];
    if (e == 255) throw std::overflow_error("exponent overflow");
    ++e;
    out.add(u, c);
  }
  return out;
}

PolyForm multiply_linear(const PolyForm& alpha, const std::vector<GaussianRational>& c, bool conjugate) {
  if (static_cast<int>(c.size()) != alpha.n()) throw std::invalid_argument("coefficient vector must have length n");
  PolyForm out(alpha.n(), alpha.j());
  for (int m = 0; m < alpha.n(); ++m)
    if (!c[m].is_zero()) out += c[m] * multiply_coordinate(alpha, m + 1, conjugate);
  return out;
}

PolyForm gl_action(int a, int b, const PolyForm& alpha) {
  const int n = alpha.n();
  if (a < 1 || a > n || b < 1 || b > n) throw std::invalid_argument("matrix unit index out of range");
  --a;
  --b;
  PolyForm out(n, alpha.j());
  for (const auto& [t, c] : alpha.terms()) {
    if (t.z_exp[a] > 0) {
      FormTerm u = t;
      --u.z_exp[a];
      ++u.z_exp[b];
      out.add(u, c * GaussianRational(-static_cast<int>(t.z_exp[a])));
    }
    if (t.zbar_exp[b] > 0) {
      FormTerm u = t;
      --u.zbar_exp[b];
      ++u.zbar_exp[a];
      out.add(u, c * GaussianRational(static_cast<int>(t.zbar_exp[b])));
    }
    if (has(t.wedge, b)) {
      if (a == b) {
        out.add(t, c);
      } else if (!has(t.wedge, a)) {
        FormTerm u = t;
        u.wedge = static_cast<WedgeMask>((t.wedge & ~bit(b)) | bit(a));
        const WedgeMask between = static_cast<WedgeMask>(t.wedge & ~bit(b));
        const int lo = std::min(a, b), hi = std::max(a, b);
        out.add(u, sign_of(below(between, hi) - below(between, lo + 1)) == 1 ? c : -c);
      }
    }
  }
  return out;
}

namespace {

void compositions(int n, int total, int m, Exponents& cur, std::vector<Exponents>& out) {
  if (m == n - 1) {
    cur[m] = static_cast<std::uint8_t>(total);
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur[m] = static_cast<std::uint8_t>(k);
    compositions(n, total - k, m + 1, cur, out);
  }
  cur[m] = 0;
}

}  // namespace

std::vector<PolyForm> monomial_family(int n, int j, int zdeg, int zbardeg, const Weight& weight) {
  require_n(n);
  std::vector<PolyForm> out;
  if (zdeg < 0 || zbardeg < 0) return out;
  std::vector<Exponents> as;
  Exponents cur{};
  compositions(n, zdeg, 0, cur, as);
  const auto wedges = wedge_basis(n, j);
  for (const auto& a : as) {
    for (WedgeMask c : wedges) {
      FormTerm t;
      t.z_exp = a;
      t.wedge = c;
      int total = 0;
      bool ok = true;
      for (int m = 0; m < n && ok; ++m) {
        const int e = weight[m] + a[m] - (has(c, m) ? 1 : 0);
        ok = e >= 0 && e <= 255;
        if (ok) t.zbar_exp[m] = static_cast<std::uint8_t>(e);
        total += e;
      }
      if (!ok || total != zbardeg) continue;
      PolyForm f(n, j);
      f.add(t, 1);
      out.push_back(std::move(f));
    }
  }
  return out;
}

AdjointResult dbar_b_star(const PolyForm& beta, std::span<const PolyForm> ambient,
                          std::span<const PolyForm> test_family) {
  if (beta.j() < 1) throw std::invalid_argument("dbar_b* needs a form of degree >= 1");
  const int n = beta.n();
  const Eigen::Index r = static_cast<Eigen::Index>(ambient.size());
  Mat<GaussianRational> gram(r, r);
  Vec<GaussianRational> rhs(r);
  std::vector<PolyForm> images;
  images.reserve(ambient.size());
  for (const auto& d : ambient) {
    if (d.n() != n || d.j() != beta.j() - 1) throw std::invalid_argument("ambient form of wrong type");
    images.push_back(dbar_b(d));
  }
  for (Eigen::Index s = 0; s < r; ++s) {
    rhs(s) = l2_inner_coefficient(beta, images[static_cast<std::size_t>(s)]);
    for (Eigen::Index k = s; k < r; ++k) {
      gram(s, k) = l2_inner_coefficient(ambient[static_cast<std::size_t>(k)], ambient[static_cast<std::size_t>(s)]);
      gram(k, s) = conj(gram(s, k));
    }
  }
  auto c = solve_consistent<GaussianRational>(gram, rhs);
  if (!c) throw std::runtime_error("inconsistent Gram system for dbar_b*: ambient family too small");
  AdjointResult result{PolyForm(n, beta.j() - 1), true};
  for (Eigen::Index k = 0; k < r; ++k)
    if (!(*c)(k).is_zero()) result.form += (*c)(k)*ambient[static_cast<std::size_t>(k)];
  for (const auto& t : test_family) {
    if (l2_inner_coefficient(result.form, t) != l2_inner_coefficient(beta, dbar_b(t))) {
      result.certified = false;
      break;
    }
  }
  return result;
}

namespace {

int total_degree(const Exponents& e) {
  int s = 0;
  for (auto x : e) s += x;
  return s;
}

}  // namespace

PolyForm dbar_b_star(const PolyForm& beta) {
  const int n = beta.n();
  PolyForm out(n, beta.j() - 1);
  for (const auto& [w, part] : beta.by_weight()) {
    int top = 0;
    int d = 0;
    for (const auto& [t, c] : part.terms()) {
      top = std::max(top, total_degree(t.z_exp));
      d = total_degree(t.z_exp) - total_degree(t.zbar_exp);
    }
    bool done = false;
    // The natural bidegree normally suffices; larger ones are tried before giving up.
    for (int extra = 0; extra < 3 && !done; ++extra) {
      const int za = top + extra;
      const auto ambient = monomial_family(n, beta.j() - 1, za, za - d + 1, w);
      const auto tests = monomial_family(n, beta.j() - 1, za + 1, za - d + 2, w);
      try {
        auto r = dbar_b_star(part, ambient, tests);
        if (r.certified) {
          out += r.form;
          done = true;
        }
      } catch (const std::runtime_error&) {
      }
    }
    if (!done) throw std::runtime_error("dbar_b* could not be certified in weight " + to_string(w, n));
  }
  return out;
}

PolyForm box_b(const PolyForm& alpha) {
  const int n = alpha.n();
  PolyForm out(n, alpha.j());
  if (alpha.j() >= 1) out += dbar_b(dbar_b_star(alpha));
  if (alpha.j() <= n - 2) out += dbar_b_star(dbar_b(alpha));
  return out;
}

PolyForm highest_weight_form(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  const int n = idx.n, j = idx.j, p = idx.p, q = idx.q;
  require_n(n);
  PolyForm f(n, j);
  FormTerm base;
  if (p > 0) base.z_exp[n - 1] = static_cast<std::uint8_t>(p);
  if (q > 1) base.zbar_exp[0] = static_cast<std::uint8_t>(q - 1);
  if (idx.kind == Kind::Phi) {
    if (q == 0) {
      f.add(base, 1);
      return f;
    }
    for (int i = 0; i <= j; ++i) {
      FormTerm t = base;
      ++t.zbar_exp[i];
      for (int c = 0; c <= j; ++c)
        if (c != i) t.wedge |= bit(c);
      f.add(t, sign_of(i));
    }
    return f;
  }
  if (p == -1) {
    for (int i = 0; i < n; ++i) {
      FormTerm t = base;
      ++t.zbar_exp[i];
      for (int c = 0; c < n; ++c)
        if (c != i) t.wedge |= bit(c);
      f.add(t, sign_of(i + 1 + n));
    }
    return f;
  }
  for (int c = 0; c < j; ++c) base.wedge |= bit(c);
  f.add(base, 1);
  return f;
}

ExactScalar highest_weight_norm_sq(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  const int n = idx.n, j = idx.j, p = idx.p, q = idx.q;
  if (idx.kind == Kind::Phi && q == 0) return {Rational(Integer(2) * factorial(p), factorial(p + n - 1)), n};
  if (idx.kind == Kind::Psi && p == -1) {
    // The Hodge dual of z_n^{q-1}: 2^{n-1} times its norm.
    return {Rational((Integer(1) << n) * factorial(q - 1), factorial(q + n - 2)), n};
  }
  const Integer head = (Integer(1) << (j + 1)) * factorial(p) * factorial(q - 1);
  const int tail = idx.kind == Kind::Phi ? q + j : p + n - j;
  return {Rational(head * tail, factorial(p + q + n - 1)), n};
}

namespace {

template <class Scalar, class FromRational>
Vec<Scalar> evaluate_impl(const PolyForm& alpha, const Vec<Scalar>& z, FromRational from) {
  const int n = alpha.n();
  if (z.size() != n) throw std::invalid_argument("point has the wrong dimension");
  const auto basis = wedge_basis(n, alpha.j());
  std::map<WedgeMask, Eigen::Index> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Eigen::Index>(i);
  Vec<Scalar> out = Vec<Scalar>::Constant(static_cast<Eigen::Index>(basis.size()), Scalar(0));
  for (const auto& [t, c] : alpha.terms()) {
    Scalar mono = from(c);
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < t.z_exp[m]; ++k) mono = mono * z(m);
      for (int k = 0; k < t.zbar_exp[m]; ++k) mono = mono * conj(z(m));
    }
    // Coordinates of the wedge of u_c = e_c - conj(z_c) z at each I: [I=C] minus the rank-one minors.
    for (WedgeMask i_mask : basis) {
      Scalar v(0);
      if (i_mask == t.wedge) {
        v = Scalar(1);
        for (int c = 0; c < n; ++c)
          if (has(t.wedge, c)) v = v - z(c) * conj(z(c));
      } else {
        const WedgeMask only_i = i_mask & ~t.wedge;
        const WedgeMask only_c = t.wedge & ~i_mask;
        if (popcount(only_i) != 1 || popcount(only_c) != 1) continue;
        const int i = std::countr_zero(static_cast<unsigned>(only_i));
        const int c = std::countr_zero(static_cast<unsigned>(only_c));
        const Scalar term = z(i) * conj(z(c));
        v = sign_of(position(i_mask, i) + position(t.wedge, c)) == 1 ? Scalar(0) - term : term;
      }
      out(pos[i_mask]) = out(pos[i_mask]) + mono * v;
    }
  }
  return out;
}

}  // namespace

Vec<GaussianRational> evaluate(const PolyForm& alpha, const ExactPoint& z) {
  return evaluate_impl<GaussianRational>(alpha, z, [](const GaussianRational& c) { return c; });
}

Eigen::VectorXcd evaluate(const PolyForm& alpha, const FloatPoint& z) {
  return evaluate_impl<std::complex<double>>(alpha, z, [](const GaussianRational& c) { return c.to_complex(); });
}

}  // namespace kohn
