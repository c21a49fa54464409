#include "kohn/multiplier.hpp"

#include "kohn/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kohn {

namespace {

double to_dbl(const Integer& x) { return x.convert_to<double>(); }

double sigma_double(int n) { return 2 * std::pow(std::numbers::pi, n) / std::tgamma(n); }

// (n-1)!/2, the coefficient of pi^{-n} in 1/sigma.
Rational inv_sigma_coefficient(int n) { return Rational(factorial(n - 1), 2); }

bool is_e1(const ExactPoint& w) {
  for (Eigen::Index m = 0; m < w.size(); ++m)
    if (w(m) != GaussianRational(m == 0 ? 1 : 0)) return false;
  return true;
}

// Weights s e_1 + 1_D with D in {2..n}: the only weight spaces whose forms can be nonzero at e_1.
bool seen_from_e1(const Weight& nu, int n, int j) {
  int ones = 0;
  for (int m = 1; m < n; ++m) {
    if (nu[m] != 0 && nu[m] != 1) return false;
    ones += nu[m];
  }
  return ones == j;
}

// Wedge coordinates of u_{c_1} ^ ... ^ u_{c_j}, u_c = e_c - conj(z_c) z, for every wedge C.
Eigen::MatrixXcd wedge_frames(const FloatPoint& z, const std::vector<WedgeMask>& basis, int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out(d, d);  // column C, row I
  std::vector<std::vector<int>> idx(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (int c = 0; c < n; ++c)
      if ((basis[k] >> c) & 1u) idx[k].push_back(c);
  for (Eigen::Index cc = 0; cc < d; ++cc)
    for (Eigen::Index ii = 0; ii < d; ++ii) {
      const auto& cs = idx[static_cast<std::size_t>(cc)];
      const auto& is = idx[static_cast<std::size_t>(ii)];
      const Eigen::Index j = static_cast<Eigen::Index>(cs.size());
      Eigen::MatrixXcd m(j, j);
      for (Eigen::Index a = 0; a < j; ++a)
        for (Eigen::Index b = 0; b < j; ++b) {
          const int i = is[static_cast<std::size_t>(a)], c = cs[static_cast<std::size_t>(b)];
          m(a, b) = (i == c ? 1.0 : 0.0) - z(i) * std::conj(z(c));
        }
      out(ii, cc) = j == 0 ? std::complex<double>(1) : m.determinant();
    }
  return out;
}

McEstimate summarize(double sum, double sum_sq, std::size_t count) {
  McEstimate e;
  e.samples = count;
  const double c = static_cast<double>(count);
  e.mean = sum / c;
  e.std_error = std::sqrt(std::max(0.0, sum_sq / c - e.mean * e.mean) / (c - 1));
  return e;
}

}  // namespace

FloatKernel to_float(const ExactKernel& k) {
  FloatKernel out{k.n, k.j, {}};
  for (const auto& [idx, c] : k.coeffs) out.coeffs.emplace(idx, c.to_complex());
  return out;
}

ExactKernel single_component(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid component " + to_string(idx));
  return {idx.n, idx.j, {{idx, GaussianRational(1)}}};
}

double operator_norm(const HomMatrix& a) {
  if (a.size() == 0) return 0;
  return Eigen::JacobiSVD<HomMatrix>(a).singularValues()(0);
}

double hs_norm(const HomMatrix& a) { return a.norm(); }

// ---------------------------------------------------------------- exact kernels

KernelColumns kernel_columns(RepEngine& engine, const ExactKernel& k, const ExactPoint& w) {
  check_kernel(k);
  if (w.size() != k.n || !is_unit(w)) throw std::invalid_argument("w must be an exact unit point in C^n");
  const auto basis = wedge_basis(k.n, k.j);
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  KernelColumns out{k.n, k.j, w, std::vector<PolyForm>(basis.size(), PolyForm(k.n, k.j))};
  const bool at_e1 = is_e1(w);
  for (const auto& [idx, c] : k.coeffs) {
    if (c.is_zero()) continue;
    for (const auto& nu : engine.weights(idx)) {
      if (at_e1 && !seen_from_e1(nu, k.n, k.j)) continue;
      const WeightBlock& b = engine.block(idx, nu);
      const Eigen::Index size = static_cast<Eigen::Index>(b.forms.size());
      auto inv = exact_inverse<GaussianRational>(b.gram);
      if (!inv) throw std::logic_error("inconsistent Gram system for " + to_string(idx));
      Mat<GaussianRational> values(d, size);
      bool any = false;
      for (Eigen::Index s = 0; s < size; ++s) {
        values.col(s) = evaluate(b.forms[static_cast<std::size_t>(s)], w);
        for (Eigen::Index i = 0; i < d; ++i) any = any || !values(i, s).is_zero();
      }
      if (!any) continue;
      for (Eigen::Index col = 0; col < d; ++col)
        for (Eigen::Index r = 0; r < size; ++r) {
          GaussianRational coef;
          for (Eigen::Index s = 0; s < size; ++s)
            if (!values(col, s).is_zero()) coef += (*inv)(s, r) * conj(values(col, s));
          if (!coef.is_zero())
            out.columns[static_cast<std::size_t>(col)] += (c * coef) * b.forms[static_cast<std::size_t>(r)];
        }
    }
  }
  return out;
}

Mat<GaussianRational> kernel_value(const KernelColumns& k, const ExactPoint& z) {
  const Eigen::Index d = static_cast<Eigen::Index>(k.columns.size());
  Mat<GaussianRational> out(d, d);
  const GaussianRational scale{Rational(Integer(1) << k.j)};
  for (Eigen::Index col = 0; col < d; ++col) {
    const Vec<GaussianRational> v = evaluate(k.columns[static_cast<std::size_t>(col)], z);
    for (Eigen::Index i = 0; i < d; ++i) out(i, col) = scale * v(i);
  }
  return out;
}

Mat<GaussianRational> reproducing_kernel(RepEngine& engine, const FormIndex& idx, const ExactPoint& z,
                                         const ExactPoint& w) {
  return kernel_value(kernel_columns(engine, single_component(idx), w), z);
}

ExactScalar hs_integral(const KernelColumns& a, const KernelColumns& b) {
  if (a.n != b.n || a.j != b.j || a.columns.size() != b.columns.size())
    throw std::invalid_argument("kernels of different types");
  GaussianRational total;
  for (std::size_t col = 0; col < a.columns.size(); ++col)
    total += l2_inner_coefficient(a.columns[col], b.columns[col]);
  return {total * GaussianRational(Rational(Integer(1) << a.j)), -a.n};
}

KernelColumns multiply_pairing(const KernelColumns& k, Direction direction) {
  std::vector<GaussianRational> c;
  for (Eigen::Index m = 0; m < k.w.size(); ++m)
    c.push_back(direction == Direction::Z ? conj(k.w(m)) : k.w(m));
  KernelColumns out{k.n, k.j, k.w, {}};
  for (const auto& col : k.columns) out.columns.push_back(multiply_linear(col, c, direction == Direction::ZBar));
  return out;
}

ExactScalar kernel_norm_sq(const ExactKernel& k) {
  check_kernel(k);
  Rational total = 0;
  for (const auto& [idx, c] : k.coeffs) total += abs2(c) * Rational(dimension(idx));
  return {GaussianRational(total * inv_sigma_coefficient(k.n)), -k.n};
}

ExactScalar m_norm_sq(const ExactKernel& k) {
  check_kernel(k);
  Rational total = 0;
  for (const auto& [idx, c] : k.coeffs) total += (1 - epsilon(idx, idx)) * abs2(c) * Rational(dimension(idx));
  return {GaussianRational(total * inv_sigma_coefficient(k.n)), -k.n};
}

ExactScalar weighted_norm_sq_closed(const ExactKernel& k) {
  check_kernel(k);
  std::map<FormIndex, GaussianRational> shifted;
  for (const auto& [idx, c] : k.coeffs)
    for (const auto& dst : support(Direction::Z, idx))
      shifted[dst] += c * GaussianRational(coeff(Direction::Z, idx, dst));
  Rational total = 0;
  for (const auto& [idx, c] : k.coeffs) total += abs2(c) * Rational(dimension(idx));
  for (const auto& [idx, c] : shifted) total -= abs2(c) * Rational(dimension(idx));
  return {GaussianRational(total * inv_sigma_coefficient(k.n)), -k.n};
}

ExactScalar weighted_norm_sq_exact(RepEngine& engine, const ExactKernel& k, const ExactPoint& w, int theta) {
  if (theta != 0 && theta != 1) throw std::invalid_argument("exact weighted norms need theta in {0, 1}");
  const KernelColumns cols = kernel_columns(engine, k, w);
  ExactScalar total = hs_integral(cols, cols);
  if (theta == 1) {
    const KernelColumns shifted = multiply_pairing(cols, Direction::Z);
    total -= hs_integral(shifted, shifted);
  }
  return total;
}

FloatKernel m_theta(const FloatKernel& k, double theta) {
  if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("theta must lie in [0,1]");
  check_kernel(k);
  if (theta == 0) return k;
  FloatKernel out{k.n, k.j, {}};
  for (const auto& [idx, c] : k.coeffs)
    out.coeffs.emplace(idx, c * std::pow(to_double(1 - epsilon(idx, idx)), theta / 2));
  return out;
}

// ---------------------------------------------------------------- quadrature

std::size_t PairingOperator::Hash::operator()(const FormIndex& x) const {
  std::size_t h = static_cast<std::size_t>(x.p + 1) * 1000003u;
  h ^= static_cast<std::size_t>(x.q) * 9176u + static_cast<std::size_t>(x.kind == Kind::Psi);
  return h;
}

PairingOperator::PairingOperator(int n, int j) : n_(n), j_(j), inv_sigma_(1 / sigma_double(n)) {
  if (n < 2 || j < 0 || j > n - 1) throw std::invalid_argument("invalid degree");
}

int PairingOperator::id(const FormIndex& idx) {
  if (idx.n != n_ || idx.j != j_) throw std::invalid_argument("component of another degree");
  auto [it, inserted] = ids_.emplace(idx, static_cast<int>(indices_.size()));
  if (inserted) {
    indices_.push_back(idx);
    dims_.push_back(to_dbl(dimension(idx)));
    rows_.emplace_back();
    row_ready_.push_back(false);
  }
  return it->second;
}

std::vector<double> PairingOperator::apply(std::vector<double> c) {
  c.resize(size(), 0.0);
  std::vector<double> out(size(), 0.0);
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (c[a] == 0) continue;
    if (!row_ready_[a]) {
      const FormIndex src = indices_[a];  // copy: id() may reallocate
      std::vector<std::pair<int, double>> row;
      for (const auto& [dst, e] : epsilon_row_double(src))
        if (e != 0) row.emplace_back(id(dst), e);
      rows_[a] = std::move(row);
      row_ready_[a] = true;
      out.resize(size(), 0.0);
    }
    for (const auto& [b, e] : rows_[a]) out[static_cast<std::size_t>(b)] += c[a] * e;
  }
  return out;
}

double PairingOperator::inner(const std::vector<double>& c, const std::vector<double>& d) const {
  double s = 0;
  for (std::size_t a = 0; a < std::min(c.size(), d.size()); ++a) s += c[a] * d[a] * dims_[a];
  return s * inv_sigma_;
}

namespace {

// Nodes and weights of the Gauss rule from the leading m x m block of the Jacobi matrix.
double gauss_rule(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t m, double mass,
                  double theta) {
  if (m == 0) return 0;
  Eigen::VectorXd diag(static_cast<Eigen::Index>(m)), sub(static_cast<Eigen::Index>(m > 1 ? m - 1 : 0));
  for (std::size_t i = 0; i < m; ++i) diag(static_cast<Eigen::Index>(i)) = alpha[i];
  for (std::size_t i = 0; i + 1 < m; ++i) sub(static_cast<Eigen::Index>(i)) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  double total = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double x = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
    const double v = es.eigenvectors()(0, i);
    total += mass * v * v * (theta == 0 ? 1.0 : std::pow(1 - x, theta));
  }
  return total;
}

QuadratureResult lanczos_quadrature(PairingOperator& op, std::vector<double> start, double theta, int nodes) {
  const double mass = op.inner(start, start);
  if (mass == 0) return {0, 0, 0};
  const double norm = std::sqrt(mass);
  for (double& x : start) x /= norm;
  std::vector<double> prev, cur = std::move(start);
  std::vector<double> alpha, beta;
  for (int k = 0; k < nodes; ++k) {
    std::vector<double> v = op.apply(cur);
    cur.resize(v.size(), 0.0);
    prev.resize(v.size(), 0.0);
    const double a = op.inner(v, cur);
    alpha.push_back(a);
    const double b_prev = beta.empty() ? 0.0 : beta.back();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= a * cur[i] + b_prev * prev[i];
    const double b = std::sqrt(std::max(0.0, op.inner(v, v)));
    if (b < 1e-14) break;  // invariant subspace: the rule is exact
    beta.push_back(b);
    for (double& x : v) x /= b;
    prev = std::move(cur);
    cur = std::move(v);
  }
  const std::size_t m = alpha.size();
  QuadratureResult r;
  r.nodes = static_cast<int>(m);
  r.value = gauss_rule(alpha, beta, m, mass, theta);
  r.change = std::abs(r.value - gauss_rule(alpha, beta, m / 2, mass, theta));
  return r;
}

}  // namespace

QuadratureResult weighted_norm_sq_quadrature(const FloatKernel& k, double theta, int nodes) {
  if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("theta must lie in [0,1]");
  if (nodes < 2) throw std::invalid_argument("at least two nodes are required");
  check_kernel(k);
  QuadratureResult total;
  // |<z,w>|^2 acts by a real matrix, so real and imaginary parts contribute separately.
  for (int part = 0; part < 2; ++part) {
    PairingOperator op(k.n, k.j);
    std::vector<double> start;
    for (const auto& [idx, c] : k.coeffs) {
      const double x = part == 0 ? c.real() : c.imag();
      if (x == 0) continue;
      const int id = op.id(idx);
      start.resize(op.size(), 0.0);
      start[static_cast<std::size_t>(id)] = x;
    }
    const QuadratureResult r = lanczos_quadrature(op, std::move(start), theta, nodes);
    total.value += r.value;
    total.change += r.change;
    total.nodes = std::max(total.nodes, r.nodes);
  }
  return total;
}

// ---------------------------------------------------------------- float evaluation

KernelEvaluator::KernelEvaluator(const KernelColumns& k, std::complex<double> coeff)
    : n_(k.n), j_(k.j), dim_(static_cast<int>(k.columns.size())) {
  const double scale = std::ldexp(1.0, k.j) / std::pow(std::numbers::pi, k.n);
  for (std::size_t col = 0; col < k.columns.size(); ++col)
    for (const auto& [t, c] : k.columns[col].terms()) {
      auto& v = terms_[t];
      v.resize(static_cast<std::size_t>(dim_));
      v[col] += coeff * scale * c.to_complex();
    }
}

void KernelEvaluator::add(const KernelEvaluator& other, std::complex<double> coeff) {
  if (other.n_ != n_ || other.j_ != j_) throw std::invalid_argument("kernels of different types");
  for (const auto& [t, v] : other.terms_) {
    auto& mine = terms_[t];
    mine.resize(static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < v.size(); ++i) mine[i] += coeff * v[i];
  }
}

HomMatrix KernelEvaluator::operator()(const FloatPoint& z) const {
  if (z.size() != n_) throw std::invalid_argument("point has the wrong dimension");
  const auto basis = wedge_basis(n_, j_);
  const Eigen::MatrixXcd frames = wedge_frames(z, basis, n_);
  std::map<WedgeMask, Eigen::Index> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Eigen::Index>(i);
  int top = 0;
  for (const auto& [t, v] : terms_)
    for (int m = 0; m < n_; ++m) top = std::max({top, int(t.z_exp[m]), int(t.zbar_exp[m])});
  std::vector<std::vector<std::complex<double>>> pz(static_cast<std::size_t>(n_)), pzb(static_cast<std::size_t>(n_));
  for (int m = 0; m < n_; ++m) {
    auto& a = pz[static_cast<std::size_t>(m)];
    auto& b = pzb[static_cast<std::size_t>(m)];
    a.assign(static_cast<std::size_t>(top + 1), 1.0);
    b.assign(static_cast<std::size_t>(top + 1), 1.0);
    for (int e = 1; e <= top; ++e) {
      a[static_cast<std::size_t>(e)] = a[static_cast<std::size_t>(e - 1)] * z(m);
      b[static_cast<std::size_t>(e)] = b[static_cast<std::size_t>(e - 1)] * std::conj(z(m));
    }
  }
  HomMatrix out = HomMatrix::Zero(dim_, dim_);
  for (const auto& [t, v] : terms_) {
    std::complex<double> mono = 1.0;
    for (int m = 0; m < n_; ++m)
      mono *= pz[static_cast<std::size_t>(m)][t.z_exp[m]] * pzb[static_cast<std::size_t>(m)][t.zbar_exp[m]];
    const auto u = frames.col(pos.at(t.wedge));
    for (int col = 0; col < dim_; ++col) {
      const std::complex<double> c = v[static_cast<std::size_t>(col)];
      if (c != 0.0) out.col(col) += (c * mono) * u;
    }
  }
  return out;
}

RotatedKernel::RotatedKernel(const KernelEvaluator& at_e1, const FloatPoint& w)
    : base_(&at_e1), g_(unitary_with_first_column(w)) {
  lambda_g_ = wedge_power<std::complex<double>>(g_, at_e1.j());
}

HomMatrix RotatedKernel::operator()(const FloatPoint& z) const {
  const FloatPoint local = g_.adjoint() * z;
  return lambda_g_ * (*base_)(local) * lambda_g_.adjoint();
}

McEstimate weighted_norm_sq_mc(const KernelEvaluator& k, const FloatPoint& w, double theta, std::size_t samples,
                               std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  SphereSampler sampler(k.n(), seed);
  const double sigma = sigma_double(k.n());
  double sum = 0, sum_sq = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const FloatPoint z = sampler();
    const double x = std::norm(hermitian(z, w));
    const double f = sigma * std::pow(std::max(0.0, 1 - x), theta) * k(z).squaredNorm();
    sum += f;
    sum_sq += f * f;
  }
  return summarize(sum, sum_sq, samples);
}

// ---------------------------------------------------------------- multipliers

Multiplier::Multiplier(std::string name, Value value, Sup sup)
    : name_(std::move(name)), value_(std::move(value)), sup_(std::move(sup)) {}

Multiplier Multiplier::sampled(std::string name, Value value) {
  auto sup = [value](double lo, double hi, bool lo_open) {
    double best = std::abs(value(hi));
    if (!lo_open) best = std::max(best, std::abs(value(lo)));
    constexpr int kPoints = 1024;
    for (int k = 1; k < kPoints; ++k) best = std::max(best, std::abs(value(lo + (hi - lo) * k / kPoints)));
    return best;
  };
  return {std::move(name), std::move(value), sup};
}

Multiplier constant_multiplier(double c) {
  return {"constant", [c](double) { return c; }, [c](double, double, bool) { return std::abs(c); }};
}

Multiplier indicator(double a, double b, bool a_closed, bool b_closed) {
  auto value = [=](double x) {
    const bool left = a_closed ? x >= a : x > a;
    const bool right = b_closed ? x <= b : x < b;
    return left && right ? 1.0 : 0.0;
  };
  auto sup = [=](double lo, double hi, bool lo_open) {
    // Intersect [lo, hi] (lo possibly open) with the interval from a to b.
    double left = lo;
    bool left_open = lo_open;
    if (a > lo) {
      left = a;
      left_open = !a_closed;
    } else if (a == lo) {
      left_open = lo_open || !a_closed;
    }
    double right = hi;
    bool right_open = false;
    if (b < hi) {
      right = b;
      right_open = !b_closed;
    } else if (b == hi) {
      right_open = !b_closed;
    }
    const bool nonempty = left < right || (left == right && !left_open && !right_open);
    return nonempty ? 1.0 : 0.0;
  };
  return {"indicator", value, sup};
}

Multiplier ramp() {
  auto value = [](double x) { return x >= 0 && x <= 1 ? x : 0.0; };
  auto sup = [](double lo, double hi, bool lo_open) {
    if (hi < 0 || lo > 1 || (lo == 1 && lo_open)) return 0.0;
    return std::min(hi, 1.0);
  };
  return {"ramp", value, sup};
}

Multiplier bump(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("bump needs a < b");
  auto value = [=](double x) {
    const double s = (2 * x - a - b) / (b - a);
    return std::abs(s) < 1 ? std::exp(1 - 1 / (1 - s * s)) : 0.0;
  };
  auto sup = [=](double lo, double hi, bool) { return value(std::clamp((a + b) / 2, lo, hi)); };
  return {"bump", value, sup};
}

Multiplier bochner_riesz(double t, double delta) {
  if (!(t > 0) || !(delta > 0)) throw std::invalid_argument("Bochner-Riesz needs t > 0 and delta > 0");
  auto value = [=](double x) {
    const double base = 1 - t * x * x;
    return base > 0 ? std::pow(base, delta) : 0.0;
  };
  auto sup = [=](double lo, double hi, bool) {
    if (lo <= 0 && hi >= 0) return 1.0;
    return value(std::min(std::abs(lo), std::abs(hi)));
  };
  return {"bochner_riesz", value, sup};
}

Multiplier dilate(const Multiplier& f, double s) {
  if (!(s > 0)) throw std::invalid_argument("dilation factor must be positive");
  return {f.name(), [f, s](double x) { return f(x / s); },
          [f, s](double lo, double hi, bool lo_open) { return f.sup(lo / s, hi / s, lo_open); }};
}

FloatKernel multiplier_kernel(const Multiplier& f, int n, int j, double cap) {
  if (j < 0 || j > n - 1) throw std::invalid_argument("invalid degree");
  if ((j == 0 || j == n - 1) && f(0) != 0)
    throw std::domain_error("F(0) must vanish when j = 0 or j = n-1 (infinite-dimensional kernel)");
  FloatKernel k{n, j, {}};
  if (!(cap > 0)) return k;
  const auto max_sq = static_cast<long long>(std::floor(cap * cap + 1e-9));
  for (const auto& idx : indices_up_to(n, j, max_sq)) {
    const double c = f(std::sqrt(static_cast<double>(eigenvalue_sq(idx))));
    if (c != 0) k.coeffs.emplace(idx, c);
  }
  return k;
}

double n_norm(const Multiplier& f, int cells) {
  if (cells < 1) throw std::invalid_argument("need at least one cell");
  double total = 0;
  for (int i = 1; i <= cells; ++i) {
    const double s = f.sup(double(i - 1) / cells, double(i) / cells, i > 1);
    total += s * s;
  }
  return std::sqrt(total / cells);
}

// ---------------------------------------------------------------- Plancherel

namespace {

double norm_sq_double(const FloatKernel& k) {
  double total = 0;
  for (const auto& [idx, c] : k.coeffs) total += std::norm(c) * to_dbl(dimension(idx));
  return total / sigma_double(k.n);
}

double weighted_closed_double(const FloatKernel& k) {
  std::map<FormIndex, std::complex<double>> shifted;
  for (const auto& [idx, c] : k.coeffs)
    for (const auto& dst : candidate_destinations(Direction::Z, idx)) {
      const double e = coeff_double(Direction::Z, idx, dst);
      if (e != 0) shifted[dst] += c * e;
    }
  double total = 0;
  for (const auto& [idx, c] : shifted) total += std::norm(c) * to_dbl(dimension(idx));
  return norm_sq_double(k) - total / sigma_double(k.n);
}

}  // namespace

PlancherelReport plancherel_check(const Multiplier& f, int n, int j, int N, double theta) {
  if (N < 2) throw std::invalid_argument("N must be at least 2");
  if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("theta must lie in [0,1]");
  const FloatKernel k = multiplier_kernel(f, n, j, N);
  PlancherelReport r;
  r.components = k.coeffs.size();
  if (theta == 0) {
    r.lhs = norm_sq_double(k);
  } else if (theta == 1) {
    r.lhs = weighted_closed_double(k);
  } else {
    const QuadratureResult q = weighted_norm_sq_quadrature(k, theta);
    r.lhs = q.value;
    r.lhs_change = q.change;
  }
  for (int i = 2; i <= N; ++i) {
    double best = 0;
    for (const auto& idx : shell(n, j, i).members)
      if (auto it = k.coeffs.find(idx); it != k.coeffs.end()) best = std::max(best, std::norm(it->second));
    r.shell_max_sum += best;
  }
  if (r.shell_max_sum > 0) r.ratio_shells = r.lhs / (std::pow(N, 2 * n - 1 - 2 * theta) * r.shell_max_sum);
  r.n_norm_sq = std::pow(n_norm(dilate(f, 1.0 / N), N), 2);
  if (r.n_norm_sq > 0) r.ratio_n_norm = r.lhs / (std::pow(N, 2 * n - theta) * r.n_norm_sq);
  return r;
}

// ---------------------------------------------------------------- shells and Sobolev

ShellEstimate shell_sum_estimate(int n, int j, double theta, int i) {
  if (i < 2) throw std::invalid_argument("shell index must be at least 2");
  if (!(theta >= 0 && theta <= 0.5)) throw std::invalid_argument("theta must lie in [0, 1/2]");
  ShellEstimate e;
  e.i = i;
  e.theta = theta;
  const long long lo = static_cast<long long>(i - 1) * (i - 1), hi = static_cast<long long>(i) * i;
  for (long long p = 1; 2 * p <= hi; ++p) {
    const long long qmin = std::max(1LL, (lo + 2 * p - 1) / (2 * p)), qmax = hi / (2 * p);
    for (long long q = qmin; q <= qmax; ++q) {
      ++e.lattice_count;
      const Rational term(p + q, p * q);
      if (theta == 0) e.lattice_sum_exact += term;
      e.lattice_sum += std::pow(to_double(term), 1 - 2 * theta);
    }
  }
  for (const auto& idx : shell(n, j, i).members) {
    const double weight = theta == 0 ? 1.0 : std::pow(to_double(1 - epsilon(idx, idx)), theta);
    e.shell_sum += weight * to_dbl(dimension(idx));
  }
  e.ratio_lattice = e.lattice_sum / i;
  e.ratio_shell = e.shell_sum / std::pow(i, 2 * (n - theta) - 1);
  return e;
}

double lattice_ratio_bound(double theta) {
  if (!(theta >= 0 && theta < 0.5)) throw std::invalid_argument("theta must lie in [0, 1/2)");
  return std::pow(2.0, 2 - 2 * theta) * (std::riemann_zeta(2 - 2 * theta) + 1);
}

SobolevReport sobolev_check(int n, int j, double r, double l, int shells) {
  if (!(j > 0 && j < n - 1)) throw std::domain_error("the spectral sum diverges when j = 0 or j = n-1");
  if (!(l > n / 2.0)) throw std::domain_error("the spectral sum diverges unless l > n/2");
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (shells < 4) throw std::invalid_argument("need at least four shells");
  const double sigma = sigma_double(n);
  SobolevReport rep;
  rep.shells = shells;
  double dim_constant = 0;  // max over computed shells of (shell dimension) / i^{2n-1}
  for (int i = 2; i <= shells; ++i) {
    double shell_dim = 0;
    for (const auto& idx : shell(n, j, i).members) {
      const double lam_sq = static_cast<double>(eigenvalue_sq(idx));
      // Shell boundaries are shared, so count each component in the lowest shell holding it.
      if (lam_sq <= static_cast<double>(i - 1) * (i - 1) && i > 2) continue;
      const double d = to_dbl(dimension(idx));
      shell_dim += d;
      rep.partial += std::pow(1 + r * r * lam_sq, -2 * l) * d / sigma;
    }
    dim_constant = std::max(dim_constant, shell_dim / std::pow(i, 2 * n - 1));
  }
  // Tail over shells beyond the cutoff: lambda >= i-1 on shell i, shell dimension <= 2 C i^{2n-1}.
  const auto term = [&](double i) {
    return 2 * dim_constant * std::pow(i, 2 * n - 1) * std::pow(1 + r * r * (i - 1) * (i - 1), -2 * l) / sigma;
  };
  double tail = 0;
  int i = shells + 1;
  for (; i <= 100 * shells; ++i) tail += term(i);
  // The summand is eventually decreasing like i^{2n-1-4l}; bound the rest by an integral.
  const double exponent = 4 * l - 2 * n;
  tail += term(i) * i / exponent + term(i);
  rep.tail_bound = tail;
  rep.ratio = (rep.partial + rep.tail_bound) * std::min(1.0, std::pow(r, 2 * n));
  return rep;
}

// ---------------------------------------------------------------- Bochner-Riesz

KernelBank::KernelBank(RepEngine& engine, int n, int j) : engine_(&engine), n_(n), j_(j) {
  if (n < 2 || j < 0 || j > n - 1) throw std::invalid_argument("invalid degree");
}

const KernelEvaluator& KernelBank::component(const FormIndex& idx) {
  if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
  ExactPoint e1 = ExactPoint::Constant(n_, GaussianRational(0));
  e1(0) = 1;
  KernelEvaluator ev(kernel_columns(*engine_, single_component(idx), e1));
  return cache_.emplace(idx, std::move(ev)).first->second;
}

KernelEvaluator KernelBank::combine(const Multiplier& f, long long max_lambda_sq) {
  ExactPoint e1 = ExactPoint::Constant(n_, GaussianRational(0));
  e1(0) = 1;
  KernelEvaluator out(KernelColumns{n_, j_, e1, std::vector<PolyForm>(wedge_basis(n_, j_).size(), PolyForm(n_, j_))});
  for (const auto& idx : indices_up_to(n_, j_, max_lambda_sq)) {
    const double c = f(std::sqrt(static_cast<double>(eigenvalue_sq(idx))));
    if (c != 0) out.add(component(idx), c);
  }
  return out;
}

McEstimate kernel_l1_mc(const KernelEvaluator& at_e1, const FloatPoint& w, double scale, std::size_t samples,
                        std::uint64_t seed) {
  if (!is_unit(w)) throw std::invalid_argument("w must be a unit vector");
  if (!(scale > 0 && scale < 1)) throw std::invalid_argument("scale must lie in (0,1)");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const int n = static_cast<int>(w.size());
  const RotatedKernel kernel(at_e1, w);
  SphereSampler sampler(n, seed);
  const double sigma = sigma_double(n);
  const double pi = std::numbers::pi;
  const double log_span = std::log(2 / scale);
  double sum = 0, sum_sq = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    // u = <z,w> = 1 - rho e^{i phi}; rho is uniform by area below the scale and log-uniform above.
    double rho, density_rho;
    const bool inner = sampler.uniform(0, 1) < 0.5;
    if (inner) {
      rho = scale * std::sqrt(sampler.uniform(0, 1));
    } else {
      rho = scale * std::exp(log_span * sampler.uniform(0, 1));
    }
    density_rho = 0.5 * (rho < scale ? 2 * rho / (scale * scale) : 0.0) +
                  0.5 * (rho >= scale ? 1 / (rho * log_span) : 0.0);
    const double phi = sampler.uniform(-pi / 2, pi / 2);
    const std::complex<double> u = 1.0 - std::polar(rho, phi);
    const double r2 = std::norm(u);
    double f = 0;
    if (r2 < 1) {
      // The rest of z: a uniform unit vector orthogonal to w.
      FloatPoint v = sampler.gaussian();
      v -= w * hermitian(v, w);
      v /= v.norm();
      const FloatPoint z = u * w + std::sqrt(1 - r2) * v;
      const double density_u = density_rho / (pi * rho);  // per unit area of the u-disc
      const double push = (n - 1) / pi * std::pow(1 - r2, n - 2);
      f = sigma * push / density_u * operator_norm(kernel(z));
    }
    sum += f;
    sum_sq += f * f;
  }
  return summarize(sum, sum_sq, samples);
}

McEstimate bochner_riesz_l1(KernelBank& bank, double delta, double t, const FloatPoint& w, std::size_t samples,
                            std::uint64_t seed) {
  const Multiplier f = bochner_riesz(t, delta);
  const auto max_sq = static_cast<long long>(std::floor(1 / t));
  if (indices_up_to(static_cast<int>(w.size()), bank.j(), max_sq).empty())
    return {0, 0, samples};
  const KernelEvaluator k = bank.combine(f, max_sq);
  return kernel_l1_mc(k, w, std::min(0.5, t / 4), samples, seed);
}

}  // namespace kohn
