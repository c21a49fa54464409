#include "kohn/verify.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <sstream>

namespace kohn {

namespace {

class Recorder {
 public:
  Recorder(std::string name, bool keep_rows) : keep_(keep_rows) { r_.name = std::move(name); }

  template <class A, class B>
  void equal(const A& lhs, const B& rhs, const std::string& what) {
    ++r_.checks;
    const bool ok = lhs == rhs;
    if (keep_) r_.rows.push_back({what, to_string(lhs), to_string(rhs), ok});
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = what + ": lhs = " + to_string(lhs) + ", rhs = " + to_string(rhs);
  }

  void expect(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok && r_.failures++ == 0) r_.first_failure = what;
  }

  SuiteResult result() const { return r_; }

 private:
  bool keep_;
  SuiteResult r_;
};

std::vector<FormIndex> sources(const VerifyOptions& opt, int n) {
  std::vector<FormIndex> out;
  for (int j = 0; j <= n - 1; ++j) {
    if (opt.j && *opt.j != j) continue;
    for (const auto& idx : indices_in_box(n, j, opt.pmax, opt.qmax)) out.push_back(idx);
  }
  return out;
}

std::string mat_to_string(const Mat<GaussianRational>& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (Eigen::Index k = 0; k < m.cols(); ++k) os << (k ? ", " : "") << to_string(m(i, k));
  }
  os << "]";
  return os.str();
}

bool same(const Mat<GaussianRational>& a, const Mat<GaussianRational>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

ExactKernel random_kernel(const std::vector<FormIndex>& support, boost::random::mt19937_64& rng) {
  boost::random::uniform_int_distribution<int> coef(-3, 3);
  ExactKernel k{support.front().n, support.front().j, {}};
  for (const auto& idx : support) {
    GaussianRational c(Rational(coef(rng), 2), Rational(coef(rng), 3));
    if (c.is_zero()) c = 1;
    k.coeffs[idx] = c;
  }
  return k;
}

std::vector<ExactPoint> generic_points(int n, int count, std::uint64_t seed) {
  auto pts = rational_sphere_points(n, count + n, seed);
  return {pts.begin() + n, pts.end()};
}

}  // namespace

SuiteResult verify_eigenvalues(RepEngine& engine, const VerifyOptions& opt) {
  Recorder rec("eigenvalues", opt.keep_rows);
  for (int n = opt.n_min; n <= opt.n_max; ++n)
    for (const auto& idx : sources(opt, n)) {
      const std::string name = to_string(idx);
      const PolyForm f = highest_weight_form(idx);
      const ExactScalar norm = l2_norm_sq(f);
      rec.equal(norm, highest_weight_norm_sq(idx), "norm of the highest weight form of " + name);
      const ExactScalar lam(eigenvalue_sq(idx), 0);
      if (idx.j <= n - 2) {
        const PolyForm image = dbar_b(f);
        const ExactScalar image_norm = l2_norm_sq(image);
        if (idx.kind == Kind::Phi) {
          rec.equal(image_norm, lam * norm, "|dbar_b phi|^2 against lambda^2 |phi|^2 for " + name);
          const FormIndex target{n, idx.j + 1, idx.p, idx.q, Kind::Psi};
          if (is_valid(target))
            rec.equal(engine.projected_norm_sq(target, image), image_norm,
                      "dbar_b of " + name + " lies in " + to_string(target));
        } else {
          rec.equal(image_norm, ExactScalar(0, n), "dbar_b on " + name);
        }
      }
      if (idx.j >= 1) {
        const PolyForm image = dbar_b_star(f);
        const ExactScalar image_norm = l2_norm_sq(image);
        if (idx.kind == Kind::Psi) {
          rec.equal(image_norm, lam * norm, "|dbar_b* psi|^2 against lambda^2 |psi|^2 for " + name);
          const FormIndex target{n, idx.j - 1, idx.p, idx.q, Kind::Phi};
          if (is_valid(target))
            rec.equal(engine.projected_norm_sq(target, image), image_norm,
                      "dbar_b* of " + name + " lies in " + to_string(target));
        } else {
          rec.equal(image_norm, ExactScalar(0, n), "dbar_b* on " + name);
        }
      }
    }
  return rec.result();
}

SuiteResult verify_dimensions(const VerifyOptions& opt) {
  Recorder rec("dimensions", opt.keep_rows);
  for (int n = opt.n_min; n <= opt.n_max; ++n)
    for (const auto& idx : sources(opt, n)) {
      try {
        const InvariantSpace s = gl_closure(idx);
        rec.equal(Rational(s.rank), Rational(dimension(idx)), "closure rank of " + to_string(idx));
      } catch (const std::logic_error& e) {
        rec.expect(false, e.what());
      }
    }
  return rec.result();
}

SuiteResult verify_coefficients(RepEngine& engine, const VerifyOptions& opt) {
  Recorder rec("coefficients", opt.keep_rows);
  for (int n = opt.n_min; n <= opt.n_max; ++n)
    for (const auto& src : sources(opt, n))
      for (Direction d : {Direction::Z, Direction::ZBar})
        for (int dp = -1; dp <= 1; ++dp)
          for (int dq = -1; dq <= 1; ++dq)
            for (Kind k : {Kind::Phi, Kind::Psi}) {
              const FormIndex dst{n, src.j, src.p + dp, src.q + dq, k};
              if (!is_valid(dst)) continue;
              rec.equal(engine.empirical_coeff(d, src, dst), coeff(d, src, dst),
                        to_string(d) + " coefficient " + to_string(src) + " -> " + to_string(dst));
            }
  return rec.result();
}

SuiteResult verify_table_identities(int n_min, int n_max, int cap, bool keep_rows) {
  Recorder rec("table identities", keep_rows);
  for (int n = n_min; n <= n_max; ++n)
    for (int j = 0; j <= n - 1; ++j)
      for (const auto& src : indices_in_box(n, j, cap, cap))
        for (Direction d : {Direction::Z, Direction::ZBar}) {
          rec.equal(destination_sum(d, src), Rational(1), to_string(d) + " destination sum of " + to_string(src));
          const Direction other = d == Direction::Z ? Direction::ZBar : Direction::Z;
          for (const auto& dst : candidate_destinations(d, src)) {
            if (!is_valid(dst)) continue;
            rec.equal(coeff(d, src, dst), coeff(other, hodge_dual(src), hodge_dual(dst)),
                      "Hodge symmetry " + to_string(src) + " -> " + to_string(dst));
            // Phi at degree j against Psi at degree j+1 with the same (p,q) labels.
            if (src.kind != Kind::Phi || dst.kind != Kind::Phi || j > n - 2 || src.q < 1 || dst.q < 1) continue;
            const FormIndex psrc{n, j + 1, src.p, src.q, Kind::Psi}, pdst{n, j + 1, dst.p, dst.q, Kind::Psi};
            if (!is_valid(psrc) || !is_valid(pdst)) continue;
            const Rational ratio(lambda_sq(n, dst.p, dst.q, j), lambda_sq(n, src.p, src.q, j));
            if (d == Direction::Z)
              rec.equal(coeff(d, psrc, pdst), ratio * coeff(d, src, dst), "gamma relation at " + to_string(src));
            else
              rec.equal(coeff(d, src, dst), ratio * coeff(d, psrc, pdst), "gamma relation at " + to_string(src));
          }
        }
  return rec.result();
}

SuiteResult verify_kernels(RepEngine& engine, const VerifyOptions& opt) {
  Recorder rec("kernels", opt.keep_rows);
  for (int n = opt.n_min; n <= opt.n_max; ++n) {
    const ExactPoint w = generic_points(n, 1, opt.seed).front();
    for (int j = 0; j <= n - 1; ++j) {
      if (opt.j && *opt.j != j) continue;
      const auto comps = indices_in_box(n, j, opt.pmax, opt.qmax);
      std::vector<KernelColumns> cols;
      for (const auto& idx : comps) cols.push_back(kernel_columns(engine, single_component(idx), w));
      for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = a; b < comps.size(); ++b) {
          const ExactScalar expect = a == b ? ExactScalar(Rational(dimension(comps[a])) * Rational(factorial(n - 1), 2), -n)
                                            : ExactScalar(0, -n);
          rec.equal(hs_integral(cols[a], cols[b]), expect,
                    "HS integral of " + to_string(comps[a]) + " against " + to_string(comps[b]));
        }
    }
  }
  // Pointwise multiplication identities at rational point pairs, at the largest n of the range.
  const int n = opt.n_max;
  int side = 1;
  while (side * side < opt.point_pairs) ++side;
  const auto zs = generic_points(n, side, opt.seed + 1);
  const auto ws = generic_points(n, side, opt.seed + 2);
  int pairs = 0;
  for (const auto& z : zs)
    for (const auto& w : ws) {
      if (pairs++ >= opt.point_pairs) break;
      GaussianRational pairing;
      for (int m = 0; m < n; ++m) pairing += z(m) * conj(w(m));
      for (int j = 0; j <= n - 1; ++j) {
        if (opt.j && *opt.j != j) continue;
        std::map<FormIndex, Mat<GaussianRational>> values;
        auto value = [&](const FormIndex& idx) -> const Mat<GaussianRational>& {
          auto it = values.find(idx);
          if (it == values.end()) it = values.emplace(idx, reproducing_kernel(engine, idx, z, w)).first;
          return it->second;
        };
        for (const auto& src : indices_in_box(n, j, opt.pmax, opt.qmax))
          for (Direction d : {Direction::Z, Direction::ZBar}) {
            const GaussianRational factor = d == Direction::Z ? pairing : conj(pairing);
            Mat<GaussianRational> lhs = value(src);
            for (Eigen::Index i = 0; i < lhs.size(); ++i) lhs.data()[i] *= factor;
            Mat<GaussianRational> rhs = Mat<GaussianRational>::Constant(lhs.rows(), lhs.cols(), GaussianRational(0));
            for (const auto& dst : support(d, src)) {
              const GaussianRational c(coeff(d, src, dst));
              const auto& v = value(dst);
              for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs.data()[i] += c * v.data()[i];
            }
            const bool ok = same(lhs, rhs);
            rec.expect(ok, ok ? "" : to_string(d) + " multiplication of " + to_string(src) + ": lhs = " +
                                         mat_to_string(lhs) + ", rhs = " + mat_to_string(rhs));
          }
      }
    }
  return rec.result();
}

SuiteResult verify_plancherel(RepEngine& engine, const VerifyOptions& opt) {
  Recorder rec("plancherel", opt.keep_rows);
  boost::random::mt19937_64 rng(opt.seed);
  const int n = opt.n_max;
  const auto pts = generic_points(n, 4, opt.seed + 3);
  std::vector<std::vector<FormIndex>> classes;
  for (int j = 0; j <= n - 1; ++j) {
    if (opt.j && *opt.j != j) continue;
    for (Kind kind : {Kind::Phi, Kind::Psi})
      for (int residue = 0; residue < 3; ++residue) {
        std::vector<FormIndex> support;
        for (const auto& idx : indices_in_box(n, j, opt.pmax, opt.qmax))
          if (idx.kind == kind && (idx.p + idx.q) % 3 == residue) support.push_back(idx);
        if (!support.empty()) classes.push_back(support);
      }
  }
  for (int trial = 0; trial < opt.random_kernels && !classes.empty(); ++trial) {
    const auto& support = classes[static_cast<std::size_t>(trial) % classes.size()];
    const ExactKernel k = random_kernel(support, rng);
    const ExactPoint& w = pts[static_cast<std::size_t>(trial) % pts.size()];
    const std::string name = "single-class kernel on " + to_string(support.front()) + " ...";
    rec.equal(weighted_norm_sq_exact(engine, k, w, 1), m_norm_sq(k), name + ": |weight K|^2 against |M K|^2");
    rec.equal(weighted_norm_sq_exact(engine, k, w, 0), kernel_norm_sq(k), name + ": |K|^2");
  }
  // Mixed supports: the theta = 1 identity from the kernel forms against the coefficient expansion.
  for (int j = 0; j <= n - 1; ++j) {
    if (opt.j && *opt.j != j) continue;
    const ExactKernel k = random_kernel(indices_in_box(n, j, opt.pmax, opt.qmax), rng);
    for (const auto& w : pts)
      rec.equal(weighted_norm_sq_exact(engine, k, w, 1), weighted_norm_sq_closed(k),
                "weighted norm of a mixed kernel at degree " + std::to_string(j));
  }
  return rec.result();
}

}  // namespace kohn
