// Reproducing kernels of the components, kernels of spectral multipliers, the operators M^theta,
// weighted Plancherel norms, shell sums and the Sobolev and Bochner-Riesz checks.
#pragma once

#include "kohn/coefficients.hpp"
#include "kohn/forms.hpp"
#include "kohn/rep.hpp"
#include "kohn/sphere.hpp"

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace kohn {

/// K = sum c_Upsilon K^Upsilon over finitely many components of one degree.
template <class Scalar>
struct KernelPolynomial {
  int n = 2;
  int j = 0;
  std::map<FormIndex, Scalar> coeffs;
};

using ExactKernel = KernelPolynomial<GaussianRational>;
using FloatKernel = KernelPolynomial<std::complex<double>>;

/// Throws std::invalid_argument if a coefficient sits on an invalid or foreign index.
template <class Scalar>
void check_kernel(const KernelPolynomial<Scalar>& k) {
  for (const auto& [idx, c] : k.coeffs)
    if (idx.n != k.n || idx.j != k.j || !is_valid(idx))
      throw std::invalid_argument("kernel coefficient on an invalid index " + to_string(idx));
}

FloatKernel to_float(const ExactKernel& k);
ExactKernel single_component(const FormIndex& idx);

/// A map between fibres written in the coordinates of Lambda^j C^n used by evaluate(). Both fibres
/// carry 2^j times the Euclidean metric there, so norms are the Euclidean matrix norms.
using HomMatrix = Eigen::MatrixXcd;

double operator_norm(const HomMatrix& a);
double hs_norm(const HomMatrix& a);

/// Lambda^j(g) in the wedge basis: the j x j minors of g.
template <class Scalar>
Mat<Scalar> wedge_power(const Mat<Scalar>& g, int j) {
  const int n = static_cast<int>(g.rows());
  const auto basis = wedge_basis(n, j);
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  auto indices = [n](WedgeMask m) {
    std::vector<Eigen::Index> out;
    for (int c = 0; c < n; ++c)
      if ((m >> c) & 1u) out.push_back(c);
    return out;
  };
  Mat<Scalar> out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto rows = indices(basis[static_cast<std::size_t>(r)]);
      const auto cols = indices(basis[static_cast<std::size_t>(c)]);
      Mat<Scalar> minor(j, j);
      for (int a = 0; a < j; ++a)
        for (int b = 0; b < j; ++b) minor(a, b) = g(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
      // Laplace expansion is fine for the small j that occur.
      std::function<Scalar(const Mat<Scalar>&)> det = [&det](const Mat<Scalar>& m) -> Scalar {
        const Eigen::Index k = m.rows();
        if (k == 0) return Scalar(1);
        Scalar s(0);
        for (Eigen::Index col = 0; col < k; ++col) {
          Mat<Scalar> sub(k - 1, k - 1);
          for (Eigen::Index a = 1; a < k; ++a)
            for (Eigen::Index b = 0, bb = 0; b < k; ++b)
              if (b != col) sub(a - 1, bb++) = m(a, b);
          const Scalar term = m(0, col) * det(sub);
          s = col % 2 == 0 ? s + term : s - term;
        }
        return s;
      };
      out(r, c) = det(minor);
    }
  return out;
}

/// K(., w) for fixed w stored as one form in z per column J of the matrix:
/// K(z,w) e_J = 2^j pi^{-n} kappa_J(z) in evaluation coordinates.
struct KernelColumns {
  int n = 2;
  int j = 0;
  ExactPoint w;
  std::vector<PolyForm> columns;
};

/// Gram-solve form of the kernel: sum_{r,s} (G^{-1})_{sr} alpha_r(z) <., alpha_s(w)> summed over
/// the support of k, weight space by weight space.
KernelColumns kernel_columns(RepEngine& engine, const ExactKernel& k, const ExactPoint& w);

/// Coefficient of pi^{-n} in K(z,w).
Mat<GaussianRational> kernel_value(const KernelColumns& k, const ExactPoint& z);
/// Coefficient of pi^{-n} in K^idx(z,w).
Mat<GaussianRational> reproducing_kernel(RepEngine& engine, const FormIndex& idx, const ExactPoint& z,
                                         const ExactPoint& w);

/// Integral over z of <K_a(z,w), K_b(z,w)>_HS.
ExactScalar hs_integral(const KernelColumns& a, const KernelColumns& b);
/// Multiplies every column by <z,w> (Z) or its conjugate (ZBar).
KernelColumns multiply_pairing(const KernelColumns& k, Direction direction);

/// Closed forms in the coefficients: sum |c|^2 dim / sigma, the same weighted by 1 - eps
/// (the squared norm of M K), and the theta = 1 weighted norm through the expansion of <z,w> K.
ExactScalar kernel_norm_sq(const ExactKernel& k);
ExactScalar m_norm_sq(const ExactKernel& k);
ExactScalar weighted_norm_sq_closed(const ExactKernel& k);
/// || weight(.,w)^theta |K(.,w)|_HS ||^2 from the kernel forms, theta in {0, 1}.
ExactScalar weighted_norm_sq_exact(RepEngine& engine, const ExactKernel& k, const ExactPoint& w, int theta);

/// Coefficientwise scaling by (1 - eps_{Upsilon Upsilon})^{theta/2}; theta in [0,1].
FloatKernel m_theta(const FloatKernel& k, double theta);

/// Multiplication by |<z,w>|^2 on coefficient vectors in double precision. Components get
/// consecutive ids on first sight; vectors are indexed by id and padded with zeros as ids grow.
/// Self-adjoint for the inner product sum c_a d_a dim_a / sigma.
class PairingOperator {
 public:
  PairingOperator(int n, int j);
  int id(const FormIndex& idx);
  const FormIndex& index(int id) const { return indices_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return indices_.size(); }
  std::vector<double> apply(std::vector<double> c);
  double inner(const std::vector<double>& c, const std::vector<double>& d) const;

 private:
  struct Hash {
    std::size_t operator()(const FormIndex& x) const;
  };
  int n_, j_;
  double inv_sigma_;
  std::unordered_map<FormIndex, int, Hash> ids_;
  std::vector<FormIndex> indices_;
  std::vector<double> dims_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<bool> row_ready_;
};

struct QuadratureResult {
  double value = 0;
  /// Difference from the rule with half as many nodes.
  double change = 0;
  int nodes = 0;
};

/// || weight^theta |K|_HS ||^2 = int (1 - x)^theta dmu(x), mu the spectral measure of K for
/// multiplication by |<z,w>|^2; Gauss rule from Lanczos on the coefficient space. Independent of w.
QuadratureResult weighted_norm_sq_quadrature(const FloatKernel& k, double theta, int nodes = 160);

/// Float kernel columns compiled for repeated evaluation.
class KernelEvaluator {
 public:
  KernelEvaluator() = default;
  /// Scales the exact columns by coeff and stores them at w.
  KernelEvaluator(const KernelColumns& k, std::complex<double> coeff = 1.0);

  int n() const { return n_; }
  int j() const { return j_; }
  /// Adds coeff times another evaluator at the same w.
  void add(const KernelEvaluator& other, std::complex<double> coeff);
  /// K(z,w) in evaluation coordinates, pi^{-n} included.
  HomMatrix operator()(const FloatPoint& z) const;
  std::size_t term_count() const { return terms_.size(); }

 private:
  int n_ = 2, j_ = 0, dim_ = 1;
  std::map<FormTerm, std::vector<std::complex<double>>> terms_;
};

/// K(z,w) for the kernel k0 stored at w = e_1, moved to w by a unitary g with g e_1 = w:
/// K(z,w) = Lambda^j(g) K(g^* z, e_1) Lambda^j(g)^*.
class RotatedKernel {
 public:
  RotatedKernel(const KernelEvaluator& at_e1, const FloatPoint& w);
  HomMatrix operator()(const FloatPoint& z) const;

 private:
  const KernelEvaluator* base_;
  Eigen::MatrixXcd g_, lambda_g_;
};

/// Monte Carlo || weight(.,w)^theta |K(.,w)|_HS ||^2 with uniform samples.
McEstimate weighted_norm_sq_mc(const KernelEvaluator& k, const FloatPoint& w, double theta, std::size_t samples,
                               std::uint64_t seed);

/// A scalar function with exact suprema over intervals.
class Multiplier {
 public:
  using Value = std::function<double(double)>;
  /// Supremum of |F| over the interval from lo to hi; lo_open excludes lo.
  using Sup = std::function<double(double lo, double hi, bool lo_open)>;

  Multiplier(std::string name, Value value, Sup sup);
  /// A function given only by values; suprema by sampling 1024 points per interval.
  static Multiplier sampled(std::string name, Value value);

  const std::string& name() const { return name_; }
  double operator()(double lambda) const { return value_(lambda); }
  double sup(double lo, double hi, bool lo_open = false) const { return sup_(lo, hi, lo_open); }

 private:
  std::string name_;
  Value value_;
  Sup sup_;
};

Multiplier constant_multiplier(double c);
/// The indicator of the interval from a to b with the chosen closed ends.
Multiplier indicator(double a, double b, bool a_closed = true, bool b_closed = true);
/// lambda on [0,1], zero elsewhere.
Multiplier ramp();
/// exp(1 - 1/(1 - x^2)) with x the position in (a,b) rescaled to (-1,1); peak 1 at the midpoint.
Multiplier bump(double a, double b);
/// (1 - t lambda^2)_+^delta.
Multiplier bochner_riesz(double t, double delta);
/// lambda -> F(lambda / s).
Multiplier dilate(const Multiplier& f, double s);

/// Coefficients F(lambda) on the components with 0 < lambda <= cap. For j in {0, n-1} the
/// infinite-dimensional kernel is skipped, which requires F(0) = 0 (std::domain_error otherwise).
FloatKernel multiplier_kernel(const Multiplier& f, int n, int j, double cap);

/// ((1/N) sum_i sup over the i-th cell of |F|^2)^{1/2}, cells ((i-1)/N, i/N] with the first closed.
double n_norm(const Multiplier& f, int cells);

struct PlancherelReport {
  double lhs = 0;              // || weight^theta |K|_HS ||^2
  double lhs_change = 0;       // quadrature change between node counts (0 when exact)
  double shell_max_sum = 0;    // sum_{i=2}^N max_{shell i} |c|^2
  double ratio_shells = 0;     // lhs / (N^{2n-1-2 theta} shell_max_sum)
  double n_norm_sq = 0;        // ||F(N .)||_{N,2}^2
  double ratio_n_norm = 0;     // lhs / (N^{2n-theta} n_norm_sq)
  std::size_t components = 0;
};

/// supp F within (0, N]. theta in {0, 1} use the closed forms; other theta use the quadrature.
PlancherelReport plancherel_check(const Multiplier& f, int n, int j, int N, double theta);

struct ShellEstimate {
  int i = 2;
  double theta = 0;
  double lattice_sum = 0;   // sum ((p'+q')/(p'q'))^{1-2 theta} over (i-1)^2 <= 2p'q' <= i^2
  Rational lattice_sum_exact;  // the same sum when theta = 0
  long long lattice_count = 0;
  double shell_sum = 0;     // sum over shell members of (1 - eps)^theta dim
  double ratio_lattice = 0;  // lattice_sum / i
  double ratio_shell = 0;    // shell_sum / i^{2(n - theta) - 1}
};

ShellEstimate shell_sum_estimate(int n, int j, double theta, int i);
/// 2^{2-2 theta} (zeta(2 - 2 theta) + 1), a proven bound for lattice_sum / i, theta in [0, 1/2).
double lattice_ratio_bound(double theta);

struct SobolevReport {
  double partial = 0;       // sum over shells up to the cutoff of (1+(r lambda)^2)^{-2 l} dim / sigma
  double tail_bound = 0;
  int shells = 0;
  double ratio = 0;         // (partial + tail) min(1, r^{2n})
};

/// Only for 0 < j < n-1 (the other degrees have an infinite-dimensional kernel). Requires l > n/2.
SobolevReport sobolev_check(int n, int j, double r, double l, int shells = 80);

/// Kernels of single components at w = e_1. Only the weight spaces nonzero at e_1 are used.
class KernelBank {
 public:
  KernelBank(RepEngine& engine, int n, int j);
  int n() const { return n_; }
  int j() const { return j_; }
  /// The evaluator of K^idx(., e_1), built on first use.
  const KernelEvaluator& component(const FormIndex& idx);
  /// Sum of F(lambda) K^idx(., e_1) over 0 < lambda^2 <= max_lambda_sq.
  KernelEvaluator combine(const Multiplier& f, long long max_lambda_sq);

 private:
  RepEngine* engine_;
  int n_, j_;
  std::map<FormIndex, KernelEvaluator> cache_;
};

/// int |K(z,w)| dsigma(z), operator norm pointwise, by importance sampling around w at the
/// scale where |1 - <z,w>| is about `scale`.
McEstimate kernel_l1_mc(const KernelEvaluator& at_e1, const FloatPoint& w, double scale, std::size_t samples,
                        std::uint64_t seed);

/// L^1 norm of the kernel of (1 - t box_b)_+^delta at w.
McEstimate bochner_riesz_l1(KernelBank& bank, double delta, double t, const FloatPoint& w, std::size_t samples,
                            std::uint64_t seed);

}  // namespace kohn
