// The U(n)-modules V_{pqk} inside tensor spaces, the maps F onto the components, and exact
// orthogonal projections onto the components computed weight space by weight space.
#pragma once

#include "kohn/coefficients.hpp"
#include "kohn/forms.hpp"
#include "kohn/linalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kohn {

/// Basis element (e*)^alpha (x) e_C (x) e^beta of Sym^p(C^n*) (x) Lambda^w C^n (x) Sym^{q-1}(C^n).
/// Only symmetric tensors occur in the modules generated by the primitive vectors.
struct TensorKey {
  Exponents dual{};
  WedgeMask wedge = 0;
  Exponents vec{};

  friend auto operator<=>(const TensorKey&, const TensorKey&) = default;
};

using TensorVector = std::map<TensorKey, GaussianRational>;

/// How a tensor basis element becomes a form.
enum class FMap {
  Contract,  // z^alpha zbar^beta sum_i (-1)^{i-1} zbar_{c_i} zeta_{C minus c_i}
  Plain,     // z^alpha zbar^beta zeta_C
};

struct TensorSpace {
  int n = 2;
  int dual_degree = 0;
  int wedge_degree = 0;
  int vec_degree = 0;
  FMap map = FMap::Plain;
  int sign = 1;  // overall sign of the map
};

/// The tensor space carrying the component and the map F onto it.
TensorSpace tensor_space(const FormIndex& idx);

Weight tensor_weight(const TensorKey& k);
TensorVector primitive_vector(const FormIndex& idx);
/// The matrix unit E_ab (1-based) acting by derivations.
TensorVector gl_action(int a, int b, const TensorVector& v, int n);
PolyForm f_map(const FormIndex& idx, const TensorVector& v);

struct InvariantSpace {
  FormIndex idx;
  std::vector<TensorVector> spanning;
  /// Gram matrix of the images under F, as coefficients of pi^n.
  Mat<GaussianRational> gram;
  Eigen::Index rank = 0;
};

/// Closure of the primitive vector under all E_ab, with the rank checked against the
/// dimension formula. Throws std::logic_error on a rank mismatch.
InvariantSpace gl_closure(const FormIndex& idx);

struct SummandDims {
  std::string label;
  std::vector<int> weight;
  Integer dim;
};

/// The four candidate summands of V (x) C^n (ZBar) or C^n* (x) V (Z), with Weyl dimensions.
std::vector<SummandDims> tensor_component_dims(const FormIndex& idx, Direction direction);

/// One weight space of a component: a basis of V_nu, its images and their Gram matrix.
struct WeightBlock {
  std::vector<TensorVector> basis;
  std::vector<PolyForm> forms;
  Mat<GaussianRational> gram;  // coefficient of pi^n, invertible
};

/// Caches weight spaces of components built by lowering from the primitive vector.
class RepEngine {
 public:
  RepEngine();

  /// Empty block when nu is not a weight of the component.
  const WeightBlock& block(const FormIndex& idx, const Weight& nu);
  /// All weights with nonzero weight space.
  std::vector<Weight> weights(const FormIndex& idx);
  /// Spanning forms of the whole component with their (block-diagonal) Gram matrix.
  WeightBlock component_space(const FormIndex& idx);

  PolyForm project(const FormIndex& dst, const PolyForm& alpha);
  ExactScalar projected_norm_sq(const FormIndex& dst, const PolyForm& alpha);

  /// dim(src)/dim(dst) sum_m ||P_dst(x_m alpha)||^2 / ||alpha||^2 with x_m = z_m (Z) or zbar_m (ZBar),
  /// alpha the highest weight form of src.
  Rational empirical_coeff(Direction direction, const FormIndex& src, const FormIndex& dst);
  /// The same ratio for a caller-supplied nonzero alpha in src.
  Rational empirical_coeff(Direction direction, const FormIndex& src, const FormIndex& dst, const PolyForm& alpha);

 private:
  struct Cache;
  const SparseEchelon<TensorKey>& weight_space(const FormIndex& idx, const Weight& nu);
  std::shared_ptr<Cache> cache_;
};

}  // namespace kohn
