#include "kohn/rep.hpp"

#include <bit>
#include <deque>
#include <set>
#include <stdexcept>

namespace kohn {

namespace {

WedgeMask bit(int c) { return static_cast<WedgeMask>(1u << c); }
bool has(WedgeMask m, int c) { return (m >> c) & 1u; }
int below(WedgeMask m, int c) { return std::popcount(static_cast<unsigned>(m & (bit(c) - 1))); }
int sign_of(int k) { return k % 2 == 0 ? 1 : -1; }

void add_to(TensorVector& v, const TensorKey& k, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = v.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

Weight highest(const FormIndex& idx) { return to_weight(highest_weight(idx)); }

}  // namespace

TensorSpace tensor_space(const FormIndex& idx) {
  if (!is_valid(idx)) throw std::invalid_argument("invalid index " + to_string(idx));
  if (idx.n > kMaxN) throw std::invalid_argument("n too large");
  TensorSpace s;
  s.n = idx.n;
  if (idx.kind == Kind::Phi) {
    if (idx.q == 0) {
      s.dual_degree = idx.p;
      return s;
    }
    s.dual_degree = idx.p;
    s.wedge_degree = idx.j + 1;
    s.vec_degree = idx.q - 1;
    s.map = FMap::Contract;
    return s;
  }
  if (idx.p == -1) {
    s.wedge_degree = idx.n;
    s.vec_degree = idx.q - 1;
    s.map = FMap::Contract;
    s.sign = sign_of(idx.n + 1);
    return s;
  }
  s.dual_degree = idx.p;
  s.wedge_degree = idx.j;
  s.vec_degree = idx.q - 1;
  return s;
}

Weight tensor_weight(const TensorKey& k) {
  Weight w{};
  for (int m = 0; m < kMaxN; ++m) w[m] = k.vec[m] + (has(k.wedge, m) ? 1 : 0) - k.dual[m];
  return w;
}

TensorVector primitive_vector(const FormIndex& idx) {
  const TensorSpace s = tensor_space(idx);
  TensorKey k;
  k.dual[s.n - 1] = static_cast<std::uint8_t>(s.dual_degree);
  for (int c = 0; c < s.wedge_degree; ++c) k.wedge |= bit(c);
  k.vec[0] = static_cast<std::uint8_t>(s.vec_degree);
  return {{k, GaussianRational(1)}};
}

TensorVector gl_action(int a, int b, const TensorVector& v, int n) {
  if (a < 1 || a > n || b < 1 || b > n) throw std::invalid_argument("matrix unit index out of range");
  --a;
  --b;
  TensorVector out;
  for (const auto& [k, c] : v) {
    if (k.dual[a] > 0) {
      TensorKey u = k;
      --u.dual[a];
      ++u.dual[b];
      add_to(out, u, c * GaussianRational(-static_cast<int>(k.dual[a])));
    }
    if (k.vec[b] > 0) {
      TensorKey u = k;
      --u.vec[b];
      ++u.vec[a];
      add_to(out, u, c * GaussianRational(static_cast<int>(k.vec[b])));
    }
    if (has(k.wedge, b)) {
      if (a == b) {
        add_to(out, k, c);
      } else if (!has(k.wedge, a)) {
        TensorKey u = k;
        const WedgeMask rest = static_cast<WedgeMask>(k.wedge & ~bit(b));
        u.wedge = static_cast<WedgeMask>(rest | bit(a));
        const int lo = std::min(a, b), hi = std::max(a, b);
        add_to(out, u, sign_of(below(rest, hi) - below(rest, lo + 1)) == 1 ? c : -c);
      }
    }
  }
  return out;
}

PolyForm f_map(const FormIndex& idx, const TensorVector& v) {
  const TensorSpace s = tensor_space(idx);
  PolyForm f(idx.n, idx.j);
  for (const auto& [k, c] : v) {
    if (popcount(k.wedge) != s.wedge_degree) throw std::invalid_argument("tensor outside the space of the component");
    const GaussianRational cs = s.sign == 1 ? c : -c;
    FormTerm t;
    t.z_exp = k.dual;
    t.zbar_exp = k.vec;
    if (s.map == FMap::Plain) {
      t.wedge = k.wedge;
      f.add(t, cs);
      continue;
    }
    int i = 0;
    for (int m = 0; m < idx.n; ++m) {
      if (!has(k.wedge, m)) continue;
      FormTerm u = t;
      ++u.zbar_exp[m];
      u.wedge = static_cast<WedgeMask>(k.wedge & ~bit(m));
      f.add(u, sign_of(i) == 1 ? cs : -cs);
      ++i;
    }
  }
  return f;
}

namespace {

// Gram matrix of forms that are all of one weight (or grouped by the caller).
Mat<GaussianRational> gram_of(const std::vector<PolyForm>& forms) {
  const Eigen::Index d = static_cast<Eigen::Index>(forms.size());
  Mat<GaussianRational> g(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index s = r; s < d; ++s) {
      g(r, s) = l2_inner_coefficient(forms[static_cast<std::size_t>(r)], forms[static_cast<std::size_t>(s)]);
      g(s, r) = conj(g(r, s));
    }
  return g;
}

Weight weight_of(const TensorVector& v) { return tensor_weight(v.begin()->first); }

}  // namespace

InvariantSpace gl_closure(const FormIndex& idx) {
  const int n = idx.n;
  SparseEchelon<TensorKey> span;
  std::deque<TensorVector> queue;
  const TensorVector v0 = primitive_vector(idx);
  span.insert(v0);
  queue.push_back(v0);
  const Integer dim = dimension(idx);
  while (!queue.empty()) {
    const TensorVector v = std::move(queue.front());
    queue.pop_front();
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        if (a == b) continue;  // the Cartan elements only rescale weight vectors
        TensorVector w = gl_action(a, b, v, n);
        if (w.empty()) continue;
        if (span.insert(w)) queue.push_back(std::move(w));
        if (Integer(span.rank()) > dim) throw std::logic_error("closure exceeds the dimension of " + to_string(idx));
      }
  }
  InvariantSpace out;
  out.idx = idx;
  out.spanning = span.basis();
  std::map<Weight, std::vector<std::size_t>> by_weight;
  for (std::size_t i = 0; i < out.spanning.size(); ++i) by_weight[weight_of(out.spanning[i])].push_back(i);
  const Eigen::Index d = static_cast<Eigen::Index>(out.spanning.size());
  out.gram = Mat<GaussianRational>::Constant(d, d, GaussianRational(0));
  for (const auto& [w, members] : by_weight) {
    std::vector<PolyForm> forms;
    for (std::size_t i : members) forms.push_back(f_map(idx, out.spanning[i]));
    const Mat<GaussianRational> g = gram_of(forms);
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t s = 0; s < members.size(); ++s)
        out.gram(static_cast<Eigen::Index>(members[r]), static_cast<Eigen::Index>(members[s])) =
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
    out.rank += exact_rank(g);
  }
  if (Integer(out.rank) != dim)
    throw std::logic_error("Gram rank " + std::to_string(out.rank) + " differs from the dimension of " +
                           to_string(idx));
  return out;
}

std::vector<SummandDims> tensor_component_dims(const FormIndex& idx, Direction direction) {
  const std::vector<int> lambda = highest_weight(idx);
  const int n = idx.n;
  const int k = idx.kind == Kind::Phi ? idx.j : idx.j - 1;
  const int zeros = n - 2 - k;
  struct Candidate {
    std::string label;
    bool exists;
    int position;  // 1-based
  };
  std::vector<Candidate> cands;
  int shift = 1;
  if (direction == Direction::ZBar) {
    cands = {{"(1)", true, 1}, {"(2)", k >= 1, 2}, {"(3)", zeros >= 1, k + 2}, {"(4)", true, n}};
  } else {
    shift = -1;
    cands = {{"(-1)", true, n}, {"(-2)", zeros >= 1, n - 1}, {"(-3)", k >= 1, k + 1}, {"(-4)", true, 1}};
  }
  std::vector<SummandDims> out;
  for (const auto& c : cands) {
    SummandDims s{c.label, {}, 0};
    if (c.exists) {
      s.weight = lambda;
      s.weight[static_cast<std::size_t>(c.position - 1)] += shift;
      s.dim = weyl_dimension(s.weight);
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct RepEngine::Cache {
  std::map<FormIndex, std::map<Weight, SparseEchelon<TensorKey>>> spaces;
  std::map<FormIndex, std::map<Weight, WeightBlock>> blocks;
  std::map<FormIndex, std::map<Weight, Mat<GaussianRational>>> solvers;
};

RepEngine::RepEngine() : cache_(std::make_shared<Cache>()) {}

namespace {

// nu lies below lambda in the dominance order and inside its entry range.
bool dominated(const Weight& nu, const Weight& lambda, int n) {
  int lo = lambda[0], hi = lambda[0];
  for (int m = 0; m < n; ++m) {
    lo = std::min(lo, lambda[m]);
    hi = std::max(hi, lambda[m]);
  }
  int partial = 0;
  for (int m = 0; m < n; ++m) {
    if (nu[m] < lo || nu[m] > hi) return false;
    partial += lambda[m] - nu[m];
    if (partial < 0) return false;
  }
  return partial == 0;
}

}  // namespace

const SparseEchelon<TensorKey>& RepEngine::weight_space(const FormIndex& idx, const Weight& nu) {
  auto& spaces = cache_->spaces[idx];
  if (auto it = spaces.find(nu); it != spaces.end()) return it->second;
  const Weight lambda = highest(idx);
  SparseEchelon<TensorKey> space;
  if (nu == lambda) {
    space.insert(primitive_vector(idx));
  } else if (dominated(nu, lambda, idx.n)) {
    // V_nu is spanned by the lowering operators E_{i+1,i} applied to the spaces just above.
    for (int i = 0; i + 1 < idx.n; ++i) {
      Weight up = nu;
      ++up[i];
      --up[i + 1];
      const auto& above = weight_space(idx, up);
      for (const auto& row : above.basis()) space.insert(gl_action(i + 2, i + 1, row, idx.n));
    }
  }
  return spaces.emplace(nu, std::move(space)).first->second;
}

const WeightBlock& RepEngine::block(const FormIndex& idx, const Weight& nu) {
  auto& blocks = cache_->blocks[idx];
  if (auto it = blocks.find(nu); it != blocks.end()) return it->second;
  WeightBlock b;
  b.basis = weight_space(idx, nu).basis();
  for (const auto& v : b.basis) b.forms.push_back(f_map(idx, v));
  b.gram = gram_of(b.forms);
  return blocks.emplace(nu, std::move(b)).first->second;
}

std::vector<Weight> RepEngine::weights(const FormIndex& idx) {
  const Weight lambda = highest(idx);
  std::set<Weight> seen{lambda};
  std::deque<Weight> queue{lambda};
  std::vector<Weight> out;
  while (!queue.empty()) {
    const Weight nu = queue.front();
    queue.pop_front();
    if (weight_space(idx, nu).rank() == 0) continue;
    out.push_back(nu);
    for (int i = 0; i + 1 < idx.n; ++i) {
      Weight down = nu;
      --down[i];
      ++down[i + 1];
      if (seen.insert(down).second) queue.push_back(down);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

WeightBlock RepEngine::component_space(const FormIndex& idx) {
  WeightBlock all;
  std::vector<const WeightBlock*> parts;
  Eigen::Index d = 0;
  for (const auto& w : weights(idx)) {
    parts.push_back(&block(idx, w));
    d += static_cast<Eigen::Index>(parts.back()->forms.size());
  }
  all.gram = Mat<GaussianRational>::Constant(d, d, GaussianRational(0));
  Eigen::Index off = 0;
  for (const auto* p : parts) {
    const Eigen::Index s = p->gram.rows();
    all.gram.block(off, off, s, s) = p->gram;
    all.basis.insert(all.basis.end(), p->basis.begin(), p->basis.end());
    all.forms.insert(all.forms.end(), p->forms.begin(), p->forms.end());
    off += s;
  }
  return all;
}

namespace {

struct Projection {
  PolyForm form;
  GaussianRational norm_sq;
};

}  // namespace

// Least squares in each weight space: sum_r c_r <<f_r, f_s>> = <<x, f_s>>.
static Projection project_impl(RepEngine& engine, std::map<Weight, Mat<GaussianRational>>& solvers,
                               const FormIndex& dst, const PolyForm& alpha, bool want_form) {
  if (alpha.n() != dst.n || alpha.j() != dst.j) throw std::invalid_argument("projecting a form of the wrong type");
  if (!is_valid(dst)) throw std::invalid_argument("invalid component " + to_string(dst));
  Projection out{PolyForm(alpha.n(), alpha.j()), GaussianRational(0)};
  for (const auto& [nu, part] : alpha.by_weight()) {
    const WeightBlock& b = engine.block(dst, nu);
    const Eigen::Index d = static_cast<Eigen::Index>(b.forms.size());
    if (d == 0) continue;
    auto it = solvers.find(nu);
    if (it == solvers.end()) {
      Mat<GaussianRational> a(d, d);
      for (Eigen::Index s = 0; s < d; ++s)
        for (Eigen::Index r = 0; r < d; ++r) a(s, r) = b.gram(r, s);
      auto inv = exact_inverse<GaussianRational>(a);
      if (!inv) throw std::logic_error("singular weight-space Gram matrix");
      it = solvers.emplace(nu, std::move(*inv)).first;
    }
    Vec<GaussianRational> rhs(d);
    for (Eigen::Index s = 0; s < d; ++s) rhs(s) = l2_inner_coefficient(part, b.forms[static_cast<std::size_t>(s)]);
    const Vec<GaussianRational> c = it->second * rhs;
    for (Eigen::Index r = 0; r < d; ++r) {
      out.norm_sq += c(r) * conj(rhs(r));
      if (want_form && !c(r).is_zero()) out.form += c(r) * b.forms[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

PolyForm RepEngine::project(const FormIndex& dst, const PolyForm& alpha) {
  return project_impl(*this, cache_->solvers[dst], dst, alpha, true).form;
}

ExactScalar RepEngine::projected_norm_sq(const FormIndex& dst, const PolyForm& alpha) {
  return {project_impl(*this, cache_->solvers[dst], dst, alpha, false).norm_sq, alpha.n()};
}

Rational RepEngine::empirical_coeff(Direction direction, const FormIndex& src, const FormIndex& dst) {
  return empirical_coeff(direction, src, dst, highest_weight_form(src));
}

Rational RepEngine::empirical_coeff(Direction direction, const FormIndex& src, const FormIndex& dst,
                                    const PolyForm& alpha) {
  if (!is_valid(src) || !is_valid(dst)) throw std::invalid_argument("invalid component");
  if (src.n != dst.n || src.j != dst.j) return 0;
  const GaussianRational norm = l2_inner_coefficient(alpha, alpha);
  if (norm.is_zero()) throw std::invalid_argument("alpha has zero norm");
  GaussianRational total;
  for (int m = 1; m <= src.n; ++m)
    total += projected_norm_sq(dst, multiply_coordinate(alpha, m, direction == Direction::ZBar)).coefficient();
  const GaussianRational ratio = total / norm * GaussianRational(Rational(dimension(src), dimension(dst)));
  if (!ratio.is_real()) throw std::logic_error("non-real projected norm");
  return ratio.real();
}

}  // namespace kohn
