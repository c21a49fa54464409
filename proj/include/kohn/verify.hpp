// Exact identity suites shared by the command line and the acceptance run.
#pragma once

#include "kohn/multiplier.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kohn {

struct CheckRow {
  std::string label;
  std::string lhs, rhs;
  bool ok = true;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// The first failing check with both sides printed exactly.
  std::string first_failure;
  /// Every equality check with both sides; filled only when VerifyOptions::keep_rows is set.
  std::vector<CheckRow> rows;

  bool passed() const { return failures == 0 && checks > 0; }
};

struct VerifyOptions {
  int n_min = 2;
  int n_max = 4;
  std::optional<int> j;  // all degrees when unset
  int pmax = 2;
  int qmax = 2;
  int point_pairs = 25;
  int random_kernels = 20;
  std::uint64_t seed = 1;
  bool keep_rows = false;
};

/// |dbar_b phi|^2 = lambda^2 |phi|^2 on highest weight forms, images in the expected components,
/// dbar_b Psi = 0 and dbar_b* Phi = 0; closed-form norms of the highest weight forms.
SuiteResult verify_eigenvalues(RepEngine& engine, const VerifyOptions& opt);
/// Closure ranks against the dimension formula.
SuiteResult verify_dimensions(const VerifyOptions& opt);
/// Projection-based coefficients against the closed forms, both directions.
SuiteResult verify_coefficients(RepEngine& engine, const VerifyOptions& opt);
/// Closed-form identities on the large range cap: destination sums, gamma relation, Hodge symmetry.
SuiteResult verify_table_identities(int n_min, int n_max, int cap, bool keep_rows = false);
/// Hilbert-Schmidt orthogonality and pointwise multiplication identities of the kernels.
SuiteResult verify_kernels(RepEngine& engine, const VerifyOptions& opt);
/// Exact weighted norms: the single-class identity and the theta = 1 decomposition.
SuiteResult verify_plancherel(RepEngine& engine, const VerifyOptions& opt);

}  // namespace kohn
