// Irreducible components of L^2 (0,j)-forms on the sphere: indices, eigenvalues, dimensions, shells.
#pragma once

#include "kohn/exact.hpp"

#include <compare>
#include <string>
#include <vector>

namespace kohn {

enum class Kind { Phi, Psi };

std::string to_string(Kind kind);
Kind parse_kind(std::string_view text);

/// Names one component Phi_{pqj} or Psi_{pqj} of the decomposition at dimension n.
struct FormIndex {
  int n = 2;
  int j = 0;
  int p = 0;
  int q = 0;
  Kind kind = Kind::Phi;

  friend auto operator<=>(const FormIndex&, const FormIndex&) = default;
};

std::string to_string(const FormIndex& idx);

/// Throws std::invalid_argument when n < 2 or j is outside [0, n-1].
bool is_valid_index(int n, int j, int p, int q, Kind kind);
bool is_valid(const FormIndex& idx);
/// Validating constructor.
FormIndex make_index(int n, int j, int p, int q, Kind kind);

/// lambda_{pqj}^2 = 2(q+j)(p+n-1-j), the square of the eigenvalue on Phi_{pqj}.
long long lambda_sq(int n, int p, int q, int j);
/// (lambda^Upsilon_{pqj})^2; Psi uses lambda_{pq(j-1)}.
long long eigenvalue_sq(const FormIndex& idx);

/// Weyl dimension of the U(n) irreducible with the given highest weight (0 if not nonincreasing).
Integer weyl_dimension(const std::vector<int>& weight);
/// Highest weight of the representation carried by the component.
std::vector<int> highest_weight(const FormIndex& idx);
/// Closed-form dimension; 0/0 factors are read as 1.
Integer dimension(const FormIndex& idx);

FormIndex hodge_dual(const FormIndex& idx);

struct SpectralShell {
  int i = 1;
  std::vector<FormIndex> members;
};

/// Members with (i-1)^2 <= lambda^2 <= i^2, sorted. Throws std::domain_error when the shell
/// contains an infinite-dimensional kernel (i = 1 with j in {0, n-1}).
SpectralShell shell(int n, int j, int i);

/// All valid indices of degree j with 0 < eigenvalue_sq <= max_lambda_sq, sorted.
std::vector<FormIndex> indices_up_to(int n, int j, long long max_lambda_sq);

/// Valid indices of degree j with p <= pmax and q <= qmax, sorted.
std::vector<FormIndex> indices_in_box(int n, int j, int pmax, int qmax);

}  // namespace kohn
