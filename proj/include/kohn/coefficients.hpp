// Closed-form multiplication coefficients of the projection kernels by <z,w> and its conjugate.
#pragma once

#include "kohn/exact.hpp"
#include "kohn/spectrum.hpp"

#include <map>
#include <vector>

namespace kohn {

/// Z multiplies a kernel by <z,w>; ZBar by its conjugate.
enum class Direction { Z, ZBar };

std::string to_string(Direction d);
Direction parse_direction(std::string_view text);

/// Coefficient of K^{dst} in the expansion of <z,w> K^{src} (Z) or conj<z,w> K^{src} (ZBar).
/// Zero for invalid dst or dst off the table.
Rational coeff(Direction direction, const FormIndex& src, const FormIndex& dst);

/// The same closed forms in floating point, for large sweeps.
double coeff_double(Direction direction, const FormIndex& src, const FormIndex& dst);

/// The candidates a product can land in, valid or not, in a fixed order.
std::vector<FormIndex> candidate_destinations(Direction direction, const FormIndex& src);

/// Valid destinations with nonzero coefficient.
std::vector<FormIndex> support(Direction direction, const FormIndex& src);

struct CoeffTable {
  FormIndex source;
  Direction direction = Direction::Z;
  std::map<FormIndex, Rational> entries;
};

CoeffTable coeff_table(Direction direction, const FormIndex& src);

/// Coefficient of K^{dst} in |<z,w>|^2 K^{src}: sum over mid of coeff(ZBar, src, mid) *
/// coeff(Z, mid, dst). The Z-first composition gives the same numbers.
Rational epsilon(const FormIndex& src, const FormIndex& dst);
Rational epsilon_z_first(const FormIndex& src, const FormIndex& dst);

/// The nonzero entries of |<z,w>|^2 K^{src}.
std::map<FormIndex, Rational> epsilon_row(const FormIndex& src);

std::map<FormIndex, double> epsilon_row_double(const FormIndex& src);

/// Sum over destinations of dim(dst)/dim(src) * coeff; equals 1.
Rational destination_sum(Direction direction, const FormIndex& src);

/// (1 - eps)(2+p+q)^2 / ((2+p)(2+q)) maximised over diagonal entries with p, q <= cap.
Rational conti_constant(int n, int j, int cap);

}  // namespace kohn
