#pragma once

#include "polyconv/scalar.hpp"

#include <vector>

namespace polyconv {

enum class PsdClass { PositiveDefinite, PositiveSemidefinite, Indefinite };

// Classification by the signs of all 2^n - 1 principal minors Delta_E,
// E over the nonempty subsets of {1..n}. Exact rational arithmetic; n <= 12.
PsdClass sylvester_psd(const std::vector<std::vector<Rat>>& H);

// Double entries are dyadic rationals; classified exactly after conversion.
PsdClass sylvester_psd(const std::vector<std::vector<double>>& H);

const char* psd_class_name(PsdClass c);

}  // namespace polyconv
