#pragma once

// Named binary domains used by the experiments and the shipped data files.

#include <string>
#include <string_view>
#include <vector>

#include "autorand/automata.hpp"

namespace autorand {

/// sigma-star, zero-star, one-star, zero-star-one-star, even-zeros,
/// zero-or-one-star, one-sigma-star, one-zero-star, zero-one-star,
/// zero-star-one-star-zero-star, no-double-one, finite-three, epsilon,
/// empty, prefix-family, shorter.
Dfa catalog_dfa(std::string_view name);
std::vector<std::string> catalog_names();

}  // namespace autorand
