#pragma once

#include <optional>

#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// Exhaustive search over flow trees of height <= max_height with every
/// annotation in {-inf} u [0, max_value]. Test oracle only: refuses
/// |V| > 3 or bounds above 8.
std::optional<Certificate> brute_force_certificate(const NormalizedGvas& g, std::size_t max_height,
                                                   Counter max_value);

}  // namespace cbound
