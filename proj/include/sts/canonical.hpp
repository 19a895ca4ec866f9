#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sts/core.hpp"

namespace sts {

// Canonical label of the isomorphism class of a partial STS, optionally with
// point colors (two systems get equal labels iff there is a color-preserving
// isomorphism). Computed by iterated block-incidence refinement followed by
// a pruned backtracking search over class-consistent labelings.
//
// node_budget caps the number of labelings explored.
std::string canonical_form(const PartialSts& s,
                           const std::vector<int>& colors = {},
                           std::uint64_t node_budget = 200'000'000);

}  // namespace sts
