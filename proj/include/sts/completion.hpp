#pragma once

#include <cstdint>
#include <vector>

#include "sts/core.hpp"

namespace sts {

// One step of the free chain: for every pair of distinct points with no
// defined product, adjoin one fresh point and the block completing the pair.
// Fresh points are named "<a>*<b>#<depth_label>" from the sorted name pair
// (with a tick appended on the rare name clash), so chains are reproducible.
PartialSts free_step(const PartialSts& s, int depth_label = 1);

// The depth-d stage of the free one-step chain: d-fold iterate of free_step.
PartialSts free_truncation(const PartialSts& s, int depth);

// All n in [lo, hi] with n = 1 or 3 (mod 6), ascending: the orders at which
// total STSs exist.
std::vector<int> admissible_orders(int lo, int hi);

struct CompleteOptions {
  int max_order = 27;
  std::uint64_t seed = 0;
  // Backtracking nodes allowed per candidate order before falling through to
  // the next admissible order.
  std::uint64_t nodes_per_order = 4'000'000;
};

// Embeds s into a total STS of admissible order <= max_order as a
// substructure: the result restricted to the points of s has exactly the
// blocks of s. Tries each admissible order ascending with seeded
// backtracking over pair products. Deterministic given the seed.
//
// Throws NoCompletionWithinBound when every order up to max_order is
// exhausted or runs out of nodes.
PartialSts complete_finite(const PartialSts& s, const CompleteOptions& opt = {});

}  // namespace sts
