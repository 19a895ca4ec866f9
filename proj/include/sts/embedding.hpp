#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sts/core.hpp"

namespace sts {

// An injective block-preserving map between partial STSs, as
// source-index -> target-index.
struct Embedding {
  std::vector<int> map;
};

struct EmbedOptions {
  // Also reflect blocks on the image (model-theoretic substructure
  // embedding).
  bool substructure = false;
  std::uint64_t node_budget = 100'000'000;
  std::size_t max_results = static_cast<std::size_t>(-1);
};

// All embeddings of src into tgt extending the partial map `base`
// (source index, target index pairs), exhaustive up to the node budget.
// Ordering is deterministic. Throws BudgetExceeded.
std::vector<Embedding> find_embeddings(
    const PartialSts& src, const PartialSts& tgt,
    const std::vector<std::pair<int, int>>& base = {},
    const EmbedOptions& opt = {});

bool embedding_exists(const PartialSts& src, const PartialSts& tgt,
                      const std::vector<std::pair<int, int>>& base = {},
                      bool substructure = false);

}  // namespace sts
