#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sts/errors.hpp"

namespace sts {

// A validated partial Steiner triple system: a finite point set plus blocks
// of size 3 such that every pair of distinct points lies in at most one
// block. Immutable after construction; the pair->third lookup table is built
// once at validation time.
//
// Idempotent triples (a,a,a) are never stored; product(a,a) == a is implicit.
class PartialSts {
 public:
  PartialSts() = default;

  // Checks all invariants and builds the product table. Throws on
  // DuplicatePoint, NonTernaryBlock (repeated member), UnknownPoint and
  // PairInTwoBlocks.
  static PartialSts validate(std::vector<std::string> points,
                             std::vector<std::array<std::string, 3>> blocks);

  // Same, with blocks given as point indices into `points`.
  static PartialSts from_indices(std::vector<std::string> points,
                                 std::vector<std::array<int, 3>> blocks);

  int size() const { return static_cast<int>(names_.size()); }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }

  const std::vector<std::string>& point_names() const { return names_; }
  const std::string& name(int p) const { return names_.at(p); }
  std::optional<int> find_point(std::string_view name) const;
  // Throws UnknownPoint.
  int point(std::string_view name) const;

  // Each block stored with ascending indices; block list sorted.
  const std::vector<std::array<int, 3>>& blocks() const { return blocks_; }

  // product(a,a) == a; otherwise the third point of the block through {a,b},
  // if any.
  std::optional<int> product(int a, int b) const;
  bool pair_defined(int a, int b) const;
  bool has_block(int a, int b, int c) const;

  // Blocks containing point p (indices into blocks()).
  const std::vector<int>& blocks_through(int p) const {
    return point_blocks_.at(p);
  }

  bool is_total() const;
  // True iff all products of pairs from `subset` that are defined land in
  // `subset`.
  bool is_relatively_closed(const std::vector<int>& subset) const;
  // Closure of `subset` under defined products; result sorted.
  std::vector<int> close_subset(std::vector<int> subset) const;
  // True iff every pair in `subset` has a product lying in `subset`.
  bool is_total_on(const std::vector<int>& subset) const;

  // The induced system on `subset` (blocks fully inside it). Point names are
  // kept; `subset` need not be closed.
  PartialSts induced(const std::vector<int>& subset) const;

  bool operator==(const PartialSts& other) const {
    return names_ == other.names_ && blocks_ == other.blocks_;
  }

 private:
  void check_point(int p) const;

  std::vector<std::string> names_;
  std::vector<std::array<int, 3>> blocks_;
  std::vector<int> pair_third_;              // size n*n, -1 when undefined
  std::vector<std::vector<int>> point_blocks_;
};

// Compatibility on a common point set, matched by name: every pair of points
// of `common` whose product is defined in both systems has equal products.
bool compatible(const PartialSts& s1, const PartialSts& s2,
                const std::vector<std::string>& common);

// Union of two systems compatible on their (name-wise) intersection.
// Throws IncompatibleSystems naming a witness pair.
PartialSts sts_union(const PartialSts& s1, const PartialSts& s2);

// Union of a pairwise-compatible family; IncompatibleSystems names the
// offending pair of indices.
PartialSts family_union(const std::vector<PartialSts>& family);

// All subsets X with min_size <= |X| <= max_size that are relatively closed
// and total, i.e. all sub-STSs. Each result sorted ascending; results sorted.
std::vector<std::vector<int>> sub_systems(const PartialSts& s, int min_size,
                                          int max_size);

}  // namespace sts
