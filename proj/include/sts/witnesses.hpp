#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sts/core.hpp"

namespace sts {

// The two-parameter witness array: rows of triple-linked paths such that the
// path formula x = a_i.(b_i.(c_ij.x)) is satisfied down each column function
// f while any two cells of a row are jointly unsatisfiable.
struct Tp2Array {
  PartialSts sts;
  int rows = 0, cols = 0;
  // family label (a_0, b_1, c_0_1, d_01, as_0_1_01, bs_0_1_01, ...)
  // -> point token
  std::map<std::string, std::string> labels;

  std::string a(int i) const;
  std::string b(int i) const;
  std::string c(int i, int j) const;
  std::string d(const std::vector<int>& f) const;          // one f: rows->cols
  std::string a_star(int i, const std::vector<int>& f) const;
  std::string b_star(int i, const std::vector<int>& f) const;
  // all functions rows -> cols, lexicographic
  std::vector<std::vector<int>> functions() const;
};

Tp2Array tp2_array(int rows, int cols);

struct Tp2Report {
  bool path_satisfaction = false;   // every (f, i) path normalizes to d_f
  bool symbolic_cancellation = false;  // rows 2-inconsistent by cancellation
  bool no_joint_witness = false;    // brute force over terms of rank <= depth
  bool family_unions_valid = false; // per-cell systems glue without conflict
  int checked_paths = 0;
  std::uint64_t terms_scanned = 0;
  bool ok() const {
    return path_satisfaction && symbolic_cancellation && no_joint_witness &&
           family_unions_valid;
  }
};

// Throws VerificationFailed (internal) when a component that is a theorem of
// the construction fails.
Tp2Report verify_tp2(const Tp2Array& array, int depth);

// One attachment stage of the smallness chain.
struct Sma1Stage {
  int member = -1;   // family index attached at this stage
  int k = 0;         // size of the member's generating set
  int iterations = 0;  // free saturation steps run before attaching
  std::vector<std::string> product_free;  // the 2k+3 elements found
  std::vector<std::array<std::string, 3>> linking;  // {b_j, b_{k+j}, a_j}
};

struct Sma1Chain {
  std::vector<PartialSts> stages;  // B_0 .. B_t
  std::vector<Sma1Stage> logs;     // one per attachment (size t)
  // the renamed copy of the member glued in at each stage
  std::vector<PartialSts> attached;
};

// B_0 = three discrete points; each stage saturates undefined pairs with
// fresh products until 2k+3 pairwise product-free elements exist, then links
// a fresh copy of the next family member by the triples {b_j, b_{k+j}, a_j}
// over its generators. Members are cycled when prefix exceeds the family.
// Throws FamilyMemberTooSmall.
Sma1Chain sma1_build(const std::vector<PartialSts>& family, int prefix,
                     const std::vector<std::vector<std::string>>& generators = {});

struct Sma1Report {
  bool ok = true;
  std::vector<std::string> failures;
};

// Re-derives the chain properties from scratch: each attached member is a
// substructure of its stage, every stage point is an iterated product of
// previous-stage points, every sub-STS on > 3 points embeds into an attached
// member, and B_0 generates the final stage.
Sma1Report sma1_audit(const Sma1Chain& chain,
                      const std::vector<PartialSts>& family);

// All total sub-STSs of s with at least min_size points, found by closing
// defined triples and then saturating with fully-connected extra points.
// Unlike a raw closed-subset enumeration this stays polynomial on sparse
// partial systems, where almost every subset is vacuously closed.
std::vector<std::vector<int>> total_subsystems(const PartialSts& s,
                                               int min_size);

// True iff s has no proper sub-STS of order m with 3 < m < |s|.
bool proper_subsystem_free(const PartialSts& s);

// Seeded backtracking construction of a total STS of order n: repeatedly
// covers the first uncovered pair with a random feasible third point.
// Returns nullopt when the node budget runs out.
std::optional<PartialSts> random_sts(int n, std::uint64_t seed,
                                     std::uint64_t node_budget = 4'000'000);

// Randomized search for a total STS of order n with no proper sub-STS,
// certified by proper_subsystem_free. Throws NotAdmissible; returns nullopt
// when the time budget runs out.
std::optional<PartialSts> doyen_search(int n, double budget_seconds,
                                       std::uint64_t seed = 0);

// Builds smallness chains over subsystem-free systems of the listed orders
// and compares the final stages by canonical form. prefix < 0 attaches each
// family member once.
bool nonisomorphic_prefixes(const std::vector<int>& x,
                            const std::vector<int>& y, int prefix = -1);

}  // namespace sts
