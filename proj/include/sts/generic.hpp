#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sts/core.hpp"
#include "sts/formula.hpp"
#include "sts/term.hpp"

namespace sts {

// An extension-axiom instance: a partial STS (outer) together with a
// relatively closed subset (inner). The axiom asserts that every embedded
// copy of the inner configuration extends to a copy of the outer one.
struct DeltaInstance {
  PartialSts outer;
  std::vector<int> inner;  // sorted outer point indices

  // Throws InnerNotClosed when inner is not relatively closed in outer.
  static DeltaInstance make(PartialSts outer, std::vector<int> inner);
};

// (delta_A, delta_B): pairwise inequalities plus one product equality per
// block under the (min, mid) -> third convention; delta_A over the inner
// points, delta_B over all of outer. Variables are the point names.
std::pair<Formula, Formula> delta_formulas(const DeltaInstance& inst);

struct DeltaVerdict {
  bool holds = true;
  // When false: an inner assignment (inner index -> point of M) admitting no
  // outer extension.
  std::vector<int> counterexample;
};

// Does the total system M satisfy this instance? Checked by embedding
// search: every block-preserving injective assignment of the inner system
// must extend to one of the outer system.
DeltaVerdict check_delta(const PartialSts& m, const DeltaInstance& inst,
                         std::uint64_t node_budget = 100'000'000);

// One representative per isomorphism class of instances with
// |outer| <= max_outer_size, deduplicated by two-colored canonical form.
std::vector<DeltaInstance> enumerate_delta(int max_outer_size);

// Staged approximation of the generic model: a chain M_0 = seed (total)
// with M_{i+1} total and containing, for every instance with
// |outer| <= instance_size_bound and every inner assignment into M_i, an
// outer extension. Fresh configurations are glued on and the stage is closed
// by finite completion; deterministic given rng_seed.
std::vector<PartialSts> generic_build(const PartialSts& seed_system,
                                      int stages, int instance_size_bound,
                                      std::uint64_t rng_seed,
                                      int max_order = 99);

struct IsolatingFormula {
  Formula formula;          // vars: the tuple, then the closure remainder
  int num_existential = 0;  // that many trailing variables are existential
};

// The prime-model isolating formula of a tuple: enumerate its generated
// closure in M, assert pairwise distinctness and every block product, and
// existentially quantify the non-tuple part.
IsolatingFormula isolating_formula(const std::vector<int>& tuple,
                                   const PartialSts& m);

// Bounded-rank quantifier-free type equivalence: true iff t1[i] -> t2[i]
// extends to an isomorphism between the partial systems induced on the
// rank-m closures of the two tuples in their universes.
bool qf_equiv_m(const FreeUniverse& u1, const std::vector<TermPtr>& t1,
                const FreeUniverse& u2, const std::vector<TermPtr>& t2, int m);

// The isomorphism behind qf_equiv_m as a term-text map from the rank-m
// closure of t1 onto that of t2; nullopt when the tuples are inequivalent.
std::optional<std::map<std::string, std::string>> qf_iso_m(
    const FreeUniverse& u1, const std::vector<TermPtr>& t1,
    const FreeUniverse& u2, const std::vector<TermPtr>& t2, int m);

// Convenience overload for point tuples in finite systems.
bool qf_equiv_m(const PartialSts& s1, const std::vector<int>& t1,
                const PartialSts& s2, const std::vector<int>& t2, int m);

}  // namespace sts
