#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sts/core.hpp"
#include "sts/term.hpp"

namespace sts {

// Result of joining or amalgamating two total systems: the ambient total
// system plus the two name maps realizing the embeddings.
struct Amalgam {
  PartialSts total;
  std::map<std::string, std::string> e1, e2;  // source name -> total name
};

// Joint embedding: disjoint union of two total systems closed off by finite
// completion. Images are disjoint substructures of the result.
Amalgam joint_embed(const PartialSts& q1, const PartialSts& q2,
                    int order_budget = 33);

// Amalgamation over a common subquasigroup, given as (q1 name, q2 name)
// pairs. Both sides must induce a total, relatively closed system on the
// shared points and agree on it; the union is then completed.
// Throws NotASubquasigroup on a bad shared set.
Amalgam amalgamate(const PartialSts& q1, const PartialSts& q2,
                   const std::vector<std::pair<std::string, std::string>>& shared,
                   int order_budget = 33);

using PointSet = std::vector<TermPtr>;

// A merged configuration: a partial system containing a copy of every input
// side over its parameter set, with the realizing names for the common A.
struct MergeResult {
  PartialSts extension;
  std::vector<std::string> a;  // enumeration of A in `extension`
  int depth;                   // certification depth of the equivalences
};

// Two-sided merge with disjoint parameter sets: A0 cap B0 = A1 cap B1 =
// B0 cap B1 = empty and (A0,B0) equivalent to (A1,B1) under the index-wise
// correspondence. Produces A equivalent to A0 over B0 and to A1 over B1.
// Throws HypothesisViolated / DepthExceeded.
MergeResult merge_al1(const FreeUniverse& u, const PointSet& a0,
                      const PointSet& b0, const PointSet& a1,
                      const PointSet& b1, int depth = 3);

// Two-sided merge over a shared parameter part E = B0 cap B1, under the
// hypotheses: A0 cap B0 = A1 cap B1, (A0,B0) equivalent to (A1,B1) over E,
// and <Ai E> cap Bi = E. Internal claim checks failing raise
// CompatibilityCheckFailed (they are theorems under the hypotheses).
MergeResult merge_al25(const FreeUniverse& u, const PointSet& a0,
                       const PointSet& a1, const PointSet& b0,
                       const PointSet& b1, int depth = 3);

// Checks the joint-consistency hypotheses that use a mediating set D
// (D equivalent to B0 over E A0 and to B1 over E A1), certifies the derived
// closedness equalities <Ai E> cap Bi = E, and runs the merge. Returns false
// when one of the D equivalences fails.
bool check_al3(const FreeUniverse& u, const PointSet& a0, const PointSet& a1,
               const PointSet& b0, const PointSet& b1, const PointSet& d,
               int depth = 3);

// t-fold merge of pairs (A_i, B_i) over the common E = B_i cap B_j: one A
// equivalent to every A_i over the corresponding B_i. t = 2 agrees with
// merge_al25; t = 1 returns A_0 in its own closure system.
MergeResult merge_family(const FreeUniverse& u,
                         const std::vector<std::pair<PointSet, PointSet>>& sides,
                         int depth = 3);

// Free independence of A and B over C: <AC> cap <BC> = <C> and <ABC> freely
// generated by <AC> u <BC>.
struct IndepResult {
  enum class Verdict { kIndependent, kDependent, kUnknown } verdict;
  TermPtr witness;  // dependence witness when kDependent
  int depth;        // certification depth
};

// Tri-state check at the given depth. Dependent when the closures meet
// outside <C> or when a freeness violation (an element with two parent
// pairs) appears on the explored generation chain; independent when
// <AC>, <BC>, <C> are complete at the depth and every explored level is
// free; unknown when those closures could not be completed.
IndepResult indep(const FreeUniverse& u, const PointSet& a, const PointSet& b,
                  const PointSet& c, int depth);

// A fresh copy A' of A over C, independent from B over C: the base system
// extended by renamed generators carrying A's relations, with the names of
// A', B and C in it. Both the equivalence and the independence verdict are
// re-checked before returning.
struct ExistenceWitness {
  PartialSts base;
  std::vector<std::string> a_prime, b, c;
  int depth;
};

ExistenceWitness full_existence_witness(const FreeUniverse& u,
                                        const PointSet& a, const PointSet& b,
                                        const PointSet& c, int depth = 3);

}  // namespace sts
