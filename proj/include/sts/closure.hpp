#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sts/formula.hpp"
#include "sts/term.hpp"

namespace sts {

// Number of syntactic terms over num_vars variables with rank <= max_rank:
// T(1) = num_vars, T(r) = sum_{i<r} T(i)*T(r-i), answer sum_{r<=max_rank} T(r).
// Throws on unsigned-64 overflow instead of wrapping.
std::uint64_t count_terms(int num_vars, int max_rank);

// The certified closure-rank bound: k0 = count_terms(n+1, m) + 1 and
// k = 2^k0 * m. Throws Overflow when not representable.
std::uint64_t rank_bound_k(int n, int m);

// The conjunction of x != t over all syntactic terms t of rank <= k in the
// parameters, pruned to distinct normal forms (params treated as free
// generators). Throws SizeBudgetExceeded when the pruned literal count would
// exceed max_literals.
Formula psi_k(const std::string& target_var,
              const std::vector<std::string>& param_vars, int k,
              std::size_t max_literals = 10000);

// Algebraic closure of A: the generated subquasigroup (complete=true when
// fully enumerated within the rank budget).
inline std::pair<TermSet, bool> acl(const TermSet& a, const FreeUniverse& u,
                                    int budget) {
  return u.generated(a, budget);
}

enum class Verdict { kSat, kUnsat, kUnknown };

struct SatResult {
  Verdict verdict = Verdict::kUnknown;
  // On kSat: a finite partial STS extending the base whose free completion
  // hosts the witness, and the variable assignment into it.
  PartialSts extension;
  std::map<std::string, TermPtr> witness;
};

// Satisfiability of a conjunction over models of the squag theory extending
// the universe's base. Decided by congruence propagation over the flattened
// product triples (quasigroup-law closure + the base diagram); a kSat
// verdict carries a witness re-verified by normalization. depth caps the
// free-completion stages used while verifying; it never affects verdicts.
SatResult qf_satisfiable(const Formula& phi, const FreeUniverse& universe,
                         int depth = 2);

enum class Orbit { kInfinite, kFinite, kUnknown };

struct OrbitResult {
  Orbit verdict = Orbit::kUnknown;
  // The certified psi_k rank bound when representable.
  std::optional<std::uint64_t> k;
  SatResult sat;  // satisfiability of phi itself
};

// Eliminates "x has infinitely many solutions" for a one-free-variable
// conjunction: infinite iff phi is satisfiable with x off the closure of the
// parameters (equivalently phi /\ psi_k); finite iff phi is unsatisfiable or
// every solution is forced into the parameter closure by the equalities.
OrbitResult has_infinite_orbit(const Formula& phi, const std::string& x,
                               const FreeUniverse& universe);

}  // namespace sts
