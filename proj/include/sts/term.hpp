#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sts/core.hpp"

namespace sts {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// A term of the quasigroup freely generated by a base partial STS, stored
// only in normal form:
//   - no subterm u*u (idempotence),
//   - no subterm u*(u*w) in any arrangement (absorption),
//   - no node whose children are base leaves with a defined base product,
//   - children ordered by the fixed total term order (rank, then structure).
// Terms are immutable; equal normal forms have equal text().
class Term {
 public:
  static TermPtr leaf(std::string name);
  // Raw node constructor: callers must have established the invariants.
  // Use FreeUniverse::mul to multiply.
  static TermPtr node(TermPtr l, TermPtr r);

  bool is_leaf() const { return !l_; }
  const std::string& leaf_name() const { return name_; }
  const TermPtr& left() const { return l_; }
  const TermPtr& right() const { return r_; }

  // Number of leaf occurrences (Def: rank of a product is the sum).
  int rank() const { return rank_; }
  // Grammar form, e.g. "(a.(a.b))".
  const std::string& text() const { return name_; }

 private:
  Term() = default;
  std::string name_;  // leaf name, or grammar text for nodes
  TermPtr l_, r_;
  int rank_ = 1;
};

// Total order: by rank, then leaves by name, then lexicographically by
// (left, right). Returns <0, 0, >0.
int term_cmp(const TermPtr& u, const TermPtr& v);
inline bool term_eq(const TermPtr& u, const TermPtr& v) {
  return term_cmp(u, v) == 0;
}

struct TermLess {
  bool operator()(const TermPtr& u, const TermPtr& v) const {
    return term_cmp(u, v) < 0;
  }
};
using TermSet = std::set<TermPtr, TermLess>;

// Unnormalized syntax tree produced by the parser.
struct RawTerm {
  std::string leaf;  // nonempty iff leaf
  std::shared_ptr<RawTerm> l, r;
};

// Grammar: term := IDENT | "(" term "." term ")". Leaves are resolved
// against the base (UnknownPoint). Throws SyntaxError with the offset.
RawTerm parse_term(const std::string& text, const PartialSts& base);

// The free Steiner quasigroup over a base partial STS, exposed through its
// normal-form product. Stands in for the free extension at bounded depth.
class FreeUniverse {
 public:
  explicit FreeUniverse(PartialSts base) : base_(std::move(base)) {}

  const PartialSts& base() const { return base_; }
  TermPtr point(const std::string& name) const;  // leaf; UnknownPoint

  // Normalized product of two normal forms. Applies, in order: idempotence,
  // absorption, base-pair collapse; otherwise builds the ordered node.
  TermPtr mul(const TermPtr& u, const TermPtr& v) const;

  // Bottom-up normalization of a raw tree.
  TermPtr normalize(const RawTerm& raw) const;

  // { t(a_1..a_n) : t a syntactic term of rank <= k over A }, normalized.
  TermSet closure_k(const TermSet& gens, int k) const;

  // Closure of A under mul, exploring terms of rank <= budget.
  // complete=true iff a fixpoint was reached below the budget; the set is
  // then the full generated subquasigroup (= acl(A)).
  std::pair<TermSet, bool> generated(const TermSet& gens, int budget) const;

 private:
  PartialSts base_;
  mutable std::map<std::pair<std::string, std::string>, TermPtr> memo_;
};

// Remark-style chain test on a finite total system: A_0 = A,
// A_{n+1} = {a*b : a,b in A_n}; true iff the chain exhausts Q and every new
// element has exactly one unordered parent pair in the previous stage.
bool is_freely_generated(const PartialSts& q, const std::vector<int>& gens);

// Structural lift of a base homomorphism f (block-preserving point map
// baseS -> C, C total) to term images: node(u,v) -> product in C of the
// images. Throws NotAHomomorphism naming a violated block.
std::vector<int> extend_homomorphism(const std::map<std::string, int>& f,
                                     const PartialSts& baseS,
                                     const PartialSts& c,
                                     const std::vector<TermPtr>& targets);

}  // namespace sts
