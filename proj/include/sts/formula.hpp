#pragma once

#include <string>
#include <vector>

#include "sts/core.hpp"
#include "sts/term.hpp"

namespace sts {

enum class Rel { kEq, kNeq };

// One literal of a quantifier-free conjunction: (lhs rel rhs) where both
// sides are term trees whose leaves are variables or base points.
struct Literal {
  RawTerm lhs, rhs;
  Rel rel = Rel::kEq;
};

// Conjunction-only formula. Leaves found among the base points are
// constants; all other leaves are variables and are listed in vars.
struct Formula {
  std::vector<std::string> vars;
  std::vector<Literal> lits;
};

// Grammar: lit := term "=" term | term "!=" term, literals joined by "&".
// Unknown leaves become variables.
Formula parse_formula(const std::string& text, const PartialSts& base);

// Raw term parse with no leaf resolution (leaves may be variables).
RawTerm parse_term_any(const std::string& text);

std::string term_to_text(const RawTerm& t);

}  // namespace sts
