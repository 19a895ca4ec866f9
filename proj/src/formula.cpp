#include "sts/formula.hpp"

#include <algorithm>
#include <set>

namespace sts {

std::string term_to_text(const RawTerm& t) {
  if (!t.leaf.empty()) return t.leaf;
  return "(" + term_to_text(*t.l) + "." + term_to_text(*t.r) + ")";
}

namespace {

void collect_leaves(const RawTerm& t, std::set<std::string>& out) {
  if (!t.leaf.empty()) {
    out.insert(t.leaf);
    return;
  }
  collect_leaves(*t.l, out);
  collect_leaves(*t.r, out);
}

}  // namespace

Formula parse_formula(const std::string& text, const PartialSts& base) {
  Formula out;
  std::set<std::string> leaves;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t amp = text.find('&', pos);
    std::string part =
        text.substr(pos, amp == std::string::npos ? amp : amp - pos);
    Literal lit;
    std::size_t neq = part.find("!=");
    std::size_t eq = part.find('=');
    if (neq != std::string::npos) {
      lit.rel = Rel::kNeq;
      lit.lhs = parse_term_any(part.substr(0, neq));
      lit.rhs = parse_term_any(part.substr(neq + 2));
    } else if (eq != std::string::npos) {
      lit.rel = Rel::kEq;
      lit.lhs = parse_term_any(part.substr(0, eq));
      lit.rhs = parse_term_any(part.substr(eq + 1));
    } else {
      throw invalid_input("SyntaxError", "literal without '=' or '!=': " + part);
    }
    collect_leaves(lit.lhs, leaves);
    collect_leaves(lit.rhs, leaves);
    out.lits.push_back(std::move(lit));
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  for (const auto& l : leaves)
    if (!base.find_point(l)) out.vars.push_back(l);
  return out;
}

}  // namespace sts
