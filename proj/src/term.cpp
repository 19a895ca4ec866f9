#include "sts/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace sts {

TermPtr Term::leaf(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->name_ = std::move(name);
  t->rank_ = 1;
  return t;
}

TermPtr Term::node(TermPtr l, TermPtr r) {
  auto t = std::shared_ptr<Term>(new Term());
  t->name_ = "(" + l->text() + "." + r->text() + ")";
  t->rank_ = l->rank() + r->rank();
  t->l_ = std::move(l);
  t->r_ = std::move(r);
  return t;
}

int term_cmp(const TermPtr& u, const TermPtr& v) {
  if (u.get() == v.get()) return 0;
  if (u->rank() != v->rank()) return u->rank() < v->rank() ? -1 : 1;
  if (u->is_leaf()) return u->leaf_name().compare(v->leaf_name());
  if (int c = term_cmp(u->left(), v->left())) return c;
  return term_cmp(u->right(), v->right());
}

namespace {

struct Parser {
  const std::string& text;
  const PartialSts* base;  // when set, leaves are resolved against it
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw invalid_input("SyntaxError",
                        what + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  RawTerm term() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    if (text[pos] == '(') {
      ++pos;
      RawTerm out;
      out.l = std::make_shared<RawTerm>(term());
      skip_ws();
      if (pos >= text.size() || text[pos] != '.') fail("expected '.'");
      ++pos;
      out.r = std::make_shared<RawTerm>(term());
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return out;
    }
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
           text[pos] != '.' && !std::isspace((unsigned char)text[pos]))
      ++pos;
    if (pos == start) fail("expected a point name or '('");
    RawTerm out;
    out.leaf = text.substr(start, pos - start);
    if (base) base->point(out.leaf);  // throws UnknownPoint
    return out;
  }
};

RawTerm parse_with(const std::string& text, const PartialSts* base) {
  Parser p{text, base};
  RawTerm out = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

}  // namespace

RawTerm parse_term(const std::string& text, const PartialSts& base) {
  return parse_with(text, &base);
}

RawTerm parse_term_any(const std::string& text) {
  return parse_with(text, nullptr);
}

TermPtr FreeUniverse::point(const std::string& name) const {
  base_.point(name);  // throws UnknownPoint
  return Term::leaf(name);
}

TermPtr FreeUniverse::mul(const TermPtr& u, const TermPtr& v) const {
  if (term_eq(u, v)) return u;  // idempotence
  // absorption: w * (w . x) = x in every arrangement
  if (!v->is_leaf()) {
    if (term_eq(v->left(), u)) return v->right();
    if (term_eq(v->right(), u)) return v->left();
  }
  if (!u->is_leaf()) {
    if (term_eq(u->left(), v)) return u->right();
    if (term_eq(u->right(), v)) return u->left();
  }
  // base collapse: a defined base pair multiplies to its third point
  if (u->is_leaf() && v->is_leaf()) {
    auto p = base_.product(base_.point(u->leaf_name()),
                           base_.point(v->leaf_name()));
    if (p) return Term::leaf(base_.name(*p));
  }
  const bool flip = term_cmp(u, v) > 0;
  const TermPtr &l = flip ? v : u, &r = flip ? u : v;
  auto key = std::make_pair(l->text(), r->text());
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  auto t = Term::node(l, r);
  memo_.emplace(std::move(key), t);
  return t;
}

TermPtr FreeUniverse::normalize(const RawTerm& raw) const {
  if (!raw.leaf.empty()) return point(raw.leaf);
  return mul(normalize(*raw.l), normalize(*raw.r));
}

TermSet FreeUniverse::closure_k(const TermSet& gens, int k) const {
  if (k < 1) throw invalid_input("BadRank", "k must be >= 1");
  // stratify by formal rank over the generators
  std::vector<TermSet> level(k + 1);
  level[1] = gens;
  for (int r = 2; r <= k; ++r)
    for (int i = 1; i < r; ++i)
      for (const auto& x : level[i])
        for (const auto& y : level[r - i]) level[r].insert(mul(x, y));
  TermSet out;
  for (int r = 1; r <= k; ++r) out.insert(level[r].begin(), level[r].end());
  return out;
}

std::pair<TermSet, bool> FreeUniverse::generated(const TermSet& gens,
                                                 int budget) const {
  if (budget < 1) throw invalid_input("BadRank", "budget must be >= 1");
  TermSet s = gens;
  bool truncated = false;
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<TermPtr> fresh;
    for (const auto& x : s)
      for (const auto& y : s) {
        auto p = mul(x, y);
        if (s.count(p)) continue;
        if (p->rank() > budget) {
          truncated = true;
          continue;
        }
        fresh.push_back(p);
      }
    for (auto& p : fresh) grew |= s.insert(std::move(p)).second;
  }
  return {std::move(s), !truncated};
}

bool is_freely_generated(const PartialSts& q, const std::vector<int>& gens) {
  if (!q.is_total())
    throw invalid_input("NotTotal", "freeness chain test needs a total system");
  std::set<int> cur(gens.begin(), gens.end());
  for (int c : gens)
    if (c < 0 || c >= q.size())
      throw invalid_input("UnknownPoint", "generator index out of range");
  while ((int)cur.size() < q.size()) {
    std::map<int, int> parent_pairs;  // new element -> number of parent pairs
    for (auto a = cur.begin(); a != cur.end(); ++a)
      for (auto b = std::next(a); b != cur.end(); ++b) {
        int p = *q.product(*a, *b);
        if (!cur.count(p)) ++parent_pairs[p];
      }
    if (parent_pairs.empty()) return false;  // stalled before exhausting q
    for (const auto& [p, count] : parent_pairs) {
      if (count != 1) return false;  // parent pair not unique
      cur.insert(p);
    }
  }
  return true;
}

std::vector<int> extend_homomorphism(const std::map<std::string, int>& f,
                                     const PartialSts& baseS,
                                     const PartialSts& c,
                                     const std::vector<TermPtr>& targets) {
  auto image = [&](const std::string& name) {
    auto it = f.find(name);
    if (it == f.end())
      throw invalid_input("UnknownPoint", "no image for base point " + name);
    if (it->second < 0 || it->second >= c.size())
      throw invalid_input("UnknownPoint", "image index out of range");
    return it->second;
  };
  for (const auto& b : baseS.blocks()) {
    int ia = image(baseS.name(b[0])), ib = image(baseS.name(b[1])),
        ic = image(baseS.name(b[2]));
    auto p = c.product(ia, ib);
    if (!p || *p != ic)
      throw invalid_input("NotAHomomorphism",
                          "block {" + baseS.name(b[0]) + "," + baseS.name(b[1]) +
                              "," + baseS.name(b[2]) + "} is not preserved");
  }
  std::function<int(const TermPtr&)> eval = [&](const TermPtr& t) -> int {
    if (t->is_leaf()) return image(t->leaf_name());
    auto p = c.product(eval(t->left()), eval(t->right()));
    if (!p)
      throw invalid_input("NotTotal", "target product undefined at " + t->text());
    return *p;
  };
  std::vector<int> out;
  for (const auto& t : targets) out.push_back(eval(t));
  return out;
}

}  // namespace sts
