#include "sts/generic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "sts/canonical.hpp"
#include "sts/completion.hpp"
#include "sts/embedding.hpp"
#include "sts/rng.hpp"

namespace sts {

DeltaInstance DeltaInstance::make(PartialSts outer, std::vector<int> inner) {
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  for (int p : inner)
    if (p < 0 || p >= outer.size())
      throw invalid_input("UnknownPoint", "inner index out of range");
  if (!outer.is_relatively_closed(inner))
    throw invalid_input("InnerNotClosed",
                        "inner subset is not relatively closed in outer");
  return DeltaInstance{std::move(outer), std::move(inner)};
}

namespace {

RawTerm leaf(const std::string& name) { return RawTerm{name, nullptr, nullptr}; }

Formula diagram_formula(const PartialSts& s, const std::vector<int>& points) {
  Formula out;
  std::set<int> in(points.begin(), points.end());
  for (int p : points) out.vars.push_back(s.name(p));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      out.lits.push_back(Literal{leaf(s.name(points[i])),
                                 leaf(s.name(points[j])), Rel::kNeq});
  for (const auto& b : s.blocks()) {
    if (!in.count(b[0]) || !in.count(b[1]) || !in.count(b[2])) continue;
    // one equality per block: (min . mid) = third
    RawTerm prod{"", std::make_shared<RawTerm>(leaf(s.name(b[0]))),
                 std::make_shared<RawTerm>(leaf(s.name(b[1])))};
    out.lits.push_back(Literal{std::move(prod), leaf(s.name(b[2])), Rel::kEq});
  }
  return out;
}

}  // namespace

std::pair<Formula, Formula> delta_formulas(const DeltaInstance& inst) {
  std::vector<int> all(inst.outer.size());
  for (int p = 0; p < inst.outer.size(); ++p) all[p] = p;
  return {diagram_formula(inst.outer, inst.inner),
          diagram_formula(inst.outer, all)};
}

DeltaVerdict check_delta(const PartialSts& m, const DeltaInstance& inst,
                         std::uint64_t node_budget) {
  auto inner_sys = inst.outer.induced(inst.inner);
  EmbedOptions all_opt;
  all_opt.node_budget = node_budget;
  for (const auto& e : find_embeddings(inner_sys, m, {}, all_opt)) {
    std::vector<std::pair<int, int>> base;
    for (std::size_t j = 0; j < inst.inner.size(); ++j)
      base.emplace_back(inst.inner[j], e.map[j]);
    EmbedOptions one;
    one.node_budget = node_budget;
    one.max_results = 1;
    if (find_embeddings(inst.outer, m, base, one).empty())
      return DeltaVerdict{false, e.map};
  }
  return DeltaVerdict{true, {}};
}

namespace {

// All block sets on s labeled points with pairwise-disjoint pairs, by
// choosing triples in increasing lexicographic order.
void enumerate_block_sets(
    int s, const std::function<void(const std::vector<std::array<int, 3>>&)>& cb) {
  std::vector<std::array<int, 3>> all;
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b)
      for (int c = b + 1; c < s; ++c) all.push_back({a, b, c});
  std::vector<char> pair_used(s * s, 0);
  std::vector<std::array<int, 3>> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    cb(chosen);
    for (std::size_t i = from; i < all.size(); ++i) {
      const auto& t = all[i];
      if (pair_used[t[0] * s + t[1]] || pair_used[t[0] * s + t[2]] ||
          pair_used[t[1] * s + t[2]])
        continue;
      pair_used[t[0] * s + t[1]] = pair_used[t[0] * s + t[2]] =
          pair_used[t[1] * s + t[2]] = 1;
      chosen.push_back(t);
      rec(i + 1);
      chosen.pop_back();
      pair_used[t[0] * s + t[1]] = pair_used[t[0] * s + t[2]] =
          pair_used[t[1] * s + t[2]] = 0;
    }
  };
  rec(0);
}

}  // namespace

std::vector<DeltaInstance> enumerate_delta(int max_outer_size) {
  if (max_outer_size < 1)
    throw invalid_input("BadRange", "max_outer_size must be >= 1");
  std::vector<DeltaInstance> out;
  std::set<std::string> seen;
  for (int s = 1; s <= max_outer_size; ++s) {
    std::vector<std::string> names;
    for (int i = 0; i < s; ++i) names.push_back("p" + std::to_string(i));
    enumerate_block_sets(s, [&](const std::vector<std::array<int, 3>>& bl) {
      auto outer = PartialSts::from_indices(names, bl);
      for (unsigned mask = 0; mask < (1u << s); ++mask) {
        std::vector<int> inner;
        for (int p = 0; p < s; ++p)
          if (mask & (1u << p)) inner.push_back(p);
        if (!outer.is_relatively_closed(inner)) continue;
        std::vector<int> colors(s, 0);
        for (int p : inner) colors[p] = 1;
        std::string label = canonical_form(outer, colors);
        if (!seen.insert(label).second) continue;
        out.push_back(DeltaInstance{outer, inner});
      }
    });
  }
  return out;
}

std::vector<PartialSts> generic_build(const PartialSts& seed_system,
                                      int stages, int instance_size_bound,
                                      std::uint64_t rng_seed, int max_order) {
  if (!seed_system.is_total())
    throw invalid_input("NotTotal", "generic_build needs a total seed");
  if (stages < 0) throw invalid_input("BadRange", "stages must be >= 0");
  auto instances = enumerate_delta(instance_size_bound);
  std::vector<PartialSts> chain = {seed_system};
  for (int stage = 1; stage <= stages; ++stage) {
    const PartialSts& mi = chain.back();
    std::vector<PartialSts> pieces = {mi};
    std::set<std::string> taken(mi.point_names().begin(),
                                mi.point_names().end());
    int counter = 0;
    auto fresh_name = [&] {
      std::string nm;
      do {
        nm = "g" + std::to_string(stage) + "_" + std::to_string(counter++);
      } while (taken.count(nm));
      taken.insert(nm);
      return nm;
    };
    for (const auto& inst : instances) {
      auto inner_sys = inst.outer.induced(inst.inner);
      for (const auto& e : find_embeddings(inner_sys, mi)) {
        std::vector<std::pair<int, int>> base;
        for (std::size_t j = 0; j < inst.inner.size(); ++j)
          base.emplace_back(inst.inner[j], e.map[j]);
        if (embedding_exists(inst.outer, mi, base)) continue;
        // glue a fresh copy of outer over the inner image
        std::vector<std::string> names(inst.outer.size());
        for (std::size_t j = 0; j < inst.inner.size(); ++j)
          names[inst.inner[j]] = mi.name(e.map[j]);
        for (int p = 0; p < inst.outer.size(); ++p)
          if (names[p].empty()) names[p] = fresh_name();
        std::vector<std::array<std::string, 3>> bl;
        for (const auto& b : inst.outer.blocks())
          bl.push_back({names[b[0]], names[b[1]], names[b[2]]});
        std::vector<std::string> pts = names;
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        pieces.push_back(PartialSts::validate(pts, bl));
      }
    }
    CompleteOptions opt;
    opt.max_order = max_order;
    opt.seed = derive_seed(rng_seed, "generic_build", stage);
    chain.push_back(complete_finite(family_union(pieces), opt));
  }
  return chain;
}

IsolatingFormula isolating_formula(const std::vector<int>& tuple,
                                   const PartialSts& m) {
  std::set<int> tset(tuple.begin(), tuple.end());
  if (tset.size() != tuple.size())
    throw invalid_input("DuplicatePoint", "tuple members must be distinct");
  auto closure = m.close_subset(tuple);
  std::vector<int> order = tuple;
  for (int p : closure)
    if (!tset.count(p)) order.push_back(p);
  std::map<int, std::string> var;
  for (std::size_t i = 0; i < order.size(); ++i)
    var[order[i]] = "x" + std::to_string(i + 1);
  IsolatingFormula out;
  out.num_existential = (int)(order.size() - tuple.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    out.formula.vars.push_back(var.at(order[i]));
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      out.formula.lits.push_back(
          Literal{leaf(var.at(order[i])), leaf(var.at(order[j])), Rel::kNeq});
  std::set<int> cl(closure.begin(), closure.end());
  for (const auto& b : m.blocks()) {
    if (!cl.count(b[0]) || !cl.count(b[1]) || !cl.count(b[2])) continue;
    RawTerm prod{"", std::make_shared<RawTerm>(leaf(var.at(b[0]))),
                 std::make_shared<RawTerm>(leaf(var.at(b[1])))};
    out.formula.lits.push_back(Literal{std::move(prod), leaf(var.at(b[2])), Rel::kEq});
  }
  // the single-point case still states idempotence, per the prime-model proof
  if (out.formula.lits.empty() && order.size() == 1) {
    RawTerm prod{"", std::make_shared<RawTerm>(leaf(var.at(order[0]))),
                 std::make_shared<RawTerm>(leaf(var.at(order[0])))};
    out.formula.lits.push_back(Literal{std::move(prod), leaf(var.at(order[0])), Rel::kEq});
  }
  return out;
}

std::optional<std::map<std::string, std::string>> qf_iso_m(
    const FreeUniverse& u1, const std::vector<TermPtr>& t1,
    const FreeUniverse& u2, const std::vector<TermPtr>& t2, int m) {
  if (t1.size() != t2.size())
    throw invalid_input("BadRange", "tuples must have equal length");
  if (m < 1) throw invalid_input("BadRange", "m must be >= 1");
  std::map<std::string, std::string> fwd, bwd;
  std::map<std::string, TermPtr> e1, e2;  // text -> term, per side
  auto link = [&](const TermPtr& x, const TermPtr& y) {
    auto [it, fresh] = fwd.emplace(x->text(), y->text());
    if (!fresh && it->second != y->text()) return false;
    auto [jt, fresh2] = bwd.emplace(y->text(), x->text());
    if (!fresh2 && jt->second != x->text()) return false;
    e1.emplace(x->text(), x);
    e2.emplace(y->text(), y);
    return true;
  };
  // parallel rank-stratified closure of the paired tuples
  std::vector<std::vector<std::pair<TermPtr, TermPtr>>> level(m + 1);
  std::vector<std::set<std::pair<std::string, std::string>>> seen(m + 1);
  auto push = [&](int r, const TermPtr& x, const TermPtr& y) {
    if (seen[r].emplace(x->text(), y->text()).second)
      level[r].emplace_back(x, y);
  };
  for (std::size_t i = 0; i < t1.size(); ++i) {
    if (!link(t1[i], t2[i])) return std::nullopt;
    push(1, t1[i], t2[i]);
  }
  for (int r = 2; r <= m; ++r)
    for (int i = 1; i < r; ++i)
      for (const auto& [x1, y1] : level[i])
        for (const auto& [x2, y2] : level[r - i]) {
          auto px = u1.mul(x1, x2);
          auto py = u2.mul(y1, y2);
          if (!link(px, py)) return std::nullopt;
          push(r, px, py);
        }
  // induced-system isomorphism: membership and products must correspond
  for (const auto& [xt, x] : e1)
    for (const auto& [yt, y] : e1) {
      auto p1 = u1.mul(x, y);
      auto p2 = u2.mul(e2.at(fwd.at(xt)), e2.at(fwd.at(yt)));
      bool in1 = e1.count(p1->text()) > 0;
      bool in2 = e2.count(p2->text()) > 0;
      if (in1 != in2) return std::nullopt;
      if (in1 && fwd.at(p1->text()) != p2->text()) return std::nullopt;
    }
  return fwd;
}

bool qf_equiv_m(const FreeUniverse& u1, const std::vector<TermPtr>& t1,
                const FreeUniverse& u2, const std::vector<TermPtr>& t2, int m) {
  return qf_iso_m(u1, t1, u2, t2, m).has_value();
}

bool qf_equiv_m(const PartialSts& s1, const std::vector<int>& t1,
                const PartialSts& s2, const std::vector<int>& t2, int m) {
  FreeUniverse u1(s1), u2(s2);
  std::vector<TermPtr> a, b;
  for (int p : t1) a.push_back(u1.point(s1.name(p)));
  for (int p : t2) b.push_back(u2.point(s2.name(p)));
  return qf_equiv_m(u1, a, u2, b, m);
}

}  // namespace sts
