#include "sts/amalgam.hpp"

#include <algorithm>
#include <set>

#include "sts/completion.hpp"
#include "sts/generic.hpp"

namespace sts {

namespace {

Error hypothesis(const std::string& clause) {
  return Error(ErrorKind::kInvalidInput, "HypothesisViolated", clause);
}

Error depth_exceeded(const std::string& what) {
  return Error(ErrorKind::kBudget, "DepthExceeded",
               what + " does not close at the requested depth");
}

Error claim_failed(const std::string& which) {
  return Error(ErrorKind::kInternal, "CompatibilityCheckFailed", which);
}

std::string unique_name(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  taken.insert(base);
  return base;
}

// Term-rank cap for the closure explorations. Linear in the depth: over a
// free part the number of terms below a rank bound grows doubly
// exponentially, so generous caps are not affordable.
int rank_budget(int depth) {
  if (depth < 1) throw invalid_input("BadRange", "depth must be >= 1");
  return depth + 1;
}

TermSet to_term_set(const PointSet& ps) {
  return TermSet(ps.begin(), ps.end());
}

// Point names may not contain '.', '(' or ')', so compound-term texts are
// rewritten character-wise (injectively) into valid names.
std::string point_name(const TermPtr& t) {
  std::string s = t->text();
  for (char& ch : s) {
    if (ch == '(')
      ch = '[';
    else if (ch == ')')
      ch = ']';
    else if (ch == '.')
      ch = '*';
  }
  return s;
}

bool product_closed(const FreeUniverse& u, const TermSet& s) {
  for (auto i = s.begin(); i != s.end(); ++i)
    for (auto j = std::next(i); j != s.end(); ++j)
      if (!s.count(u.mul(*i, *j))) return false;
  return true;
}

TermSet closure_or_throw(const FreeUniverse& u, const TermSet& gens, int depth,
                         const std::string& what) {
  auto [set, complete] = u.generated(gens, rank_budget(depth));
  if (!complete) throw depth_exceeded(what);
  return set;
}

TermSet set_union(const TermSet& a, const TermSet& b) {
  TermSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

TermSet set_intersect(const TermSet& a, const TermSet& b) {
  TermSet out;
  for (const auto& x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

bool same_set(const TermSet& a, const TermSet& b) {
  return a.size() == b.size() && set_intersect(a, b).size() == a.size();
}

using NameTriple = std::array<std::string, 3>;

NameTriple sorted_triple(std::string a, std::string b, std::string c) {
  NameTriple t{std::move(a), std::move(b), std::move(c)};
  std::sort(t.begin(), t.end());
  return t;
}

// The induced partial system on a product-closed term set: one point per
// term (named by its text), one block per defined product inside the set.
PartialSts materialize(const FreeUniverse& u, const TermSet& s) {
  std::vector<std::string> points;
  for (const auto& x : s) points.push_back(point_name(x));
  std::set<NameTriple> blocks;
  for (auto i = s.begin(); i != s.end(); ++i)
    for (auto j = std::next(i); j != s.end(); ++j) {
      auto z = u.mul(*i, *j);
      if (s.count(z))
        blocks.insert(
            sorted_triple(point_name(*i), point_name(*j), point_name(z)));
    }
  return PartialSts::validate(
      points, std::vector<NameTriple>(blocks.begin(), blocks.end()));
}

std::vector<TermPtr> concat(const PointSet& a, const PointSet& b) {
  std::vector<TermPtr> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Amalgam joint_embed(const PartialSts& q1, const PartialSts& q2,
                    int order_budget) {
  if (!q1.is_total() || !q2.is_total())
    throw invalid_input("NotTotal", "joint_embed needs total systems");
  std::set<std::string> taken(q1.point_names().begin(), q1.point_names().end());
  Amalgam out;
  std::vector<std::string> points = q1.point_names();
  for (const auto& nm : q1.point_names()) out.e1[nm] = nm;
  for (const auto& nm : q2.point_names()) {
    std::string fresh = unique_name(nm, taken);
    out.e2[nm] = fresh;
    points.push_back(fresh);
  }
  std::vector<NameTriple> blocks;
  for (const auto& b : q1.blocks())
    blocks.push_back({q1.name(b[0]), q1.name(b[1]), q1.name(b[2])});
  for (const auto& b : q2.blocks())
    blocks.push_back({out.e2.at(q2.name(b[0])), out.e2.at(q2.name(b[1])),
                      out.e2.at(q2.name(b[2]))});
  CompleteOptions opt;
  opt.max_order = order_budget;
  out.total = complete_finite(PartialSts::validate(points, blocks), opt);
  return out;
}

Amalgam amalgamate(const PartialSts& q1, const PartialSts& q2,
                   const std::vector<std::pair<std::string, std::string>>& shared,
                   int order_budget) {
  if (!q1.is_total() || !q2.is_total())
    throw invalid_input("NotTotal", "amalgamate needs total systems");
  std::vector<int> c1, c2;
  for (const auto& [n1, n2] : shared) {
    c1.push_back(q1.point(n1));
    c2.push_back(q2.point(n2));
  }
  auto not_sub = [](const std::string& why) {
    return invalid_input("NotASubquasigroup", why);
  };
  std::set<int> d1(c1.begin(), c1.end()), d2(c2.begin(), c2.end());
  if (d1.size() != c1.size() || d2.size() != c2.size())
    throw not_sub("shared points repeat");
  if (!q1.is_relatively_closed(c1) || !q1.is_total_on(c1))
    throw not_sub("shared set is not a subquasigroup of the first system");
  if (!q2.is_relatively_closed(c2) || !q2.is_total_on(c2))
    throw not_sub("shared set is not a subquasigroup of the second system");
  for (std::size_t i = 0; i < c1.size(); ++i)
    for (std::size_t j = i + 1; j < c1.size(); ++j) {
      auto p1 = q1.product(c1[i], c1[j]);
      auto p2 = q2.product(c2[i], c2[j]);
      auto k1 = std::find(c1.begin(), c1.end(), *p1) - c1.begin();
      if (c2[k1] != *p2)
        throw not_sub("shared map does not preserve products");
    }

  Amalgam out;
  for (const auto& nm : q1.point_names()) out.e1[nm] = nm;
  std::set<std::string> taken(q1.point_names().begin(), q1.point_names().end());
  for (std::size_t i = 0; i < c2.size(); ++i)
    out.e2[q2.name(c2[i])] = q1.name(c1[i]);
  for (int p = 0; p < q2.size(); ++p)
    if (!out.e2.count(q2.name(p)))
      out.e2[q2.name(p)] = unique_name(q2.name(p), taken);
  std::vector<std::string> points2;
  std::vector<NameTriple> blocks2;
  for (int p = 0; p < q2.size(); ++p) points2.push_back(out.e2.at(q2.name(p)));
  for (const auto& b : q2.blocks())
    blocks2.push_back({out.e2.at(q2.name(b[0])), out.e2.at(q2.name(b[1])),
                       out.e2.at(q2.name(b[2]))});
  auto merged = sts_union(q1, PartialSts::validate(points2, blocks2));
  CompleteOptions opt;
  opt.max_order = order_budget;
  out.total = complete_finite(merged, opt);
  return out;
}

namespace {

// Shared construction for the two- and t-sided merges: build fresh copies
// A, W, U_i of the side closures, transport the product relations through
// the certified isomorphisms, re-verify the compatibility claims, and glue
// everything over the parameter closure.
MergeResult merge_core(const FreeUniverse& u,
                       const std::vector<std::pair<PointSet, PointSet>>& sides,
                       int depth) {
  const int t = static_cast<int>(sides.size());
  if (t == 0) throw invalid_input("BadRange", "need at least one side");
  rank_budget(depth);  // validates depth

  std::vector<TermSet> sa, sb;
  for (int i = 0; i < t; ++i) {
    sa.push_back(to_term_set(sides[i].first));
    sb.push_back(to_term_set(sides[i].second));
    if (sa[i].size() != sides[i].first.size() ||
        sb[i].size() != sides[i].second.size())
      throw hypothesis("a side enumeration repeats an element");
    if (!product_closed(u, sa[i]) || !product_closed(u, sb[i]))
      throw hypothesis("a side set is not closed under product");
  }

  if (t == 1) {
    auto cl = closure_or_throw(u, set_union(sa[0], sb[0]), depth, "<A0 B0>");
    MergeResult out{materialize(u, cl), {}, depth};
    for (const auto& x : sides[0].first) out.a.push_back(point_name(x));
    return out;
  }

  for (int i = 1; i < t; ++i)
    if (sides[i].first.size() != sides[0].first.size() ||
        sides[i].second.size() != sides[0].second.size())
      throw hypothesis("side enumerations have different lengths");

  // corners F = A_i cap B_i and the shared part E = B_i cap B_j
  TermSet f_set = set_intersect(sa[0], sb[0]);
  for (int i = 1; i < t; ++i)
    if (!same_set(f_set, set_intersect(sa[i], sb[i])))
      throw hypothesis("the corners A_i cap B_i differ");
  TermSet e_set = set_intersect(sb[0], sb[1]);
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j)
      if (!same_set(e_set, set_intersect(sb[i], sb[j])))
        throw hypothesis("the pairwise B_i cap B_j differ");

  // the index-wise correspondence must be the identity on E and F
  for (int i = 1; i < t; ++i) {
    for (std::size_t j = 0; j < sides[0].second.size(); ++j) {
      bool in0 = e_set.count(sides[0].second[j]) > 0;
      bool ini = e_set.count(sides[i].second[j]) > 0;
      if (in0 != ini ||
          (in0 && sides[0].second[j]->text() != sides[i].second[j]->text()))
        throw hypothesis("enumerations disagree on the shared part");
    }
    for (std::size_t j = 0; j < sides[0].first.size(); ++j) {
      bool in0 = f_set.count(sides[0].first[j]) > 0;
      bool ini = f_set.count(sides[i].first[j]) > 0;
      if (in0 != ini ||
          (in0 && sides[0].first[j]->text() != sides[i].first[j]->text()))
        throw hypothesis("enumerations disagree on the corner");
    }
  }

  // closures of every side; all must be finite at the depth
  std::vector<TermSet> cl(t), cl_e(t);
  for (int i = 0; i < t; ++i) {
    cl[i] = closure_or_throw(u, set_union(sa[i], sb[i]), depth, "<A_i B_i>");
    cl_e[i] = closure_or_throw(u, set_union(sa[i], e_set), depth, "<A_i E>");
    if (!same_set(set_intersect(cl_e[i], sb[i]), e_set))
      throw hypothesis("<A_i E> meets B_i outside E");
  }
  TermSet all_b;
  for (int i = 0; i < t; ++i) all_b = set_union(all_b, sb[i]);
  TermSet cl_b = closure_or_throw(u, all_b, depth, "<B_0 ... B_t>");

  // certified isomorphisms f_i : <A_0 B_0> -> <A_i B_i>
  std::size_t max_cl = 0;
  for (int i = 0; i < t; ++i) max_cl = std::max(max_cl, cl[i].size());
  const int m_pair = std::min<int>(static_cast<int>(max_cl) + 1, 64);
  std::vector<std::map<std::string, std::string>> f(t);
  for (const auto& x : cl[0]) f[0][x->text()] = x->text();
  for (int i = 1; i < t; ++i) {
    auto iso = qf_iso_m(u, concat(sides[0].first, sides[0].second), u,
                        concat(sides[i].first, sides[i].second), m_pair);
    if (!iso) throw hypothesis("sides are not equivalent over E");
    f[i] = std::move(*iso);
    for (const auto& x : cl[0])
      if (!f[i].count(x->text()))
        throw Error(ErrorKind::kInternal, "IsoIncomplete",
                    "pairing does not cover the side closure");
  }

  // fresh names for A, W and the per-side remainders U_i
  std::set<std::string> taken;
  for (const auto& x : cl_b) taken.insert(point_name(x));
  for (int i = 0; i < t; ++i)
    for (const auto& x : cl[i]) taken.insert(point_name(x));
  std::vector<std::string> aname;
  for (std::size_t j = 0; j < sides[0].first.size(); ++j)
    aname.push_back(f_set.count(sides[0].first[j])
                        ? point_name(sides[0].first[j])
                        : unique_name("a" + std::to_string(j), taken));
  std::map<std::string, std::string> wname;  // side-0 closure text -> name
  {
    int k = 0;
    for (const auto& w : cl_e[0])
      if (!sa[0].count(w) && !e_set.count(w))
        wname[w->text()] = unique_name("w" + std::to_string(k++), taken);
  }

  // g_i : <A_i B_i> -> point names of the glued system
  std::vector<std::map<std::string, std::string>> g(t);
  for (int i = 0; i < t; ++i) {
    for (const auto& x : sb[i]) g[i][x->text()] = point_name(x);
    for (std::size_t j = 0; j < sides[i].first.size(); ++j)
      g[i][sides[i].first[j]->text()] = aname[j];
    for (const auto& [w0, nm] : wname) g[i][f[i].at(w0)] = nm;
    int k = 0;
    for (const auto& x : cl[i])
      if (!g[i].count(x->text()))
        g[i][x->text()] = unique_name(
            "u" + std::to_string(i) + "_" + std::to_string(k++), taken);
  }

  // transported relations R_i
  std::vector<std::set<NameTriple>> rel(t);
  for (int i = 0; i < t; ++i)
    for (auto x = cl[i].begin(); x != cl[i].end(); ++x)
      for (auto y = std::next(x); y != cl[i].end(); ++y) {
        auto z = u.mul(*x, *y);
        if (cl[i].count(z))
          rel[i].insert(sorted_triple(g[i].at((*x)->text()),
                                      g[i].at((*y)->text()),
                                      g[i].at(z->text())));
      }

  // claim 1: the restrictions of the R_i to A E W agree
  std::set<std::string> aew;
  for (const auto& nm : aname) aew.insert(nm);
  for (const auto& x : e_set) aew.insert(point_name(x));
  for (const auto& [w0, nm] : wname) aew.insert(nm);
  auto restrict_aew = [&](const std::set<NameTriple>& r) {
    std::set<NameTriple> out;
    for (const auto& tr : r)
      if (aew.count(tr[0]) && aew.count(tr[1]) && aew.count(tr[2]))
        out.insert(tr);
    return out;
  };
  for (int i = 1; i < t; ++i)
    if (restrict_aew(rel[i]) != restrict_aew(rel[0]))
      throw claim_failed("claim 1: transported relations differ on A E W");

  auto side_points = [&](int i) {
    std::set<std::string> pts;
    for (const auto& [from, to] : g[i]) pts.insert(to);
    return pts;
  };
  auto try_validate = [&](const std::set<std::string>& pts,
                          const std::set<NameTriple>& bl,
                          const std::string& which) {
    try {
      PartialSts::validate(
          std::vector<std::string>(pts.begin(), pts.end()),
          std::vector<NameTriple>(bl.begin(), bl.end()));
    } catch (const Error&) {
      throw claim_failed(which);
    }
  };

  // claim 2: the transported copies are pairwise compatible
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      auto pts = side_points(i);
      auto pj = side_points(j);
      pts.insert(pj.begin(), pj.end());
      auto bl = rel[i];
      bl.insert(rel[j].begin(), rel[j].end());
      try_validate(pts, bl, "claim 2: copies " + std::to_string(i) + " and " +
                                std::to_string(j) + " conflict");
    }

  // claim 3: each copy is compatible with the parameter closure
  PartialSts b_sys = materialize(u, cl_b);
  std::set<NameTriple> b_blocks;
  for (const auto& b : b_sys.blocks())
    b_blocks.insert(sorted_triple(b_sys.name(b[0]), b_sys.name(b[1]),
                                  b_sys.name(b[2])));
  for (int i = 0; i < t; ++i) {
    auto pts = side_points(i);
    for (const auto& nm : b_sys.point_names()) pts.insert(nm);
    auto bl = rel[i];
    bl.insert(b_blocks.begin(), b_blocks.end());
    try_validate(pts, bl,
                 "claim 3: copy " + std::to_string(i) +
                     " conflicts with the parameter closure");
  }

  // glue everything
  std::set<std::string> pts;
  for (const auto& nm : b_sys.point_names()) pts.insert(nm);
  for (int i = 0; i < t; ++i) {
    auto sp = side_points(i);
    pts.insert(sp.begin(), sp.end());
  }
  std::set<NameTriple> bl = b_blocks;
  for (int i = 0; i < t; ++i) bl.insert(rel[i].begin(), rel[i].end());
  PartialSts ext;
  try {
    ext = PartialSts::validate(std::vector<std::string>(pts.begin(), pts.end()),
                               std::vector<NameTriple>(bl.begin(), bl.end()));
  } catch (const Error&) {
    throw claim_failed("glued union is not a partial system");
  }

  // certify A over every B_i
  FreeUniverse ext_u(ext);
  for (int i = 0; i < t; ++i) {
    std::vector<TermPtr> t1, t2;
    for (std::size_t j = 0; j < sides[i].first.size(); ++j)
      t1.push_back(ext_u.point(aname[j]));
    for (const auto& x : sides[i].second)
      t1.push_back(ext_u.point(point_name(x)));
    t2 = concat(sides[i].first, sides[i].second);
    if (!qf_equiv_m(ext_u, t1, u, t2, depth))
      throw Error(ErrorKind::kInternal, "CertificationFailed",
                  "merged copy is not equivalent to side " + std::to_string(i));
  }

  return MergeResult{std::move(ext), std::move(aname), depth};
}

}  // namespace

MergeResult merge_al1(const FreeUniverse& u, const PointSet& a0,
                      const PointSet& b0, const PointSet& a1,
                      const PointSet& b1, int depth) {
  auto sa0 = to_term_set(a0), sb0 = to_term_set(b0);
  auto sa1 = to_term_set(a1), sb1 = to_term_set(b1);
  if (!set_intersect(sb0, sb1).empty())
    throw hypothesis("B0 meets B1");
  if (!set_intersect(sa0, sb0).empty() || !set_intersect(sa1, sb1).empty())
    throw hypothesis("A_i meets B_i");
  auto out = merge_core(u, {{a0, b0}, {a1, b1}}, depth);
  // realize the union inside a one-step free extension
  out.extension = free_truncation(out.extension, 1);
  return out;
}

MergeResult merge_al25(const FreeUniverse& u, const PointSet& a0,
                       const PointSet& a1, const PointSet& b0,
                       const PointSet& b1, int depth) {
  return merge_core(u, {{a0, b0}, {a1, b1}}, depth);
}

MergeResult merge_family(const FreeUniverse& u,
                         const std::vector<std::pair<PointSet, PointSet>>& sides,
                         int depth) {
  return merge_core(u, sides, depth);
}

bool check_al3(const FreeUniverse& u, const PointSet& a0, const PointSet& a1,
               const PointSet& b0, const PointSet& b1, const PointSet& d,
               int depth) {
  auto sa0 = to_term_set(a0), sa1 = to_term_set(a1);
  auto sb0 = to_term_set(b0), sb1 = to_term_set(b1);
  auto sd = to_term_set(d);
  for (const auto* s : {&sa0, &sa1, &sb0, &sb1, &sd})
    if (!product_closed(u, *s))
      throw hypothesis("a side set is not closed under product");
  if (d.size() != b0.size() || d.size() != b1.size())
    throw hypothesis("D must enumerate as many elements as B_0 and B_1");
  if (!same_set(set_intersect(sa0, sb0), set_intersect(sa1, sb1)))
    throw hypothesis("the corners A_i cap B_i differ");
  TermSet e_set = set_intersect(sb0, sb1);
  PointSet e_list(e_set.begin(), e_set.end());

  // D == B_0 over E A_0 and D == B_1 over E A_1, at the working depth
  auto equiv_over = [&](const PointSet& x, const PointSet& y,
                        const PointSet& ctx) {
    return qf_equiv_m(u, concat(x, ctx), u, concat(y, ctx), depth);
  };
  if (!equiv_over(d, b0, concat(e_list, a0))) return false;
  if (!equiv_over(d, b1, concat(e_list, a1))) return false;
  if (!qf_equiv_m(u, concat(a0, b0), u, concat(a1, b1), depth)) return false;

  // the derived closedness equalities are theorems under the hypotheses
  for (int i = 0; i < 2; ++i) {
    const TermSet& sa = i == 0 ? sa0 : sa1;
    const TermSet& sb = i == 0 ? sb0 : sb1;
    auto cl = closure_or_throw(u, set_union(sa, e_set), depth, "<A_i E>");
    if (!same_set(set_intersect(cl, sb), e_set))
      throw Error(ErrorKind::kInternal, "CompatibilityCheckFailed",
                  "derived equality <A_i E> cap B_i = E fails");
  }
  merge_al25(u, a0, a1, b0, b1, depth);
  return true;
}

IndepResult indep(const FreeUniverse& u, const PointSet& a, const PointSet& b,
                  const PointSet& c, int depth) {
  const int budget = rank_budget(depth);
  TermSet sc = to_term_set(c);
  TermSet sac = set_union(to_term_set(a), sc);
  TermSet sbc = set_union(to_term_set(b), sc);
  auto [cc, cc_ok] = u.generated(sc, budget);
  auto [ac, ac_ok] = u.generated(sac, budget);
  auto [bc, bc_ok] = u.generated(sbc, budget);

  // dependence through the closures: an element of <AC> cap <BC> outside <C>
  if (cc_ok)
    for (const auto& x : set_intersect(ac, bc))
      if (!cc.count(x)) return IndepResult{IndepResult::Verdict::kDependent, x, depth};

  // freeness of <ABC> over <AC> u <BC>: every new element of the generation
  // chain must come from exactly one parent pair, and a product may land on
  // an existing element only through a block already accounted for (inside
  // one closure, or created earlier on the chain — the absorption case).
  // Only meaningful (and only affordable) over completed closures.
  TermSet cur = set_union(ac, bc);
  auto block_key = [](const TermPtr& x, const TermPtr& y, const TermPtr& z) {
    std::array<std::string, 3> k{x->text(), y->text(), z->text()};
    std::sort(k.begin(), k.end());
    return k;
  };
  std::set<std::array<std::string, 3>> known;
  for (const TermSet* side : {&ac, &bc})
    for (auto x = side->begin(); x != side->end(); ++x)
      for (auto y = std::next(x); y != side->end(); ++y) {
        auto z = u.mul(*x, *y);
        if (side->count(z)) known.insert(block_key(*x, *y, z));
      }
  bool stable = !(cc_ok && ac_ok && bc_ok);
  for (int iter = 0; iter < depth && !stable; ++iter) {
    // chain levels square in size over sparse bases; collisions surface on
    // the early narrow levels, so cap the explored width
    if ((std::uint64_t)cur.size() * cur.size() > 500'000) break;
    std::map<std::string, std::pair<TermPtr, int>> fresh;
    std::set<std::array<std::string, 3>> created;
    for (auto x = cur.begin(); x != cur.end(); ++x)
      for (auto y = std::next(x); y != cur.end(); ++y) {
        auto z = u.mul(*x, *y);
        if (term_eq(z, *x) || term_eq(z, *y)) continue;
        if (cur.count(z)) {
          if (!known.count(block_key(*x, *y, z)))
            return IndepResult{IndepResult::Verdict::kDependent, z, depth};
          continue;
        }
        created.insert(block_key(*x, *y, z));
        auto& entry = fresh[z->text()];
        entry.first = z;
        if (++entry.second >= 2)
          return IndepResult{IndepResult::Verdict::kDependent, z, depth};
      }
    if (fresh.empty()) {
      stable = true;
    } else {
      for (const auto& [txt, e] : fresh) cur.insert(e.first);
      known.insert(created.begin(), created.end());
    }
  }
  (void)stable;

  if (cc_ok && ac_ok && bc_ok)
    return IndepResult{IndepResult::Verdict::kIndependent, nullptr, depth};
  return IndepResult{IndepResult::Verdict::kUnknown, nullptr, depth};
}

ExistenceWitness full_existence_witness(const FreeUniverse& u,
                                        const PointSet& a, const PointSet& b,
                                        const PointSet& c, int depth) {
  TermSet sc = to_term_set(c);
  TermSet cc = closure_or_throw(u, sc, depth, "<C>");
  TermSet ac = closure_or_throw(u, set_union(to_term_set(a), cc), depth, "<A C>");
  TermSet bc = closure_or_throw(u, set_union(to_term_set(b), cc), depth, "<B C>");

  std::set<std::string> taken;
  for (const auto& x : set_union(ac, bc)) taken.insert(point_name(x));
  std::map<std::string, std::string> rho;  // fresh renaming of <AC> \ <C>
  for (const auto& x : ac)
    rho[x->text()] = cc.count(x) ? point_name(x)
                                 : unique_name(point_name(x) + "'", taken);

  PartialSts b_sys = materialize(u, bc);
  std::set<std::string> pts(b_sys.point_names().begin(),
                            b_sys.point_names().end());
  std::set<NameTriple> blocks;
  for (const auto& bl : b_sys.blocks())
    blocks.insert(sorted_triple(b_sys.name(bl[0]), b_sys.name(bl[1]),
                                b_sys.name(bl[2])));
  for (const auto& [from, to] : rho) pts.insert(to);
  for (auto x = ac.begin(); x != ac.end(); ++x)
    for (auto y = std::next(x); y != ac.end(); ++y) {
      auto z = u.mul(*x, *y);
      if (ac.count(z))
        blocks.insert(sorted_triple(rho.at((*x)->text()),
                                    rho.at((*y)->text()), rho.at(z->text())));
    }
  ExistenceWitness out;
  out.depth = depth;
  out.base =
      PartialSts::validate(std::vector<std::string>(pts.begin(), pts.end()),
                           std::vector<NameTriple>(blocks.begin(), blocks.end()));
  for (const auto& x : a) out.a_prime.push_back(rho.at(x->text()));
  for (const auto& x : b) out.b.push_back(point_name(x));
  for (const auto& x : c) out.c.push_back(point_name(x));

  // re-check both halves of the contract before handing the witness out
  FreeUniverse wu(out.base);
  auto pts_of = [&](const std::vector<std::string>& names) {
    PointSet ps;
    for (const auto& nm : names) ps.push_back(wu.point(nm));
    return ps;
  };
  PointSet ap = pts_of(out.a_prime), bp = pts_of(out.b), cp = pts_of(out.c);
  std::vector<TermPtr> orig = concat(a, c);
  if (!qf_equiv_m(wu, concat(ap, cp), u, orig, depth))
    throw Error(ErrorKind::kInternal, "CertificationFailed",
                "fresh copy is not equivalent to A over C");
  if (indep(wu, ap, bp, cp, depth).verdict !=
      IndepResult::Verdict::kIndependent)
    throw Error(ErrorKind::kInternal, "CertificationFailed",
                "fresh copy is not independent from B over C");
  return out;
}

}  // namespace sts
