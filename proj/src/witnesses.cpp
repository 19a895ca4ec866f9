#include "sts/witnesses.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "sts/canonical.hpp"
#include "sts/completion.hpp"
#include "sts/embedding.hpp"
#include "sts/term.hpp"

namespace sts {

namespace {

std::string fstr(const std::vector<int>& f) {
  std::string s;
  for (int v : f) s += std::to_string(v);
  return s;
}

Error verification_failed(const std::string& component) {
  return internal_error("VerificationFailed", component);
}

using NameTriple = std::array<std::string, 3>;

}  // namespace

std::string Tp2Array::a(int i) const { return "a" + std::to_string(i); }
std::string Tp2Array::b(int i) const { return "b" + std::to_string(i); }
std::string Tp2Array::c(int i, int j) const {
  return "c" + std::to_string(i) + "_" + std::to_string(j);
}
std::string Tp2Array::d(const std::vector<int>& f) const { return "d" + fstr(f); }
std::string Tp2Array::a_star(int i, const std::vector<int>& f) const {
  return "as" + std::to_string(i) + "_" + fstr(f);
}
std::string Tp2Array::b_star(int i, const std::vector<int>& f) const {
  return "bs" + std::to_string(i) + "_" + fstr(f);
}

std::vector<std::vector<int>> Tp2Array::functions() const {
  std::vector<std::vector<int>> out;
  std::vector<int> f(rows, 0);
  for (;;) {
    out.push_back(f);
    int i = rows - 1;
    while (i >= 0 && f[i] == cols - 1) f[i--] = 0;
    if (i < 0) break;
    ++f[i];
  }
  return out;
}

Tp2Array tp2_array(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw invalid_input("BadRange", "tp2_array needs rows, cols >= 1");
  Tp2Array arr;
  arr.rows = rows;
  arr.cols = cols;
  std::vector<std::string> points;
  auto add = [&](const std::string& label, const std::string& token) {
    points.push_back(token);
    arr.labels[label] = token;
  };
  for (int i = 0; i < rows; ++i) add("a_" + std::to_string(i), arr.a(i));
  for (int i = 0; i < rows; ++i) add("b_" + std::to_string(i), arr.b(i));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      add("c_" + std::to_string(i) + "_" + std::to_string(j), arr.c(i, j));
  std::vector<NameTriple> blocks;
  for (const auto& f : arr.functions()) {
    add("d_" + fstr(f), arr.d(f));
    for (int i = 0; i < rows; ++i) {
      add("as_" + std::to_string(i) + "_" + fstr(f), arr.a_star(i, f));
      add("bs_" + std::to_string(i) + "_" + fstr(f), arr.b_star(i, f));
      blocks.push_back({arr.d(f), arr.c(i, f[i]), arr.b_star(i, f)});
      blocks.push_back({arr.b_star(i, f), arr.b(i), arr.a_star(i, f)});
      blocks.push_back({arr.d(f), arr.a(i), arr.a_star(i, f)});
    }
  }
  arr.sts = PartialSts::validate(points, blocks);
  return arr;
}

namespace {

// One cancellation step on an equation between products: strip a common
// child from both sides. Returns false when no child matches.
bool cancel_once(TermPtr& lhs, TermPtr& rhs) {
  if (lhs->is_leaf() || rhs->is_leaf()) return false;
  for (const auto& lc : {lhs->left(), lhs->right()})
    for (const auto& rc : {rhs->left(), rhs->right()})
      if (term_eq(lc, rc)) {
        TermPtr nl = term_eq(lc, lhs->left()) ? lhs->right() : lhs->left();
        TermPtr nr = term_eq(rc, rhs->left()) ? rhs->right() : rhs->left();
        lhs = nl;
        rhs = nr;
        return true;
      }
  return false;
}

}  // namespace

Tp2Report verify_tp2(const Tp2Array& arr, int depth) {
  Tp2Report rep;
  FreeUniverse u(arr.sts);
  const auto funcs = arr.functions();

  // (1) path satisfaction: a_i.(b_i.(c_{i f(i)}.d_f)) normalizes to d_f
  rep.path_satisfaction = true;
  for (const auto& f : funcs)
    for (int i = 0; i < arr.rows; ++i) {
      auto df = u.point(arr.d(f));
      auto val = u.mul(u.point(arr.a(i)),
                       u.mul(u.point(arr.b(i)),
                             u.mul(u.point(arr.c(i, f[i])), df)));
      ++rep.checked_paths;
      if (!term_eq(val, df)) rep.path_satisfaction = false;
    }
  if (!rep.path_satisfaction) throw verification_failed("path satisfaction");

  // (2) symbolic row inconsistency: from x = a_i.(b_i.(c_ij.x)) and the same
  // with c_ik, cancellation strips a_i, b_i and x, leaving c_ij = c_ik --
  // false for j != k, so any two cells of a row are jointly unsatisfiable
  rep.symbolic_cancellation = true;
  {
    std::vector<std::string> pts = arr.sts.point_names();
    pts.push_back("x");
    std::vector<NameTriple> bl;
    for (const auto& blk : arr.sts.blocks())
      bl.push_back({arr.sts.name(blk[0]), arr.sts.name(blk[1]),
                    arr.sts.name(blk[2])});
    FreeUniverse ux(PartialSts::validate(pts, bl));
    auto x = ux.point("x");
    for (int i = 0; i < arr.rows; ++i)
      for (int j = 0; j < arr.cols; ++j)
        for (int k = j + 1; k < arr.cols; ++k) {
          TermPtr lhs = ux.mul(ux.point(arr.a(i)),
                               ux.mul(ux.point(arr.b(i)),
                                      ux.mul(ux.point(arr.c(i, j)), x)));
          TermPtr rhs = ux.mul(ux.point(arr.a(i)),
                               ux.mul(ux.point(arr.b(i)),
                                      ux.mul(ux.point(arr.c(i, k)), x)));
          while (cancel_once(lhs, rhs)) {
          }
          // the derived equation must bottom out at two distinct points
          bool derived = lhs->is_leaf() && rhs->is_leaf() &&
                         lhs->leaf_name() == arr.c(i, j) &&
                         rhs->leaf_name() == arr.c(i, k);
          if (!derived || term_eq(lhs, rhs)) rep.symbolic_cancellation = false;
        }
  }
  if (!rep.symbolic_cancellation)
    throw verification_failed("cancellation derivation");

  // (3) brute force: no term of rank <= depth satisfies two cells of a row
  rep.no_joint_witness = true;
  {
    TermSet seen;
    std::vector<std::vector<TermPtr>> by_rank(depth + 1);
    for (const auto& nm : arr.sts.point_names()) {
      auto p = u.point(nm);
      if (seen.insert(p).second) by_rank[1].push_back(p);
    }
    for (int r = 2; r <= depth; ++r)
      for (int r1 = 1; r1 <= r / 2; ++r1) {
        int r2 = r - r1;
        for (const auto& x : by_rank[r1])
          for (const auto& y : by_rank[r2]) {
            if (term_eq(x, y)) continue;
            auto t = u.mul(x, y);
            if (t->rank() == r && seen.insert(t).second)
              by_rank[r].push_back(t);
          }
      }
    auto sat = [&](int i, int j, const TermPtr& t) {
      auto c = u.point(arr.c(i, j));
      // for compound t, c.t collapses only when c is a child of t; without
      // that collapse every later product stacks a node and the ranks of the
      // two sides can never agree
      if (!t->is_leaf() && !term_eq(t->left(), c) && !term_eq(t->right(), c))
        return false;
      auto val = u.mul(u.point(arr.a(i)),
                       u.mul(u.point(arr.b(i)), u.mul(c, t)));
      return term_eq(val, t);
    };
    for (int r = 1; r <= depth; ++r)
      for (const auto& t : by_rank[r]) {
        ++rep.terms_scanned;
        for (int i = 0; i < arr.rows; ++i) {
          int hits = 0;
          for (int j = 0; j < arr.cols; ++j)
            if (sat(i, j, t)) ++hits;
          if (hits >= 2) rep.no_joint_witness = false;
        }
      }
  }
  if (!rep.no_joint_witness) throw verification_failed("joint witness found");

  // (4) the array is the union of its per-(f,i) cells, and every union step
  // of compatible pieces validates
  rep.family_unions_valid = true;
  {
    std::vector<PartialSts> cells;
    for (const auto& f : funcs)
      for (int i = 0; i < arr.rows; ++i) {
        std::vector<std::string> pts = {arr.a(i),         arr.b(i),
                                        arr.c(i, f[i]),   arr.d(f),
                                        arr.a_star(i, f), arr.b_star(i, f)};
        std::vector<NameTriple> bl = {
            {arr.d(f), arr.c(i, f[i]), arr.b_star(i, f)},
            {arr.b_star(i, f), arr.b(i), arr.a_star(i, f)},
            {arr.d(f), arr.a(i), arr.a_star(i, f)}};
        cells.push_back(PartialSts::validate(pts, bl));
      }
    try {
      auto glued = family_union(cells);
      if (glued.num_blocks() != arr.sts.num_blocks())
        rep.family_unions_valid = false;
    } catch (const Error&) {
      rep.family_unions_valid = false;
    }
  }
  if (!rep.family_unions_valid) throw verification_failed("family union");

  return rep;
}

namespace {

// Greedy pairwise product-free set, preferring the freshest points.
std::vector<int> product_free_set(const PartialSts& s, int want) {
  std::vector<int> chosen;
  for (int p = s.size() - 1; p >= 0 && (int)chosen.size() < want; --p) {
    bool ok = true;
    for (int q : chosen)
      if (s.pair_defined(p, q)) ok = false;
    if (ok) chosen.push_back(p);
  }
  return chosen;
}

std::vector<std::string> minimal_generators(const PartialSts& s) {
  const int n = s.size();
  for (int sz = 1; sz <= n; ++sz) {
    std::vector<int> comb(sz);
    for (int i = 0; i < sz; ++i) comb[i] = i;
    for (;;) {
      if ((int)s.close_subset(comb).size() == n) {
        std::vector<std::string> out;
        for (int p : comb) out.push_back(s.name(p));
        return out;
      }
      int i = sz - 1;
      while (i >= 0 && comb[i] == n - sz + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < sz; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  throw internal_error("NoGenerators", "system has no generating subset");
}

}  // namespace

Sma1Chain sma1_build(const std::vector<PartialSts>& family, int prefix,
                     const std::vector<std::vector<std::string>>& generators) {
  if (family.empty())
    throw invalid_input("FamilyMemberTooSmall", "family is empty");
  bool any_big = false;
  for (const auto& m : family) {
    if (!m.is_total())
      throw invalid_input("NotTotal", "family members must be total");
    if (m.size() >= 3) any_big = true;
  }
  if (!any_big)
    throw invalid_input("FamilyMemberTooSmall",
                        "no family member has three points");

  Sma1Chain chain;
  PartialSts b = PartialSts::validate({"z0", "z1", "z2"}, {});
  chain.stages.push_back(b);
  int step_label = 1;
  for (int stage = 1; stage <= prefix; ++stage) {
    const int mi = (stage - 1) % (int)family.size();
    const PartialSts& mem = family[mi];
    if (mem.size() < 3)
      throw invalid_input("FamilyMemberTooSmall",
                          "cannot attach a member with fewer than 3 points");
    std::vector<std::string> gens = (mi < (int)generators.size() &&
                                     !generators[mi].empty())
                                        ? generators[mi]
                                        : minimal_generators(mem);
    const int k = (int)gens.size();
    Sma1Stage log;
    log.member = mi;
    log.k = k;

    auto pf = product_free_set(b, 2 * k + 3);
    while ((int)pf.size() < 2 * k + 3) {
      b = free_step(b, step_label++);
      ++log.iterations;
      pf = product_free_set(b, 2 * k + 3);
    }
    for (int p : pf) log.product_free.push_back(b.name(p));

    // fresh copy of the member, then the linking triples over its generators
    const std::string pre = "m" + std::to_string(stage) + "_";
    std::vector<std::string> points = b.point_names();
    std::vector<std::string> copy_points;
    std::vector<NameTriple> copy_blocks;
    for (const auto& nm : mem.point_names()) copy_points.push_back(pre + nm);
    for (const auto& blk : mem.blocks())
      copy_blocks.push_back({pre + mem.name(blk[0]), pre + mem.name(blk[1]),
                             pre + mem.name(blk[2])});
    chain.attached.push_back(PartialSts::validate(copy_points, copy_blocks));

    std::vector<NameTriple> blocks;
    for (const auto& blk : b.blocks())
      blocks.push_back({b.name(blk[0]), b.name(blk[1]), b.name(blk[2])});
    points.insert(points.end(), copy_points.begin(), copy_points.end());
    blocks.insert(blocks.end(), copy_blocks.begin(), copy_blocks.end());
    for (int j = 0; j < k; ++j) {
      NameTriple link = {log.product_free[j], log.product_free[k + j],
                         pre + gens[j]};
      log.linking.push_back(link);
      blocks.push_back(link);
    }
    b = PartialSts::validate(points, blocks);
    chain.stages.push_back(b);
    chain.logs.push_back(std::move(log));
  }
  return chain;
}

Sma1Report sma1_audit(const Sma1Chain& chain,
                      const std::vector<PartialSts>& family) {
  Sma1Report rep;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.failures.push_back(std::move(why));
  };
  if (chain.stages.empty()) {
    fail("empty chain");
    return rep;
  }
  for (std::size_t i = 0; i < chain.logs.size(); ++i) {
    const PartialSts& stage = chain.stages[i + 1];
    const PartialSts& prev = chain.stages[i];
    const PartialSts& copy = chain.attached[i];
    const std::string tag = "stage " + std::to_string(i + 1);

    // (1) the attached copy is a substructure of its stage
    std::vector<int> idxs;
    bool present = true;
    for (const auto& nm : copy.point_names()) {
      auto p = stage.find_point(nm);
      if (!p) present = false;
      else idxs.push_back(*p);
    }
    if (!present || !stage.is_relatively_closed(idxs) ||
        stage.induced(idxs).num_blocks() != copy.num_blocks())
      fail(tag + ": attached member is not a substructure");

    // (2) every stage point is an iterated product of previous-stage points
    std::vector<int> base_pts;
    for (const auto& nm : prev.point_names()) {
      auto p = stage.find_point(nm);
      if (p) base_pts.push_back(*p);
    }
    if ((int)stage.close_subset(base_pts).size() != stage.size())
      fail(tag + ": stage not generated by the previous stage");

    // (3) every sub-STS on > 3 points embeds into an attached member
    for (const auto& sub : total_subsystems(stage, 4)) {
      auto ind = stage.induced(sub);
      bool embeds = false;
      for (std::size_t j = 0; j <= i && !embeds; ++j) {
        int mj = chain.logs[j].member;
        if (mj < (int)family.size() && embedding_exists(ind, family[mj]))
          embeds = true;
      }
      if (!embeds)
        fail(tag + ": sub-system of size " + std::to_string(sub.size()) +
             " embeds into no attached member");
    }
  }

  // (4) the three starting points generate the final stage
  const PartialSts& last = chain.stages.back();
  std::vector<int> b0;
  for (const auto& nm : chain.stages.front().point_names()) {
    auto p = last.find_point(nm);
    if (p) b0.push_back(*p);
  }
  if ((int)last.close_subset(b0).size() != last.size())
    fail("final stage not generated by the three starting points");
  return rep;
}

std::vector<std::vector<int>> total_subsystems(const PartialSts& s,
                                               int min_size) {
  const int n = s.size();
  std::set<std::vector<int>> found;
  auto consider = [&](std::vector<int> cl) {
    if ((int)cl.size() >= std::max(min_size, 3) && s.is_total_on(cl))
      found.insert(std::move(cl));
  };
  // seeds: closures of triples whose pairs are all defined (any sub-STS on
  // <= 9 points is generated by three of its points)
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!s.pair_defined(a, b)) continue;
      for (int c = b + 1; c < n; ++c) {
        if (!s.pair_defined(a, c) || !s.pair_defined(b, c)) continue;
        consider(s.close_subset({a, b, c}));
      }
    }
  // saturate: grow found systems by points connected to all of them, for
  // subsystems needing more than three generators
  std::vector<std::vector<int>> work(found.begin(), found.end());
  for (std::size_t w = 0; w < work.size(); ++w) {
    const auto cur = work[w];
    for (int x = 0; x < n; ++x) {
      if (std::find(cur.begin(), cur.end(), x) != cur.end()) continue;
      bool linked = true;
      for (int p : cur)
        if (!s.pair_defined(p, x)) linked = false;
      if (!linked) continue;
      auto ext = s.close_subset([&] {
        auto v = cur;
        v.push_back(x);
        return v;
      }());
      if ((int)ext.size() >= std::max(min_size, 3) && s.is_total_on(ext) &&
          found.insert(ext).second)
        work.push_back(std::move(ext));
    }
  }
  return {found.begin(), found.end()};
}

bool proper_subsystem_free(const PartialSts& s) {
  const int n = s.size();
  for (const auto& sub : total_subsystems(s, 4))
    if ((int)sub.size() < n) return false;
  return true;
}

std::optional<PartialSts> random_sts(int n, std::uint64_t seed,
                                     std::uint64_t node_budget) {
  if (n < 3 || (n % 6 != 1 && n % 6 != 3))
    throw invalid_input("NotAdmissible",
                        "no STS of order " + std::to_string(n));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> third(n * n, -1);
  std::vector<std::array<int, 3>> blocks;
  std::uint64_t nodes = 0;
  auto place = [&](int a, int b, int c) {
    third[a * n + b] = third[b * n + a] = c;
    third[a * n + c] = third[c * n + a] = b;
    third[b * n + c] = third[c * n + b] = a;
    blocks.push_back({a, b, c});
  };
  auto unplace = [&](int a, int b, int c) {
    third[a * n + b] = third[b * n + a] = -1;
    third[a * n + c] = third[c * n + a] = -1;
    third[b * n + c] = third[c * n + b] = -1;
    blocks.pop_back();
  };
  std::function<bool()> go = [&]() -> bool {
    if (++nodes > node_budget) return false;
    int a = -1, b = -1;
    for (int i = 0; i < n && a < 0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (third[i * n + j] < 0) {
          a = i;
          b = j;
          break;
        }
    if (a < 0) return true;
    std::vector<int> cands;
    for (int c = 0; c < n; ++c)
      if (c != a && c != b && third[a * n + c] < 0 && third[b * n + c] < 0)
        cands.push_back(c);
    std::shuffle(cands.begin(), cands.end(), rng);
    for (int c : cands) {
      place(a, b, c);
      if (go()) return true;
      unplace(a, b, c);
      if (nodes > node_budget) return false;
    }
    return false;
  };
  if (!go()) return std::nullopt;
  std::vector<std::string> points;
  for (int p = 0; p < n; ++p) points.push_back("p" + std::to_string(p));
  return PartialSts::from_indices(points, blocks);
}

std::optional<PartialSts> doyen_search(int n, double budget_seconds,
                                       std::uint64_t seed) {
  if (n < 3 || (n % 6 != 1 && n % 6 != 3))
    throw invalid_input("NotAdmissible",
                        "no STS of order " + std::to_string(n));
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  for (std::uint64_t restart = 0;
       restart == 0 || elapsed() < budget_seconds; ++restart) {
    auto cand = random_sts(n, seed * 1000003ull + restart);
    if (cand && proper_subsystem_free(*cand)) return cand;
  }
  return std::nullopt;
}

bool nonisomorphic_prefixes(const std::vector<int>& x,
                            const std::vector<int>& y, int prefix) {
  std::set<int> sx(x.begin(), x.end()), sy(y.begin(), y.end());
  if (sx == sy) return false;
  auto build = [&](const std::set<int>& orders) {
    std::vector<PartialSts> fam;
    for (int n : orders) {
      auto sys = doyen_search(n, 60.0, 1);
      if (!sys)
        throw budget_exceeded("no subsystem-free system of order " +
                              std::to_string(n) + " found in budget");
      fam.push_back(std::move(*sys));
    }
    int t = prefix < 0 ? (int)fam.size() : prefix;
    return sma1_build(fam, t).stages.back();
  };
  return canonical_form(build(sx)) != canonical_form(build(sy));
}

}  // namespace sts
