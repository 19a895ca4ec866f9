#include "sts/closure.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sts {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > UINT64_MAX - b) throw invalid_input("Overflow", "count_terms overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > UINT64_MAX / b)
    throw invalid_input("Overflow", "count_terms overflow");
  return a * b;
}

}  // namespace

std::uint64_t count_terms(int num_vars, int max_rank) {
  if (num_vars < 1 || max_rank < 1)
    throw invalid_input("BadRange", "need num_vars >= 1 and max_rank >= 1");
  std::vector<std::uint64_t> t(max_rank + 1, 0);
  t[1] = num_vars;
  std::uint64_t total = t[1];
  for (int r = 2; r <= max_rank; ++r) {
    for (int i = 1; i < r; ++i)
      t[r] = checked_add(t[r], checked_mul(t[i], t[r - i]));
    total = checked_add(total, t[r]);
  }
  return total;
}

std::uint64_t rank_bound_k(int n, int m) {
  if (n < 0 || m < 1) throw invalid_input("BadRange", "need n >= 0, m >= 1");
  std::uint64_t k0 = checked_add(count_terms(n + 1, m), 1);
  if (k0 >= 64) throw invalid_input("Overflow", "2^k0 exceeds 64 bits");
  return checked_mul(std::uint64_t{1} << k0, static_cast<std::uint64_t>(m));
}

Formula psi_k(const std::string& target_var,
              const std::vector<std::string>& param_vars, int k,
              std::size_t max_literals) {
  if (k < 1) throw invalid_input("BadRange", "k must be >= 1");
  FreeUniverse u(PartialSts::validate(param_vars, {}));
  TermSet gens;
  for (const auto& p : param_vars) gens.insert(u.point(p));
  // stratified closure with a literal-count guard
  std::vector<TermSet> level(2);
  level[1] = gens;
  TermSet out = gens;
  for (int r = 2; r <= k; ++r) {
    level.emplace_back();
    for (int i = 1; i < r; ++i)
      for (const auto& x : level[i])
        for (const auto& y : level[r - i]) {
          auto p = u.mul(x, y);
          level[r].insert(p);
          out.insert(p);
          if (out.size() > max_literals)
            throw Error(ErrorKind::kBudget, "SizeBudgetExceeded",
                        "psi_k literal count exceeds " +
                            std::to_string(max_literals));
        }
  }
  Formula phi;
  phi.vars.push_back(target_var);
  for (const auto& p : param_vars) phi.vars.push_back(p);
  for (const auto& t : out) {
    Literal lit;
    lit.rel = Rel::kNeq;
    lit.lhs = RawTerm{target_var, nullptr, nullptr};
    lit.rhs = parse_term_any(t->text());
    phi.lits.push_back(std::move(lit));
  }
  return phi;
}

namespace {

// Congruence propagation over the flattened product triples of a
// conjunction, closed under the squag laws (idempotence, commutativity,
// the three rotations of every block) and the base diagram. A contradiction
// here refutes the formula in every squag extending the base; absence of
// one yields a finite model directly (the quotient itself).
struct Engine {
  const PartialSts& base;
  std::vector<int> parent;
  std::vector<int> base_pt;                 // root class -> base point or -1
  std::map<std::string, int> text_node;     // subterm text -> node
  std::map<int, int> point_node;            // base point -> node
  std::vector<std::array<int, 3>> triples;  // u*v = w
  std::vector<std::pair<int, int>> neqs;
  bool contradiction = false;

  explicit Engine(const PartialSts& b) : base(b) {}

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  int fresh(int bp) {
    parent.push_back((int)parent.size());
    base_pt.push_back(bp);
    return (int)parent.size() - 1;
  }

  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return;
    if (base_pt[a] >= 0 && base_pt[b] >= 0 && base_pt[a] != base_pt[b]) {
      contradiction = true;
      return;
    }
    if (base_pt[a] < 0) std::swap(a, b);
    parent[b] = a;  // keep the base-point-carrying root
  }

  int node_of_point(int p) {
    auto it = point_node.find(p);
    if (it != point_node.end()) return it->second;
    int n = fresh(p);
    point_node.emplace(p, n);
    return n;
  }

  int node_of(const RawTerm& t) {
    std::string text = term_to_text(t);
    auto it = text_node.find(text);
    if (it != text_node.end()) return it->second;
    int n;
    if (!t.leaf.empty()) {
      auto p = base.find_point(t.leaf);
      n = p ? node_of_point(*p) : fresh(-1);
    } else {
      int l = node_of(*t.l), r = node_of(*t.r);
      n = fresh(-1);
      triples.push_back({l, r, n});
    }
    text_node.emplace(std::move(text), n);
    return n;
  }

  void load(const Formula& phi) {
    for (const auto& lit : phi.lits) {
      int l = node_of(lit.lhs), r = node_of(lit.rhs);
      if (lit.rel == Rel::kEq)
        unite(l, r);
      else
        neqs.emplace_back(l, r);
    }
  }

  void saturate() {
    bool changed = true;
    while (changed && !contradiction) {
      changed = false;
      std::size_t before = triples.size();
      std::map<std::pair<int, int>, int> pair_third;
      std::set<std::array<int, 3>> seen;
      std::vector<std::array<int, 3>> kept;
      for (auto t : triples) {
        int u = find(t[0]), v = find(t[1]), w = find(t[2]);
        if (u == v || u == w || v == w) {
          // x*x = w forces w = x; x*v = x forces v = x
          unite(u, v), unite(find(u), w);
          changed = true;
          continue;
        }
        std::array<int, 3> canon = {u, v, w};
        std::sort(canon.begin(), canon.end());
        if (!seen.insert(canon).second) continue;
        kept.push_back({u, v, w});
        // the three rotations share pairs with every other triple
        const std::array<std::array<int, 3>, 3> rots = {
            {{u, v, w}, {u, w, v}, {v, w, u}}};
        for (const auto& r : rots) {
          auto key = std::minmax(r[0], r[1]);
          auto [it, fresh_pair] = pair_third.emplace(key, r[2]);
          if (!fresh_pair && find(it->second) != find(r[2])) {
            unite(it->second, r[2]);
            changed = true;
          }
        }
        // base diagram: a defined base pair forces its third point
        int bu = base_pt[u], bv = base_pt[v], bw = base_pt[w];
        auto anchor = [&](int a, int b, int third_node) {
          auto p = base.product(a, b);
          if (p && find(third_node) != find(node_of_point(*p))) {
            unite(third_node, node_of_point(*p));
            changed = true;
          }
        };
        if (bu >= 0 && bv >= 0) anchor(bu, bv, w);
        if (bu >= 0 && bw >= 0) anchor(bu, bw, v);
        if (bv >= 0 && bw >= 0) anchor(bv, bw, u);
        if (contradiction) return;
      }
      triples = std::move(kept);
      if (triples.size() != before) changed = true;
    }
    if (!contradiction)
      for (auto [l, r] : neqs)
        if (find(l) == find(r)) contradiction = true;
  }

  // Classes reachable from the constants by products; x landing here is
  // pinned to a single element of the parameter closure.
  std::set<int> constant_closure() {
    std::set<int> closed;
    for (auto [p, n] : point_node) closed.insert(find(n));
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& t : triples) {
        int u = find(t[0]), v = find(t[1]), w = find(t[2]);
        int in = (int)closed.count(u) + closed.count(v) + closed.count(w);
        if (in == 2) {
          for (int m : {u, v, w}) grew |= closed.insert(m).second;
        }
      }
    }
    return closed;
  }
};

}  // namespace

SatResult qf_satisfiable(const Formula& phi, const FreeUniverse& universe,
                         int /*depth*/) {
  const PartialSts& base = universe.base();
  Engine eng(base);
  eng.load(phi);
  eng.saturate();
  SatResult res;
  if (eng.contradiction) {
    res.verdict = Verdict::kUnsat;
    return res;
  }
  // Build the quotient model: one fresh point per non-constant class, the
  // triples as blocks, glued onto the base.
  std::set<std::string> taken(base.point_names().begin(),
                              base.point_names().end());
  std::map<int, std::string> class_name;
  for (auto [p, n] : eng.point_node) class_name[eng.find(n)] = base.name(p);
  int counter = 0;
  auto name_of = [&](int cls) -> const std::string& {
    auto it = class_name.find(cls);
    if (it != class_name.end()) return it->second;
    std::string nm;
    do {
      nm = "~" + std::to_string(counter++);
    } while (taken.count(nm));
    taken.insert(nm);
    return class_name.emplace(cls, std::move(nm)).first->second;
  };
  std::vector<std::string> points = base.point_names();
  std::set<std::array<std::string, 3>> blockset;
  for (const auto& b : base.blocks())
    blockset.insert({base.name(b[0]), base.name(b[1]), base.name(b[2])});
  for (const auto& t : eng.triples) {
    std::array<std::string, 3> bl = {name_of(eng.find(t[0])),
                                     name_of(eng.find(t[1])),
                                     name_of(eng.find(t[2]))};
    std::sort(bl.begin(), bl.end());
    blockset.insert(bl);
  }
  for (const auto& [cls, nm] : class_name)
    if (!base.find_point(nm)) points.push_back(nm);
  std::vector<std::array<std::string, 3>> blocks(blockset.begin(),
                                                 blockset.end());
  PartialSts ext;
  try {
    ext = PartialSts::validate(points, blocks);
  } catch (const Error& e) {
    throw internal_error("PropagationIncomplete",
                         std::string("quotient model invalid: ") + e.what());
  }
  // witness assignment + re-verification by normalization
  FreeUniverse ue(ext);
  std::map<std::string, std::string> leafmap;
  for (const auto& v : phi.vars) {
    auto it = eng.text_node.find(v);
    if (it == eng.text_node.end()) {
      // variable never mentioned: give it a fresh point of its own
      std::string nm = v;
      while (taken.count(nm)) nm += "'";
      // re-validate with the extra point
      points.push_back(nm);
      ext = PartialSts::validate(points, blocks);
      ue = FreeUniverse(ext);
      taken.insert(nm);
      leafmap[v] = nm;
    } else {
      int cls = eng.find(it->second);
      bool fresh_class = !class_name.count(cls);
      leafmap[v] = name_of(cls);
      if (fresh_class && !base.find_point(leafmap[v])) {
        // class mentioned only outside any product: adjoin its point
        points.push_back(leafmap[v]);
        ext = PartialSts::validate(points, blocks);
        ue = FreeUniverse(ext);
      }
    }
  }
  std::function<TermPtr(const RawTerm&)> eval =
      [&](const RawTerm& t) -> TermPtr {
    if (!t.leaf.empty()) {
      auto it = leafmap.find(t.leaf);
      return ue.point(it != leafmap.end() ? it->second : t.leaf);
    }
    return ue.mul(eval(*t.l), eval(*t.r));
  };
  for (const auto& lit : phi.lits) {
    bool equal = term_eq(eval(lit.lhs), eval(lit.rhs));
    if (equal != (lit.rel == Rel::kEq))
      throw internal_error("VerificationFailed",
                           "witness fails literal " + term_to_text(lit.lhs) +
                               (lit.rel == Rel::kEq ? " = " : " != ") +
                               term_to_text(lit.rhs));
  }
  res.verdict = Verdict::kSat;
  res.extension = ext;
  for (const auto& v : phi.vars) res.witness[v] = ue.point(leafmap.at(v));
  return res;
}

OrbitResult has_infinite_orbit(const Formula& phi, const std::string& x,
                               const FreeUniverse& universe) {
  OrbitResult out;
  // certified rank bound, when it fits in 64 bits
  int n = 0, m = 1;
  {
    std::set<std::string> consts;
    std::function<int(const RawTerm&)> rank = [&](const RawTerm& t) -> int {
      if (!t.leaf.empty()) {
        if (universe.base().find_point(t.leaf)) consts.insert(t.leaf);
        return 1;
      }
      return rank(*t.l) + rank(*t.r);
    };
    for (const auto& lit : phi.lits)
      m = std::max({m, rank(lit.lhs), rank(lit.rhs)});
    n = (int)consts.size();
  }
  try {
    out.k = rank_bound_k(n, m);
  } catch (const Error&) {
    out.k.reset();
  }

  out.sat = qf_satisfiable(phi, universe);
  if (out.sat.verdict == Verdict::kUnsat) {
    out.verdict = Orbit::kFinite;
    return out;
  }
  Engine eng(universe.base());
  eng.load(phi);
  eng.saturate();
  auto xit = eng.text_node.find(x);
  if (xit == eng.text_node.end()) {
    out.verdict = Orbit::kInfinite;  // x unconstrained
    return out;
  }
  auto closed = eng.constant_closure();
  out.verdict = closed.count(eng.find(xit->second)) ? Orbit::kFinite
                                                    : Orbit::kInfinite;
  return out;
}

}  // namespace sts
