#include "sts/completion.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "sts/rng.hpp"

namespace sts {

namespace {

std::string unique_name(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  taken.insert(base);
  return base;
}

}  // namespace

PartialSts free_step(const PartialSts& s, int depth_label) {
  const int n = s.size();
  std::vector<std::string> points = s.point_names();
  std::set<std::string> taken(points.begin(), points.end());
  std::vector<std::array<std::string, 3>> blocks;
  for (const auto& b : s.blocks())
    blocks.push_back({s.name(b[0]), s.name(b[1]), s.name(b[2])});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (s.pair_defined(a, b)) continue;
      const std::string &na = s.name(a), &nb = s.name(b);
      std::string fresh =
          unique_name(std::min(na, nb) + "*" + std::max(na, nb) + "#" +
                          std::to_string(depth_label),
                      taken);
      points.push_back(fresh);
      blocks.push_back({na, nb, fresh});
    }
  return PartialSts::validate(std::move(points), std::move(blocks));
}

PartialSts free_truncation(const PartialSts& s, int depth) {
  if (depth < 0) throw invalid_input("BadDepth", "depth must be >= 0");
  PartialSts cur = s;
  for (int d = 1; d <= depth; ++d) cur = free_step(cur, d);
  return cur;
}

std::vector<int> admissible_orders(int lo, int hi) {
  if (lo < 0 || lo > hi)
    throw invalid_input("BadRange", "need 0 <= lo <= hi");
  std::vector<int> out;
  for (int n = std::max(lo, 1); n <= hi; ++n)
    if (n % 6 == 1 || n % 6 == 3) out.push_back(n);
  return out;
}

namespace {

// Pair-product backtracking at one fixed order. Points 0..n_orig-1 are the
// original system; blocks lying entirely inside them are forbidden so that
// the original embeds as a substructure.
struct Completer {
  int n, n_orig;
  std::vector<int> third;    // n*n, -1 undefined, diag = self
  std::vector<int> degree;   // blocks through each point
  std::vector<std::array<int, 3>> added;
  int undef_pairs = 0;
  std::uint64_t nodes = 0, budget;
  Rng rng;

  Completer(const PartialSts& s, int order, std::uint64_t node_budget,
            std::uint64_t seed)
      : n(order),
        n_orig(s.size()),
        third(order * order, -1),
        degree(order, 0),
        budget(node_budget),
        rng(seed) {
    for (int p = 0; p < n; ++p) third[p * n + p] = p;
    for (const auto& b : s.blocks()) place(b[0], b[1], b[2], false);
    undef_pairs = n * (n - 1) / 2 - 3 * (int)s.num_blocks();
    added.clear();
  }

  void place(int a, int b, int c, bool record) {
    third[a * n + b] = third[b * n + a] = c;
    third[a * n + c] = third[c * n + a] = b;
    third[b * n + c] = third[c * n + b] = a;
    ++degree[a], ++degree[b], ++degree[c];
    if (record) added.push_back({a, b, c});
  }

  void unplace(int a, int b, int c) {
    third[a * n + b] = third[b * n + a] = -1;
    third[a * n + c] = third[c * n + a] = -1;
    third[b * n + c] = third[c * n + b] = -1;
    --degree[a], --degree[b], --degree[c];
    added.pop_back();
  }

  bool candidate_ok(int a, int b, int c) const {
    if (c == a || c == b) return false;
    if (third[a * n + c] >= 0 || third[b * n + c] >= 0) return false;
    if (a < n_orig && b < n_orig && c < n_orig) return false;
    return true;
  }

  std::vector<int> candidates(int a, int b) const {
    std::vector<int> out;
    int spare = -1;  // one representative among block-free fresh points
    for (int c = 0; c < n; ++c) {
      if (!candidate_ok(a, b, c)) continue;
      if (c >= n_orig && degree[c] == 0) {
        if (spare < 0) spare = c;
        continue;
      }
      out.push_back(c);
    }
    if (spare >= 0) out.push_back(spare);
    return out;
  }

  // MRV pair selection, lexicographic tie-break. Returns false when no
  // undefined pair remains.
  bool pick(int& pa, int& pb, std::vector<int>& cand) const {
    pa = -1;
    std::size_t best = static_cast<std::size_t>(-1);
    for (int a = 0; a < n && best > 0; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (third[a * n + b] >= 0) continue;
        auto cs = candidates(a, b);
        if (cs.size() < best) {
          best = cs.size();
          pa = a, pb = b;
          cand = std::move(cs);
          if (best == 0) return true;
        }
      }
    return pa >= 0;
  }

  enum class Status { kFound, kExhausted, kBudget };

  Status solve() {
    if (++nodes > budget) return Status::kBudget;
    int a, b;
    std::vector<int> cand;
    if (!pick(a, b, cand)) return Status::kFound;
    // Seed-shuffled candidate order; the spare fresh point stays last so the
    // fresh-point symmetry class is explored once.
    bool spare_last = !cand.empty() && cand.back() >= n_orig &&
                      degree[cand.back()] == 0;
    std::shuffle(cand.begin(), spare_last ? cand.end() - 1 : cand.end(), rng);
    for (int c : cand) {
      place(a, b, c, true);
      undef_pairs -= 3;
      Status st = solve();
      if (st != Status::kExhausted) return st;  // keep placements on success
      undef_pairs += 3;
      unplace(a, b, c);
    }
    return Status::kExhausted;
  }
};

// A set of original points that is pairwise product-free stays a cap in any
// strict completion (new blocks never lie fully inside the original point
// set), and a cap of size c in an STS of order n forces n >= 2c - 1. Finds a
// large product-free set by greedy choice from every start to prune orders.
int product_free_bound(const PartialSts& s) {
  int best = 0;
  for (int start = 0; start < s.size(); ++start) {
    std::vector<int> cap = {start};
    for (int p = 0; p < s.size(); ++p) {
      if (p == start) continue;
      bool ok = true;
      for (int q : cap)
        if (s.pair_defined(p, q)) {
          ok = false;
          break;
        }
      if (ok) cap.push_back(p);
    }
    best = std::max(best, (int)cap.size());
  }
  return best;
}

// Every pair of original points not already covered must get its block from
// exactly one outside point (all-original blocks are forbidden), and one
// outside point covers at most floor(k/2) original pairs. Hence
// n >= k + ceil(uncovered / floor(k/2)).
int pair_counting_bound(const PartialSts& s) {
  const int k = s.size();
  if (k < 2) return k;
  const int uncovered = k * (k - 1) / 2 - 3 * (int)s.num_blocks();
  const int per_outside = k / 2;
  return k + (uncovered + per_outside - 1) / per_outside;
}

}  // namespace

PartialSts complete_finite(const PartialSts& s, const CompleteOptions& opt) {
  if (opt.max_order < s.size())
    throw invalid_input("BadOrderBound", "max_order below the point count");
  if (s.is_total()) return s;
  std::set<std::string> taken(s.point_names().begin(), s.point_names().end());
  const int min_order =
      std::max({s.size(), 2 * product_free_bound(s) - 1,
                pair_counting_bound(s)});
  for (int order : admissible_orders(min_order, opt.max_order)) {
    Completer comp(s, order, opt.nodes_per_order,
                   derive_seed(opt.seed, "complete_finite", order));
    if (comp.solve() != Completer::Status::kFound) continue;
    std::vector<std::string> points = s.point_names();
    std::set<std::string> names = taken;
    for (int p = s.size(); p < order; ++p)
      points.push_back(unique_name("+" + std::to_string(p - s.size() + 1), names));
    std::vector<std::array<int, 3>> blocks = s.blocks();
    blocks.insert(blocks.end(), comp.added.begin(), comp.added.end());
    return PartialSts::from_indices(std::move(points), std::move(blocks));
  }
  throw Error(ErrorKind::kBudget, "NoCompletionWithinBound",
              "no completion found at any admissible order <= " +
                  std::to_string(opt.max_order));
}

}  // namespace sts
