#include "sts/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sts {

namespace {

using Triple = std::array<int, 3>;

// Iterated refinement: a point's signature is its current color together
// with the multiset of color pairs of its co-block partners.
std::vector<int> refine_colors(const PartialSts& s,
                               const std::vector<int>& init) {
  const int n = s.size();
  std::vector<int> color(n, 0);
  {
    std::map<std::pair<int, int>, int> rank;
    for (int p = 0; p < n; ++p)
      rank.emplace(std::make_pair(init.empty() ? 0 : init[p],
                                  (int)s.blocks_through(p).size()),
                   0);
    int next = 0;
    for (auto& kv : rank) kv.second = next++;
    for (int p = 0; p < n; ++p)
      color[p] = rank.at({init.empty() ? 0 : init[p],
                          (int)s.blocks_through(p).size()});
  }
  for (int round = 0; round < n; ++round) {
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Sig> sigs(n);
    for (int p = 0; p < n; ++p) {
      std::vector<std::pair<int, int>> nb;
      for (int bi : s.blocks_through(p)) {
        const auto& b = s.blocks()[bi];
        int u = -1, v = -1;
        for (int m : b)
          if (m != p) (u < 0 ? u : v) = m;
        nb.emplace_back(std::min(color[u], color[v]),
                        std::max(color[u], color[v]));
      }
      std::sort(nb.begin(), nb.end());
      sigs[p] = {color[p], std::move(nb)};
    }
    std::map<Sig, int> rank;
    for (const auto& sg : sigs) rank.emplace(sg, 0);
    int next = 0;
    for (auto& kv : rank) kv.second = next++;
    std::vector<int> fresh(n);
    for (int p = 0; p < n; ++p) fresh[p] = rank.at(sigs[p]);
    if (fresh == color) break;
    color = std::move(fresh);
  }
  return color;
}

struct LabelSearch {
  const PartialSts& s;
  std::vector<int> point_at;     // label -> point, -1 when open
  std::vector<int> label_of;     // point -> label
  std::vector<int> block_done;   // labeled member count per block
  std::vector<std::vector<int>> order;  // class slices, in color order
  std::vector<Triple> best;
  bool have_best = false;
  std::uint64_t nodes = 0, budget;

  explicit LabelSearch(const PartialSts& sys, std::uint64_t b)
      : s(sys), budget(b) {}

  // cmp: -1 running encoding already smaller than best, 0 equal so far.
  void rec(std::size_t cls, std::size_t slot, std::vector<Triple>& enc,
           int cmp) {
    if (++nodes > budget) throw budget_exceeded("canonical_form labeling search");
    if (cls == order.size()) {
      if (!have_best || cmp < 0) {
        best = enc;
        have_best = true;
      }
      return;
    }
    if (slot == order[cls].size()) {
      rec(cls + 1, 0, enc, cmp);
      return;
    }
    const int label = [&] {
      int l = 0;
      for (std::size_t c = 0; c < cls; ++c) l += (int)order[c].size();
      return l + (int)slot;
    }();
    for (int p : order[cls]) {
      if (label_of[p] >= 0) continue;
      label_of[p] = label;
      std::vector<int> bumped;
      std::vector<Triple> batch;
      for (int bi : s.blocks_through(p)) {
        if (++block_done[bi] == 3) {
          const auto& b = s.blocks()[bi];
          Triple t = {label_of[b[0]], label_of[b[1]], label_of[b[2]]};
          std::sort(t.begin(), t.end(), std::greater<int>());
          batch.push_back(t);
        }
        bumped.push_back(bi);
      }
      std::sort(batch.begin(), batch.end());
      int ncmp = cmp;
      if (ncmp == 0 && have_best) {
        for (const auto& t : batch) {
          std::size_t idx = enc.size() + (&t - batch.data());
          if (idx >= best.size() || t > best[idx]) {
            ncmp = 1;
            break;
          }
          if (t < best[idx]) {
            ncmp = -1;
            break;
          }
        }
      }
      if (ncmp <= 0) {
        std::size_t save = enc.size();
        enc.insert(enc.end(), batch.begin(), batch.end());
        rec(cls, slot + 1, enc, ncmp);
        enc.resize(save);
      }
      for (int bi : bumped) --block_done[bi];
      label_of[p] = -1;
    }
  }
};

}  // namespace

std::string canonical_form(const PartialSts& s, const std::vector<int>& colors,
                           std::uint64_t node_budget) {
  const int n = s.size();
  if (!colors.empty() && (int)colors.size() != n)
    throw invalid_input("BadColors", "color vector size mismatch");
  std::vector<int> color = refine_colors(s, colors);
  int num_classes = color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
  std::vector<std::vector<int>> order(num_classes);
  for (int p = 0; p < n; ++p) order[color[p]].push_back(p);

  LabelSearch ls(s, node_budget);
  ls.label_of.assign(n, -1);
  ls.block_done.assign(s.num_blocks(), 0);
  ls.order = order;
  std::vector<Triple> enc;
  ls.rec(0, 0, enc, 0);

  std::ostringstream out;
  out << "n=" << n << ";c=";
  // record the input color of each class too: refinement compresses the
  // color values, but systems differing only in absolute colors must not
  // collide
  for (const auto& cls : order)
    out << cls.size() << ":" << (colors.empty() ? 0 : colors[cls.front()])
        << ",";
  out << ";b=";
  for (const auto& t : ls.best) out << t[2] << "." << t[1] << "." << t[0] << ",";
  return out.str();
}

}  // namespace sts
