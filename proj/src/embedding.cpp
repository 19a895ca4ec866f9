#include "sts/embedding.hpp"

#include <algorithm>

namespace sts {

namespace {

struct Search {
  const PartialSts& src;
  const PartialSts& tgt;
  const EmbedOptions& opt;
  std::vector<int> map;      // src point -> tgt point or -1
  std::vector<int> inverse;  // tgt point -> src point or -1
  std::vector<Embedding> results;
  std::uint64_t nodes = 0;

  Search(const PartialSts& s, const PartialSts& t, const EmbedOptions& o)
      : src(s), tgt(t), opt(o), map(s.size(), -1), inverse(t.size(), -1) {}

  // Consistency of assigning s -> t against all currently assigned points.
  bool consistent(int sp, int tp) const {
    if (inverse[tp] >= 0) return false;
    for (int other = 0; other < src.size(); ++other) {
      int ot = map[other];
      if (ot < 0 || other == sp) continue;
      auto sprod = src.product(sp, other);
      auto tprod = tgt.product(tp, ot);
      if (sprod) {
        // block {sp, other, *sprod} must map onto a block of tgt
        if (!tprod) return false;
        int third = map[*sprod];
        if (third >= 0) {
          if (third != *tprod) return false;
        } else {
          // *tprod will have to become the image of *sprod
          if (inverse[*tprod] >= 0) return false;
        }
      } else if (opt.substructure && tprod) {
        // image pair has a product; it may not hit the image
        if (inverse[*tprod] >= 0) return false;
      }
    }
    return true;
  }

  bool complete_ok() const {
    for (const auto& b : src.blocks())
      if (!tgt.has_block(map[b[0]], map[b[1]], map[b[2]])) return false;
    if (opt.substructure) {
      for (int a = 0; a < src.size(); ++a)
        for (int b = a + 1; b < src.size(); ++b) {
          auto tprod = tgt.product(map[a], map[b]);
          if (tprod && inverse[*tprod] >= 0) {
            auto sprod = src.product(a, b);
            if (!sprod || *sprod != inverse[*tprod]) return false;
          }
        }
    }
    return true;
  }

  // next unassigned source point with the fewest consistent images
  int pick() const {
    int bestp = -1;
    long bestc = -1;
    for (int p = 0; p < src.size(); ++p) {
      if (map[p] >= 0) continue;
      long c = 0;
      for (int t = 0; t < tgt.size(); ++t)
        if (consistent(p, t)) ++c;
      if (bestp < 0 || c < bestc) {
        bestp = p;
        bestc = c;
      }
    }
    return bestp;
  }

  bool rec() {  // returns false when max_results reached
    if (++nodes > opt.node_budget)
      throw budget_exceeded("find_embeddings search");
    int p = pick();
    if (p < 0) {
      if (complete_ok()) {
        results.push_back(Embedding{map});
        if (results.size() >= opt.max_results) return false;
      }
      return true;
    }
    for (int t = 0; t < tgt.size(); ++t) {
      if (!consistent(p, t)) continue;
      map[p] = t;
      inverse[t] = p;
      bool go = rec();
      map[p] = -1;
      inverse[t] = -1;
      if (!go) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<Embedding> find_embeddings(
    const PartialSts& src, const PartialSts& tgt,
    const std::vector<std::pair<int, int>>& base, const EmbedOptions& opt) {
  Search sr(src, tgt, opt);
  for (const auto& [sp, tp] : base) {
    if (sp < 0 || sp >= src.size() || tp < 0 || tp >= tgt.size())
      throw invalid_input("InvalidBaseMap", "base map index out of range");
    if (sr.map[sp] >= 0 || !sr.consistent(sp, tp))
      throw invalid_input("InvalidBaseMap",
                          "base map is not injective product-preserving");
    sr.map[sp] = tp;
    sr.inverse[tp] = sp;
  }
  sr.rec();
  std::sort(sr.results.begin(), sr.results.end(),
            [](const Embedding& a, const Embedding& b) { return a.map < b.map; });
  return sr.results;
}

bool embedding_exists(const PartialSts& src, const PartialSts& tgt,
                      const std::vector<std::pair<int, int>>& base,
                      bool substructure) {
  EmbedOptions opt;
  opt.substructure = substructure;
  opt.max_results = 1;
  return !find_embeddings(src, tgt, base, opt).empty();
}

}  // namespace sts
