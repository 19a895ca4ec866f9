#include "sts/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace sts {

namespace {

bool valid_point_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '.' ||
        c == '(' || c == ')')
      return false;
  }
  return true;
}

}  // namespace

PartialSts PartialSts::validate(
    std::vector<std::string> points,
    std::vector<std::array<std::string, 3>> blocks) {
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (!valid_point_name(points[i]))
      throw invalid_input("BadPointName", "invalid point name '" + points[i] + "'");
    if (!index.emplace(points[i], i).second)
      throw invalid_input("DuplicatePoint", "duplicate point '" + points[i] + "'");
  }
  std::vector<std::array<int, 3>> iblocks;
  iblocks.reserve(blocks.size());
  for (const auto& b : blocks) {
    std::array<int, 3> ib;
    for (int j = 0; j < 3; ++j) {
      auto it = index.find(b[j]);
      if (it == index.end())
        throw invalid_input("UnknownPoint", "block member '" + b[j] + "' is not a point");
      ib[j] = it->second;
    }
    iblocks.push_back(ib);
  }
  return from_indices(std::move(points), std::move(iblocks));
}

PartialSts PartialSts::from_indices(std::vector<std::string> points,
                                    std::vector<std::array<int, 3>> blocks) {
  PartialSts s;
  const int n = static_cast<int>(points.size());
  {
    std::set<std::string> seen;
    for (const auto& p : points) {
      if (!valid_point_name(p))
        throw invalid_input("BadPointName", "invalid point name '" + p + "'");
      if (!seen.insert(p).second)
        throw invalid_input("DuplicatePoint", "duplicate point '" + p + "'");
    }
  }
  s.names_ = std::move(points);
  for (auto& b : blocks) {
    for (int m : b)
      if (m < 0 || m >= n)
        throw invalid_input("UnknownPoint", "block member index out of range");
    std::sort(b.begin(), b.end());
    if (b[0] == b[1] || b[1] == b[2])
      throw invalid_input("RepeatedMemberInBlock",
                          "block with repeated member '" + s.names_[b[0] == b[1] ? b[0] : b[1]] + "'");
  }
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());

  s.pair_third_.assign(static_cast<std::size_t>(n) * n, -1);
  s.point_blocks_.assign(n, {});
  auto at = [&](int a, int b) -> int& {
    return s.pair_third_[static_cast<std::size_t>(a) * n + b];
  };
  for (int bi = 0; bi < static_cast<int>(blocks.size()); ++bi) {
    const auto& b = blocks[bi];
    const int pairs[3][3] = {{b[0], b[1], b[2]}, {b[0], b[2], b[1]}, {b[1], b[2], b[0]}};
    for (const auto& pr : pairs) {
      int& slot = at(pr[0], pr[1]);
      if (slot != -1 && slot != pr[2])
        throw invalid_input("PairInTwoBlocks",
                            "pair {" + s.names_[pr[0]] + "," + s.names_[pr[1]] +
                                "} occurs in two blocks");
      slot = pr[2];
      at(pr[1], pr[0]) = pr[2];
    }
    for (int m : b) s.point_blocks_[m].push_back(bi);
  }
  s.blocks_ = std::move(blocks);
  return s;
}

std::optional<int> PartialSts::find_point(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int PartialSts::point(std::string_view name) const {
  auto p = find_point(name);
  if (!p) throw invalid_input("UnknownPoint", "no point named '" + std::string(name) + "'");
  return *p;
}

void PartialSts::check_point(int p) const {
  if (p < 0 || p >= size())
    throw invalid_input("UnknownPoint", "point index out of range");
}

std::optional<int> PartialSts::product(int a, int b) const {
  check_point(a);
  check_point(b);
  if (a == b) return a;
  int t = pair_third_[static_cast<std::size_t>(a) * size() + b];
  if (t < 0) return std::nullopt;
  return t;
}

bool PartialSts::pair_defined(int a, int b) const {
  return product(a, b).has_value();
}

bool PartialSts::has_block(int a, int b, int c) const {
  std::array<int, 3> t = {a, b, c};
  std::sort(t.begin(), t.end());
  return std::binary_search(blocks_.begin(), blocks_.end(), t);
}

bool PartialSts::is_total() const {
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b)
      if (pair_third_[static_cast<std::size_t>(a) * size() + b] < 0) return false;
  return true;
}

bool PartialSts::is_relatively_closed(const std::vector<int>& subset) const {
  std::vector<char> in(size(), 0);
  for (int p : subset) {
    check_point(p);
    in[p] = 1;
  }
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      auto c = product(subset[i], subset[j]);
      if (c && !in[*c]) return false;
    }
  return true;
}

std::vector<int> PartialSts::close_subset(std::vector<int> subset) const {
  std::vector<char> in(size(), 0);
  std::vector<int> work;
  for (int p : subset) {
    check_point(p);
    if (!in[p]) {
      in[p] = 1;
      work.push_back(p);
    }
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      auto c = product(work[i], work[j]);
      if (c && !in[*c]) {
        in[*c] = 1;
        work.push_back(*c);
      }
    }
  std::sort(work.begin(), work.end());
  return work;
}

bool PartialSts::is_total_on(const std::vector<int>& subset) const {
  std::vector<char> in(size(), 0);
  for (int p : subset) in[p] = 1;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      auto c = product(subset[i], subset[j]);
      if (!c || !in[*c]) return false;
    }
  return true;
}

PartialSts PartialSts::induced(const std::vector<int>& subset) const {
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> pos(size(), -1);
  std::vector<std::string> pts;
  for (int p : sorted) {
    check_point(p);
    pos[p] = static_cast<int>(pts.size());
    pts.push_back(names_[p]);
  }
  std::vector<std::array<int, 3>> bl;
  for (const auto& b : blocks_) {
    if (pos[b[0]] >= 0 && pos[b[1]] >= 0 && pos[b[2]] >= 0)
      bl.push_back({pos[b[0]], pos[b[1]], pos[b[2]]});
  }
  return from_indices(std::move(pts), std::move(bl));
}

bool compatible(const PartialSts& s1, const PartialSts& s2,
                const std::vector<std::string>& common) {
  for (std::size_t i = 0; i < common.size(); ++i) {
    int a1 = s1.point(common[i]);
    int a2 = s2.point(common[i]);
    for (std::size_t j = i + 1; j < common.size(); ++j) {
      int b1 = s1.point(common[j]);
      int b2 = s2.point(common[j]);
      auto c1 = s1.product(a1, b1);
      auto c2 = s2.product(a2, b2);
      if (c1 && c2 && s1.name(*c1) != s2.name(*c2)) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::string> name_intersection(const PartialSts& s1,
                                           const PartialSts& s2) {
  std::vector<std::string> common;
  for (const auto& n : s1.point_names())
    if (s2.find_point(n)) common.push_back(n);
  return common;
}

}  // namespace

PartialSts sts_union(const PartialSts& s1, const PartialSts& s2) {
  auto common = name_intersection(s1, s2);
  for (std::size_t i = 0; i < common.size(); ++i)
    for (std::size_t j = i + 1; j < common.size(); ++j) {
      auto c1 = s1.product(s1.point(common[i]), s1.point(common[j]));
      auto c2 = s2.product(s2.point(common[i]), s2.point(common[j]));
      if (c1 && c2 && s1.name(*c1) != s2.name(*c2))
        throw invalid_input("IncompatibleSystems",
                            "conflicting products for pair {" + common[i] +
                                "," + common[j] + "}");
    }
  std::vector<std::string> pts = s1.point_names();
  for (const auto& n : s2.point_names())
    if (!s1.find_point(n)) pts.push_back(n);
  std::vector<std::array<std::string, 3>> bl;
  for (const auto& b : s1.blocks())
    bl.push_back({s1.name(b[0]), s1.name(b[1]), s1.name(b[2])});
  for (const auto& b : s2.blocks())
    bl.push_back({s2.name(b[0]), s2.name(b[1]), s2.name(b[2])});
  return PartialSts::validate(std::move(pts), std::move(bl));
}

PartialSts family_union(const std::vector<PartialSts>& family) {
  if (family.empty()) return PartialSts();
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      try {
        sts_union(family[i], family[j]);
      } catch (const Error&) {
        throw invalid_input("IncompatibleSystems",
                            "members " + std::to_string(i) + " and " +
                                std::to_string(j) + " have no valid union");
      }
    }
  PartialSts acc = family[0];
  for (std::size_t i = 1; i < family.size(); ++i) acc = sts_union(acc, family[i]);
  return acc;
}

std::vector<std::vector<int>> sub_systems(const PartialSts& s, int min_size,
                                          int max_size) {
  const int n = s.size();
  max_size = std::min(max_size, n);
  std::vector<std::vector<int>> out;
  if (min_size > max_size) return out;
  if (min_size <= 1 && max_size >= 1) {
    for (int p = 0; p < n; ++p) out.push_back({p});
  }
  if (max_size < 3) {
    // size-2 subsets are never total (the third point escapes)
    std::sort(out.begin(), out.end());
    return out;
  }

  // Any point of a total closed set of size m lies in ceil((m-1)/2) blocks
  // inside it. Prune points that cannot meet the min_size threshold.
  int threshold = std::max(1, (std::max(min_size, 3) - 1) / 2);
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < n; ++p) {
      if (!alive[p]) continue;
      int cnt = 0;
      for (int bi : s.blocks_through(p)) {
        const auto& b = s.blocks()[bi];
        if (alive[b[0]] && alive[b[1]] && alive[b[2]]) ++cnt;
      }
      if (cnt < threshold) {
        alive[p] = 0;
        changed = true;
      }
    }
  }
  std::vector<int> kernel;
  for (int p = 0; p < n; ++p)
    if (alive[p]) kernel.push_back(p);

  // Seeds: closures of defined pairs inside the kernel. Every total closed
  // set of size >= 3 contains a block, and the closure of any of its pairs
  // stays inside it; extending found closed sets one point at a time then
  // reaches the whole set.
  std::set<std::vector<int>> visited;
  std::vector<std::vector<int>> work;
  auto push = [&](std::vector<int> cl) {
    if (static_cast<int>(cl.size()) > max_size) return;
    bool inside = true;
    for (int p : cl)
      if (!alive[p]) inside = false;
    if (!inside) return;
    if (visited.insert(cl).second) work.push_back(std::move(cl));
  };
  for (std::size_t i = 0; i < kernel.size(); ++i)
    for (std::size_t j = i + 1; j < kernel.size(); ++j)
      if (s.pair_defined(kernel[i], kernel[j]))
        push(s.close_subset({kernel[i], kernel[j]}));
  for (std::size_t w = 0; w < work.size(); ++w) {
    std::vector<int> cur = work[w];
    std::vector<char> in(n, 0);
    for (int p : cur) in[p] = 1;
    for (int x : kernel) {
      if (in[x]) continue;
      std::vector<int> ext = cur;
      ext.push_back(x);
      push(s.close_subset(std::move(ext)));
    }
  }
  for (const auto& cl : visited) {
    if (static_cast<int>(cl.size()) < std::max(min_size, 3)) continue;
    if (s.is_total_on(cl)) out.push_back(cl);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sts
