#include "doctest.h"
#include "oracles.hpp"
#include "sts/amalgam.hpp"
#include "sts/canonical.hpp"
#include "sts/generic.hpp"

using namespace sts;
using sts::testing::fano;

namespace {

PartialSts one_point(const std::string& nm) {
  return PartialSts::validate({nm}, {});
}

// the induced system on the image of an embedding map equals the source
bool image_is_copy(const PartialSts& src,
                   const std::map<std::string, std::string>& e,
                   const PartialSts& total) {
  std::vector<int> img;
  for (const auto& nm : src.point_names()) img.push_back(total.point(e.at(nm)));
  auto ind = total.induced(img);
  if (ind.num_blocks() != src.num_blocks()) return false;
  for (const auto& b : src.blocks())
    if (!ind.has_block(ind.point(e.at(src.name(b[0]))),
                       ind.point(e.at(src.name(b[1]))),
                       ind.point(e.at(src.name(b[2])))))
      return false;
  return true;
}

PointSet pts(const FreeUniverse& u, const std::vector<std::string>& names) {
  PointSet out;
  for (const auto& nm : names) out.push_back(u.point(nm));
  return out;
}

// affine plane of order 3 with coordinate names pij; the product of two
// distinct points is the third point on their line: -(x + y) mod 3
PartialSts plane9() {
  auto nm = [](int i, int j) {
    return "p" + std::to_string(i) + std::to_string(j);
  };
  std::vector<std::string> points;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) points.push_back(nm(i, j));
  std::set<std::array<std::string, 3>> blocks;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (i == k && j == l) continue;
          std::array<std::string, 3> b = {
              nm(i, j), nm(k, l), nm((6 - i - k) % 3, (6 - j - l) % 3)};
          std::sort(b.begin(), b.end());
          blocks.insert(b);
        }
  return PartialSts::validate(
      points, std::vector<std::array<std::string, 3>>(blocks.begin(),
                                                      blocks.end()));
}

}  // namespace

TEST_CASE("joint_embed basics") {
  auto t = joint_embed(one_point("x"), one_point("x"));
  CHECK(t.total.is_total());
  CHECK(t.total.size() == 3);
  CHECK(t.e1.at("x") != t.e2.at("x"));

  // empty second system
  auto f = fano();
  auto tf = joint_embed(f, PartialSts::validate({}, {}));
  CHECK(tf.total == f);
}

TEST_CASE("joint_embed of two Fano copies") {
  auto f = fano();
  auto t = joint_embed(f, f);
  CHECK(t.total.is_total());
  CHECK(t.total.size() >= 15);
  const bool admissible = t.total.size() % 6 == 1 || t.total.size() % 6 == 3;
  CHECK(admissible);
  CHECK(image_is_copy(f, t.e1, t.total));
  CHECK(image_is_copy(f, t.e2, t.total));
  for (const auto& [nm, to] : t.e1)
    for (const auto& [nm2, to2] : t.e2) CHECK(to != to2);
}

TEST_CASE("amalgamate over a shared block") {
  auto f = fano();
  auto blk = f.blocks()[0];
  std::vector<std::pair<std::string, std::string>> shared;
  for (int m : blk) shared.emplace_back(f.name(m), f.name(m));
  auto t = amalgamate(f, f, shared);
  CHECK(t.total.is_total());
  CHECK(image_is_copy(f, t.e1, t.total));
  CHECK(image_is_copy(f, t.e2, t.total));
  // images overlap exactly on the shared block
  std::set<std::string> i1, i2;
  for (const auto& [from, to] : t.e1) i1.insert(to);
  for (const auto& [from, to] : t.e2) i2.insert(to);
  std::set<std::string> meet;
  for (const auto& nm : i1)
    if (i2.count(nm)) meet.insert(nm);
  CHECK(meet == std::set<std::string>{f.name(blk[0]), f.name(blk[1]),
                                      f.name(blk[2])});
}

TEST_CASE("amalgamate degenerate cases") {
  auto f = fano();
  std::vector<std::pair<std::string, std::string>> all;
  for (const auto& nm : f.point_names()) all.emplace_back(nm, nm);
  auto t = amalgamate(f, f, all);
  CHECK(t.total == f);

  // empty shared set behaves like joint embedding
  auto t2 = amalgamate(f, f, {});
  CHECK(t2.total.is_total());
  CHECK(t2.total.size() >= 15);

  // a non-closed shared set is rejected
  auto blk = f.blocks()[0];
  CHECK_THROWS_WITH_AS(
      amalgamate(f, f, {{f.name(blk[0]), f.name(blk[0])},
                        {f.name(blk[1]), f.name(blk[1])}}),
      doctest::Contains("NotASubquasigroup"), Error);
}

TEST_CASE("merge_al1 free singletons") {
  FreeUniverse u(PartialSts::validate({"a", "b", "a1", "b1"}, {}));
  auto r = merge_al1(u, pts(u, {"a"}), pts(u, {"b"}), pts(u, {"a1"}),
                     pts(u, {"b1"}), 2);
  REQUIRE(r.a.size() == 1);
  FreeUniverse ru(r.extension);
  CHECK(qf_equiv_m(ru, {ru.point(r.a[0]), ru.point("b")}, u,
                   {u.point("a"), u.point("b")}, 2));
  CHECK(qf_equiv_m(ru, {ru.point(r.a[0]), ru.point("b1")}, u,
                   {u.point("a1"), u.point("b1")}, 2));

  // degenerate: the same A on both sides
  auto r2 = merge_al1(u, pts(u, {"a"}), pts(u, {"b"}), pts(u, {"a"}),
                      pts(u, {"b1"}), 2);
  CHECK(r2.a.size() == 1);

  // overlapping parameter sets are rejected
  CHECK_THROWS_WITH_AS(merge_al1(u, pts(u, {"a"}), pts(u, {"b"}),
                                 pts(u, {"a1"}), pts(u, {"b"}), 2),
                       doctest::Contains("HypothesisViolated"), Error);
}

TEST_CASE("merge_al25 over a one-point shared part") {
  // over a free base the side closures are infinite
  FreeUniverse uf(PartialSts::validate({"e", "b", "c", "x", "y"}, {}));
  auto eb = uf.mul(uf.point("e"), uf.point("b"));
  auto ec = uf.mul(uf.point("e"), uf.point("c"));
  CHECK_THROWS_WITH_AS(
      merge_al25(uf, pts(uf, {"x"}), pts(uf, {"y"}),
                 {uf.point("e"), uf.point("b"), eb},
                 {uf.point("e"), uf.point("c"), ec}, 3),
      doctest::Contains("DepthExceeded"), Error);

  // in the affine plane everything is finite: B0 and B1 are the two axes
  // through p00 and both sides carry the same outside point p11
  FreeUniverse u(plane9());
  PointSet b0 = pts(u, {"p00", "p10", "p20"});
  PointSet b1 = pts(u, {"p00", "p01", "p02"});
  auto r = merge_al25(u, pts(u, {"p11"}), pts(u, {"p11"}), b0, b1, 3);
  REQUIRE(r.a.size() == 1);
  CHECK(r.a[0] != "p11");
  CHECK(r.extension.find_point("p00").has_value());
  FreeUniverse ru(r.extension);
  std::vector<TermPtr> t1 = pts(ru, {r.a[0], "p00", "p10", "p20"});
  std::vector<TermPtr> t2 = pts(u, {"p11", "p00", "p10", "p20"});
  CHECK(qf_equiv_m(ru, t1, u, t2, 3));
  std::vector<TermPtr> s1 = pts(ru, {r.a[0], "p00", "p01", "p02"});
  std::vector<TermPtr> s2 = pts(u, {"p11", "p00", "p01", "p02"});
  CHECK(qf_equiv_m(ru, s1, u, s2, 3));
}

TEST_CASE("merge_al25 closedness hypothesis violation") {
  // in the order-9 affine system a line plus an outside point generates
  // everything, so <A0 E> swallows the parallel line B0 beyond E
  auto f = sts::testing::aff9();
  FreeUniverse u(f);

  auto block_pts = [&](int bi) {
    const auto& b = f.blocks()[bi];
    return pts(u, {f.name(b[0]), f.name(b[1]), f.name(b[2])});
  };
  auto disjoint = [&](int bi, int bj) {
    for (int x : f.blocks()[bi])
      for (int y : f.blocks()[bj])
        if (x == y) return false;
    return true;
  };
  auto contains = [&](int bi, int p) {
    const auto& b = f.blocks()[bi];
    return b[0] == p || b[1] == p || b[2] == p;
  };

  const int a0_blk = 0;
  int e = -1;
  for (int p = 0; p < f.size() && e < 0; ++p)
    if (!contains(a0_blk, p)) e = p;
  int b0_blk = -1, b1_blk = -1, a1_blk = -1;
  for (int bi = 0; bi < (int)f.blocks().size(); ++bi)
    if (contains(bi, e) && disjoint(bi, a0_blk)) {
      b0_blk = bi;
      break;
    }
  for (int bi = 0; bi < (int)f.blocks().size(); ++bi)
    if (bi != b0_blk && contains(bi, e)) {
      b1_blk = bi;
      break;
    }
  for (int bi = 0; bi < (int)f.blocks().size(); ++bi)
    if (disjoint(bi, b1_blk)) {
      a1_blk = bi;
      break;
    }
  REQUIRE(b0_blk >= 0);
  REQUIRE(b1_blk >= 0);
  REQUIRE(a1_blk >= 0);

  auto b0 = block_pts(b0_blk), b1 = block_pts(b1_blk);
  // put e first in both so the shared part lines up index-wise
  for (auto* b : {&b0, &b1})
    std::stable_partition(b->begin(), b->end(), [&](const TermPtr& t) {
      return t->text() == f.name(e);
    });
  CHECK_THROWS_WITH_AS(
      merge_al25(u, block_pts(a0_blk), block_pts(a1_blk), b0, b1, 3),
      doctest::Contains("HypothesisViolated"), Error);
}

TEST_CASE("check_al3") {
  FreeUniverse u(PartialSts::validate({"a", "a1", "b", "b1", "d"}, {}));
  // D a fresh copy equivalent to both sides
  CHECK(check_al3(u, pts(u, {"a"}), pts(u, {"a1"}), pts(u, {"b"}),
                  pts(u, {"b1"}), pts(u, {"d"}), 2));

  // degenerate: D = B0 = B1, E = B0
  auto f = fano();
  FreeUniverse uf(f);
  auto blk = f.blocks()[0];
  PointSet b0 = pts(uf, {f.name(blk[0]), f.name(blk[1]), f.name(blk[2])});
  int off = -1;
  for (int p = 0; p < 7 && off < 0; ++p)
    if (p != blk[0] && p != blk[1] && p != blk[2]) off = p;
  CHECK(check_al3(uf, pts(uf, {f.name(off)}), pts(uf, {f.name(off)}), b0, b0,
                  b0, 3));

  // D failing the equivalence hypothesis: with B0 = B1 = {b} the shared
  // part is {b} itself, so B0's tuple over E repeats b while D's does not
  FreeUniverse u2(PartialSts::validate({"a", "b", "d"}, {}));
  CHECK_FALSE(check_al3(u2, pts(u2, {"a"}), pts(u2, {"a"}), pts(u2, {"b"}),
                        pts(u2, {"b"}), pts(u2, {"d"}), 2));
}

TEST_CASE("merge_family") {
  // t = 3 singleton sides over an empty shared part; the B_i are collinear
  // so <B_0 B_1 B_2> is just the x-axis
  FreeUniverse u(plane9());
  std::vector<std::pair<PointSet, PointSet>> sides = {
      {pts(u, {"p01"}), pts(u, {"p00"})},
      {pts(u, {"p11"}), pts(u, {"p10"})},
      {pts(u, {"p21"}), pts(u, {"p20"})}};
  auto r = merge_family(u, sides, 2);
  REQUIRE(r.a.size() == 1);
  FreeUniverse ru(r.extension);
  for (int i = 0; i < 3; ++i) {
    auto t1 = std::vector<TermPtr>{ru.point(r.a[0]),
                                   ru.point(sides[i].second[0]->text())};
    auto t2 = std::vector<TermPtr>{sides[i].first[0], sides[i].second[0]};
    CHECK(qf_equiv_m(ru, t1, u, t2, 2));
  }

  // t = 2 agrees with merge_al25
  auto r2 = merge_family(u, {sides[0], sides[1]}, 2);
  auto r25 = merge_al25(u, sides[0].first, sides[1].first, sides[0].second,
                        sides[1].second, 2);
  CHECK(canonical_form(r2.extension) == canonical_form(r25.extension));

  // t = 1 returns A_0 inside <A_0 B_0>
  auto r1 = merge_family(u, {sides[0]}, 2);
  CHECK(r1.a == std::vector<std::string>{"p01"});
  CHECK(r1.extension.find_point("p02").has_value());
}

TEST_CASE("indep verdicts") {
  FreeUniverse u(PartialSts::validate({"a", "b"}, {}));
  auto r = indep(u, pts(u, {"a"}), pts(u, {"b"}), {}, 3);
  CHECK(r.verdict == IndepResult::Verdict::kIndependent);

  // a lies in <B>
  FreeUniverse u2(PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}}));
  auto r2 = indep(u2, pts(u2, {"a"}), pts(u2, {"b", "c"}), {}, 3);
  REQUIRE(r2.verdict == IndepResult::Verdict::kDependent);
  CHECK(r2.witness->text() == "a");

  // a.d and b.e collapse onto the common point p
  FreeUniverse u3(PartialSts::validate({"a", "b", "d", "e", "p"},
                                       {{"a", "d", "p"}, {"b", "e", "p"}}));
  auto r3 = indep(u3, pts(u3, {"a", "b"}), pts(u3, {"d", "e"}), {}, 3);
  REQUIRE(r3.verdict == IndepResult::Verdict::kDependent);
  CHECK(r3.witness->text() == "p");

  // three free generators on one side: <BC> does not close at the depth
  FreeUniverse u4(PartialSts::validate({"a", "b", "c", "d"}, {}));
  auto r4 = indep(u4, pts(u4, {"a"}), pts(u4, {"b", "c", "d"}), {}, 3);
  CHECK(r4.verdict == IndepResult::Verdict::kUnknown);
}

TEST_CASE("indep is symmetric on small configurations") {
  FreeUniverse u(PartialSts::validate({"a", "b", "d", "e", "p"},
                                      {{"a", "d", "p"}, {"b", "e", "p"}}));
  std::vector<PointSet> sets = {pts(u, {"a"}), pts(u, {"b"}),
                                pts(u, {"a", "b"}), pts(u, {"d", "e"}),
                                pts(u, {"p"})};
  for (const auto& A : sets)
    for (const auto& B : sets) {
      auto ab = indep(u, A, B, {}, 3);
      auto ba = indep(u, B, A, {}, 3);
      CHECK(ab.verdict == ba.verdict);
    }
}

TEST_CASE("full_existence_witness") {
  FreeUniverse u(PartialSts::validate({"a"}, {}));
  auto w = full_existence_witness(u, pts(u, {"a"}), pts(u, {"a"}), {}, 3);
  REQUIRE(w.a_prime.size() == 1);
  CHECK(w.a_prime[0] != "a");
  CHECK(w.base.find_point("a").has_value());

  // A algebraic over C stays put
  FreeUniverse u2(PartialSts::validate({"e", "b"}, {}));
  auto w2 = full_existence_witness(u2, pts(u2, {"e"}), pts(u2, {"b"}),
                                   pts(u2, {"e"}), 3);
  CHECK(w2.a_prime == std::vector<std::string>{"e"});

  // a block pair is renamed to a block-free pair independent from the third
  FreeUniverse u3(PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}}));
  auto w3 = full_existence_witness(u3, pts(u3, {"a", "b"}), pts(u3, {"c"}),
                                   {}, 3);
  REQUIRE(w3.a_prime.size() == 2);
  CHECK(w3.a_prime[0] != "a");
  CHECK(w3.a_prime[1] != "b");
  FreeUniverse wu(w3.base);
  auto verdict =
      indep(wu, pts(wu, w3.a_prime), pts(wu, {"c"}), {}, 3).verdict;
  CHECK(verdict == IndepResult::Verdict::kIndependent);
}

TEST_CASE("monotonicity of independence on a finite base") {
  auto f = fano();
  FreeUniverse u(f);
  PointSet a = pts(u, {f.name(0)});
  PointSet b = pts(u, {f.name(1), f.name(2)});
  auto full = indep(u, a, b, {}, 3);
  if (full.verdict == IndepResult::Verdict::kIndependent)
    for (const auto& x : b) {
      auto sub = indep(u, a, {x}, {}, 3);
      CHECK(sub.verdict == IndepResult::Verdict::kIndependent);
    }
}
