#include "doctest.h"
#include "oracles.hpp"
#include "sts/canonical.hpp"
#include "sts/embedding.hpp"
#include "sts/generic.hpp"

using namespace sts;
using sts::testing::aff9;
using sts::testing::default_names;
using sts::testing::fano;

namespace {

DeltaInstance discrete_instance(int outer_size, int inner_size) {
  auto outer = PartialSts::validate(default_names(outer_size), {});
  std::vector<int> inner;
  for (int i = 0; i < inner_size; ++i) inner.push_back(i);
  return DeltaInstance::make(outer, inner);
}

// Replays the stage contract: every inner assignment into prev extends to an
// outer assignment into next.
bool replay_stage(const PartialSts& prev, const PartialSts& next,
                  const std::vector<DeltaInstance>& instances) {
  for (const auto& inst : instances) {
    auto inner_sys = inst.outer.induced(inst.inner);
    for (const auto& e : find_embeddings(inner_sys, prev)) {
      std::vector<std::pair<int, int>> base;
      for (std::size_t j = 0; j < inst.inner.size(); ++j)
        base.emplace_back(inst.inner[j],
                          next.point(prev.name(e.map[j])));
      if (!embedding_exists(inst.outer, next, base)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("DeltaInstance validation") {
  auto blk = PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}});
  CHECK_NOTHROW(DeltaInstance::make(blk, {0}));
  CHECK_NOTHROW(DeltaInstance::make(blk, {0, 1, 2}));
  CHECK_THROWS_WITH_AS(DeltaInstance::make(blk, {0, 1}),
                       doctest::Contains("InnerNotClosed"), Error);
}

TEST_CASE("delta_formulas") {
  auto inst = discrete_instance(3, 2);
  auto [da, db] = delta_formulas(inst);
  CHECK(da.lits.size() == 1);  // x0 != x1
  CHECK(da.lits[0].rel == Rel::kNeq);
  CHECK(db.lits.size() == 3);  // three inequalities, no blocks

  auto blk = PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}});
  auto binst = DeltaInstance::make(blk, {0, 1, 2});
  auto [ba, bb] = delta_formulas(binst);
  CHECK(ba.lits.size() == 4);  // 3 inequalities + 1 product equality
  int eqs = 0;
  for (const auto& l : ba.lits) eqs += l.rel == Rel::kEq;
  CHECK(eqs == 1);

  auto empty = DeltaInstance::make(blk, {});
  CHECK(delta_formulas(empty).first.lits.empty());
}

TEST_CASE("check_delta on Fano") {
  auto f = fano();
  CHECK_FALSE(check_delta(f, discrete_instance(8, 0)).holds);
  CHECK(check_delta(f, discrete_instance(3, 0)).holds);  // Fano has a triangle
  CHECK(check_delta(f, discrete_instance(2, 1)).holds);
  auto bad = check_delta(f, discrete_instance(8, 0));
  CHECK(bad.counterexample.empty());  // inner was empty
}

TEST_CASE("check_delta is isomorphism-invariant") {
  auto f = fano();
  // relabel Fano
  std::vector<std::string> names;
  for (int i = 0; i < 7; ++i) names.push_back("z" + std::to_string(6 - i));
  std::vector<std::array<std::string, 3>> bl;
  for (const auto& b : f.blocks())
    bl.push_back({names[b[0]], names[b[1]], names[b[2]]});
  auto g = PartialSts::validate(names, bl);
  for (const auto& inst : enumerate_delta(3))
    CHECK(check_delta(f, inst).holds == check_delta(g, inst).holds);
}

TEST_CASE("enumerate_delta class counts") {
  CHECK(enumerate_delta(1).size() == 2);
  CHECK(enumerate_delta(2).size() == 5);
  // size-3 adds: discrete with 0..3 inner, one-block with inner in
  // {empty, point, whole}
  CHECK(enumerate_delta(3).size() == 12);
  bool has_block_whole = false, has_triangle_empty = false;
  for (const auto& inst : enumerate_delta(3)) {
    if (inst.outer.size() == 3 && inst.outer.num_blocks() == 1 &&
        inst.inner.size() == 3)
      has_block_whole = true;
    if (inst.outer.size() == 3 && inst.outer.num_blocks() == 0 &&
        inst.inner.empty())
      has_triangle_empty = true;
  }
  CHECK(has_block_whole);
  CHECK(has_triangle_empty);
}

TEST_CASE("generic_build from a point") {
  auto seed = PartialSts::validate({"o"}, {});
  auto chain = generic_build(seed, 2, 3, 0);
  REQUIRE(chain.size() == 3);
  auto instances = enumerate_delta(3);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(chain[i + 1].is_total());
    CHECK(sts::testing::is_substructure(chain[i], chain[i + 1]));
    CHECK(replay_stage(chain[i], chain[i + 1], instances));
  }
  CHECK(chain[1].size() > 1);

  // determinism
  auto again = generic_build(seed, 2, 3, 0);
  CHECK(again.back() == chain.back());
}

TEST_CASE("generic_build trivial cases") {
  auto f = fano();
  auto chain = generic_build(f, 0, 3, 1);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0] == f);
  CHECK_THROWS_AS(generic_build(PartialSts::validate({"a", "b"}, {}), 1, 2, 0),
                  Error);
}

TEST_CASE("isolating_formula") {
  auto f = fano();
  auto single = isolating_formula({0}, f);
  CHECK(single.num_existential == 0);
  REQUIRE(single.formula.lits.size() == 1);
  CHECK(single.formula.lits[0].rel == Rel::kEq);  // x1*x1 = x1

  auto blk = f.blocks()[0];
  auto pairf = isolating_formula({blk[0], blk[1]}, f);
  CHECK(pairf.num_existential == 1);  // the block third
  int eqs = 0;
  for (const auto& l : pairf.formula.lits) eqs += l.rel == Rel::kEq;
  CHECK(eqs == 1);

  // a triangle generates more; existentials enumerate the closure rest
  // find a triangle in Fano
  int ta = -1, tb = -1, tc = -1;
  for (int a = 0; a < 7 && ta < 0; ++a)
    for (int b = a + 1; b < 7 && ta < 0; ++b)
      for (int c = b + 1; c < 7 && ta < 0; ++c)
        if (!f.has_block(a, b, c)) ta = a, tb = b, tc = c;
  REQUIRE(ta >= 0);
  auto tri = isolating_formula({ta, tb, tc}, f);
  auto closure = f.close_subset({ta, tb, tc});
  CHECK(tri.num_existential == (int)closure.size() - 3);
  CHECK(tri.num_existential > 0);
}

TEST_CASE("qf_equiv_m") {
  auto f = fano();
  auto nine = aff9();
  auto fb = f.blocks()[0];
  auto nb = nine.blocks()[0];
  // any tuple vs itself
  CHECK(qf_equiv_m(f, {0, 1, 2}, f, {0, 1, 2}, 3));
  // block triples across systems generate the same 3-element system
  for (int m = 1; m <= 4; ++m)
    CHECK(qf_equiv_m(f, {fb[0], fb[1], fb[2]}, nine, {nb[0], nb[1], nb[2]}, m));
  // block vs triangle: the induced system on the block triple contains its
  // block at every m, so they already separate at m = 1
  int ta = -1, tb = -1, tc = -1;
  for (int a = 0; a < 7 && ta < 0; ++a)
    for (int b = a + 1; b < 7 && ta < 0; ++b)
      for (int c = b + 1; c < 7 && ta < 0; ++c)
        if (!f.has_block(a, b, c)) ta = a, tb = b, tc = c;
  CHECK_FALSE(qf_equiv_m(f, {fb[0], fb[1], fb[2]}, f, {ta, tb, tc}, 1));
  CHECK_FALSE(qf_equiv_m(f, {fb[0], fb[1], fb[2]}, f, {ta, tb, tc}, 2));

  // free pair vs block pair: both generate the 3-element squag
  FreeUniverse uf(PartialSts::validate({"a", "b"}, {}));
  FreeUniverse uo(f);
  for (int m = 1; m <= 4; ++m)
    CHECK(qf_equiv_m(uf, {uf.point("a"), uf.point("b")}, uo,
                     {uo.point(f.name(fb[0])), uo.point(f.name(fb[1]))}, m));
  // but a free pair differs from two points of a free triangle base at rank 2?
  // no: both closures are free of base relations -- they agree
  FreeUniverse u3(PartialSts::validate({"a", "b", "c"}, {}));
  CHECK(qf_equiv_m(uf, {uf.point("a"), uf.point("b")}, u3,
                   {u3.point("a"), u3.point("c")}, 3));
}

TEST_CASE("qf_equiv_m implies equal truth of small formulas") {
  // Lemma-shadow: for m = 2 and pairs from Fano, equivalence matches
  // automorphism-relatedness of the induced pair type
  auto f = fano();
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      if (a == b) continue;
      // all distinct pairs in an STS lie in a block; all are equivalent
      CHECK(qf_equiv_m(f, {0, 1}, f, {a, b}, 2));
    }
}
