#include <functional>

#include "doctest.h"
#include "oracles.hpp"
#include "sts/completion.hpp"
#include "sts/term.hpp"

using namespace sts;
using sts::testing::fano;

namespace {

FreeUniverse free3() {
  return FreeUniverse(PartialSts::validate({"a", "b", "c"}, {}));
}

// All raw syntactic term trees of rank <= k over the given leaves.
std::vector<RawTerm> all_raw(const std::vector<std::string>& leaves, int k) {
  std::vector<std::vector<RawTerm>> by_rank(k + 1);
  for (const auto& l : leaves) by_rank[1].push_back(RawTerm{l, nullptr, nullptr});
  for (int r = 2; r <= k; ++r)
    for (int i = 1; i < r; ++i)
      for (const auto& u : by_rank[i])
        for (const auto& v : by_rank[r - i])
          by_rank[r].push_back(RawTerm{"", std::make_shared<RawTerm>(u),
                                       std::make_shared<RawTerm>(v)});
  std::vector<RawTerm> out;
  for (int r = 1; r <= k; ++r)
    out.insert(out.end(), by_rank[r].begin(), by_rank[r].end());
  return out;
}

// Checks every normal-form invariant recursively.
bool is_normal(const FreeUniverse& u, const TermPtr& t) {
  if (t->is_leaf()) return true;
  const auto &l = t->left(), &r = t->right();
  if (term_cmp(l, r) >= 0) return false;
  if (!r->is_leaf() && (term_eq(r->left(), l) || term_eq(r->right(), l)))
    return false;
  if (!l->is_leaf() && (term_eq(l->left(), r) || term_eq(l->right(), r)))
    return false;
  if (l->is_leaf() && r->is_leaf() &&
      u.base().product(u.base().point(l->leaf_name()),
                       u.base().point(r->leaf_name())))
    return false;
  return is_normal(u, l) && is_normal(u, r);
}

}  // namespace

TEST_CASE("parser") {
  auto u = free3();
  auto raw = parse_term("a", u.base());
  CHECK(raw.leaf == "a");
  auto raw2 = parse_term("(a.(a.b))", u.base());
  CHECK(raw2.leaf.empty());
  CHECK(raw2.l->leaf == "a");
  CHECK(raw2.r->l->leaf == "a");
  CHECK(raw2.r->r->leaf == "b");
  CHECK_THROWS_WITH_AS(parse_term("(a.b", u.base()),
                       doctest::Contains("SyntaxError"), Error);
  CHECK_THROWS_WITH_AS(parse_term("(a.b))", u.base()),
                       doctest::Contains("SyntaxError"), Error);
  CHECK_THROWS_WITH_AS(parse_term("(a.x)", u.base()),
                       doctest::Contains("UnknownPoint"), Error);
  CHECK(parse_term("  ( a . b )  ", u.base()).l->leaf == "a");
}

TEST_CASE("normalization laws") {
  auto u = free3();
  auto a = u.point("a"), b = u.point("b");
  CHECK(u.normalize(parse_term("(a.a)", u.base()))->text() == "a");
  CHECK(u.normalize(parse_term("(a.(a.b))", u.base()))->text() == "b");
  CHECK(u.normalize(parse_term("((a.b).a)", u.base()))->text() == "b");
  CHECK(term_eq(u.mul(a, b), u.mul(b, a)));

  // base collapse
  FreeUniverse ub(PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}}));
  CHECK(ub.normalize(parse_term("(b.a)", ub.base()))->text() == "c");

  // irreducible product of products
  auto ab = u.mul(a, b), ac = u.mul(a, u.point("c"));
  CHECK(u.mul(ab, ac)->text() == "((a.b).(a.c))");
  CHECK(u.mul(ab, ac)->rank() == 4);
}

TEST_CASE("rank") {
  auto u = free3();
  auto a = u.point("a"), b = u.point("b"), c = u.point("c");
  CHECK(a->rank() == 1);
  CHECK(u.mul(a, b)->rank() == 2);
  CHECK(u.mul(u.mul(a, b), c)->rank() == 3);
}

TEST_CASE("closure_k") {
  auto u = free3();
  TermSet one = {u.point("a")};
  for (int k = 1; k <= 5; ++k) CHECK(u.closure_k(one, k).size() == 1);

  FreeUniverse u2(PartialSts::validate({"a", "b"}, {}));
  TermSet two = {u2.point("a"), u2.point("b")};
  CHECK(u2.closure_k(two, 2).size() == 3);
  CHECK(u2.closure_k(two, 5).size() == 3);  // the 3-element subquasigroup

  TermSet three = {u.point("a"), u.point("b"), u.point("c")};
  CHECK(u.closure_k(three, 2).size() == 6);
}

TEST_CASE("generated and acl behaviour") {
  FreeUniverse u2(PartialSts::validate({"a", "b"}, {}));
  auto [g2, c2] = u2.generated({u2.point("a"), u2.point("b")}, 8);
  CHECK(g2.size() == 3);
  CHECK(c2);

  auto u = free3();
  auto [g3, c3] =
      u.generated({u.point("a"), u.point("b"), u.point("c")}, 4);
  CHECK_FALSE(c3);  // the 3-generated free squag is infinite
  CHECK(g3.size() > 6);

  // total bases degenerate to their points
  FreeUniverse uf(fano());
  TermSet pts;
  for (const auto& n : uf.base().point_names()) pts.insert(uf.point(n));
  auto [gf, cf] = uf.generated(pts, 3);
  CHECK(cf);
  CHECK(gf.size() == 7);
  for (const auto& t : gf) CHECK(t->is_leaf());
}

TEST_CASE("squag laws exhaustively to rank 4 over 3 free generators") {
  auto u = free3();
  TermSet gens = {u.point("a"), u.point("b"), u.point("c")};
  auto forms = u.closure_k(gens, 4);
  // every element a normal form, and closed-world sanity on the count
  for (const auto& t : forms) CHECK(is_normal(u, t));
  std::vector<TermPtr> v(forms.begin(), forms.end());
  int checked = 0;
  for (const auto& x : v)
    for (const auto& y : v) {
      CHECK(term_eq(u.mul(x, y), u.mul(y, x)));
      CHECK(term_eq(u.mul(x, x), x));
      CHECK(term_eq(u.mul(x, u.mul(x, y)), y));
      ++checked;
    }
  CHECK(checked == (int)v.size() * (int)v.size());
}

TEST_CASE("normalization agrees with structural multiplication") {
  auto u = free3();
  for (const auto& raw : all_raw({"a", "b", "c"}, 4)) {
    auto n = u.normalize(raw);
    CHECK(is_normal(u, n));
    // top-level laws on arbitrary raw inputs
    RawTerm dup{"", std::make_shared<RawTerm>(raw), std::make_shared<RawTerm>(raw)};
    CHECK(term_eq(u.normalize(dup), n));
  }
  // absorption across arbitrary raw pairs of small rank
  auto smalls = all_raw({"a", "b"}, 2);
  for (const auto& x : smalls)
    for (const auto& y : smalls) {
      auto xi = std::make_shared<RawTerm>(x);
      auto yi = std::make_shared<RawTerm>(y);
      RawTerm xy{"", xi, yi};
      RawTerm x_xy{"", xi, std::make_shared<RawTerm>(xy)};
      CHECK(term_eq(u.normalize(x_xy), u.normalize(y)));
    }
}

TEST_CASE("is_freely_generated") {
  auto blk = PartialSts::validate({"a", "b", "c"}, {{"a", "b", "c"}});
  CHECK(is_freely_generated(blk, {0, 1}));
  CHECK(is_freely_generated(blk, {0, 1, 2}));

  auto f = fano();
  // Fano is generated by many triples but never freely
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c) CHECK_FALSE(is_freely_generated(f, {a, b, c}));
  CHECK(is_freely_generated(f, {0, 1, 2, 3, 4, 5, 6}));

  CHECK_THROWS_AS(is_freely_generated(PartialSts::validate({"a", "b"}, {}), {0}),
                  Error);
}

TEST_CASE("extend_homomorphism") {
  auto f = fano();
  auto blk = f.blocks()[0];
  auto small = f.induced({blk[0], blk[1], blk[2]});
  std::map<std::string, int> inc;
  for (int i = 0; i < 3; ++i) inc[small.name(i)] = small.point(small.name(i));
  // identity into itself
  FreeUniverse us(small);
  auto imgs = extend_homomorphism(
      inc, small, small, {us.point(small.name(0)), us.point(small.name(1))});
  CHECK(imgs == std::vector<int>{0, 1});

  // free pair into Fano: the product goes to the block third
  auto freebase = PartialSts::validate({"x", "y"}, {});
  FreeUniverse uf(freebase);
  std::map<std::string, int> m{{"x", blk[0]}, {"y", blk[1]}};
  auto got = extend_homomorphism(m, freebase, f,
                                 {uf.mul(uf.point("x"), uf.point("y"))});
  CHECK(got == std::vector<int>{blk[2]});

  // violating a base block
  auto tri = PartialSts::validate({"x", "y", "z"}, {{"x", "y", "z"}});
  std::map<std::string, int> badmap{{"x", 0}, {"y", 1}, {"z", (blk[2] + 1) % 7}};
  std::map<std::string, int> okmap{{"x", blk[0]}, {"y", blk[1]}, {"z", blk[2]}};
  FreeUniverse ut(tri);
  CHECK_NOTHROW(extend_homomorphism(okmap, tri, f, {ut.point("x")}));
  CHECK_THROWS_WITH_AS(extend_homomorphism(badmap, tri, f, {ut.point("x")}),
                       doctest::Contains("NotAHomomorphism"), Error);
}
