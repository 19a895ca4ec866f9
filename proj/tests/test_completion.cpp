#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sts/canonical.hpp"
#include "sts/completion.hpp"
#include "sts/core.hpp"

using namespace sts;
using sts::testing::default_names;
using sts::testing::fano;
using sts::testing::is_substructure;

TEST_CASE("free_step basics") {
  auto disc3 = PartialSts::validate({"a", "b", "c"}, {});
  auto s1 = free_step(disc3);
  CHECK(s1.size() == 6);
  CHECK(s1.num_blocks() == 3);
  CHECK(is_substructure(disc3, s1));

  // total systems are fixpoints
  auto f = fano();
  CHECK(free_step(f) == f);

  // a pair closes after one step
  auto pair = PartialSts::validate({"a", "b"}, {});
  auto once = free_step(pair);
  CHECK(once.size() == 3);
  CHECK(once.num_blocks() == 1);
  CHECK(once.is_total());
  CHECK(free_step(once, 2) == once);
}

TEST_CASE("free_step never doubly defines a pair") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = sts::testing::random_partial(seed, 8, 6);
    auto t = free_step(s);  // validate() inside throws on any doubled pair
    CHECK(is_substructure(s, t));
    // every pair of original points is now defined
    for (int a = 0; a < s.size(); ++a)
      for (int b = a + 1; b < s.size(); ++b)
        CHECK(t.pair_defined(t.point(s.name(a)), t.point(s.name(b))));
  }
}

TEST_CASE("free_truncation chain") {
  auto disc3 = PartialSts::validate({"a", "b", "c"}, {});
  CHECK(free_truncation(disc3, 0) == disc3);
  auto d1 = free_truncation(disc3, 1);
  CHECK(d1.size() == 6);
  auto d2 = free_truncation(disc3, 2);
  // stage 1 leaves 6 undefined pairs, each spawning one fresh point
  CHECK(d2.size() == 12);
  CHECK(d2.num_blocks() == 9);
  CHECK(is_substructure(d1, d2));
  CHECK(is_substructure(disc3, d2));
}

TEST_CASE("admissible_orders") {
  CHECK(admissible_orders(1, 21) ==
        std::vector<int>{1, 3, 7, 9, 13, 15, 19, 21});
  CHECK(admissible_orders(4, 6).empty());
  CHECK(admissible_orders(7, 7) == std::vector<int>{7});
  CHECK_THROWS_AS(admissible_orders(5, 4), Error);
}

TEST_CASE("complete_finite: fixpoints and small cases") {
  auto f = fano();
  CHECK(complete_finite(f) == f);

  // Fano minus one point completes back at order 7
  auto f6 = f.induced({0, 1, 2, 3, 4, 5});
  auto done = complete_finite(f6);
  CHECK(done.size() == 7);
  CHECK(done.is_total());
  CHECK(is_substructure(f6, done));

  // 3 blockless points must stay a cap, so order 3 is impossible
  auto disc3 = PartialSts::validate({"a", "b", "c"}, {});
  auto t = complete_finite(disc3);
  CHECK(t.size() == 7);
  CHECK(t.is_total());
  CHECK(is_substructure(disc3, t));

  CHECK_THROWS_AS(complete_finite(disc3, CompleteOptions{.max_order = 3}),
                  Error);
}

TEST_CASE("complete_finite: seeded random systems embed strictly") {
  int done = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = sts::testing::random_partial(seed);
    auto t = complete_finite(s, CompleteOptions{.seed = seed});
    CHECK(t.is_total());
    CHECK(t.size() <= 27);
    CHECK((t.size() % 6 == 1 || t.size() % 6 == 3));
    CHECK(is_substructure(s, t));
    ++done;
  }
  CHECK(done == 40);
}

TEST_CASE("complete_finite is deterministic per seed") {
  auto s = sts::testing::random_partial(7);
  auto a = complete_finite(s, CompleteOptions{.seed = 11});
  auto b = complete_finite(s, CompleteOptions{.seed = 11});
  CHECK(a == b);
}

TEST_CASE("one canonical class of STS(9)") {
  // every labeled STS(9) has the same canonical form
  std::set<std::string> classes;
  int count = 0;
  sts::testing::enumerate_all_sts(9, [&](const std::vector<std::array<int, 3>>& b) {
    ++count;
    classes.insert(
        canonical_form(PartialSts::from_indices(default_names(9), b)));
  });
  CHECK(count == 840);
  CHECK(classes.size() == 1);
}
