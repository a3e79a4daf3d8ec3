#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "laxglue/poset.hpp"

using namespace laxglue;

TEST_CASE("closure adds implied relations") {
  fin_poset p = fin_poset::validate({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
  CHECK(p.leq(0, 2));
  CHECK(p.lt(0, 2));
  CHECK(!p.leq(2, 0));
  CHECK(p.leq(1, 1));
  CHECK(p.comparable(0, 2));
}

TEST_CASE("cycles are rejected") {
  CHECK_THROWS_AS(fin_poset::validate({"a", "b"}, {{"a", "b"}, {"b", "a"}}), validation_error);
  CHECK_THROWS_AS(fin_poset::validate({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}),
                  validation_error);
}

TEST_CASE("duplicate names and unknown endpoints are rejected") {
  CHECK_THROWS_AS(fin_poset::validate({"a", "a"}, {}), validation_error);
  CHECK_THROWS_AS(fin_poset::validate({"a"}, {{"a", "zzz"}}), validation_error);
}

TEST_CASE("covers of the diamond") {
  fin_poset d = fixtures::diamond_poset();
  std::vector<std::pair<int, int>> expect = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  CHECK(d.covers() == expect);
  CHECK(d.strict_pairs().size() == 5);  // covers plus b < t
  CHECK(d.lt(0, 3));
}

TEST_CASE("up and down sets") {
  fin_poset d = fixtures::diamond_poset();
  CHECK(d.down_set(3) == std::vector<int>{0, 1, 2, 3});
  CHECK(d.strict_down_set(1) == std::vector<int>{0});
  CHECK(d.up_set(1) == std::vector<int>{1, 3});
  CHECK(d.minimal_elements() == std::vector<int>{0});
  CHECK(d.maximal_elements() == std::vector<int>{3});
}

TEST_CASE("linear extension is a deterministic topological order") {
  fin_poset d = fixtures::diamond_poset();
  CHECK(d.linear_extension() == std::vector<int>{0, 1, 2, 3});
  fin_poset v = fixtures::vee_poset();
  CHECK(v.linear_extension() == std::vector<int>{0, 1, 2});
}

TEST_CASE("subset classification") {
  fin_poset v = fixtures::vee_poset();  // l, r below t
  CHECK(classify_subset(v, {}) == subset_kind::both);
  CHECK(classify_subset(v, {0, 1, 2}) == subset_kind::both);
  CHECK(classify_subset(v, {0}) == subset_kind::sieve);
  CHECK(classify_subset(v, {0, 1}) == subset_kind::sieve);
  CHECK(classify_subset(v, {2}) == subset_kind::cosieve);
  CHECK(classify_subset(v, {0, 2}) == subset_kind::cosieve);
  fin_poset d = fixtures::diamond_poset();
  CHECK(classify_subset(d, {1}) == subset_kind::neither);
  CHECK_THROWS_AS(classify_subset(d, {0, 0}), validation_error);
}

TEST_CASE("decompositions from sieves and cosieves") {
  fin_poset c = fixtures::circle_glue_poset();
  decomposition dec = decomposition::from_sieve(c, {0, 1});
  CHECK(dec.sieve() == std::vector<int>{0, 1});
  CHECK(dec.cosieve() == std::vector<int>{2, 3});
  decomposition dec2 = decomposition::from_cosieve(c, {2, 3});
  CHECK(dec2.in_sieve == dec.in_sieve);
  CHECK_THROWS_AS(decomposition::from_sieve(c, {2}), validation_error);
  CHECK_THROWS_AS(decomposition::from_cosieve(c, {0}), validation_error);
}

TEST_CASE("decomposition pulled back along a map to the 2-chain") {
  fin_poset c = fixtures::circle_glue_poset();
  monotone_map pi = monotone_map::validate(c, delta(1), {0, 0, 1, 1});
  decomposition dec = decomposition_from_map(pi);
  CHECK(dec.sieve() == std::vector<int>{0, 1});
  // non-monotone assignment rejected
  CHECK_THROWS_AS(monotone_map::validate(c, delta(1), {1, 0, 0, 1}), validation_error);
}

TEST_CASE("monotone map composition") {
  monotone_map f = monotone_map::validate(delta(1), delta(2), {0, 2});
  monotone_map g = monotone_map::validate(delta(2), delta(1), {0, 0, 1});
  monotone_map h = compose(g, f);
  CHECK(h.assignment == std::vector<int>{0, 1});
}

TEST_CASE("cosieve lattices of small posets") {
  // the 2-chain has cosieves {}, {1}, {0,1}: a 3-chain under inclusion
  fin_poset l1 = cosieve_lattice(delta(1));
  CHECK(l1.size() == 3);
  CHECK(l1.covers().size() == 2);
  // a point has cosieves {} and {*}
  CHECK(cosieve_lattice(delta(0)).size() == 2);
  // a 2-antichain has all four subsets, Boolean
  fin_poset l2 = cosieve_lattice(fixtures::antichain2());
  CHECK(l2.size() == 4);
  CHECK(l2.covers().size() == 4);
  // vee: up-closed subsets are {}, {t}, {l,t}, {r,t}, {l,r,t}
  CHECK(cosieve_lattice(fixtures::vee_poset()).size() == 5);
}

TEST_CASE("opposite poset flips the order") {
  fin_poset v = fixtures::vee_poset();
  fin_poset o = opposite(v);
  CHECK(o.lt(2, 0));
  CHECK(!o.lt(0, 2));
  CHECK(o.elements() == v.elements());
  CHECK(opposite(o).equals(v));
}

TEST_CASE("sub poset keeps names and induced order") {
  fin_poset d = fixtures::diamond_poset();
  auto [sub, embed] = sub_poset(d, {0, 1, 3});
  CHECK(sub.size() == 3);
  CHECK(sub.lt(0, 2));
  CHECK(sub.name(2) == "t");
  CHECK(embed == std::vector<int>{0, 1, 3});
}

TEST_CASE("delta chains") {
  fin_poset d3 = delta(3);
  CHECK(d3.size() == 4);
  CHECK(d3.lt(0, 3));
  CHECK(d3.name(2) == "2");
  CHECK(d3.covers().size() == 3);
}
