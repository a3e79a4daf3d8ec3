#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "laxglue/multdiagram.hpp"

using namespace laxglue;

TEST_CASE("identity diagrams validate") {
  std::mt19937_64 rng(3);
  for (const fin_poset& base :
       {delta(1), delta(2), fixtures::vee_poset(), fixtures::diamond_poset(),
        fixtures::circle_glue_poset(), fixtures::antichain2()}) {
    auto d = fixtures::finset_identity_diagram(base);
    check_list cl = validate_diagram(d, 1, 1, rng);
    CHECK_MESSAGE(cl.all_pass(), base.name(0));
  }
}

TEST_CASE("evaluation diagram validates including limit preservation") {
  std::mt19937_64 rng(4);
  auto d = fixtures::finset_eval_diagram();
  check_list cl = validate_diagram(d, 2, 2, rng);
  for (const auto& item : cl.items) CHECK_MESSAGE(item.pass, item.name, " ", item.note);
}

TEST_CASE("identity cell refuses mismatched pipelines") {
  finset_backend::cat pt{delta(0)};
  functor_spec<finset_backend> idf{pt, pt, {}};
  monotone_map swap_free = monotone_map::validate(delta(0), delta(0), {0});
  (void)swap_free;
  can_cell<finset_backend> cell = identity_cell<finset_backend>(idf, idf, idf);
  copresheaf x = make_copresheaf(delta(0), {fset{{"a", "b"}}}, {});
  nat_map m = cell.at(x);
  CHECK(nat_equal(m, nat_identity(x)));
}

TEST_CASE("multiplicity diagrams validate") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    mult_diagram md = fixtures::mult_delta3_coboundary(2, seed);
    CHECK(validate_mult_diagram(md).all_pass());
    mult_diagram md5 = fixtures::mult_delta3_coboundary(5, seed);
    CHECK(validate_mult_diagram(md5).all_pass());
  }
  CHECK(validate_mult_diagram(fixtures::mult_delta4_coboundary(2, 9)).all_pass());
  CHECK(validate_mult_diagram(fixtures::mult_delta4_scalar(3, 9)).all_pass());
  CHECK(validate_mult_diagram(fixtures::mult_diamond_coboundary(2, 9)).all_pass());
  CHECK(validate_mult_diagram(fixtures::mult_delta3_singular(2, 9)).all_pass());
  CHECK(validate_mult_diagram(strict_mult_diagram(delta(4), 2, {1, 2, 4, 8, 16})).all_pass());
}

TEST_CASE("a perturbed cell breaks the cocycle check") {
  mult_diagram md = fixtures::mult_delta3_coboundary(2, 5);
  fmatrix& cell = md.cell.at({0, 1, 2});
  cell.at(0, 0) = static_cast<std::uint8_t>((cell.at(0, 0) + 1) % 2);
  check_list cl = validate_mult_diagram(md);
  CHECK(!cl.all_pass());
}

TEST_CASE("lax diagrams from multiplicity data validate") {
  std::mt19937_64 rng(6);
  for (int p : {2, 3}) {
    auto d = to_lax(fixtures::mult_delta3_coboundary(p, 11));
    check_list cl = validate_diagram(d, 1, 1, rng);
    for (const auto& item : cl.items) CHECK_MESSAGE(item.pass, item.name, " ", item.note);
  }
  auto ds = to_lax(fixtures::mult_delta3_singular(2, 11));
  CHECK(validate_diagram(ds, 1, 1, rng).all_pass());
}

TEST_CASE("restriction of a diagram to a part") {
  auto d = to_lax(fixtures::mult_delta3_coboundary(2, 13));
  auto [sub, embed] = restrict_diagram(d, {0, 1, 2});
  CHECK(sub.base.size() == 3);
  CHECK(embed == std::vector<int>{0, 1, 2});
  std::mt19937_64 rng(7);
  CHECK(validate_diagram(sub, 1, 1, rng).all_pass());
  // transitions are shared with the big diagram
  vect_backend::obj v{1, 2};
  CHECK(apply_obj(sub.tau_at(0, 2), v).dim == apply_obj(d.tau_at(0, 2), v).dim);
}

TEST_CASE("missing pieces are reported") {
  auto d = fixtures::finset_identity_diagram(delta(2));
  d.tau.erase({0, 2});
  CHECK_THROWS_AS(d.tau_at(0, 2), validation_error);
  std::mt19937_64 rng(8);
  check_list cl = validate_diagram(d, 1, 0, rng);
  CHECK(!cl.all_pass());
  auto d2 = fixtures::finset_identity_diagram(delta(2));
  d2.can.erase({0, 1, 2});
  check_list cl2 = validate_diagram(d2, 1, 0, rng);
  CHECK(!cl2.all_pass());
}
