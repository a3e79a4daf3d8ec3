#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "laxglue/strat.hpp"

using namespace laxglue;

namespace {

void require_all(const check_list& cl) {
  for (const auto& item : cl.items) CHECK_MESSAGE(item.pass, item.name, " ", item.note);
}

// Two closed points x, y each touching two open points u, v: the minimal
// finite model of a circle, stratified over the arrow poset.
strat_space pseudo_circle() {
  return strat_space::validate(fixtures::circle_glue_poset(), delta(1), {0, 0, 1, 1});
}

strat_space identity_space(const fin_poset& p) {
  std::vector<int> pi(static_cast<std::size_t>(p.size()));
  std::iota(pi.begin(), pi.end(), 0);
  return strat_space::validate(p, p, pi);
}

// Two closed points under one open point under one top point.
strat_space cone3() {
  fin_poset q = fin_poset::validate({"a", "b", "u", "s"},
                                    {{"a", "u"}, {"b", "u"}, {"u", "s"}});
  return strat_space::validate(q, delta(2), {0, 0, 1, 2});
}

// The pseudo-circle with a single top cell attached over a third stratum.
strat_space suspended_circle() {
  fin_poset q = fin_poset::validate(
      {"a", "b", "u", "v", "s"},
      {{"a", "u"}, {"a", "v"}, {"b", "u"}, {"b", "v"}, {"u", "s"}, {"v", "s"}});
  return strat_space::validate(q, delta(2), {0, 0, 1, 1, 2});
}

strat_space antichain_space() {
  fin_poset p = fixtures::antichain2();
  return strat_space::validate(p, p, {0, 1});
}

const check_item& find_item(const check_list& cl, const std::string& name) {
  for (const auto& item : cl.items)
    if (item.name == name) return item;
  throw std::runtime_error("missing check item " + name);
}

}  // namespace

TEST_CASE("stratified spaces derive strata, stars, and their orders") {
  strat_space x = pseudo_circle();
  CHECK(x.stratum_pts[0] == std::vector<int>{0, 1});
  CHECK(x.stratum_pts[1] == std::vector<int>{2, 3});
  CHECK(x.star_pts[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(x.star_pts[1] == std::vector<int>{2, 3});
  CHECK(x.stratum[0].size() == 2);
  CHECK(x.stratum[0].covers().empty());
  CHECK(x.stratum[1].covers().empty());
  CHECK(x.star[0].size() == 4);
  CHECK(x.stratum_in_star[1] == std::vector<int>{0, 1});
  CHECK(x.op.lt(1, 0));

  // pi must be monotone and cover every point
  CHECK_THROWS_AS(strat_space::validate(fixtures::circle_glue_poset(), delta(1), {1, 1, 0, 0}),
                  validation_error);
  CHECK_THROWS_AS(strat_space::validate(fixtures::circle_glue_poset(), delta(1), {0, 0, 1}),
                  validation_error);
}

TEST_CASE("stratification axioms hold on the example roster") {
  require_all(stratification_axioms(pseudo_circle()));
  require_all(stratification_axioms(cone3()));
  require_all(stratification_axioms(suspended_circle()));
  require_all(stratification_axioms(antichain_space()));
  require_all(stratification_axioms(identity_space(fixtures::vee_poset())));
}

TEST_CASE("stratum embedding multiplies germs over the lower strata") {
  strat_space x = pseudo_circle();
  copresheaf y = make_copresheaf(x.stratum[1],
                                 {fset{{"s0", "s1"}}, fset{{"t0", "t1", "t2"}}}, {});
  sheaf ey = stratum_embed(x, 1, y);
  // each closed point sees the product of the two open stalks
  CHECK(ey.sets[0].size() == 6);
  CHECK(ey.sets[1].size() == 6);
  CHECK(ey.sets[2].size() == 2);
  CHECK(ey.sets[3].size() == 3);
  CHECK(nat_is_iso(stratum_counit(x, 1, y)));

  copresheaf z = make_copresheaf(x.stratum[0],
                                 {fset{{"p0", "p1"}}, fset{{"q0", "q1", "q2"}}}, {});
  sheaf ez = stratum_embed(x, 0, z);
  // the closed stratum is already down-closed, so the open part is a point
  CHECK(ez.sets[0].size() == 2);
  CHECK(ez.sets[1].size() == 3);
  CHECK(ez.sets[2].size() == 1);
  CHECK(ez.sets[3].size() == 1);
  CHECK(nat_is_iso(stratum_counit(x, 0, z)));
}

TEST_CASE("stratum restriction and embedding form an adjunction") {
  strat_space pc = pseudo_circle();
  require_all(stratum_adjunction_report(pc, 0));
  require_all(stratum_adjunction_report(pc, 1));
  strat_space c3 = cone3();
  require_all(stratum_adjunction_report(c3, 0));
  require_all(stratum_adjunction_report(c3, 1));
  require_all(stratum_adjunction_report(c3, 2));
}

TEST_CASE("embedding then restricting out of position is invisible") {
  check_list anti = out_of_position(antichain_space());
  require_all(anti);
  CHECK(find_item(anti, "out_of_position_terminal").note ==
        "2 incomparable and 0 comparable ordered pairs, 6 inputs");

  check_list pc = out_of_position(pseudo_circle());
  require_all(pc);
  CHECK(find_item(pc, "out_of_position_terminal").note ==
        "0 incomparable and 1 comparable ordered pairs, 9 inputs");

  check_list c3 = out_of_position(cone3());
  require_all(c3);
  CHECK(find_item(c3, "out_of_position_terminal").note ==
        "0 incomparable and 3 comparable ordered pairs, 21 inputs");
}

TEST_CASE("gluing diagrams validate across the roster") {
  CHECK(gluing_diagram(pseudo_circle()).toposic);
  CHECK(gluing_diagram(cone3()).tau.size() == 3);
  CHECK(gluing_diagram(suspended_circle()).can.size() == 1);
  CHECK(gluing_diagram(antichain_space()).tau.empty());
  CHECK(gluing_diagram(identity_space(delta(1))).tau.size() == 1);
  CHECK(gluing_diagram(identity_space(fixtures::vee_poset())).tau.size() == 2);
}

TEST_CASE("transitions of the gluing diagram take products of open stalks") {
  strat_space x = pseudo_circle();
  lax_diagram<finset_backend> gd = gluing_diagram(x);
  copresheaf y = make_copresheaf(x.stratum[1],
                                 {fset{{"s0", "s1"}}, fset{{"t0", "t1", "t2"}}}, {});
  copresheaf gy = apply_obj(gd.tau_at(1, 0), y);
  CHECK(gy.sets[0].size() == 6);
  CHECK(gy.sets[1].size() == 6);

  // over an identity stratification the transition is plain restriction
  strat_space id1 = identity_space(delta(1));
  lax_diagram<finset_backend> gd1 = gluing_diagram(id1);
  copresheaf s = make_copresheaf(id1.stratum[1], {fset{{"p", "q"}}}, {});
  copresheaf gs = apply_obj(gd1.tau_at(1, 0), s);
  CHECK(gs.sets[0].size() == 2);
}

TEST_CASE("transport of a sheaf is a coherent section") {
  strat_space x = pseudo_circle();
  lax_diagram<finset_backend> gd = gluing_diagram(x);

  sheaf f = make_copresheaf(fixtures::circle_glue_poset(),
                            {fset{{"g0", "g1"}}, fset{{"h"}}, fset{{"i"}}, fset{{"j"}}},
                            {{{0, 2}, set_fn{{0, 0}, 1}},
                             {{0, 3}, set_fn{{0, 0}, 1}},
                             {{1, 2}, set_fn{{0}, 1}},
                             {{1, 3}, set_fn{{0}, 1}}});
  section<finset_backend> s = transport(x, gd, f);
  CHECK(s.x[0].sets[0].size() == 2);
  CHECK(s.x[0].sets[1].size() == 1);
  CHECK(s.x[1].sets[0].size() == 1);
  // both germs over the closed point restrict to the same open family
  CHECK(s.phi_at(1, 0).comp[0].to == std::vector<int>{0, 0});
  CHECK(s.phi_at(1, 0).comp[0].cod == 1);

  copresheaf z = make_copresheaf(x.stratum[0],
                                 {fset{{"p0", "p1"}}, fset{{"q0", "q1", "q2"}}}, {});
  section<finset_backend> t = transport(x, gd, stratum_embed(x, 0, z));
  CHECK(finset_backend::is_terminal_like(x.stratum_cat(1), t.x[1]));
}

TEST_CASE("subdivision marks exactly the covers that raise the top") {
  strat_space x = pseudo_circle();
  sd_poset sdp = subdivide(x.op);
  int c0 = sdp.chain_index(make_chain(x.op, {0}));
  int c1 = sdp.chain_index(make_chain(x.op, {1}));
  int c10 = sdp.chain_index(make_chain(x.op, {0, 1}));
  CHECK(sdp.marked.count({c1, c10}) == 1);
  CHECK(sdp.marked.count({c0, c10}) == 0);
}

TEST_CASE("every small sheaf and section round trips over the pseudo circle") {
  check_list rep = reconstruction_report(pseudo_circle(), {});
  require_all(rep);
  CHECK(find_item(rep, "sheaf_round_trip_iso").note == "553 sheaves");
  CHECK(find_item(rep, "section_round_trip_iso").note == "553 sections");
  CHECK(find_item(rep, "hom_cardinality_transfer").note == "4 pairs");
  CHECK(find_item(rep, "stratification_recovery").note == "3 cosieves");
}

TEST_CASE("reconstruction succeeds over a three stratum cone") {
  require_all(reconstruction_report(cone3(), {}));
}

TEST_CASE("reconstruction is trivial over identity stratifications") {
  require_all(reconstruction_report(identity_space(delta(1)), {}));
  require_all(reconstruction_report(identity_space(delta(2)), {}));
  require_all(reconstruction_report(identity_space(fixtures::vee_poset()), {}));
  require_all(reconstruction_report(antichain_space(), {}));
}

TEST_CASE("the suspended circle reconstructs at unit stalk sizes") {
  require_all(reconstruction_report(suspended_circle(), {.max_size = 1}));
}

TEST_CASE("stratification recovery reads off every cosieve") {
  strat_space x = pseudo_circle();
  lax_diagram<finset_backend> gd = gluing_diagram(x);

  recovered_flag open_half = recover_stratification(x, gd, {1});
  CHECK(open_half.matches);
  CHECK(open_half.subterminal);
  CHECK(open_half.value.sets[0].size() == 0);
  CHECK(open_half.value.sets[1].size() == 0);
  CHECK(open_half.value.sets[2].size() == 1);
  CHECK(open_half.value.sets[3].size() == 1);

  recovered_flag none = recover_stratification(x, gd, {});
  CHECK(none.matches);
  for (const fset& s : none.value.sets) CHECK(s.size() == 0);

  recovered_flag all = recover_stratification(x, gd, {0, 1});
  CHECK(all.matches);
  for (const fset& s : all.value.sets) CHECK(s.size() == 1);

  // the closed stratum alone is not an open selection
  CHECK_THROWS_AS(recover_stratification(x, gd, {0}), validation_error);
}

TEST_CASE("identity maps respect the gluing structure") {
  strat_space x = pseudo_circle();
  strat_map id = strat_map::validate(x, x, {0, 1, 2, 3});
  require_all(map_functoriality(id));
}

TEST_CASE("a collapse map pushes forward with a genuine diagonal cell") {
  strat_space src = pseudo_circle();
  strat_space dst = identity_space(delta(1));
  strat_map g = strat_map::validate(src, dst, {0, 0, 1, 1});
  require_all(map_functoriality(g));

  copresheaf y = make_copresheaf(src.stratum[1], {fset{{"s0", "s1"}}, fset{{"t"}}}, {});
  sheaf gi = direct_image(g, stratum_embed(src, 1, y));
  CHECK(gi.sets[0].size() == 2);
  CHECK(gi.sets[1].size() == 2);

  // the comparison cell doubles the fused stalk and cannot be invertible
  nat_map cell = pushforward_cell(g, 1, 0, y);
  CHECK(cell.src.sets[0].size() == 2);
  CHECK(cell.dst.sets[0].size() == 4);
  CHECK(!nat_is_iso(cell));

  CHECK_THROWS_AS(strat_map::validate(src, identity_space(delta(2)), {0, 0, 1, 1}),
                  validation_error);
  CHECK_THROWS_AS(strat_map::validate(src, dst, {1, 1, 1, 1}), validation_error);
}
