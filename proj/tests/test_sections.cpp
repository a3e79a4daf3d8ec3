#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "laxglue/recollement.hpp"
#include "laxglue/stable.hpp"

using namespace laxglue;

namespace {

void require_all(const check_list& cl) {
  for (const auto& item : cl.items) CHECK_MESSAGE(item.pass, item.name, " ", item.note);
}

fmatrix mk(int rows, int cols, int p, const std::vector<int>& vals) {
  fmatrix m = fmatrix::zero(rows, cols, p);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int v = vals[static_cast<std::size_t>(r * cols + c)];
      m.at(r, c) = static_cast<std::uint8_t>(((v % p) + p) % p);
    }
  return m;
}

copresheaf pt_set(const std::vector<std::string>& names) {
  return make_copresheaf(delta(0), {fset{names}}, {});
}

nat_map pt_map(const copresheaf& src, const copresheaf& dst, std::vector<int> to) {
  return make_nat_map(src, dst, {set_fn{std::move(to), dst.sets[0].size()}});
}

}  // namespace

TEST_CASE("sections of identity diagrams enumerate to transition counts") {
  auto d1 = fixtures::finset_identity_diagram(delta(1));
  auto small = enumerate_sections(d1, 1);
  CHECK(small.size() == 3);
  for (const auto& s : small) CHECK(validate_section(d1, s));
  CHECK(enumerate_sections(d1, 2).size() == 11);

  // on the 3-chain the cocycle forces the long component, so the count is
  // sum over sizes <= 1 of |x0|^|x1| * |x1|^|x2|
  auto d2 = fixtures::finset_identity_diagram(delta(2));
  auto ss = enumerate_sections(d2, 1);
  CHECK(ss.size() == 4);
  for (const auto& s : ss) CHECK(validate_section(d2, s));
}

TEST_CASE("section validation pinpoints a broken cocycle") {
  auto d = fixtures::finset_identity_diagram(delta(2));
  copresheaf two = pt_set({"a", "b"});
  section<finset_backend> s;
  s.x = {two, two, two};
  s.phi[{0, 1}] = nat_identity(two);
  s.phi[{1, 2}] = nat_identity(two);
  s.phi[{0, 2}] = pt_map(two, two, {1, 0});  // disagrees with the composite
  std::string why;
  CHECK(!validate_section(d, s, &why));
  CHECK(why.find("cocycle") != std::string::npos);

  s.phi[{0, 2}] = nat_identity(two);
  CHECK(validate_section(d, s));

  s.phi.erase({0, 2});
  CHECK(!validate_section(d, s, &why));
  CHECK(why.find("missing") != std::string::npos);
}

TEST_CASE("insertion orders on a generator section reproduce the cells") {
  mult_diagram md = fixtures::mult_delta2_coboundary(3, 21);
  auto d = to_lax(md);
  for (int d0 : {1, 2}) {
    section<vect_backend> s = generator_section(md, d0);
    CHECK(validate_section(d, s));
    auto ps = to_part(d, s);
    chain sigma = make_chain(d.base, {2});
    chain tau = make_chain(d.base, {0, 1, 2});
    CHECK(eval_chain(d, ps, tau).dim == 4 * d0);
    fmatrix expect = fm_kron(md.cell_at(0, 1, 2), fmatrix::ident(d0, md.p));
    CHECK(eval_inclusion(d, ps, sigma, tau) == expect);
    CHECK(eval_inclusion_order(d, ps, sigma, tau, {0, 1}) == expect);
    CHECK(eval_inclusion_order(d, ps, sigma, tau, {1, 0}) == expect);

    CHECK_THROWS_AS(eval_inclusion(d, ps, make_chain(d.base, {1}), make_chain(d.base, {1, 2})),
                    validation_error);
    CHECK_THROWS_AS(eval_inclusion_order(d, ps, sigma, tau, {0, 0}), validation_error);
  }
}

TEST_CASE("a perturbed cell makes insertion orders disagree") {
  mult_diagram md = fixtures::mult_delta2_coboundary(2, 8);
  section<vect_backend> s = generator_section(md, 1);
  mult_diagram bad = md;
  fmatrix& cell = bad.cell.at(std::array<int, 3>{0, 1, 2});
  cell.at(0, 0) = static_cast<std::uint8_t>(cell.at(0, 0) ^ 1u);
  auto db = to_lax(bad);
  auto ps = to_part(db, s);
  chain sigma = make_chain(db.base, {2});
  chain tau = make_chain(db.base, {0, 1, 2});
  auto via_cell = eval_inclusion_order(db, ps, sigma, tau, {0, 1});
  auto via_components = eval_inclusion_order(db, ps, sigma, tau, {1, 0});
  CHECK(!(via_cell == via_components));
  CHECK(!validate_section(db, s));
}

TEST_CASE("open pushforward on the 2-chain is transition-of-open-part") {
  auto d = fixtures::vect_delta1(3, 2);
  decomposition dec = decomposition::from_sieve(d.base, {0});
  section<vect_backend> s;
  s.x = {vect_backend::obj{2, 3}, vect_backend::obj{3, 3}};
  fmatrix alpha = mk(4, 3, 3, {1, 0, 2, 0, 1, 1, 0, 0, 0, 2, 0, 1});
  s.phi[{0, 1}] = alpha;
  REQUIRE(validate_section(d, s));

  auto pd = j_star_full(d, dec, open_restrict(d, dec, s));
  CHECK(pd.s.x[0].dim == 2);
  CHECK(pd.s.x[1].dim == 4);
  CHECK(pd.s.phi_at(0, 1) == fmatrix::ident(4, 3));

  auto uj = unit_j(d, dec, s, pd);
  REQUIRE(uj.has_value());
  CHECK(uj->psi[0] == fmatrix::ident(2, 3));
  CHECK(uj->psi[1] == alpha);

  auto is = i_star(d, dec, closed_restrict(d, dec, s));
  CHECK(is.x[0].dim == 0);
  CHECK(is.x[1].dim == 3);
  CHECK(is.phi_at(0, 1) == fmatrix::zero(0, 3, 3));

  auto jb = j_bang(d, dec, open_restrict(d, dec, s));
  CHECK(jb.x[0].dim == 2);
  CHECK(jb.x[1].dim == 0);
  CHECK(jb.phi_at(0, 1) == fmatrix::zero(4, 0, 3));

  auto fr = fracture(d, dec, s);
  require_all(fr.checks);
  CHECK(fr.comparison_iso);
  CHECK(fr.pullback.x[1].dim == 3);
}

TEST_CASE("pushforward takes products over incomparable lower chains") {
  fin_poset base = fixtures::circle_glue_poset();
  auto d = fixtures::finset_identity_diagram(base);
  decomposition dec = decomposition::from_sieve(base, {0, 1});
  part_section<finset_backend> u;
  u.on = {1, 1, 0, 0};
  u.x.resize(4);
  u.x[0] = pt_set({"a", "b"});
  u.x[1] = pt_set({"c"});
  auto pd = j_star_full(d, dec, u);
  CHECK(pd.s.x[2].total_size() == 2);
  CHECK(pd.s.x[3].total_size() == 2);
  CHECK(validate_section(d, pd.s));
  CHECK(copresheaf_equal(pd.s.x[0], u.x[0]));
  CHECK(copresheaf_equal(pd.s.x[1], u.x[1]));
}

TEST_CASE("pushforward over a sieve with internal structure is a graph") {
  auto d = fixtures::finset_identity_diagram(delta(2));
  decomposition dec = decomposition::from_sieve(delta(2), {0, 1});
  part_section<finset_backend> v;
  v.on = {1, 1, 0};
  v.x.resize(3);
  v.x[0] = pt_set({"a", "b"});
  v.x[1] = pt_set({"m", "n", "o"});
  v.phi[{0, 1}] = pt_map(v.x[1], v.x[0], {0, 0, 1});
  auto pd = j_star_full(d, dec, v);
  CHECK(pd.s.x[2].total_size() == 3);
  CHECK(validate_section(d, pd.s));
}

TEST_CASE("evaluation diagram pushforward keeps top-vertex values") {
  auto d = fixtures::finset_eval_diagram();
  decomposition dec = decomposition::from_sieve(d.base, {0});
  part_section<finset_backend> u;
  u.on = {1, 0, 0};
  u.x.resize(3);
  std::map<std::pair<int, int>, set_fn> mm;
  mm[{0, 1}] = set_fn{{0, 2}, 3};
  u.x[0] = make_copresheaf(delta(1), {fset{{"s", "t"}}, fset{{"x", "y", "z"}}}, mm);
  auto pd = j_star_full(d, dec, u);
  CHECK(pd.s.x[1].total_size() == 3);
  CHECK(pd.s.x[2].total_size() == 3);
  CHECK(validate_section(d, pd.s));
}

TEST_CASE("recollement report passes on set-level fixtures") {
  struct case_t {
    lax_diagram<finset_backend> d;
    std::vector<int> sieve;
  };
  std::vector<case_t> cases;
  cases.push_back({fixtures::finset_identity_diagram(delta(1)), {0}});
  cases.push_back({fixtures::finset_identity_diagram(delta(2)), {0}});
  cases.push_back({fixtures::finset_identity_diagram(delta(2)), {0, 1}});
  cases.push_back({fixtures::finset_identity_diagram(fixtures::vee_poset()), {0}});
  cases.push_back({fixtures::finset_identity_diagram(fixtures::wedge_poset()), {0}});
  cases.push_back({fixtures::finset_identity_diagram(fixtures::antichain2()), {0}});
  cases.push_back({fixtures::finset_identity_diagram(fixtures::diamond_poset()), {0, 1}});
  cases.push_back({fixtures::finset_identity_diagram(fixtures::circle_glue_poset()), {0, 1}});
  cases.push_back({fixtures::finset_eval_diagram(), {0}});
  cases.push_back({fixtures::finset_eval_diagram(), {0, 1}});
  for (const auto& c : cases) {
    decomposition dec = decomposition::from_sieve(c.d.base, c.sieve);
    recollement_options opt;
    opt.sampled_sections = 3;
    opt.section_size = 2;
    opt.hom_pairs = 2;
    INFO("sieve size ", c.sieve.size(), " on ", c.d.base.name(0));
    require_all(recollement_report(c.d, dec, opt));
  }
}

TEST_CASE("recollement report passes on linear fixtures") {
  std::vector<std::pair<mult_diagram, std::vector<int>>> cases;
  cases.push_back({fixtures::mult_delta2_coboundary(2, 31), {0}});
  cases.push_back({fixtures::mult_delta2_coboundary(3, 32), {0, 1}});
  cases.push_back({fixtures::mult_delta3_coboundary(2, 33), {0, 1}});
  cases.push_back({fixtures::mult_delta3_singular(2, 34), {0, 1, 2}});
  cases.push_back({fixtures::mult_delta4_scalar(3, 35), {0, 1, 2}});
  cases.push_back({fixtures::mult_diamond_coboundary(2, 36), {0}});
  for (const auto& c : cases) {
    auto d = to_lax(c.first);
    decomposition dec = decomposition::from_sieve(d.base, c.second);
    recollement_options opt;
    opt.enumerate_to = 1;
    opt.sampled_sections = 3;
    opt.section_size = 1;
    opt.hom_pairs = 2;
    INFO("base size ", d.base.size(), ", sieve size ", c.second.size());
    require_all(recollement_report(d, dec, opt));
  }
}

TEST_CASE("confluence report passes on the fixture roster") {
  {
    auto d = fixtures::finset_identity_diagram(fixtures::diamond_poset());
    auto pool = fixtures::section_pool(d, 1, 2, 2, 41);
    REQUIRE(!pool.empty());
    decomposition dec = decomposition::from_sieve(d.base, {0, 1});
    require_all(confluence_report(d, pool, &dec));
  }
  {
    auto d = fixtures::finset_eval_diagram();
    auto pool = fixtures::section_pool(d, 1, 2, 2, 77);
    REQUIRE(!pool.empty());
    decomposition dec = decomposition::from_sieve(d.base, {0, 1});
    require_all(confluence_report(d, pool, &dec));
  }
  for (const mult_diagram& md :
       {fixtures::mult_delta3_coboundary(2, 43), fixtures::mult_delta3_singular(3, 44)}) {
    auto d = to_lax(md);
    std::vector<section<vect_backend>> sections = {generator_section(md, 1),
                                                   generator_section(md, 2)};
    decomposition dec = decomposition::from_sieve(d.base, {0, 1});
    require_all(confluence_report(d, sections, &dec));
  }
  {
    // five-element chain: insertion orders up to 4! per inclusion
    mult_diagram md = fixtures::mult_delta4_coboundary(2, 45);
    auto d = to_lax(md);
    std::vector<section<vect_backend>> sections = {generator_section(md, 1)};
    decomposition dec = decomposition::from_sieve(d.base, {0, 1, 2});
    require_all(confluence_report(d, sections, &dec));
  }
}

TEST_CASE("section homs between generator sections count like base maps") {
  std::mt19937_64 rng(51);
  mult_diagram md = coboundary_mult_diagram(delta(2), 2, {1, 1, 2}, rng);
  auto d = to_lax(md);
  auto s1 = generator_section(md, 1);
  auto s2 = generator_section(md, 2);
  CHECK(section_hom(d, s1, s1).size() == 2);
  CHECK(section_hom(d, s2, s1).size() == 4);
  auto homs = section_hom(d, s1, s2);
  CHECK(homs.size() == 4);
  for (const auto& h : homs) {
    CHECK(validate_section_map(d, s1, s2, h));
    CHECK(h.psi[1] == h.psi[0]);
    CHECK(h.psi[2] == fm_kron(fmatrix::ident(2, 2), h.psi[0]));
  }
  CHECK(section_iso(d, s1, s1).has_value());
  CHECK(!section_iso(d, s1, s2).has_value());

  std::mt19937_64 rng3(52);
  mult_diagram m3 = coboundary_mult_diagram(delta(2), 3, {1, 1, 2}, rng3);
  auto d3 = to_lax(m3);
  CHECK(section_hom(d3, generator_section(m3, 1), generator_section(m3, 1)).size() == 3);
}

TEST_CASE("section homs on the identity diagram count by hand") {
  auto d = fixtures::finset_identity_diagram(delta(1));
  section<finset_backend> s, t;
  s.x = {pt_set({"a", "b"}), pt_set({"c"})};
  s.phi[{0, 1}] = pt_map(s.x[1], s.x[0], {0});
  t.x = {pt_set({"u", "v"}), pt_set({"w", "z"})};
  t.phi[{0, 1}] = pt_map(t.x[1], t.x[0], {0, 0});
  REQUIRE(validate_section(d, s));
  REQUIRE(validate_section(d, t));
  CHECK(section_hom(d, s, t).size() == 4);
  CHECK(section_hom(d, t, s).size() == 2);

  decomposition dec = decomposition::from_sieve(delta(1), {0});
  auto up_s = open_restrict(d, dec, s);
  auto up_t = open_restrict(d, dec, t);
  CHECK(part_section_hom(d, dec.in_sieve, up_s, up_t).size() == 4);
}

TEST_CASE("the backward transpose rebuilds the unit") {
  mult_diagram md = fixtures::mult_delta2_coboundary(2, 53);
  auto d = to_lax(md);
  decomposition dec = decomposition::from_sieve(d.base, {0, 1});
  section<vect_backend> s = generator_section(md, 1);
  auto u = open_restrict(d, dec, s);
  auto pd = j_star_full(d, dec, u);
  auto uj = unit_j(d, dec, s, pd);
  REQUIRE(uj.has_value());
  section_map<vect_backend> g = transpose_open_push_fwd(d, dec, *uj);
  auto back = transpose_open_push_bwd(d, dec, s, u, pd, g);
  REQUIRE(back.has_value());
  CHECK(section_map_equal<vect_backend>(*back, *uj));
}

TEST_CASE("stable grid rows are exact and the kernel corepresents") {
  auto d = fixtures::vect_delta1(2, 2);
  decomposition dec = decomposition::from_sieve(d.base, {0});
  section<vect_backend> s;
  s.x = {vect_backend::obj{2, 2}, vect_backend::obj{3, 2}};
  // rank 2, kernel spanned by (1,1,1)
  s.phi[{0, 1}] = mk(4, 3, 2, {1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0});
  REQUIRE(validate_section(d, s));
  auto g = build_stable_grid(d, dec, s);
  require_all(g.checks);
  CHECK(g.kernel_part.x[1].dim == 1);
  CHECK(g.open_ext.x[1].dim == 0);
  CHECK(g.open_push.x[1].dim == 4);
  CHECK(kernel_part_corepresents(d, dec, s, 1));
  CHECK(kernel_part_corepresents(d, dec, s, 2));

  auto d3 = fixtures::vect_delta1(3, 1);
  decomposition dec3 = decomposition::from_sieve(d3.base, {0});
  section<vect_backend> z;  // zero structure map: everything is kernel
  z.x = {vect_backend::obj{1, 3}, vect_backend::obj{2, 3}};
  z.phi[{0, 1}] = fmatrix::zero(1, 2, 3);
  auto gz = build_stable_grid(d3, dec3, z);
  require_all(gz.checks);
  CHECK(gz.kernel_part.x[1].dim == 2);
  CHECK(kernel_part_corepresents(d3, dec3, z, 2));

  section<vect_backend> e;  // surjective structure map
  e.x = {vect_backend::obj{1, 3}, vect_backend::obj{2, 3}};
  e.phi[{0, 1}] = mk(1, 2, 3, {1, 2});
  auto ge = build_stable_grid(d3, dec3, e);
  require_all(ge.checks);
  CHECK(ge.kernel_part.x[1].dim == 1);
  CHECK(kernel_part_corepresents(d3, dec3, e, 1));

  CHECK_THROWS_AS(build_stable_grid(to_lax(fixtures::mult_delta2_coboundary(2, 54)),
                                    decomposition::from_sieve(delta(2), {0}),
                                    generator_section(fixtures::mult_delta2_coboundary(2, 54), 1)),
                  validation_error);
}

TEST_CASE("closed pushforward requires terminal preservation") {
  lax_diagram<finset_backend> d;
  d.base = delta(1);
  finset_backend::cat pt{delta(0)};
  finset_backend::cat edge{delta(1)};
  d.fiber = {pt, edge};
  functor_spec<finset_backend> ext;
  ext.dom = pt;
  ext.cod = edge;
  ext.stages.push_back(finset_stage{stage_extend_empty{delta(0), delta(1), {1}}});
  d.tau.insert({{0, 1}, ext});

  decomposition dec = decomposition::from_sieve(d.base, {0});
  part_section<finset_backend> z;
  z.on = {0, 1};
  z.x.resize(2);
  std::map<std::pair<int, int>, set_fn> mm;
  mm[{0, 1}] = set_fn{{0}, 1};
  z.x[1] = make_copresheaf(delta(1), {fset{{"m"}}, fset{{"n"}}}, mm);
  CHECK_THROWS_AS(i_star(d, dec, z), validation_error);
}
