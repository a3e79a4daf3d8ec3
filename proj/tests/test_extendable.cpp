#include <algorithm>
#include <array>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "laxglue/extendable.hpp"

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

vect_backend::obj vo(int dim, int p) { return vect_backend::obj{dim, p}; }

// The 3-chain diagram whose only cell is square but singular.
mult_diagram singular_delta2(int p) {
  mult_diagram md;
  md.base = delta(2);
  md.p = p;
  md.mult = {{{0, 1}, 1}, {{1, 2}, 2}, {{0, 2}, 2}};
  md.cell.insert({{0, 1, 2}, mk(2, 2, p, {1, 0, 0, 0})});
  return md;
}

// The 3-chain diagram whose cell is not even square.
mult_diagram obstructed_delta2(int p) {
  mult_diagram md;
  md.base = delta(2);
  md.p = p;
  md.mult = {{{0, 1}, 1}, {{1, 2}, 1}, {{0, 2}, 2}};
  md.cell.insert({{0, 1, 2}, mk(1, 2, p, {1, 0})});
  return md;
}

// Aggregated sweep of the spine equivalence over every section and spine
// with dimensions bounded by max_dim.
struct sweep_result {
  std::size_t sections = 0;
  std::size_t spines = 0;
  std::size_t generated = 0;   // sections passing the edge-iso test
  std::size_t extendable = 0;  // spines passing the cell certificate
  bool verdicts_agree = true;
  bool matches_certificate = true;
  bool roundtrips_exact = true;
  bool extensions_generated = true;
  bool rejects_throw = true;
};

sweep_result sweep_equivalence(const mult_diagram& md, int max_dim) {
  sweep_result out;
  lax_diagram<vect_backend> d = to_lax(md);
  auto secs = enumerate_sections(d, static_cast<std::size_t>(max_dim), 200000);
  auto spines = enumerate_sd1_sections(md, max_dim, 200000);
  out.sections = secs.size();
  out.spines = spines.size();
  for (const auto& s : secs) {
    one_generated_verdict v = check_one_generated(md, s);
    out.verdicts_agree = out.verdicts_agree && v.agree();
    bool ext = is_extendable(md, gamma_restrict(md, s));
    out.matches_certificate = out.matches_certificate && v.edge_isos == ext;
    if (v.edge_isos) {
      ++out.generated;
      section<vect_backend> s2 = extend(md, gamma_restrict(md, s));
      out.roundtrips_exact = out.roundtrips_exact && s2.x == s.x && s2.phi == s.phi;
    }
  }
  for (const auto& t : spines) {
    if (is_extendable(md, t)) {
      ++out.extendable;
      section<vect_backend> s = extend(md, t);
      out.roundtrips_exact = out.roundtrips_exact && gamma_restrict(md, s) == t;
      one_generated_verdict v = check_one_generated(md, s);
      out.extensions_generated = out.extensions_generated && v.edge_isos && v.cube_limits;
    } else {
      bool threw = false;
      try {
        extend(md, t);
      } catch (const validation_error&) {
        threw = true;
      }
      out.rejects_throw = out.rejects_throw && threw;
    }
  }
  return out;
}

void check_sweep(const sweep_result& r) {
  CHECK(r.verdicts_agree);
  CHECK(r.matches_certificate);
  CHECK(r.roundtrips_exact);
  CHECK(r.extensions_generated);
  CHECK(r.rejects_throw);
  CHECK(r.generated == r.extendable);
}

}  // namespace

TEST_CASE("spine restriction repackages the section data") {
  auto md = strict_mult_diagram(delta(1), 2, {1, 2});
  auto s = generator_section(md, 2);
  sd1_section t = gamma_restrict(md, s);
  CHECK(validate_sd1_section(md, t).all_pass());
  CHECK(t.v == s.x);
  CHECK(t.w_at(1) == s.phi_at(0, 1));
  // over the 2-chain the spine is the whole section
  auto s2 = extend(md, t);
  CHECK(s2.x == s.x);
  CHECK(s2.phi == s.phi);

  auto md3 = fixtures::mult_delta3_coboundary(2, 91);
  section<vect_backend> zero;
  zero.x.assign(4, vo(0, 2));
  for (auto [a, b] : md3.base.strict_pairs()) zero.phi.insert({{a, b}, fmatrix::zero(0, 0, 2)});
  sd1_section zt = gamma_restrict(md3, zero);
  for (const auto& x : zt.v) CHECK(x.dim == 0);
  CHECK(is_extendable(md3, zt));
}

TEST_CASE("extendability certifies exactly the failing cells") {
  // strict cells are identities, so every spine extends
  auto strict3 = strict_mult_diagram(delta(3), 2, {1, 1, 2, 2});
  std::mt19937_64 rng(92);
  CHECK(is_extendable(strict3, random_sd1_section(strict3, 2, rng)));

  // the fixture's cell at (0, 1, 3) is singular and is the only failure
  auto md = fixtures::mult_delta3_singular(2, 93);
  sd1_section t = gamma_restrict(md, generator_section(md, 1));
  extendable_certificate cert = check_extendable(md, t);
  CHECK(!cert.ok);
  REQUIRE(cert.failing.size() == 1);
  CHECK(cert.failing[0] == std::array<int, 3>{0, 1, 3});

  // an empty object at the base of the failing strings lifts the obstruction
  sd1_section empty0;
  empty0.v = {vo(0, 2), vo(1, 2), vo(2, 2), vo(2, 2)};
  empty0.w = {fmatrix::zero(0, 1, 2), mk(2, 2, 2, {1, 0, 0, 1}), mk(4, 2, 2, {1, 0, 0, 1, 1, 1, 0, 0})};
  REQUIRE(validate_sd1_section(md, empty0).all_pass());
  CHECK(is_extendable(md, empty0));
  auto s0 = extend(md, empty0);
  CHECK(is_one_generated(md, s0));

  // a non-square cell obstructs every spine with a nonzero base object
  auto ob = obstructed_delta2(2);
  sd1_section u;
  u.v = {vo(1, 2), vo(1, 2), vo(1, 2)};
  u.w = {mk(1, 1, 2, {1}), mk(1, 1, 2, {1})};
  extendable_certificate c2 = check_extendable(ob, u);
  CHECK(!c2.ok);
  REQUIRE(c2.failing.size() == 1);
  CHECK(c2.failing[0] == std::array<int, 3>{0, 1, 2});
  u.v[0] = vo(0, 2);
  u.w[0] = fmatrix::zero(0, 1, 2);
  CHECK(is_extendable(ob, u));
  CHECK(validate_section(to_lax(ob), extend(ob, u)));
}

TEST_CASE("extension forces the long component through the inverted cell") {
  auto md = fixtures::mult_delta2_coboundary(2, 94);
  sd1_section t;
  t.v = {vo(1, 2), vo(1, 2), vo(1, 2)};
  t.w = {mk(2, 1, 2, {1, 0}), mk(2, 1, 2, {1, 1})};
  REQUIRE(validate_sd1_section(md, t).all_pass());
  auto s = extend(md, t);
  CHECK(validate_section(to_lax(md), s));
  fmatrix expected = fm_mul(*fm_inverse(md.cell_at(0, 1, 2)),
                            fm_mul(fm_kron(fmatrix::ident(2, 2), t.w_at(1)), t.w_at(2)));
  CHECK(s.phi_at(0, 2) == expected);
  CHECK(gamma_restrict(md, s) == t);

  // a non-extendable spine is rejected with the failing triple named
  auto bad = fixtures::mult_delta3_singular(2, 95);
  sd1_section tb = gamma_restrict(bad, generator_section(bad, 1));
  CHECK_THROWS_WITH_AS(extend(bad, tb), "extend: spine is not extendable at (0, 1, 3)",
                       validation_error);
}

TEST_CASE("one-generation agrees between cube limits and edge isomorphisms") {
  // strict diagrams: every comparison map is an identity
  auto strict3 = strict_mult_diagram(delta(3), 3, {1, 2, 2, 4});
  auto s = generator_section(strict3, 1);
  one_generated_verdict v = check_one_generated(strict3, s);
  CHECK(v.cube_limits);
  CHECK(v.edge_isos);
  CHECK(is_one_generated(strict3, s));

  // the singular cell breaks the generator section by both methods
  auto md = fixtures::mult_delta3_singular(2, 96);
  one_generated_verdict vb = check_one_generated(md, generator_section(md, 1));
  CHECK(!vb.edge_isos);
  CHECK(!vb.cube_limits);
  CHECK(vb.agree());
  CHECK(!is_one_generated(md, generator_section(md, 1)));
}

TEST_CASE("spines biject with iterated fiber product points") {
  auto flat = strict_mult_diagram(delta(2), 2, {1, 1, 1});
  CHECK(count_fiber_product_points(flat, 1) == 13);
  auto spines = enumerate_sd1_sections(flat, 1);
  CHECK(spines.size() == 13);
  for (const auto& t : spines) CHECK(validate_sd1_section(flat, t).all_pass());

  auto md2 = fixtures::mult_delta2_coboundary(2, 97);
  CHECK(count_fiber_product_points(md2, 1) == 29);
  CHECK(enumerate_sd1_sections(md2, 1).size() == 29);

  std::mt19937_64 rng(98);
  auto md3 = coboundary_mult_diagram(delta(3), 2, {1, 1, 2, 2}, rng);
  CHECK(count_fiber_product_points(md3, 1) == 52);
  CHECK(enumerate_sd1_sections(md3, 1).size() == 52);

  // over F_3 the matrix spaces grow with the field
  auto flat3 = strict_mult_diagram(delta(1), 3, {1, 1});
  // profiles: (0,0):1 (0,1):1 (1,0):1 (1,1):3
  CHECK(count_fiber_product_points(flat3, 1) == 6);
  CHECK(enumerate_sd1_sections(flat3, 1).size() == 6);
}

TEST_CASE("the spine equivalence is exhaustive at small dimensions") {
  // strict 3-chain: every section is generated and every spine extends
  auto strict2 = strict_mult_diagram(delta(2), 2, {1, 1, 2});
  sweep_result r = sweep_equivalence(strict2, 2);
  check_sweep(r);
  CHECK(r.sections == 5889);
  CHECK(r.spines == 5889);
  CHECK(r.extendable == 5889);

  // a singular square cell: some spines extend, none with a nonzero base
  sweep_result rs = sweep_equivalence(singular_delta2(2), 2);
  check_sweep(rs);
  CHECK(rs.spines == 5889);
  CHECK(rs.extendable < rs.spines);

  // a non-square cell: only spines with an empty base object extend
  sweep_result ro = sweep_equivalence(obstructed_delta2(2), 1);
  check_sweep(ro);

  // 4-chains, everywhere-invertible and singular
  std::mt19937_64 rng(99);
  auto md3 = coboundary_mult_diagram(delta(3), 2, {1, 1, 2, 2}, rng);
  sweep_result rc = sweep_equivalence(md3, 1);
  check_sweep(rc);
  CHECK(rc.sections == 52);
  CHECK(rc.spines == 52);
  CHECK(rc.extendable == 52);

  sweep_result r3 = sweep_equivalence(fixtures::mult_delta3_singular(2, 100), 1);
  check_sweep(r3);
  CHECK(r3.spines == 124);
  CHECK(r3.extendable < r3.spines);
}

TEST_CASE("staircase recollement splits the chain at every level") {
  std::mt19937_64 rng(101);
  auto md2 = coboundary_mult_diagram(delta(2), 2, {1, 1, 2}, rng);
  require_all(staircase_recollement(md2, 0));
  require_all(staircase_recollement(md2, 1));

  auto md1 = strict_mult_diagram(delta(1), 3, {1, 2});
  require_all(staircase_recollement(md1, 0));

  staircase_options tight;
  tight.sampled = 2;
  tight.hom_pairs = 2;
  require_all(staircase_recollement(fixtures::mult_delta3_singular(2, 102), 1, tight));

  CHECK_THROWS_AS(staircase_recollement(md2, 2, {}), validation_error);
}

TEST_CASE("pushing a spine up the staircase inverts the upper arrows") {
  std::mt19937_64 rng(103);
  auto md = coboundary_mult_diagram(delta(2), 2, {1, 2, 2}, rng);
  sd1_section u;
  u.v = {vo(1, 2), vo(2, 2)};
  u.w = {mk(2, 2, 2, {1, 0, 1, 1})};
  sd1_section t = sd1_push_open(md, 1, u);
  CHECK(t.v[2].dim == md.mult_at(1, 2) * 2);
  CHECK(fm_is_invertible(t.w_at(2)));
  CHECK(sd1_restrict_low(md, 1, t) == u);

  // at the bottom split every arrow above the boundary becomes invertible
  sd1_section u0;
  u0.v = {vo(2, 2)};
  sd1_section t0 = sd1_push_open(md, 0, u0);
  CHECK(fm_is_invertible(t0.w_at(1)));
  CHECK(fm_is_invertible(t0.w_at(2)));
}

TEST_CASE("the staircase at the bottom of the 2-chain matches the open pushforward") {
  auto md = strict_mult_diagram(delta(1), 2, {1, 3});
  lax_diagram<vect_backend> d = to_lax(md);
  decomposition dec = decomposition::from_sieve(d.base, {0});

  sd1_section u;
  u.v = {vo(2, 2)};
  sd1_section pushed = sd1_push_open(md, 0, u);

  section<vect_backend> seed;
  seed.x = {vo(2, 2), vo(0, 2)};
  seed.phi.insert({{0, 1}, fmatrix::zero(6, 0, 2)});
  REQUIRE(validate_section(d, seed));
  auto js = j_star(d, dec, open_restrict(d, dec, seed));
  CHECK(js.x[1].dim == pushed.v[1].dim);
  CHECK(js.phi_at(0, 1) == pushed.w_at(1));
}

TEST_CASE("norm grids degenerate correctly at the extensions") {
  auto md = strict_mult_diagram(delta(1), 2, {1, 2});

  // extension by zero: the kernel part vanishes
  sd1_section u;
  u.v = {vo(2, 2)};
  auto jb = sd1_extend_open(md, 0, u);
  auto g = norm_fiber_grid(md, jb);
  require_all(g.checks);
  CHECK(g.kernel_part.x[1].dim == 0);

  // closed pushforward: the kernel part recovers the closed value
  sd1_section z;
  z.v = {vo(3, 2)};
  auto iz = sd1_push_closed(md, 0, z);
  auto g2 = norm_fiber_grid(md, iz);
  require_all(g2.checks);
  CHECK(g2.kernel_part.x[1].dim == 3);
  CHECK(g2.open_push.x[1].dim == 0);
  CHECK(g2.open_ext.x[1].dim == 0);

  // random spine: rank-nullity is among the grid checks
  std::mt19937_64 rng(104);
  auto g3 = norm_fiber_grid(md, random_sd1_section(md, 2, rng));
  require_all(g3.checks);
}

TEST_CASE("spine hom enumeration respects its cap") {
  auto md = strict_mult_diagram(delta(1), 2, {1, 1});
  std::mt19937_64 rng(105);
  sd1_section a = random_sd1_section(md, 2, rng);
  while (a.v[0].dim < 2 || a.v[1].dim < 2) a = random_sd1_section(md, 2, rng);
  CHECK_THROWS_AS(sd1_hom(md, a, a, 4), validation_error);
  auto homs = sd1_hom(md, a, a);
  bool all_valid = true;
  for (const auto& h : homs) all_valid = all_valid && validate_sd1_map(md, a, a, h);
  CHECK(all_valid);
  sd1_map ident_map;
  ident_map.psi = {fmatrix::ident(a.v[0].dim, 2), fmatrix::ident(a.v[1].dim, 2)};
  CHECK(std::find(homs.begin(), homs.end(), ident_map) != homs.end());
}
