#pragma once

#include <random>

#include "laxglue/multdiagram.hpp"
#include "laxglue/recollement.hpp"

namespace laxglue::fixtures {

inline fin_poset vee_poset() {
  return fin_poset::validate({"l", "r", "t"}, {{"l", "t"}, {"r", "t"}});
}

inline fin_poset wedge_poset() {
  return fin_poset::validate({"b", "x", "y"}, {{"b", "x"}, {"b", "y"}});
}

inline fin_poset diamond_poset() {
  return fin_poset::validate({"b", "l", "r", "t"},
                             {{"b", "l"}, {"b", "r"}, {"l", "t"}, {"r", "t"}});
}

inline fin_poset antichain2() { return fin_poset::validate({"a", "b"}, {}); }

// Two minimal points jointly below two maximal points; the base of the
// classic two-patch circle gluing.
inline fin_poset circle_glue_poset() {
  return fin_poset::validate({"x", "y", "u", "v"},
                             {{"x", "u"}, {"x", "v"}, {"y", "u"}, {"y", "v"}});
}

inline fin_poset point_poset() { return delta(0); }

// A lax diagram of set-valued copresheaves over `base` where every fiber is
// sheaves on the point, every transition is the identity pipeline, and every
// cell is the identity.
inline lax_diagram<finset_backend> finset_identity_diagram(const fin_poset& base) {
  lax_diagram<finset_backend> d;
  d.base = base;
  d.toposic = true;
  finset_backend::cat pt{point_poset()};
  for (int i = 0; i < base.size(); ++i) d.fiber.push_back(pt);
  functor_spec<finset_backend> idf;
  idf.dom = pt;
  idf.cod = pt;
  for (auto [a, b] : base.strict_pairs()) d.tau.insert({{a, b}, idf});
  for (auto [a, b] : base.strict_pairs())
    for (int c = 0; c < base.size(); ++c)
      if (base.lt(b, c))
        d.can.insert({{a, b, c}, identity_cell<finset_backend>(idf, idf, idf)});
  return d;
}

// Over the 3-chain: the bottom fiber holds copresheaves on the 2-chain, the
// others sheaves on the point; transitions evaluate at the top vertex.
inline lax_diagram<finset_backend> finset_eval_diagram() {
  lax_diagram<finset_backend> d;
  d.base = delta(2);
  d.toposic = true;
  finset_backend::cat edge{delta(1)};
  finset_backend::cat pt{point_poset()};
  d.fiber = {edge, pt, pt};
  monotone_map top = monotone_map::validate(point_poset(), delta(1), {1});
  functor_spec<finset_backend> ev;
  ev.dom = edge;
  ev.cod = pt;
  ev.stages.push_back(finset_stage{stage_restrict{top}});
  functor_spec<finset_backend> idf;
  idf.dom = pt;
  idf.cod = pt;
  d.tau.insert({{0, 1}, ev});
  d.tau.insert({{0, 2}, ev});
  d.tau.insert({{1, 2}, idf});
  d.can.insert({{0, 1, 2}, identity_cell<finset_backend>(ev, ev, idf)});
  return d;
}

inline lax_diagram<vect_backend> vect_delta1(int p, int m) {
  mult_diagram md = strict_mult_diagram(delta(1), p, {1, m});
  return to_lax(md);
}

inline mult_diagram mult_delta2_coboundary(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return coboundary_mult_diagram(delta(2), p, {1, 2, 4}, rng);
}

inline mult_diagram mult_delta3_coboundary(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return coboundary_mult_diagram(delta(3), p, {1, 2, 4, 8}, rng);
}

inline mult_diagram mult_delta4_scalar(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return coboundary_mult_diagram(delta(4), p, {1, 1, 1, 1, 1}, rng);
}

inline mult_diagram mult_delta4_coboundary(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return coboundary_mult_diagram(delta(4), p, {1, 2, 4, 8, 16}, rng);
}

inline mult_diagram mult_diamond_coboundary(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return coboundary_mult_diagram(diamond_poset(), p, {1, 2, 2, 4}, rng);
}

// A valid diagram over the 3-chain whose cell at 0 < 1 < 3 is singular:
// M_013 is chosen non-invertible and M_023 is solved from the one cocycle
// equation, which only needs M_012 invertible.
inline mult_diagram mult_delta3_singular(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  fin_poset base = delta(3);
  mult_diagram md;
  md.base = base;
  md.p = p;
  md.mult = multiplicities_from_weights(base, {1, 2, 4, 8});
  auto rand_singular = [&](int n) {
    fmatrix m = fm_random(n, n, p, rng);
    while (fm_is_invertible(m)) m = fm_random(n, n, p, rng);
    return m;
  };
  // shapes: M_pqr is (m_qr * m_pq) x m_pr with m_pq = 2^(q-p)
  fmatrix m012 = fm_random_invertible(4, p, rng);
  fmatrix m123 = fm_random_invertible(4, p, rng);
  fmatrix m013 = rand_singular(8);
  fmatrix m023 = fm_mul(*fm_inverse(fm_kron(fmatrix::ident(2, p), m012)),
                        fm_mul(fm_kron(m123, fmatrix::ident(2, p)), m013));
  md.cell.insert({{0, 1, 2}, m012});
  md.cell.insert({{1, 2, 3}, m123});
  md.cell.insert({{0, 1, 3}, m013});
  md.cell.insert({{0, 2, 3}, m023});
  return md;
}

// Deterministic pool of sections for a diagram: everything tiny, then seeded
// random draws.
template <class B>
std::vector<section<B>> section_pool(const lax_diagram<B>& d, std::size_t enumerate_to,
                                     int random_count, std::size_t random_size,
                                     std::uint64_t seed) {
  std::vector<section<B>> pool;
  try {
    pool = enumerate_sections(d, enumerate_to, 3000);
  } catch (const validation_error&) {
    pool.clear();
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < random_count; ++i) {
    auto s = random_section(d, random_size, rng);
    if (s) pool.push_back(*s);
  }
  return pool;
}

}  // namespace laxglue::fixtures
