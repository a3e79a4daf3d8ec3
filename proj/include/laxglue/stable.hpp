#pragma once

#include <string>
#include <vector>

#include "laxglue/recollement.hpp"
#include "laxglue/vect.hpp"

namespace laxglue {

// Over the 2-chain with its unique nontrivial decomposition, a section of a
// linear diagram is a triple (U, Z, alpha: Z -> tau(U)). In the linear
// setting the restriction functors acquire the extra adjoints and the
// open/closed pushforwards, extensions and the kernel part assemble into a
// 3x3 grid of sections with exact rows.
struct stable_grid {
  section<vect_backend> s;
  section<vect_backend> open_ext;     // extension by zero of the open part
  section<vect_backend> open_push;    // pushforward of the open part
  section<vect_backend> closed_push;  // pushforward of the closed part
  section<vect_backend> mixed;        // closed pushforward of the open pushforward's boundary
  section<vect_backend> kernel_part;  // closed pushforward of ker(alpha)
  section_map<vect_backend> ext_to_s, s_to_closed;       // open_ext -> s -> closed_push
  section_map<vect_backend> ext_to_push, push_to_mixed;  // open_ext -> open_push -> mixed
  section_map<vect_backend> ker_to_s, s_to_push;         // kernel_part -> s -> open_push
  section_map<vect_backend> ker_to_closed, closed_to_mixed;
  section_map<vect_backend> norm;  // open_ext -> open_push
  check_list checks;
};

namespace detail {

inline bool exact_at_middle(const fmatrix& f, const fmatrix& g) {
  // im f = ker g inside the middle space
  fmatrix gf = fm_mul(g, f);
  if (!(gf == fmatrix::zero(g.rows, f.cols, f.p))) return false;
  return fm_rank(f) == f.rows - fm_rank(g);
}

inline bool levelwise_mono(const section_map<vect_backend>& m) {
  for (const auto& c : m.psi)
    if (fm_rank(c) != c.cols) return false;
  return true;
}

inline bool levelwise_epi(const section_map<vect_backend>& m) {
  for (const auto& c : m.psi)
    if (fm_rank(c) != c.rows) return false;
  return true;
}

}  // namespace detail

inline stable_grid build_stable_grid(const lax_diagram<vect_backend>& d, const decomposition& dec,
                                     const section<vect_backend>& s) {
  if (d.base.size() != 2 || !d.base.lt(0, 1) || !dec.sieve_has(0) || dec.sieve_has(1))
    throw validation_error("stable grid: expected the 2-chain with sieve {0}");
  stable_grid g;
  g.s = s;
  const fmatrix& alpha = s.phi_at(0, 1);
  g.open_ext = j_bang(d, dec, open_restrict(d, dec, s));
  g.open_push = j_star(d, dec, open_restrict(d, dec, s));
  g.closed_push = i_star(d, dec, closed_restrict(d, dec, s));
  g.mixed = i_star(d, dec, closed_restrict(d, dec, g.open_push));

  fmatrix kbasis = fm_kernel_basis(alpha);
  part_section<vect_backend> kpart;
  kpart.on = {0, 1};
  kpart.x.resize(2);
  kpart.x[1] = vect_backend::obj{kbasis.cols, alpha.p};
  g.kernel_part = i_star(d, dec, kpart);

  int du = s.x[0].dim, dz = s.x[1].dim;
  int dt = g.open_push.x[1].dim;  // dim tau(U)
  int p = alpha.p;
  auto Z = [&](int r, int c) { return fmatrix::zero(r, c, p); };
  auto I = [&](int n) { return fmatrix::ident(n, p); };

  g.ext_to_s = {{I(du), Z(dz, 0)}};
  g.s_to_closed = {{Z(0, du), I(dz)}};
  g.ext_to_push = {{I(du), Z(dt, 0)}};
  g.push_to_mixed = {{Z(0, du), I(dt)}};
  g.ker_to_s = {{Z(du, 0), kbasis}};
  g.s_to_push = {{I(du), alpha}};
  g.ker_to_closed = {{Z(0, 0), kbasis}};
  g.closed_to_mixed = {{Z(0, 0), alpha}};
  g.norm = compose_section_maps<vect_backend>(g.s_to_push, g.ext_to_s);

  auto& ck = g.checks;
  ck.add("maps_are_section_maps",
         validate_section_map(d, g.open_ext, g.s, g.ext_to_s) &&
             validate_section_map(d, g.s, g.closed_push, g.s_to_closed) &&
             validate_section_map(d, g.open_ext, g.open_push, g.ext_to_push) &&
             validate_section_map(d, g.open_push, g.mixed, g.push_to_mixed) &&
             validate_section_map(d, g.kernel_part, g.s, g.ker_to_s) &&
             validate_section_map(d, g.s, g.open_push, g.s_to_push) &&
             validate_section_map(d, g.kernel_part, g.closed_push, g.ker_to_closed) &&
             validate_section_map(d, g.closed_push, g.mixed, g.closed_to_mixed));
  auto row_exact = [&](const section_map<vect_backend>& a, const section_map<vect_backend>& b) {
    bool ok = detail::levelwise_mono(a) && detail::levelwise_epi(b);
    for (std::size_t i = 0; i < a.psi.size(); ++i)
      ok = ok && detail::exact_at_middle(a.psi[i], b.psi[i]);
    return ok;
  };
  ck.add("row_through_section_short_exact", row_exact(g.ext_to_s, g.s_to_closed));
  ck.add("row_through_pushforward_short_exact", row_exact(g.ext_to_push, g.push_to_mixed));
  bool col_ok = detail::levelwise_mono(g.ker_to_s) && detail::levelwise_mono(g.ker_to_closed);
  for (std::size_t i = 0; i < 2; ++i)
    col_ok = col_ok && detail::exact_at_middle(g.ker_to_s.psi[i], g.s_to_push.psi[i]) &&
             detail::exact_at_middle(g.ker_to_closed.psi[i], g.closed_to_mixed.psi[i]);
  ck.add("kernel_columns_left_exact", col_ok);
  ck.add("rank_nullity", dz == kbasis.cols + fm_rank(alpha),
         "dim " + std::to_string(dz) + " = " + std::to_string(kbasis.cols) + " + " +
             std::to_string(fm_rank(alpha)));
  ck.add("norm_map_is_unit_after_counit",
         section_map_equal<vect_backend>(g.norm, g.ext_to_push));
  bool squares = true;
  squares = squares && section_map_equal<vect_backend>(
                           compose_section_maps<vect_backend>(g.s_to_push, g.ext_to_s),
                           g.ext_to_push);
  squares = squares && section_map_equal<vect_backend>(
                           compose_section_maps<vect_backend>(g.push_to_mixed, g.s_to_push),
                           compose_section_maps<vect_backend>(g.closed_to_mixed, g.s_to_closed));
  squares = squares && section_map_equal<vect_backend>(
                           compose_section_maps<vect_backend>(g.s_to_closed, g.ker_to_s),
                           g.ker_to_closed);
  ck.add("grid_squares_commute", squares);
  return g;
}

// The kernel part corepresents maps out of closed pushforwards: morphisms
// i_*(W) -> s correspond to linear maps W -> ker(alpha). Verified by count.
inline bool kernel_part_corepresents(const lax_diagram<vect_backend>& d, const decomposition& dec,
                                     const section<vect_backend>& s, int w_dim) {
  const fmatrix& alpha = s.phi_at(0, 1);
  int p = alpha.p;
  part_section<vect_backend> wpart;
  wpart.on = {0, 1};
  wpart.x.resize(2);
  wpart.x[1] = vect_backend::obj{w_dim, p};
  section<vect_backend> iw = i_star(d, dec, wpart);
  auto maps = section_hom(d, iw, s, 1 << 20);
  int k = fm_kernel_basis(alpha).cols;
  std::size_t expect = 1;
  for (int i = 0; i < k * w_dim; ++i) expect *= static_cast<std::size_t>(p);
  return maps.size() == expect;
}

}  // namespace laxglue
