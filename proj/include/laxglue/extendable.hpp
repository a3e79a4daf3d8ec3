#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "laxglue/multdiagram.hpp"
#include "laxglue/recollement.hpp"
#include "laxglue/stable.hpp"

namespace laxglue {

// The spine of a section of a linear diagram over the chain 0 < 1 < ... < n:
// the data left after restricting along the two-layer subdivision fragment
// on the chains [k] and [k < k+1]. Holds an object per element and one arrow
// per spine edge; no cocycle condition relates different levels.
struct sd1_section {
  std::vector<vect_backend::obj> v;
  std::vector<fmatrix> w;  // w[k-1]: v[k] -> tau^k_{k-1}(v[k-1]) for 1 <= k <= n

  const fmatrix& w_at(int k) const;  // the arrow at level k, 1-based
  bool operator==(const sd1_section& o) const { return v == o.v && w == o.w; }
};

// The length n of the underlying chain 0 < 1 < ... < n. Throws if the base
// of the diagram is not totally ordered by its element indices.
int chain_length(const mult_diagram& md);

check_list validate_sd1_section(const mult_diagram& md, const sd1_section& t);

// Restriction along the spine: keeps the objects and the adjacent-pair
// components, drops everything of span two or more.
sd1_section gamma_restrict(const mult_diagram& md, const section<vect_backend>& s);

// Why a spine fails to extend: the triples (i, i+1, i+k) whose cell, applied
// at v[i], is not invertible.
struct extendable_certificate {
  bool ok = true;
  std::vector<std::array<int, 3>> failing;
};

// A spine extends exactly when, for every string i < i+1 < i+k with k >= 2,
// the cell at (i, i+1, i+k) applied at v[i] is invertible; when dim v[i] = 0
// the applied map is empty and the triple passes regardless of the cell.
extendable_certificate check_extendable(const mult_diagram& md, const sd1_section& t);
bool is_extendable(const mult_diagram& md, const sd1_section& t);

// Rebuilds the full section from an extendable spine: the component of span
// k >= 2 at (i, i+k) is forced by the cocycle triple (i, i+1, i+k), namely
// the composite of the level-(i+k) arrow, the whiskered level-(i+1) arrow,
// and the inverse of the certified cell. Validates the result and throws on
// a non-extendable spine.
section<vect_backend> extend(const mult_diagram& md, const sd1_section& t);

// The two characterizations of a section generated by its spine. cube_limits
// checks, for every string sigma = [i < i+k] with k >= 2, that the section
// value at sigma is the limit of the section over the cube of chains from i
// to i+k through at least one interior point. edge_isos checks instead that
// every insertion [i < i+k] -> [i < i+1 < i+k] evaluates to an isomorphism.
// The two verdicts agree on every valid section.
struct one_generated_verdict {
  bool cube_limits = true;
  bool edge_isos = true;
  bool agree() const { return cube_limits == edge_isos; }
};

one_generated_verdict check_one_generated(const mult_diagram& md, const section<vect_backend>& s);
bool is_one_generated(const mult_diagram& md, const section<vect_backend>& s);

// All spines with every dimension at most max_dim, in odometer order.
// Throws when more than cap spines would be produced.
std::vector<sd1_section> enumerate_sd1_sections(const mult_diagram& md, int max_dim,
                                                std::size_t cap = 500000);

sd1_section random_sd1_section(const mult_diagram& md, int max_dim, std::mt19937_64& rng);

// The number of points of the iterated fiber product
// Ar(C_n) x_{C_n} ... x_{C_1} C_0 with all dimensions at most max_dim,
// computed arithmetically: a point is an object dimension per level plus an
// independent matrix per spine edge, so the count is the sum over dimension
// profiles of the product of the matrix-space sizes.
std::uint64_t count_fiber_product_points(const mult_diagram& md, int max_dim);

// Maps of spines: a matrix per level making every spine square commute.
struct sd1_map {
  std::vector<fmatrix> psi;

  bool operator==(const sd1_map& o) const { return psi == o.psi; }
  bool operator<(const sd1_map& o) const;
};

bool validate_sd1_map(const mult_diagram& md, const sd1_section& s, const sd1_section& t,
                      const sd1_map& m);
bool sd1_map_is_iso(const sd1_map& m);
std::vector<sd1_map> sd1_hom(const mult_diagram& md, const sd1_section& s, const sd1_section& t,
                             std::uint64_t cap = 200000);

// The linear diagram on the subchain lo <= ... <= hi, reindexed to start
// at zero.
mult_diagram mult_restrict(const mult_diagram& md, int lo, int hi);

// The staircase decomposition of spines at 0 <= k < n: the low part lives
// over the subchain [0..k], the high part over [k+1..n]; the spine arrow at
// level k+1 crosses the boundary and belongs to neither part.
sd1_section sd1_restrict_low(const mult_diagram& md, int k, const sd1_section& t);
sd1_section sd1_restrict_high(const mult_diagram& md, int k, const sd1_section& t);

// Right adjoint to the low restriction: continues above the boundary with
// identity arrows, so the upper objects are the pushed-forward lower ones.
sd1_section sd1_push_open(const mult_diagram& md, int k, const sd1_section& u);

// Left adjoint to the low restriction: continues above the boundary by zero.
sd1_section sd1_extend_open(const mult_diagram& md, int k, const sd1_section& u);

// Right adjoint to the high restriction: zero below the boundary; the
// crossing arrow is the zero map into the empty target.
sd1_section sd1_push_closed(const mult_diagram& md, int k, const sd1_section& z);

struct staircase_options {
  int max_dim = 1;
  int sampled = 4;
  int sample_dim = 2;
  int hom_pairs = 3;
  std::uint64_t seed = 2026;
};

// Verifies the recollement exhibited by the staircase split on enumerated
// and sampled spines: restriction identities, the image characterizations
// of both pushforwards, the three hom bijections, and the fracture square.
check_list staircase_recollement(const mult_diagram& md, int k,
                                 const staircase_options& opt = {});

// The kernel/cokernel grid of a spine over the 2-chain, where the spine is
// already the whole section.
stable_grid norm_fiber_grid(const mult_diagram& md, const sd1_section& t);

}  // namespace laxglue
