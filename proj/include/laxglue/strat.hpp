#pragma once

#include <cstdint>
#include <vector>

#include "laxglue/recollement.hpp"

namespace laxglue {

// A sheaf on a finite space is the same thing as a copresheaf on its
// specialization order: the opens are the up-closed point sets, the stalk at
// a point is the value there, and restriction to a smaller open is plain
// restriction of the functor.
using sheaf = copresheaf;

// A finite stratified space: a monotone projection pi from the point order
// onto a stratifying poset. The fiber over p is the stratum at p, and the
// preimage of everything above p is the open star of p. All induced orders
// and index translations are precomputed by validate.
struct strat_space {
  fin_poset space;      // points of the space
  fin_poset strat;      // the stratifying poset
  std::vector<int> pi;  // point -> stratum

  // derived
  fin_poset op;  // strat reversed; base of the gluing diagram
  std::vector<std::vector<int>> stratum_pts;      // stratum -> its points, ascending
  std::vector<fin_poset> stratum;                 // induced order on each stratum
  std::vector<std::vector<int>> star_pts;         // stratum -> points of its open star
  std::vector<fin_poset> star;                    // induced order on each star
  std::vector<std::vector<int>> stratum_in_star;  // stratum position -> star position

  // Throws validation_error when pi is not monotone or the sizes disagree.
  static strat_space validate(fin_poset space, fin_poset strat, std::vector<int> pi);

  monotone_map projection() const;
  finset_backend::cat stratum_cat(int p) const { return {stratum[p]}; }
};

// Both stratification axioms: the open stars cover the space, and the
// intersection of two stars is the union of the stars indexed by common
// upper bounds.
check_list stratification_axioms(const strat_space& x);

// Restriction of a sheaf to a stratum. A stratum is down-closed inside its
// open star, so this composite of an open and a closed restriction is plain
// restriction of the functor.
functor_spec<finset_backend> stratum_restrict_functor(const strat_space& x, int p);
copresheaf stratum_restrict(const strat_space& x, int p, const sheaf& f);

// Right adjoint to stratum restriction: extend by a singleton over the
// strictly higher part of the open star, then right Kan extend along the
// star's inclusion into the space.
functor_spec<finset_backend> stratum_embed_functor(const strat_space& x, int p);
sheaf stratum_embed(const strat_space& x, int p, const copresheaf& y);

// Unit f -> embed(restrict(f)) of the stratum adjunction. Componentwise it
// sends a germ to the family of its restrictions across the star.
nat_map stratum_unit(const strat_space& x, int p, const sheaf& f);

// Counit restrict(embed(y)) -> y, always an isomorphism: the embedding is
// fully faithful. Componentwise it is the limit projection onto the point's
// own vertex.
nat_map stratum_counit(const strat_space& x, int p, const copresheaf& y);

// Hom bijection, triangle identities, and full faithfulness of the stratum
// adjunction on enumerated and sampled instances.
check_list stratum_adjunction_report(const strat_space& x, int p, int max_size = 1,
                                     std::uint64_t seed = 2026);

// For every ordered pair p, q of strata with p not above q, embedding at p
// followed by restricting to q yields a terminal copresheaf, for every input
// of pointwise size at most max_size.
check_list out_of_position(const strat_space& x, int max_size = 2);

// The gluing diagram of the space: a left-lax diagram over the reversed
// stratifying poset whose fiber at p holds copresheaves on the p-th stratum,
// whose transitions embed at the lower stratum and restrict to the higher
// one, and whose coherence cells restrict the unit of the middle stratum.
// Transitions are right adjoints, so the diagram is marked toposic.
lax_diagram<finset_backend> gluing_diagram(const strat_space& x);

// The image of a sheaf in the right-lax limit of the gluing diagram: stratum
// restrictions linked by restricted units. Throws validation_error if the
// result fails section validation.
section<finset_backend> transport(const strat_space& x, const lax_diagram<finset_backend>& gd,
                                  const sheaf& f);

// Reconstruction of a sheaf from a section: the limit, over the subdivision
// of the base, of the chain evaluations pushed back into the space by the
// embedding at each chain's top stratum. Covers that raise the top of a
// chain carry unit edges; the others carry embedded inclusion evaluations.
struct reconstruction_data {
  sd_poset sdp;
  shaped_diagram<finset_backend> dia;
  finset_backend::limit_data lim;
  const sheaf& value() const { return lim.apex; }
};

reconstruction_data reconstruct_full(const strat_space& x,
                                     const lax_diagram<finset_backend>& gd,
                                     const section<finset_backend>& s);
sheaf reconstruct(const strat_space& x, const lax_diagram<finset_backend>& gd,
                  const section<finset_backend>& s);

// The comparison from a sheaf into the reconstruction of its transport,
// mediated by the cone of iterated units along each chain. Throws
// validation_error when the cone fails to mediate; reconstruction succeeds
// on f exactly when the returned map is an isomorphism.
nat_map sheaf_comparison(const strat_space& x, const lax_diagram<finset_backend>& gd,
                         const sheaf& f, const reconstruction_data& rd);

// The comparison from the transport of a reconstruction back to the original
// section: componentwise the counit composed with the restricted limit
// projection at the singleton chain. rd must be the reconstruction of s.
section_map<finset_backend> section_comparison(const strat_space& x,
                                               const lax_diagram<finset_backend>& gd,
                                               const section<finset_backend>& s,
                                               const reconstruction_data& rd);

// The subterminal sheaf whose support is the preimage of a cosieve of the
// stratifying poset: a singleton stalk over selected strata, empty elsewhere.
sheaf characteristic_subterminal(const strat_space& x, const std::vector<int>& cosieve_elems);

// Recovering a stratum selection from pure section data: the flag section is
// terminal over the selected strata and initial elsewhere, and its
// reconstruction should be the characteristic subterminal of the selection.
struct recovered_flag {
  section<finset_backend> flag;
  sheaf value;
  sheaf expected;
  bool subterminal = false;
  bool matches = false;
};

recovered_flag recover_stratification(const strat_space& x,
                                      const lax_diagram<finset_backend>& gd,
                                      const std::vector<int>& cosieve_elems);

// A map of stratified spaces over a fixed stratifying poset: a monotone map
// of point orders commuting with the projections.
struct strat_map {
  strat_space src;
  strat_space dst;
  std::vector<int> to;  // source point -> destination point

  static strat_map validate(strat_space src, strat_space dst, std::vector<int> to);
  monotone_map as_monotone() const;
};

// Direct image of a sheaf: the right Kan extension along the point map.
sheaf direct_image(const strat_map& g, const sheaf& f);

// The induced functor between stratum fibers: embed at p, push forward,
// restrict to the destination stratum at p.
copresheaf stratum_pushforward(const strat_map& g, int p, const copresheaf& y);
nat_map stratum_pushforward_mor(const strat_map& g, int p, const nat_map& m);

// The structure cell comparing destination transition after pushforward with
// pushforward after source transition, for a < b in the reversed base. It is
// built from the direct image of the source unit and the inverse of the
// landing isomorphism; throws validation_error when the direct image fails
// to land in its stratum. The cell need not be invertible for a general map:
// a collapse of two closed points onto one already produces a diagonal.
nat_map pushforward_cell(const strat_map& g, int a, int b, const copresheaf& y);

struct map_check_options {
  int max_size = 1;      // pointwise bound for enumerated objects
  int samples = 2;       // extra random objects per fiber
  int sample_size = 2;   // pointwise bound for random objects
  std::uint64_t seed = 2026;
};

// Checks that a stratified map respects the gluing structure: projections
// commute, the direct image matches its pointwise limit formula, direct
// images land in their strata, the induced fiber functors preserve identity
// and composition, structure cells are natural and coherent across triples
// (and invertible on subterminal inputs), and reconstruction round trips
// remain isomorphisms on both sides of the map.
check_list map_functoriality(const strat_map& g, const map_check_options& opt = {});

struct reconstruction_options {
  int max_size = 2;                  // pointwise bound for the exhaustive sweeps
  std::size_t section_cap = 4000000; // budget guard for section enumeration
  int hom_pairs = 4;                 // pairs tested for hom cardinality transfer
  std::uint64_t seed = 2026;
};

// The full reconstruction suite for one space: stratification axioms, gluing
// diagram validation, out-of-position vanishing, exhaustive round trips in
// both directions, hom cardinality transfer, stratification recovery for
// every cosieve, and recollement reports for the induced decompositions of
// the base.
check_list reconstruction_report(const strat_space& x, const reconstruction_options& opt = {});

}  // namespace laxglue
