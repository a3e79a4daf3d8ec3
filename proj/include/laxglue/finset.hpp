#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "laxglue/poset.hpp"
#include "laxglue/shaped.hpp"

namespace laxglue {

// A finite set with named elements.
struct fset {
  std::vector<std::string> elems;

  int size() const { return static_cast<int>(elems.size()); }
  int find(const std::string& n) const;
  bool operator==(const fset& o) const { return elems == o.elems; }
};

// A function between finite sets, by index; cod records the target size so a
// function is meaningful on its own.
struct set_fn {
  std::vector<int> to;
  int cod = 0;

  bool operator==(const set_fn& o) const { return to == o.to && cod == o.cod; }
};

set_fn identity_fn(int n);
set_fn compose_fn(const set_fn& g, const set_fn& f);
bool is_bijection(const set_fn& f);

// A functor from a finite poset to finite sets: one set per element, one
// transition per strict pair, closed under composition.
struct copresheaf {
  fin_poset shape;
  std::vector<fset> sets;
  std::map<std::pair<int, int>, set_fn> maps;  // all strict pairs

  const set_fn& at(int a, int b) const;
  std::size_t total_size() const;
};

// Builds a copresheaf from transitions given on at least the covers,
// deriving and cross-checking the rest.
copresheaf make_copresheaf(fin_poset shape, std::vector<fset> sets,
                           const std::map<std::pair<int, int>, set_fn>& given);
std::optional<copresheaf> try_make_copresheaf(fin_poset shape, std::vector<fset> sets,
                                              const std::map<std::pair<int, int>, set_fn>& given);

copresheaf terminal_copresheaf(const fin_poset& shape);
copresheaf initial_copresheaf(const fin_poset& shape);
bool copresheaf_equal(const copresheaf& a, const copresheaf& b);

// A natural transformation, carrying its endpoints.
struct nat_map {
  copresheaf src;
  copresheaf dst;
  std::vector<set_fn> comp;
};

nat_map make_nat_map(copresheaf src, copresheaf dst, std::vector<set_fn> comp);
std::optional<nat_map> try_make_nat_map(copresheaf src, copresheaf dst, std::vector<set_fn> comp);
nat_map nat_identity(const copresheaf& x);
nat_map nat_compose(const nat_map& g, const nat_map& f);
bool nat_equal(const nat_map& a, const nat_map& b);
bool nat_is_iso(const nat_map& f);
nat_map nat_inverse(const nat_map& f);

std::optional<nat_map> copresheaf_iso(const copresheaf& a, const copresheaf& b);
std::vector<nat_map> copresheaf_hom(const copresheaf& a, const copresheaf& b,
                                    std::uint64_t cap = 2000000);
std::uint64_t copresheaf_hom_size(const copresheaf& a, const copresheaf& b,
                                  std::uint64_t cap = 2000000);

// Deterministic enumeration of copresheaves on a shape with every point of
// cardinality at most max_size. Ordered by size profile, then by transition
// choices.
std::vector<copresheaf> enumerate_copresheaves(const fin_poset& shape, int max_size,
                                               std::uint64_t cap = 4000000);
copresheaf random_copresheaf(const fin_poset& shape, int max_size, std::mt19937_64& rng);

// Limit of a set-valued diagram over a finite poset shape: families that are
// compatible with every transition, named by their components.
struct set_limit_data {
  fset apex;
  std::vector<set_fn> cone;
  std::vector<std::vector<int>> families;  // family -> component index per vertex
};
set_limit_data set_limit(const fin_poset& shape, const std::vector<fset>& sets,
                         const std::map<std::pair<int, int>, set_fn>& edges);

// The backend of copresheaf fibers: one fiber category per finite poset.
struct finset_backend {
  struct cat {
    fin_poset shape;
  };
  using obj = copresheaf;
  using mor = nat_map;

  struct limit_data {
    obj apex;
    std::vector<mor> cone;
  };

  static bool obj_equal(const obj& a, const obj& b) { return copresheaf_equal(a, b); }
  static bool mor_equal(const mor& f, const mor& g) { return nat_equal(f, g); }
  static obj mor_src(const mor& f) { return f.src; }
  static obj mor_dst(const mor& f) { return f.dst; }
  static mor identity(const obj& x) { return nat_identity(x); }
  static mor compose(const mor& g, const mor& f) { return nat_compose(g, f); }
  static obj terminal(const cat& c) { return terminal_copresheaf(c.shape); }
  static obj initial(const cat& c) { return initial_copresheaf(c.shape); }
  static bool is_terminal_like(const cat& c, const obj& x);
  static bool is_initial_like(const cat& c, const obj& x);
  static mor unique_to(const obj& src, const obj& terminal_like);
  static mor unique_from(const obj& initial_like, const obj& dst);
  static bool is_iso(const mor& f) { return nat_is_iso(f); }
  static mor inverse(const mor& f) { return nat_inverse(f); }
  static std::optional<mor> iso_check(const obj& a, const obj& b) { return copresheaf_iso(a, b); }
  static std::vector<mor> hom(const obj& a, const obj& b) { return copresheaf_hom(a, b); }
  static std::uint64_t hom_size(const obj& a, const obj& b) { return copresheaf_hom_size(a, b); }
  static std::vector<obj> enumerate_objects(const cat& c, int max_size) {
    return enumerate_copresheaves(c.shape, max_size);
  }
  static obj random_object(const cat& c, int max_size, std::mt19937_64& rng) {
    return random_copresheaf(c.shape, max_size, rng);
  }
  static std::size_t size_of(const obj& x) { return x.total_size(); }
  static limit_data limit(const cat& c, const shaped_diagram<finset_backend>& d);
  static std::optional<mor> mediate(const shaped_diagram<finset_backend>& d,
                                    const limit_data& lim, const obj& a,
                                    const std::vector<mor>& cone);
  static std::string describe(const obj& x);
};

// Pointwise functor stages on copresheaf fibers.

// Restriction along a monotone map f: K' -> K, sending a copresheaf on K to
// one on K'.
struct stage_restrict {
  monotone_map f;
};

// Right Kan extension along a full subposet inclusion sub -> big; the value
// at k is the limit over the part of sub lying above k.
struct stage_rke {
  fin_poset sub;
  fin_poset big;
  std::vector<int> embed;
};

// Extension by a singleton off a down-closed full subposet.
struct stage_extend_singleton {
  fin_poset sub;
  fin_poset big;
  std::vector<int> embed;
};

// Extension by the empty set off an up-closed full subposet.
struct stage_extend_empty {
  fin_poset sub;
  fin_poset big;
  std::vector<int> embed;
};

// The limit data behind one point of a right Kan extension: the part of the
// subposet above the point and the compatible families over it.
struct rke_point_data {
  std::vector<int> verts;
  fin_poset shape;
  set_limit_data lim;
};
rke_point_data rke_at_point(const stage_rke& s, const copresheaf& x, int k);

// Right Kan extension along an arbitrary monotone map g: the value at a
// target point is the limit of x over the preimage of the points above it.
copresheaf right_kan(const monotone_map& g, const copresheaf& x);
nat_map right_kan(const monotone_map& g, const nat_map& f);

copresheaf apply_stage(const stage_restrict& s, const copresheaf& x);
copresheaf apply_stage(const stage_rke& s, const copresheaf& x);
copresheaf apply_stage(const stage_extend_singleton& s, const copresheaf& x);
copresheaf apply_stage(const stage_extend_empty& s, const copresheaf& x);
nat_map apply_stage(const stage_restrict& s, const nat_map& f);
nat_map apply_stage(const stage_rke& s, const nat_map& f);
nat_map apply_stage(const stage_extend_singleton& s, const nat_map& f);
nat_map apply_stage(const stage_extend_empty& s, const nat_map& f);

}  // namespace laxglue
