#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "laxglue/poset.hpp"

namespace laxglue {

// A functor from a finite poset shape into one fiber category of a backend:
// an object per shape element and a morphism per edge. Edges must be given
// at least on covers; close_edges() derives the rest and checks that all
// composition paths agree.
template <class B>
struct shaped_diagram {
  typename B::cat fiber;
  fin_poset shape;
  std::vector<typename B::obj> at;
  std::map<std::pair<int, int>, typename B::mor> edge;
};

template <class B>
std::map<std::pair<int, int>, typename B::mor> close_edges(const shaped_diagram<B>& d) {
  for (const auto& [key, m] : d.edge) {
    auto [a, b] = key;
    if (!d.shape.lt(a, b)) throw validation_error("shaped diagram: edge key is not a strict pair");
    if (!B::obj_equal(B::mor_src(m), d.at[static_cast<std::size_t>(a)]) ||
        !B::obj_equal(B::mor_dst(m), d.at[static_cast<std::size_t>(b)]))
      throw validation_error("shaped diagram: edge endpoints mismatch at " + d.shape.name(a) +
                             " <= " + d.shape.name(b));
  }
  std::map<std::pair<int, int>, typename B::mor> out;
  // Process pairs by the number of elements strictly between them so that
  // composites are always available.
  std::vector<std::pair<int, std::pair<int, int>>> pairs;
  for (auto [a, b] : d.shape.strict_pairs()) {
    int between = 0;
    for (int q = 0; q < d.shape.size(); ++q)
      if (d.shape.lt(a, q) && d.shape.lt(q, b)) ++between;
    pairs.push_back({between, {a, b}});
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [between, key] : pairs) {
    auto [a, b] = key;
    auto given = d.edge.find(key);
    bool have = false;
    typename B::mor value = given != d.edge.end()
                                ? given->second
                                : B::identity(d.at[static_cast<std::size_t>(a)]);
    if (given != d.edge.end()) have = true;
    for (int q = 0; q < d.shape.size(); ++q) {
      if (!(d.shape.lt(a, q) && d.shape.lt(q, b))) continue;
      typename B::mor comp = B::compose(out.at({q, b}), out.at({a, q}));
      if (!have) {
        value = comp;
        have = true;
      } else if (!B::mor_equal(value, comp)) {
        throw validation_error("shaped diagram: inconsistent composites for " + d.shape.name(a) +
                               " <= " + d.shape.name(b) + " via " + d.shape.name(q));
      }
    }
    if (!have)
      throw validation_error("shaped diagram: missing edge for cover " + d.shape.name(a) +
                             " <= " + d.shape.name(b));
    out.insert({key, value});
  }
  return out;
}

}  // namespace laxglue
