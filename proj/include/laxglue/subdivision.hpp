#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "laxglue/poset.hpp"

namespace laxglue {

// A nonempty chain in a base poset, stored as base indices sorted upward
// along the base order.
struct chain {
  std::vector<int> elems;

  int min() const { return elems.front(); }
  int max() const { return elems.back(); }
  std::size_t size() const { return elems.size(); }
  bool contains(int e) const;
  bool subset_of(const chain& other) const;
  bool operator==(const chain& o) const { return elems == o.elems; }
  bool operator<(const chain& o) const { return elems < o.elems; }
};

// Sorts the elements along the base order; rejects repeats and incomparable
// pairs.
chain make_chain(const fin_poset& base, std::vector<int> elems);
std::string chain_display(const fin_poset& base, const chain& c);
chain parse_chain(const fin_poset& base, const std::string& text);

std::size_t default_size_limit();

// The barycentric subdivision: the poset of nonempty chains ordered by
// inclusion, with each chain labelled by its maximum and with the
// append-at-the-top covers marked.
struct sd_poset {
  fin_poset base;
  std::vector<chain> chains;  // indexed like order.elements()
  fin_poset order;
  std::vector<int> max_label;                // chain index -> base index
  std::set<std::pair<int, int>> marked;      // covers (smaller, larger) that append above the max

  int chain_index(const chain& c) const;
  bool has_chain(const chain& c) const;

 private:
  friend sd_poset build_sd(const fin_poset&, const std::vector<chain>&);
  std::map<std::vector<int>, int> lookup_;
};

sd_poset subdivide(const fin_poset& p, std::size_t size_limit = default_size_limit());

// The full subposet of sd(base) on chains whose minimum lies in the sieve.
sd_poset sd_originating(const sd_poset& sd, const decomposition& dec);

// A poset of chains without the subdivision bookkeeping: shape plus the chain
// sitting at each shape element.
struct chain_shape {
  fin_poset shape;
  std::vector<chain> vertex;
};

// The poset of chains (nonempty sieve chain strictly below min x) followed by
// x itself, ordered by inclusion. Every element of x must lie in the cosieve.
chain_shape lower_chain_shape(const fin_poset& base, const decomposition& dec, const chain& x);

// The Boolean cube of chains from i to i+k in the chain poset delta(n):
// all chains {i} + S + {i+k} with S inside the open interval. k >= 1.
chain_shape interval_cube(int n, int i, int k);

// The two-layer subdivision fragment on the chains [k] and [k < k+1].
sd_poset sd1(int n);

// One elementary step of a max-preserving chain inclusion: either prepend a
// new minimum below the whole chain or insert an element between two
// neighbours.
struct insertion {
  int elem;
  bool prepend;
  bool operator==(const insertion& o) const { return elem == o.elem && prepend == o.prepend; }
};

// Factors sigma into tau (same maximum, sigma a subset) by inserting the
// missing elements smallest-first. Throws if the maxima differ or sigma is
// not a subset of tau.
std::vector<insertion> elementary_factorize(const chain& sigma, const chain& tau);

// The (add-from-the-sieve, add-from-the-cosieve) factorization of a
// max-preserving inclusion: sigma extends first by the sieve elements of
// tau, then by the rest.
struct lr_factorization {
  chain through;
};

lr_factorization lr_factorize(const decomposition& dec, const chain& sigma, const chain& tau);

}  // namespace laxglue
