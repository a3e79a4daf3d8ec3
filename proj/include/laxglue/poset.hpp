#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace laxglue {

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Finite poset on opaque text identifiers. The order is stored as the full
// reflexive-transitive closure of the input pairs; antisymmetry failures
// (cycles) are rejected at construction.
class fin_poset {
 public:
  fin_poset() = default;

  static fin_poset validate(std::vector<std::string> elements,
                            const std::vector<std::pair<std::string, std::string>>& leq_pairs);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& elements() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  std::optional<int> find(const std::string& n) const;
  int index_of(const std::string& n) const;

  bool leq(int a, int b) const { return leq_[static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b)] != 0; }
  bool lt(int a, int b) const { return a != b && leq(a, b); }
  bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }

  // Hasse relation derived from the closure, lexicographic in (low, high) index.
  const std::vector<std::pair<int, int>>& covers() const { return covers_; }
  std::vector<std::pair<int, int>> strict_pairs() const;

  std::vector<int> up_set(int a) const;
  std::vector<int> strict_up_set(int a) const;
  std::vector<int> down_set(int a) const;
  std::vector<int> strict_down_set(int a) const;
  std::vector<int> minimal_elements() const;
  std::vector<int> maximal_elements() const;

  // Topological order of indices, deterministic (smallest index first among minima).
  std::vector<int> linear_extension() const;

  bool equals(const fin_poset& o) const { return names_ == o.names_ && leq_ == o.leq_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<char> leq_;
  std::vector<std::pair<int, int>> covers_;
};

enum class subset_kind { sieve, cosieve, both, neither };

std::string subset_kind_name(subset_kind k);

// Classifies a subset (given by element indices) as down-closed, up-closed,
// both, or neither. Duplicate or out-of-range indices are rejected.
subset_kind classify_subset(const fin_poset& p, const std::vector<int>& subset);

struct monotone_map {
  fin_poset source;
  fin_poset target;
  std::vector<int> assignment;  // source index -> target index

  static monotone_map validate(fin_poset source, fin_poset target, std::vector<int> assignment);
  int operator()(int i) const { return assignment.at(static_cast<std::size_t>(i)); }
};

monotone_map compose(const monotone_map& g, const monotone_map& f);

// A two-sided decomposition of a poset: a sieve (down-closed) part whose
// complement is automatically a cosieve (up-closed).
struct decomposition {
  fin_poset base;
  std::vector<char> in_sieve;  // one flag per base element

  static decomposition from_sieve(const fin_poset& base, const std::vector<int>& sieve_elems);
  static decomposition from_cosieve(const fin_poset& base, const std::vector<int>& cosieve_elems);
  bool sieve_has(int i) const { return in_sieve[static_cast<std::size_t>(i)] != 0; }
  std::vector<int> sieve() const;
  std::vector<int> cosieve() const;
};

// Pulls a decomposition back along a monotone map to the 2-chain 0 < 1:
// the sieve is the preimage of 0.
decomposition decomposition_from_map(const monotone_map& pi);

// The poset of up-closed subsets ordered by inclusion. Elements are named
// "{a,b}" with member names joined in base element order. Guarded to small
// bases since the lattice is exponential.
fin_poset cosieve_lattice(const fin_poset& p);

fin_poset opposite(const fin_poset& p);

// Full subposet on the given (distinct) indices, preserving names.
// Returns the subposet together with the embedding into the original indices.
std::pair<fin_poset, std::vector<int>> sub_poset(const fin_poset& p, const std::vector<int>& elems);

// The chain 0 < 1 < ... < n with single-character-free names "0".."n".
fin_poset delta(int n);

}  // namespace laxglue
