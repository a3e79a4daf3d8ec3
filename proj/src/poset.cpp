#include "laxglue/poset.hpp"

#include <algorithm>
#include <set>

namespace laxglue {

fin_poset fin_poset::validate(std::vector<std::string> elements,
                              const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  fin_poset p;
  p.names_ = std::move(elements);
  for (int i = 0; i < p.size(); ++i) {
    if (!p.index_.emplace(p.names_[static_cast<std::size_t>(i)], i).second) {
      throw validation_error("duplicate element name: " + p.names_[static_cast<std::size_t>(i)]);
    }
  }
  const std::size_t n = p.names_.size();
  p.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) p.leq_[i * n + i] = 1;
  for (const auto& [a, b] : leq_pairs) {
    auto ia = p.find(a);
    auto ib = p.find(b);
    if (!ia) throw validation_error("unknown element in leq: " + a);
    if (!ib) throw validation_error("unknown element in leq: " + b);
    p.leq_[static_cast<std::size_t>(*ia) * n + static_cast<std::size_t>(*ib)] = 1;
  }
  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (p.leq_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (p.leq_[k * n + j]) p.leq_[i * n + j] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.leq_[i * n + j] && p.leq_[j * n + i]) {
        throw validation_error("cycle detected: " + p.names_[i] + " and " + p.names_[j] +
                               " are each below the other");
      }
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b) {
      if (!p.lt(a, b)) continue;
      bool cover = true;
      for (int c = 0; c < p.size() && cover; ++c)
        if (p.lt(a, c) && p.lt(c, b)) cover = false;
      if (cover) p.covers_.emplace_back(a, b);
    }
  return p;
}

std::optional<int> fin_poset::find(const std::string& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int fin_poset::index_of(const std::string& n) const {
  auto i = find(n);
  if (!i) throw validation_error("unknown element: " + n);
  return *i;
}

std::vector<std::pair<int, int>> fin_poset::strict_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (lt(a, b)) out.emplace_back(a, b);
  return out;
}

std::vector<int> fin_poset::up_set(int a) const {
  std::vector<int> out;
  for (int b = 0; b < size(); ++b)
    if (leq(a, b)) out.push_back(b);
  return out;
}

std::vector<int> fin_poset::strict_up_set(int a) const {
  std::vector<int> out;
  for (int b = 0; b < size(); ++b)
    if (lt(a, b)) out.push_back(b);
  return out;
}

std::vector<int> fin_poset::down_set(int a) const {
  std::vector<int> out;
  for (int b = 0; b < size(); ++b)
    if (leq(b, a)) out.push_back(b);
  return out;
}

std::vector<int> fin_poset::strict_down_set(int a) const {
  std::vector<int> out;
  for (int b = 0; b < size(); ++b)
    if (lt(b, a)) out.push_back(b);
  return out;
}

std::vector<int> fin_poset::minimal_elements() const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a) {
    bool minimal = true;
    for (int b = 0; b < size() && minimal; ++b)
      if (lt(b, a)) minimal = false;
    if (minimal) out.push_back(a);
  }
  return out;
}

std::vector<int> fin_poset::maximal_elements() const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a) {
    bool maximal = true;
    for (int b = 0; b < size() && maximal; ++b)
      if (lt(a, b)) maximal = false;
    if (maximal) out.push_back(a);
  }
  return out;
}

std::vector<int> fin_poset::linear_extension() const {
  std::vector<int> out;
  std::vector<char> placed(static_cast<std::size_t>(size()), 0);
  for (int step = 0; step < size(); ++step) {
    for (int a = 0; a < size(); ++a) {
      if (placed[static_cast<std::size_t>(a)]) continue;
      bool ready = true;
      for (int b = 0; b < size() && ready; ++b)
        if (!placed[static_cast<std::size_t>(b)] && lt(b, a)) ready = false;
      if (ready) {
        out.push_back(a);
        placed[static_cast<std::size_t>(a)] = 1;
        break;
      }
    }
  }
  return out;
}

std::string subset_kind_name(subset_kind k) {
  switch (k) {
    case subset_kind::sieve: return "sieve";
    case subset_kind::cosieve: return "cosieve";
    case subset_kind::both: return "both";
    case subset_kind::neither: return "neither";
  }
  return "neither";
}

subset_kind classify_subset(const fin_poset& p, const std::vector<int>& subset) {
  std::vector<char> in(static_cast<std::size_t>(p.size()), 0);
  for (int i : subset) {
    if (i < 0 || i >= p.size()) throw validation_error("subset index out of range");
    if (in[static_cast<std::size_t>(i)]) throw validation_error("duplicate subset element");
    in[static_cast<std::size_t>(i)] = 1;
  }
  bool down = true, up = true;
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b) {
      if (!p.lt(a, b)) continue;
      if (in[static_cast<std::size_t>(b)] && !in[static_cast<std::size_t>(a)]) down = false;
      if (in[static_cast<std::size_t>(a)] && !in[static_cast<std::size_t>(b)]) up = false;
    }
  if (down && up) return subset_kind::both;
  if (down) return subset_kind::sieve;
  if (up) return subset_kind::cosieve;
  return subset_kind::neither;
}

monotone_map monotone_map::validate(fin_poset source, fin_poset target, std::vector<int> assignment) {
  if (static_cast<int>(assignment.size()) != source.size())
    throw validation_error("monotone map: assignment size mismatch");
  for (int v : assignment)
    if (v < 0 || v >= target.size()) throw validation_error("monotone map: target index out of range");
  for (int a = 0; a < source.size(); ++a)
    for (int b = 0; b < source.size(); ++b)
      if (source.leq(a, b) &&
          !target.leq(assignment[static_cast<std::size_t>(a)], assignment[static_cast<std::size_t>(b)])) {
        throw validation_error("monotone map: order not preserved at " + source.name(a) + " <= " +
                               source.name(b));
      }
  monotone_map m;
  m.source = std::move(source);
  m.target = std::move(target);
  m.assignment = std::move(assignment);
  return m;
}

monotone_map compose(const monotone_map& g, const monotone_map& f) {
  if (!f.target.equals(g.source)) throw validation_error("monotone map composition: shape mismatch");
  std::vector<int> a(f.assignment.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = g.assignment[static_cast<std::size_t>(f.assignment[i])];
  return monotone_map::validate(f.source, g.target, std::move(a));
}

decomposition decomposition::from_sieve(const fin_poset& base, const std::vector<int>& sieve_elems) {
  auto kind = classify_subset(base, sieve_elems);
  if (kind != subset_kind::sieve && kind != subset_kind::both)
    throw validation_error("subset is not a sieve (not down-closed)");
  decomposition d;
  d.base = base;
  d.in_sieve.assign(static_cast<std::size_t>(base.size()), 0);
  for (int i : sieve_elems) d.in_sieve[static_cast<std::size_t>(i)] = 1;
  return d;
}

decomposition decomposition::from_cosieve(const fin_poset& base, const std::vector<int>& cosieve_elems) {
  std::vector<char> in(static_cast<std::size_t>(base.size()), 0);
  auto kind = classify_subset(base, cosieve_elems);
  if (kind != subset_kind::cosieve && kind != subset_kind::both)
    throw validation_error("subset is not a cosieve (not up-closed)");
  for (int i : cosieve_elems) in[static_cast<std::size_t>(i)] = 1;
  std::vector<int> sieve_elems;
  for (int i = 0; i < base.size(); ++i)
    if (!in[static_cast<std::size_t>(i)]) sieve_elems.push_back(i);
  return from_sieve(base, sieve_elems);
}

std::vector<int> decomposition::sieve() const {
  std::vector<int> out;
  for (int i = 0; i < base.size(); ++i)
    if (sieve_has(i)) out.push_back(i);
  return out;
}

std::vector<int> decomposition::cosieve() const {
  std::vector<int> out;
  for (int i = 0; i < base.size(); ++i)
    if (!sieve_has(i)) out.push_back(i);
  return out;
}

decomposition decomposition_from_map(const monotone_map& pi) {
  if (pi.target.size() != 2 || !pi.target.lt(0, 1) || pi.target.lt(1, 0))
    throw validation_error("decomposition_from_map: target must be the 2-chain");
  std::vector<int> sieve_elems;
  for (int i = 0; i < pi.source.size(); ++i)
    if (pi.assignment[static_cast<std::size_t>(i)] == 0) sieve_elems.push_back(i);
  return decomposition::from_sieve(pi.source, sieve_elems);
}

fin_poset cosieve_lattice(const fin_poset& p) {
  if (p.size() > 16) throw validation_error("cosieve_lattice: base too large");
  const int n = p.size();
  std::vector<unsigned> cosieves;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool up = true;
    for (int a = 0; a < n && up; ++a)
      for (int b = 0; b < n && up; ++b)
        if (p.lt(a, b) && (mask >> a & 1u) && !(mask >> b & 1u)) up = false;
    if (up) cosieves.push_back(mask);
  }
  std::vector<std::string> names;
  for (unsigned mask : cosieves) {
    std::string s = "{";
    bool first = true;
    for (int a = 0; a < n; ++a)
      if (mask >> a & 1u) {
        if (!first) s += ",";
        s += p.name(a);
        first = false;
      }
    s += "}";
    names.push_back(s);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < cosieves.size(); ++i)
    for (std::size_t j = 0; j < cosieves.size(); ++j)
      if ((cosieves[i] & cosieves[j]) == cosieves[i]) pairs.emplace_back(names[i], names[j]);
  return fin_poset::validate(names, pairs);
}

fin_poset opposite(const fin_poset& p) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (p.leq(a, b)) pairs.emplace_back(p.name(b), p.name(a));
  return fin_poset::validate(p.elements(), pairs);
}

std::pair<fin_poset, std::vector<int>> sub_poset(const fin_poset& p, const std::vector<int>& elems) {
  std::vector<std::string> names;
  for (int i : elems) {
    if (i < 0 || i >= p.size()) throw validation_error("sub_poset: index out of range");
    names.push_back(p.name(i));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int a : elems)
    for (int b : elems)
      if (p.leq(a, b)) pairs.emplace_back(p.name(a), p.name(b));
  return {fin_poset::validate(names, pairs), elems};
}

fin_poset delta(int n) {
  if (n < 0) throw validation_error("delta: negative length");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i <= n; ++i) names.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) pairs.emplace_back(std::to_string(i), std::to_string(i + 1));
  return fin_poset::validate(names, pairs);
}

}  // namespace laxglue
