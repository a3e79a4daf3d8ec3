#include "laxglue/finset.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace laxglue {

int fset::find(const std::string& n) const {
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (elems[i] == n) return static_cast<int>(i);
  return -1;
}

set_fn identity_fn(int n) {
  set_fn f;
  f.cod = n;
  f.to.resize(static_cast<std::size_t>(n));
  std::iota(f.to.begin(), f.to.end(), 0);
  return f;
}

set_fn compose_fn(const set_fn& g, const set_fn& f) {
  if (f.cod != static_cast<int>(g.to.size()))
    throw validation_error("set function composition: domain mismatch");
  set_fn h;
  h.cod = g.cod;
  h.to.reserve(f.to.size());
  for (int v : f.to) h.to.push_back(g.to[static_cast<std::size_t>(v)]);
  return h;
}

bool is_bijection(const set_fn& f) {
  if (static_cast<int>(f.to.size()) != f.cod) return false;
  std::vector<char> hit(f.to.size(), 0);
  for (int v : f.to) {
    if (v < 0 || v >= f.cod || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

const set_fn& copresheaf::at(int a, int b) const {
  auto it = maps.find({a, b});
  if (it == maps.end()) throw validation_error("copresheaf: no transition for requested pair");
  return it->second;
}

std::size_t copresheaf::total_size() const {
  std::size_t n = 0;
  for (const fset& s : sets) n += s.elems.size();
  return n;
}

std::optional<copresheaf> try_make_copresheaf(fin_poset shape, std::vector<fset> sets,
                                              const std::map<std::pair<int, int>, set_fn>& given) {
  if (static_cast<int>(sets.size()) != shape.size()) return std::nullopt;
  for (const fset& s : sets) {
    std::vector<std::string> sorted = s.elems;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  }
  for (const auto& [key, f] : given) {
    auto [a, b] = key;
    if (!shape.lt(a, b)) return std::nullopt;
    if (static_cast<int>(f.to.size()) != sets[static_cast<std::size_t>(a)].size() ||
        f.cod != sets[static_cast<std::size_t>(b)].size())
      return std::nullopt;
    for (int v : f.to)
      if (v < 0 || v >= f.cod) return std::nullopt;
  }
  std::vector<std::pair<int, std::pair<int, int>>> pairs;
  for (auto [a, b] : shape.strict_pairs()) {
    int between = 0;
    for (int q = 0; q < shape.size(); ++q)
      if (shape.lt(a, q) && shape.lt(q, b)) ++between;
    pairs.push_back({between, {a, b}});
  }
  std::sort(pairs.begin(), pairs.end());
  std::map<std::pair<int, int>, set_fn> closed;
  for (const auto& [between, key] : pairs) {
    auto [a, b] = key;
    auto it = given.find(key);
    bool have = it != given.end();
    set_fn value = have ? it->second : set_fn{};
    for (int q = 0; q < shape.size(); ++q) {
      if (!(shape.lt(a, q) && shape.lt(q, b))) continue;
      set_fn comp = compose_fn(closed.at({q, b}), closed.at({a, q}));
      if (!have) {
        value = comp;
        have = true;
      } else if (!(value == comp)) {
        return std::nullopt;
      }
    }
    if (!have) return std::nullopt;  // a cover without a given transition
    closed.insert({key, value});
  }
  copresheaf x;
  x.shape = std::move(shape);
  x.sets = std::move(sets);
  x.maps = std::move(closed);
  return x;
}

copresheaf make_copresheaf(fin_poset shape, std::vector<fset> sets,
                           const std::map<std::pair<int, int>, set_fn>& given) {
  auto x = try_make_copresheaf(std::move(shape), std::move(sets), given);
  if (!x) throw validation_error("copresheaf: invalid data (sizes, bounds, or functoriality)");
  return *x;
}

copresheaf terminal_copresheaf(const fin_poset& shape) {
  std::vector<fset> sets(static_cast<std::size_t>(shape.size()), fset{{"*"}});
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [a, b] : shape.strict_pairs()) maps[{a, b}] = identity_fn(1);
  return make_copresheaf(shape, std::move(sets), maps);
}

copresheaf initial_copresheaf(const fin_poset& shape) {
  std::vector<fset> sets(static_cast<std::size_t>(shape.size()), fset{});
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [a, b] : shape.strict_pairs()) maps[{a, b}] = set_fn{{}, 0};
  return make_copresheaf(shape, std::move(sets), maps);
}

bool copresheaf_equal(const copresheaf& a, const copresheaf& b) {
  if (!a.shape.equals(b.shape)) return false;
  for (int i = 0; i < a.shape.size(); ++i)
    if (!(a.sets[static_cast<std::size_t>(i)] == b.sets[static_cast<std::size_t>(i)])) return false;
  return a.maps == b.maps;
}

std::optional<nat_map> try_make_nat_map(copresheaf src, copresheaf dst, std::vector<set_fn> comp) {
  if (!src.shape.equals(dst.shape)) return std::nullopt;
  if (static_cast<int>(comp.size()) != src.shape.size()) return std::nullopt;
  for (int i = 0; i < src.shape.size(); ++i) {
    const set_fn& f = comp[static_cast<std::size_t>(i)];
    if (static_cast<int>(f.to.size()) != src.sets[static_cast<std::size_t>(i)].size() ||
        f.cod != dst.sets[static_cast<std::size_t>(i)].size())
      return std::nullopt;
    for (int v : f.to)
      if (v < 0 || v >= f.cod) return std::nullopt;
  }
  for (auto [a, b] : src.shape.strict_pairs()) {
    set_fn left = compose_fn(comp[static_cast<std::size_t>(b)], src.at(a, b));
    set_fn right = compose_fn(dst.at(a, b), comp[static_cast<std::size_t>(a)]);
    if (!(left == right)) return std::nullopt;
  }
  nat_map f;
  f.src = std::move(src);
  f.dst = std::move(dst);
  f.comp = std::move(comp);
  return f;
}

nat_map make_nat_map(copresheaf src, copresheaf dst, std::vector<set_fn> comp) {
  auto f = try_make_nat_map(std::move(src), std::move(dst), std::move(comp));
  if (!f) throw validation_error("natural map: shape or naturality failure");
  return *f;
}

nat_map nat_identity(const copresheaf& x) {
  std::vector<set_fn> comp;
  for (const fset& s : x.sets) comp.push_back(identity_fn(s.size()));
  return make_nat_map(x, x, std::move(comp));
}

nat_map nat_compose(const nat_map& g, const nat_map& f) {
  if (!copresheaf_equal(f.dst, g.src)) throw validation_error("natural map composition: mismatch");
  std::vector<set_fn> comp;
  for (std::size_t i = 0; i < f.comp.size(); ++i) comp.push_back(compose_fn(g.comp[i], f.comp[i]));
  return make_nat_map(f.src, g.dst, std::move(comp));
}

bool nat_equal(const nat_map& a, const nat_map& b) {
  return copresheaf_equal(a.src, b.src) && copresheaf_equal(a.dst, b.dst) && a.comp == b.comp;
}

bool nat_is_iso(const nat_map& f) {
  for (const set_fn& c : f.comp)
    if (!is_bijection(c)) return false;
  return true;
}

nat_map nat_inverse(const nat_map& f) {
  if (!nat_is_iso(f)) throw validation_error("natural map: not invertible");
  std::vector<set_fn> comp;
  for (const set_fn& c : f.comp) {
    set_fn inv;
    inv.cod = static_cast<int>(c.to.size());
    inv.to.resize(c.to.size());
    for (std::size_t i = 0; i < c.to.size(); ++i)
      inv.to[static_cast<std::size_t>(c.to[i])] = static_cast<int>(i);
    comp.push_back(inv);
  }
  return make_nat_map(f.dst, f.src, std::move(comp));
}

namespace {

// Backtracking enumeration of natural maps; candidates per point are produced
// in mixed-radix order (bijections only when iso is set), so the output order
// is deterministic.
// Returns true when the search should stop because max_results was reached.
bool hom_search(const copresheaf& a, const copresheaf& b, const std::vector<int>& order,
                std::size_t depth, std::vector<set_fn>& partial, std::vector<nat_map>& out,
                std::uint64_t cap, bool iso, bool count_only, std::uint64_t& count,
                std::uint64_t max_results) {
  if (depth == order.size()) {
    ++count;
    if (!count_only) {
      std::vector<set_fn> comp(static_cast<std::size_t>(a.shape.size()));
      for (std::size_t i = 0; i < order.size(); ++i)
        comp[static_cast<std::size_t>(order[i])] = partial[i];
      out.push_back(make_nat_map(a, b, std::move(comp)));
      if (max_results > 0 && out.size() >= max_results) return true;
    }
    if (count > cap) throw validation_error("hom enumeration exceeded cap");
    return false;
  }
  int v = order[depth];
  int dom = a.sets[static_cast<std::size_t>(v)].size();
  int cod = b.sets[static_cast<std::size_t>(v)].size();
  auto try_candidate = [&](const set_fn& cand) {
    for (std::size_t i = 0; i < depth; ++i) {
      int u = order[i];
      if (!a.shape.lt(u, v)) continue;
      set_fn left = compose_fn(cand, a.at(u, v));
      set_fn right = compose_fn(b.at(u, v), partial[i]);
      if (!(left == right)) return false;
    }
    partial.push_back(cand);
    bool stop = hom_search(a, b, order, depth + 1, partial, out, cap, iso, count_only, count,
                           max_results);
    partial.pop_back();
    return stop;
  };
  if (iso) {
    if (dom != cod) return false;
    std::vector<int> perm(static_cast<std::size_t>(dom));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (try_candidate(set_fn{perm, cod})) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    if (dom > 0 && cod == 0) return false;
    std::vector<int> digits(static_cast<std::size_t>(dom), 0);
    while (true) {
      if (try_candidate(set_fn{digits, cod})) return true;
      int pos = dom - 1;
      while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == cod - 1) {
        digits[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++digits[static_cast<std::size_t>(pos)];
    }
  }
  return false;
}

}  // namespace

std::vector<nat_map> copresheaf_hom(const copresheaf& a, const copresheaf& b, std::uint64_t cap) {
  if (!a.shape.equals(b.shape)) throw validation_error("hom: shape mismatch");
  std::vector<int> order = a.shape.linear_extension();
  std::vector<set_fn> partial;
  std::vector<nat_map> out;
  std::uint64_t count = 0;
  hom_search(a, b, order, 0, partial, out, cap, false, false, count, 0);
  return out;
}

std::uint64_t copresheaf_hom_size(const copresheaf& a, const copresheaf& b, std::uint64_t cap) {
  if (!a.shape.equals(b.shape)) throw validation_error("hom: shape mismatch");
  std::vector<int> order = a.shape.linear_extension();
  std::vector<set_fn> partial;
  std::vector<nat_map> out;
  std::uint64_t count = 0;
  hom_search(a, b, order, 0, partial, out, cap, false, true, count, 0);
  return count;
}

std::optional<nat_map> copresheaf_iso(const copresheaf& a, const copresheaf& b) {
  if (!a.shape.equals(b.shape)) return std::nullopt;
  std::vector<int> order = a.shape.linear_extension();
  std::vector<set_fn> partial;
  std::vector<nat_map> out;
  std::uint64_t count = 0;
  hom_search(a, b, order, 0, partial, out, std::numeric_limits<std::uint64_t>::max(), true,
             false, count, 1);
  if (out.empty()) return std::nullopt;
  return out.front();
}

std::vector<copresheaf> enumerate_copresheaves(const fin_poset& shape, int max_size,
                                               std::uint64_t cap) {
  std::vector<copresheaf> out;
  const int n = shape.size();
  std::vector<int> sizes(static_cast<std::size_t>(n), 0);
  std::uint64_t work = 0;
  while (true) {
    std::vector<fset> sets;
    for (int v = 0; v < n; ++v) {
      fset s;
      for (int e = 0; e < sizes[static_cast<std::size_t>(v)]; ++e)
        s.elems.push_back("e" + std::to_string(e));
      sets.push_back(s);
    }
    const auto& covers = shape.covers();
    bool possible = true;
    for (auto [a, b] : covers)
      if (sizes[static_cast<std::size_t>(a)] > 0 && sizes[static_cast<std::size_t>(b)] == 0)
        possible = false;
    if (possible) {
      // Odometer over all transition choices on covers.
      std::vector<std::vector<int>> digits;
      for (auto [a, b] : covers)
        digits.push_back(std::vector<int>(static_cast<std::size_t>(sizes[static_cast<std::size_t>(a)]), 0));
      bool more = true;
      while (more) {
        if (++work > cap) throw validation_error("copresheaf enumeration exceeded cap");
        std::map<std::pair<int, int>, set_fn> given;
        for (std::size_t ci = 0; ci < covers.size(); ++ci)
          given[covers[ci]] = set_fn{digits[ci], sizes[static_cast<std::size_t>(covers[ci].second)]};
        if (auto x = try_make_copresheaf(shape, sets, given)) out.push_back(*x);
        // advance
        more = false;
        for (std::size_t ci = 0; ci < covers.size() && !more; ++ci) {
          int cod = sizes[static_cast<std::size_t>(covers[ci].second)];
          for (std::size_t d = 0; d < digits[ci].size(); ++d) {
            if (digits[ci][d] + 1 < cod) {
              ++digits[ci][d];
              for (std::size_t dd = 0; dd < d; ++dd) digits[ci][dd] = 0;
              for (std::size_t cj = 0; cj < ci; ++cj)
                std::fill(digits[cj].begin(), digits[cj].end(), 0);
              more = true;
              break;
            }
          }
        }
        if (covers.empty()) break;
      }
    }
    // advance the size profile
    int pos = n - 1;
    while (pos >= 0 && sizes[static_cast<std::size_t>(pos)] == max_size) {
      sizes[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++sizes[static_cast<std::size_t>(pos)];
  }
  return out;
}

copresheaf random_copresheaf(const fin_poset& shape, int max_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size_dist(0, max_size);
  for (int attempt = 0; attempt < 500; ++attempt) {
    std::vector<int> sizes;
    for (int v = 0; v < shape.size(); ++v) sizes.push_back(size_dist(rng));
    bool possible = true;
    for (auto [a, b] : shape.covers())
      if (sizes[static_cast<std::size_t>(a)] > 0 && sizes[static_cast<std::size_t>(b)] == 0)
        possible = false;
    if (!possible) continue;
    std::vector<fset> sets;
    for (int v = 0; v < shape.size(); ++v) {
      fset s;
      for (int e = 0; e < sizes[static_cast<std::size_t>(v)]; ++e)
        s.elems.push_back("e" + std::to_string(e));
      sets.push_back(s);
    }
    std::map<std::pair<int, int>, set_fn> given;
    for (auto [a, b] : shape.covers()) {
      set_fn f;
      f.cod = sizes[static_cast<std::size_t>(b)];
      for (int e = 0; e < sizes[static_cast<std::size_t>(a)]; ++e)
        f.to.push_back(std::uniform_int_distribution<int>(0, f.cod - 1)(rng));
      given[{a, b}] = f;
    }
    if (auto x = try_make_copresheaf(shape, sets, given)) return *x;
  }
  return terminal_copresheaf(shape);
}

set_limit_data set_limit(const fin_poset& shape, const std::vector<fset>& sets,
                         const std::map<std::pair<int, int>, set_fn>& edges) {
  set_limit_data data;
  const int n = shape.size();
  if (n == 0) {
    data.apex.elems.push_back("()");
    data.families.push_back({});
    return data;
  }
  for (auto [a, b] : shape.strict_pairs()) {
    auto it = edges.find({a, b});
    if (it == edges.end()) throw validation_error("limit: missing edge");
    if (it->second.to.size() != static_cast<std::size_t>(sets[static_cast<std::size_t>(a)].size()) ||
        it->second.cod != sets[static_cast<std::size_t>(b)].size())
      throw validation_error("limit: edge endpoints do not match the vertex sets");
  }
  std::vector<int> mins = shape.minimal_elements();
  std::vector<int> lin = shape.linear_extension();
  std::vector<int> val(static_cast<std::size_t>(n), -1);
  std::vector<int> assignment(mins.size(), 0);
  bool any_empty = false;
  for (int m : mins)
    if (sets[static_cast<std::size_t>(m)].size() == 0) any_empty = true;
  bool more = !any_empty;
  while (more) {
    for (std::size_t i = 0; i < mins.size(); ++i)
      val[static_cast<std::size_t>(mins[i])] = assignment[i];
    for (int v : lin) {
      bool minimal = std::find(mins.begin(), mins.end(), v) != mins.end();
      if (minimal) continue;
      int pred = -1;
      for (int u = 0; u < n; ++u)
        if (shape.lt(u, v)) {
          pred = u;
          break;
        }
      const set_fn& f = edges.at({pred, v});
      val[static_cast<std::size_t>(v)] = f.to[static_cast<std::size_t>(val[static_cast<std::size_t>(pred)])];
    }
    bool ok = true;
    for (auto [a, b] : shape.strict_pairs()) {
      const set_fn& f = edges.at({a, b});
      if (f.to[static_cast<std::size_t>(val[static_cast<std::size_t>(a)])] !=
          val[static_cast<std::size_t>(b)]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::string name = "(";
      for (int v = 0; v < n; ++v) {
        if (v) name += ",";
        name += sets[static_cast<std::size_t>(v)].elems[static_cast<std::size_t>(val[static_cast<std::size_t>(v)])];
      }
      name += ")";
      data.apex.elems.push_back(name);
      data.families.push_back(val);
    }
    // advance the assignment to minimal vertices
    more = false;
    for (std::size_t i = 0; i < mins.size(); ++i) {
      if (assignment[i] + 1 < sets[static_cast<std::size_t>(mins[i])].size()) {
        ++assignment[i];
        for (std::size_t j = 0; j < i; ++j) assignment[j] = 0;
        more = true;
        break;
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    set_fn c;
    c.cod = sets[static_cast<std::size_t>(v)].size();
    for (const auto& fam : data.families) c.to.push_back(fam[static_cast<std::size_t>(v)]);
    data.cone.push_back(c);
  }
  return data;
}

bool finset_backend::is_terminal_like(const cat& c, const obj& x) {
  if (!x.shape.equals(c.shape)) return false;
  for (const fset& s : x.sets)
    if (s.size() != 1) return false;
  return true;
}

bool finset_backend::is_initial_like(const cat& c, const obj& x) {
  if (!x.shape.equals(c.shape)) return false;
  for (const fset& s : x.sets)
    if (s.size() != 0) return false;
  return true;
}

finset_backend::mor finset_backend::unique_to(const obj& src, const obj& terminal_like) {
  std::vector<set_fn> comp;
  for (int i = 0; i < src.shape.size(); ++i) {
    if (terminal_like.sets[static_cast<std::size_t>(i)].size() != 1)
      throw validation_error("unique_to: target is not pointwise singleton");
    comp.push_back(set_fn{std::vector<int>(static_cast<std::size_t>(src.sets[static_cast<std::size_t>(i)].size()), 0), 1});
  }
  return make_nat_map(src, terminal_like, std::move(comp));
}

finset_backend::mor finset_backend::unique_from(const obj& initial_like, const obj& dst) {
  std::vector<set_fn> comp;
  for (int i = 0; i < dst.shape.size(); ++i) {
    if (initial_like.sets[static_cast<std::size_t>(i)].size() != 0)
      throw validation_error("unique_from: source is not pointwise empty");
    comp.push_back(set_fn{{}, dst.sets[static_cast<std::size_t>(i)].size()});
  }
  return make_nat_map(initial_like, dst, std::move(comp));
}

finset_backend::limit_data finset_backend::limit(const cat& c,
                                                 const shaped_diagram<finset_backend>& d) {
  for (const obj& x : d.at)
    if (!x.shape.equals(c.shape)) throw validation_error("limit: fiber shape mismatch");
  auto closed = close_edges(d);
  const int nv = d.shape.size();
  const int np = c.shape.size();
  std::vector<set_limit_data> per_point;
  for (int w = 0; w < np; ++w) {
    std::vector<fset> sets;
    for (int v = 0; v < nv; ++v) sets.push_back(d.at[static_cast<std::size_t>(v)].sets[static_cast<std::size_t>(w)]);
    std::map<std::pair<int, int>, set_fn> edges;
    for (const auto& [key, m] : closed) edges[key] = m.comp[static_cast<std::size_t>(w)];
    per_point.push_back(set_limit(d.shape, sets, edges));
  }
  std::vector<fset> apex_sets;
  for (int w = 0; w < np; ++w) apex_sets.push_back(per_point[static_cast<std::size_t>(w)].apex);
  std::map<std::pair<int, int>, set_fn> apex_maps;
  for (auto [w, w2] : c.shape.strict_pairs()) {
    const auto& src_fams = per_point[static_cast<std::size_t>(w)].families;
    const auto& dst_fams = per_point[static_cast<std::size_t>(w2)].families;
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < dst_fams.size(); ++i) lookup[dst_fams[i]] = static_cast<int>(i);
    set_fn f;
    f.cod = static_cast<int>(dst_fams.size());
    for (const auto& fam : src_fams) {
      std::vector<int> mapped(static_cast<std::size_t>(nv));
      for (int v = 0; v < nv; ++v)
        mapped[static_cast<std::size_t>(v)] =
            d.at[static_cast<std::size_t>(v)].at(w, w2).to[static_cast<std::size_t>(fam[static_cast<std::size_t>(v)])];
      auto it = lookup.find(mapped);
      if (it == lookup.end())
        throw validation_error("limit: transition left the family space (naturality broken)");
      f.to.push_back(it->second);
    }
    apex_maps[{w, w2}] = f;
  }
  limit_data out;
  out.apex = make_copresheaf(c.shape, apex_sets, apex_maps);
  for (int v = 0; v < nv; ++v) {
    std::vector<set_fn> comp;
    for (int w = 0; w < np; ++w) comp.push_back(per_point[static_cast<std::size_t>(w)].cone[static_cast<std::size_t>(v)]);
    out.cone.push_back(make_nat_map(out.apex, d.at[static_cast<std::size_t>(v)], std::move(comp)));
  }
  return out;
}

std::optional<finset_backend::mor> finset_backend::mediate(const shaped_diagram<finset_backend>& d,
                                                           const limit_data& lim, const obj& a,
                                                           const std::vector<mor>& cone) {
  const int nv = d.shape.size();
  if (static_cast<int>(cone.size()) != nv) return std::nullopt;
  const int np = a.shape.size();
  std::vector<set_fn> comp;
  for (int w = 0; w < np; ++w) {
    // Recover the family table at w from the limit's own cone.
    std::map<std::vector<int>, int> lookup;
    int apex_size = lim.apex.sets[static_cast<std::size_t>(w)].size();
    for (int t = 0; t < apex_size; ++t) {
      std::vector<int> fam(static_cast<std::size_t>(nv));
      for (int v = 0; v < nv; ++v)
        fam[static_cast<std::size_t>(v)] =
            lim.cone[static_cast<std::size_t>(v)].comp[static_cast<std::size_t>(w)].to[static_cast<std::size_t>(t)];
      lookup[fam] = t;
    }
    set_fn f;
    f.cod = apex_size;
    for (int e = 0; e < a.sets[static_cast<std::size_t>(w)].size(); ++e) {
      std::vector<int> fam(static_cast<std::size_t>(nv));
      for (int v = 0; v < nv; ++v)
        fam[static_cast<std::size_t>(v)] =
            cone[static_cast<std::size_t>(v)].comp[static_cast<std::size_t>(w)].to[static_cast<std::size_t>(e)];
      auto it = lookup.find(fam);
      if (it == lookup.end()) return std::nullopt;
      f.to.push_back(it->second);
    }
    comp.push_back(f);
  }
  return try_make_nat_map(a, lim.apex, std::move(comp));
}

std::string finset_backend::describe(const obj& x) {
  std::string s = "[";
  for (int i = 0; i < x.shape.size(); ++i) {
    if (i) s += ",";
    s += x.shape.name(i) + ":" + std::to_string(x.sets[static_cast<std::size_t>(i)].size());
  }
  return s + "]";
}

copresheaf apply_stage(const stage_restrict& s, const copresheaf& x) {
  if (!x.shape.equals(s.f.target)) throw validation_error("restrict: shape mismatch");
  const fin_poset& src = s.f.source;
  std::vector<fset> sets;
  for (int i = 0; i < src.size(); ++i) sets.push_back(x.sets[static_cast<std::size_t>(s.f(i))]);
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [i, j] : src.strict_pairs()) {
    int fi = s.f(i), fj = s.f(j);
    maps[{i, j}] = fi == fj ? identity_fn(x.sets[static_cast<std::size_t>(fi)].size()) : x.at(fi, fj);
  }
  return make_copresheaf(src, std::move(sets), maps);
}

nat_map apply_stage(const stage_restrict& s, const nat_map& f) {
  copresheaf src = apply_stage(s, f.src);
  copresheaf dst = apply_stage(s, f.dst);
  std::vector<set_fn> comp;
  for (int i = 0; i < s.f.source.size(); ++i) comp.push_back(f.comp[static_cast<std::size_t>(s.f(i))]);
  return make_nat_map(std::move(src), std::move(dst), std::move(comp));
}

rke_point_data rke_at_point(const stage_rke& s, const copresheaf& x, int k) {
  rke_point_data out;
  for (int v = 0; v < s.sub.size(); ++v)
    if (s.big.leq(k, s.embed[static_cast<std::size_t>(v)])) out.verts.push_back(v);
  out.shape = sub_poset(s.sub, out.verts).first;
  std::vector<fset> sets;
  for (int v : out.verts) sets.push_back(x.sets[static_cast<std::size_t>(v)]);
  std::map<std::pair<int, int>, set_fn> edges;
  for (std::size_t a = 0; a < out.verts.size(); ++a)
    for (std::size_t b = 0; b < out.verts.size(); ++b)
      if (out.shape.lt(static_cast<int>(a), static_cast<int>(b)))
        edges[{static_cast<int>(a), static_cast<int>(b)}] = x.at(out.verts[a], out.verts[b]);
  out.lim = set_limit(out.shape, sets, edges);
  return out;
}

copresheaf apply_stage(const stage_rke& s, const copresheaf& x) {
  if (!x.shape.equals(s.sub)) throw validation_error("rke: shape mismatch");
  std::vector<rke_point_data> points;
  for (int k = 0; k < s.big.size(); ++k) points.push_back(rke_at_point(s, x, k));
  std::vector<fset> sets;
  for (auto& pt : points) sets.push_back(pt.lim.apex);
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [k, l] : s.big.strict_pairs()) {
    const rke_point_data& pk = points[static_cast<std::size_t>(k)];
    const rke_point_data& pl = points[static_cast<std::size_t>(l)];
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < pl.lim.families.size(); ++i)
      lookup[pl.lim.families[i]] = static_cast<int>(i);
    set_fn f;
    f.cod = static_cast<int>(pl.lim.families.size());
    for (const auto& fam : pk.lim.families) {
      std::vector<int> proj;
      for (int v : pl.verts) {
        auto pos = std::find(pk.verts.begin(), pk.verts.end(), v) - pk.verts.begin();
        proj.push_back(fam[static_cast<std::size_t>(pos)]);
      }
      auto it = lookup.find(proj);
      if (it == lookup.end()) throw validation_error("rke: family projection failed");
      f.to.push_back(it->second);
    }
    maps[{k, l}] = f;
  }
  return make_copresheaf(s.big, std::move(sets), maps);
}

nat_map apply_stage(const stage_rke& s, const nat_map& f) {
  copresheaf src = apply_stage(s, f.src);
  copresheaf dst = apply_stage(s, f.dst);
  std::vector<set_fn> comp;
  for (int k = 0; k < s.big.size(); ++k) {
    rke_point_data ps = rke_at_point(s, f.src, k);
    rke_point_data pd = rke_at_point(s, f.dst, k);
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < pd.lim.families.size(); ++i)
      lookup[pd.lim.families[i]] = static_cast<int>(i);
    set_fn c;
    c.cod = static_cast<int>(pd.lim.families.size());
    for (const auto& fam : ps.lim.families) {
      std::vector<int> mapped(fam.size());
      for (std::size_t v = 0; v < fam.size(); ++v)
        mapped[v] = f.comp[static_cast<std::size_t>(ps.verts[v])].to[static_cast<std::size_t>(fam[v])];
      auto it = lookup.find(mapped);
      if (it == lookup.end()) throw validation_error("rke on a map: family escaped");
      c.to.push_back(it->second);
    }
    comp.push_back(c);
  }
  return make_nat_map(std::move(src), std::move(dst), std::move(comp));
}

namespace {

struct rkan_point {
  std::vector<int> verts;  // source indices mapping above the target point
  fin_poset shape;
  set_limit_data lim;
};

rkan_point rkan_at_point(const monotone_map& g, const copresheaf& x, int k) {
  rkan_point out;
  for (int v = 0; v < g.source.size(); ++v)
    if (g.target.leq(k, g(v))) out.verts.push_back(v);
  out.shape = sub_poset(g.source, out.verts).first;
  std::vector<fset> sets;
  for (int v : out.verts) sets.push_back(x.sets[static_cast<std::size_t>(v)]);
  std::map<std::pair<int, int>, set_fn> edges;
  for (std::size_t a = 0; a < out.verts.size(); ++a)
    for (std::size_t b = 0; b < out.verts.size(); ++b)
      if (out.shape.lt(static_cast<int>(a), static_cast<int>(b)))
        edges[{static_cast<int>(a), static_cast<int>(b)}] = x.at(out.verts[a], out.verts[b]);
  out.lim = set_limit(out.shape, sets, edges);
  return out;
}

}  // namespace

copresheaf right_kan(const monotone_map& g, const copresheaf& x) {
  if (!x.shape.equals(g.source)) throw validation_error("right_kan: shape mismatch");
  std::vector<rkan_point> points;
  for (int k = 0; k < g.target.size(); ++k) points.push_back(rkan_at_point(g, x, k));
  std::vector<fset> sets;
  for (auto& pt : points) sets.push_back(pt.lim.apex);
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [k, l] : g.target.strict_pairs()) {
    const rkan_point& pk = points[static_cast<std::size_t>(k)];
    const rkan_point& pl = points[static_cast<std::size_t>(l)];
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < pl.lim.families.size(); ++i)
      lookup[pl.lim.families[i]] = static_cast<int>(i);
    set_fn f;
    f.cod = static_cast<int>(pl.lim.families.size());
    for (const auto& fam : pk.lim.families) {
      std::vector<int> proj;
      for (int v : pl.verts) {
        auto pos = std::find(pk.verts.begin(), pk.verts.end(), v) - pk.verts.begin();
        proj.push_back(fam[static_cast<std::size_t>(pos)]);
      }
      auto it = lookup.find(proj);
      if (it == lookup.end()) throw validation_error("right_kan: family projection failed");
      f.to.push_back(it->second);
    }
    maps[{k, l}] = f;
  }
  return make_copresheaf(g.target, std::move(sets), maps);
}

nat_map right_kan(const monotone_map& g, const nat_map& f) {
  copresheaf src = right_kan(g, f.src);
  copresheaf dst = right_kan(g, f.dst);
  std::vector<set_fn> comp;
  for (int k = 0; k < g.target.size(); ++k) {
    rkan_point ps = rkan_at_point(g, f.src, k);
    rkan_point pd = rkan_at_point(g, f.dst, k);
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < pd.lim.families.size(); ++i)
      lookup[pd.lim.families[i]] = static_cast<int>(i);
    set_fn c;
    c.cod = static_cast<int>(pd.lim.families.size());
    for (const auto& fam : ps.lim.families) {
      std::vector<int> mapped(fam.size());
      for (std::size_t v = 0; v < fam.size(); ++v)
        mapped[v] = f.comp[static_cast<std::size_t>(ps.verts[v])].to[static_cast<std::size_t>(fam[v])];
      auto it = lookup.find(mapped);
      if (it == lookup.end()) throw validation_error("right_kan on a map: family escaped");
      c.to.push_back(it->second);
    }
    comp.push_back(c);
  }
  return make_nat_map(std::move(src), std::move(dst), std::move(comp));
}

namespace {

void check_embed(const fin_poset& sub, const fin_poset& big, const std::vector<int>& embed) {
  if (static_cast<int>(embed.size()) != sub.size())
    throw validation_error("subposet embedding: size mismatch");
  for (int v : embed)
    if (v < 0 || v >= big.size()) throw validation_error("subposet embedding: index out of range");
  for (int a = 0; a < sub.size(); ++a)
    for (int b = 0; b < sub.size(); ++b)
      if (sub.leq(a, b) != big.leq(embed[static_cast<std::size_t>(a)], embed[static_cast<std::size_t>(b)]))
        throw validation_error("subposet embedding: not full");
}

}  // namespace

copresheaf apply_stage(const stage_extend_singleton& s, const copresheaf& x) {
  if (!x.shape.equals(s.sub)) throw validation_error("extend by singleton: shape mismatch");
  check_embed(s.sub, s.big, s.embed);
  std::vector<int> pos(static_cast<std::size_t>(s.big.size()), -1);
  for (int v = 0; v < s.sub.size(); ++v) pos[static_cast<std::size_t>(s.embed[static_cast<std::size_t>(v)])] = v;
  for (int w = 0; w < s.big.size(); ++w) {
    if (pos[static_cast<std::size_t>(w)] >= 0) continue;
    for (int v = 0; v < s.sub.size(); ++v)
      if (s.big.lt(w, s.embed[static_cast<std::size_t>(v)]))
        throw validation_error("extend by singleton: subposet is not down-closed in the ambient poset");
  }
  std::vector<fset> sets;
  for (int w = 0; w < s.big.size(); ++w)
    sets.push_back(pos[static_cast<std::size_t>(w)] >= 0 ? x.sets[static_cast<std::size_t>(pos[static_cast<std::size_t>(w)])]
                                                         : fset{{"*"}});
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [w, w2] : s.big.strict_pairs()) {
    int a = pos[static_cast<std::size_t>(w)], b = pos[static_cast<std::size_t>(w2)];
    if (a >= 0 && b >= 0) maps[{w, w2}] = x.at(a, b);
    else if (a >= 0)
      maps[{w, w2}] = set_fn{std::vector<int>(static_cast<std::size_t>(x.sets[static_cast<std::size_t>(a)].size()), 0), 1};
    else if (b >= 0)
      throw validation_error("extend by singleton: ambient order points into the subposet");
    else maps[{w, w2}] = identity_fn(1);
  }
  return make_copresheaf(s.big, std::move(sets), maps);
}

nat_map apply_stage(const stage_extend_singleton& s, const nat_map& f) {
  copresheaf src = apply_stage(s, f.src);
  copresheaf dst = apply_stage(s, f.dst);
  std::vector<int> pos(static_cast<std::size_t>(s.big.size()), -1);
  for (int v = 0; v < s.sub.size(); ++v) pos[static_cast<std::size_t>(s.embed[static_cast<std::size_t>(v)])] = v;
  std::vector<set_fn> comp;
  for (int w = 0; w < s.big.size(); ++w)
    comp.push_back(pos[static_cast<std::size_t>(w)] >= 0 ? f.comp[static_cast<std::size_t>(pos[static_cast<std::size_t>(w)])]
                                                         : identity_fn(1));
  return make_nat_map(std::move(src), std::move(dst), std::move(comp));
}

copresheaf apply_stage(const stage_extend_empty& s, const copresheaf& x) {
  if (!x.shape.equals(s.sub)) throw validation_error("extend by empty: shape mismatch");
  check_embed(s.sub, s.big, s.embed);
  std::vector<int> pos(static_cast<std::size_t>(s.big.size()), -1);
  for (int v = 0; v < s.sub.size(); ++v) pos[static_cast<std::size_t>(s.embed[static_cast<std::size_t>(v)])] = v;
  for (int w = 0; w < s.big.size(); ++w) {
    if (pos[static_cast<std::size_t>(w)] >= 0) continue;
    for (int v = 0; v < s.sub.size(); ++v)
      if (s.big.lt(s.embed[static_cast<std::size_t>(v)], w))
        throw validation_error("extend by empty: subposet is not up-closed in the ambient poset");
  }
  std::vector<fset> sets;
  for (int w = 0; w < s.big.size(); ++w)
    sets.push_back(pos[static_cast<std::size_t>(w)] >= 0 ? x.sets[static_cast<std::size_t>(pos[static_cast<std::size_t>(w)])]
                                                         : fset{});
  std::map<std::pair<int, int>, set_fn> maps;
  for (auto [w, w2] : s.big.strict_pairs()) {
    int a = pos[static_cast<std::size_t>(w)], b = pos[static_cast<std::size_t>(w2)];
    if (a >= 0 && b >= 0) maps[{w, w2}] = x.at(a, b);
    else if (a >= 0)
      throw validation_error("extend by empty: ambient order leaves the subposet");
    else
      maps[{w, w2}] = set_fn{{}, b >= 0 ? x.sets[static_cast<std::size_t>(b)].size() : 0};
  }
  return make_copresheaf(s.big, std::move(sets), maps);
}

nat_map apply_stage(const stage_extend_empty& s, const nat_map& f) {
  copresheaf src = apply_stage(s, f.src);
  copresheaf dst = apply_stage(s, f.dst);
  std::vector<int> pos(static_cast<std::size_t>(s.big.size()), -1);
  for (int v = 0; v < s.sub.size(); ++v) pos[static_cast<std::size_t>(s.embed[static_cast<std::size_t>(v)])] = v;
  std::vector<set_fn> comp;
  for (int w = 0; w < s.big.size(); ++w)
    comp.push_back(pos[static_cast<std::size_t>(w)] >= 0 ? f.comp[static_cast<std::size_t>(pos[static_cast<std::size_t>(w)])]
                                                         : set_fn{{}, 0});
  return make_nat_map(std::move(src), std::move(dst), std::move(comp));
}

}  // namespace laxglue
