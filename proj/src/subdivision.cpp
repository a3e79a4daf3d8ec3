#include "laxglue/subdivision.hpp"

#include <algorithm>
#include <cstdlib>

namespace laxglue {

bool chain::contains(int e) const {
  return std::find(elems.begin(), elems.end(), e) != elems.end();
}

bool chain::subset_of(const chain& other) const {
  for (int e : elems)
    if (!other.contains(e)) return false;
  return true;
}

chain make_chain(const fin_poset& base, std::vector<int> elems) {
  if (elems.empty()) throw validation_error("chain: must be nonempty");
  for (int e : elems)
    if (e < 0 || e >= base.size()) throw validation_error("chain: index out of range");
  std::sort(elems.begin(), elems.end(), [&](int a, int b) { return base.lt(a, b); });
  for (std::size_t i = 0; i + 1 < elems.size(); ++i) {
    if (elems[i] == elems[i + 1])
      throw validation_error("chain: repeated element " + base.name(elems[i]));
    if (!base.lt(elems[i], elems[i + 1]))
      throw validation_error("chain: incomparable elements " + base.name(elems[i]) + " and " +
                             base.name(elems[i + 1]));
  }
  return chain{std::move(elems)};
}

std::string chain_display(const fin_poset& base, const chain& c) {
  std::string s;
  for (std::size_t i = 0; i < c.elems.size(); ++i) {
    if (i) s += "<";
    s += base.name(c.elems[i]);
  }
  return s;
}

chain parse_chain(const fin_poset& base, const std::string& text) {
  std::vector<int> elems;
  std::string cur;
  for (char ch : text) {
    if (ch == '<') {
      elems.push_back(base.index_of(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (cur.empty()) throw validation_error("chain: empty segment in '" + text + "'");
  elems.push_back(base.index_of(cur));
  return make_chain(base, std::move(elems));
}

std::size_t default_size_limit() {
  if (const char* v = std::getenv("LAXGLUE_SIZE_LIMIT")) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && parsed > 0) return static_cast<std::size_t>(parsed);
  }
  return 100000;
}

int sd_poset::chain_index(const chain& c) const {
  auto it = lookup_.find(c.elems);
  if (it == lookup_.end()) throw validation_error("chain not present in subdivision");
  return it->second;
}

bool sd_poset::has_chain(const chain& c) const { return lookup_.count(c.elems) != 0; }

sd_poset build_sd(const fin_poset& base, const std::vector<chain>& chains) {
  sd_poset sd;
  sd.base = base;
  sd.chains = chains;
  std::vector<std::string> names;
  for (const chain& c : chains) names.push_back(chain_display(base, c));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < chains.size(); ++i)
    for (std::size_t j = 0; j < chains.size(); ++j)
      if (chains[i].subset_of(chains[j])) pairs.emplace_back(names[i], names[j]);
  sd.order = fin_poset::validate(names, pairs);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    sd.max_label.push_back(chains[i].max());
    sd.lookup_[chains[i].elems] = static_cast<int>(i);
  }
  for (const auto& [a, b] : sd.order.covers()) {
    const chain& small = sd.chains[static_cast<std::size_t>(a)];
    const chain& big = sd.chains[static_cast<std::size_t>(b)];
    if (big.size() == small.size() + 1 && base.lt(small.max(), big.max()))
      sd.marked.insert({a, b});
  }
  return sd;
}

namespace {

void collect_chains(const fin_poset& p, std::vector<int>& cur, std::vector<chain>& out,
                    std::size_t size_limit) {
  if (!cur.empty()) {
    out.push_back(chain{cur});
    if (out.size() > size_limit)
      throw validation_error("size limit exceeded while enumerating chains");
  }
  int last = cur.empty() ? -1 : cur.back();
  for (int e = 0; e < p.size(); ++e) {
    if (last >= 0 && !p.lt(last, e)) continue;
    cur.push_back(e);
    collect_chains(p, cur, out, size_limit);
    cur.pop_back();
  }
}

}  // namespace

sd_poset subdivide(const fin_poset& p, std::size_t size_limit) {
  std::vector<chain> chains;
  std::vector<int> cur;
  collect_chains(p, cur, chains, size_limit);
  // Enumeration explores extensions above the running maximum only, so each
  // chain is produced exactly once.
  return build_sd(p, chains);
}

sd_poset sd_originating(const sd_poset& sd, const decomposition& dec) {
  if (!dec.base.equals(sd.base)) throw validation_error("sd_originating: base mismatch");
  std::vector<chain> kept;
  for (const chain& c : sd.chains)
    if (dec.sieve_has(c.min())) kept.push_back(c);
  return build_sd(sd.base, kept);
}

namespace {

chain_shape build_chain_shape(const fin_poset& base, const std::vector<chain>& chains) {
  chain_shape cs;
  cs.vertex = chains;
  std::vector<std::string> names;
  for (const chain& c : chains) names.push_back(chain_display(base, c));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < chains.size(); ++i)
    for (std::size_t j = 0; j < chains.size(); ++j)
      if (chains[i].subset_of(chains[j])) pairs.emplace_back(names[i], names[j]);
  cs.shape = fin_poset::validate(names, pairs);
  return cs;
}

}  // namespace

chain_shape lower_chain_shape(const fin_poset& base, const decomposition& dec, const chain& x) {
  if (!dec.base.equals(base)) throw validation_error("lower_chain_shape: base mismatch");
  for (int e : x.elems)
    if (dec.sieve_has(e))
      throw validation_error("lower_chain_shape: chain element " + base.name(e) +
                             " is not in the cosieve");
  std::vector<int> below;
  for (int e = 0; e < base.size(); ++e)
    if (dec.sieve_has(e) && base.lt(e, x.min())) below.push_back(e);
  // Nonempty chains inside `below`, each extended by x.
  std::vector<chain> chains;
  std::vector<int> cur;
  auto emit = [&](auto&& self, int last) -> void {
    if (!cur.empty()) {
      std::vector<int> full = cur;
      full.insert(full.end(), x.elems.begin(), x.elems.end());
      chains.push_back(make_chain(base, full));
    }
    for (int e : below) {
      if (last >= 0 && !base.lt(last, e)) continue;
      cur.push_back(e);
      self(self, e);
      cur.pop_back();
    }
  };
  emit(emit, -1);
  return build_chain_shape(base, chains);
}

chain_shape interval_cube(int n, int i, int k) {
  if (n < 0 || i < 0 || k < 1 || i + k > n)
    throw validation_error("interval_cube: indices out of range");
  fin_poset base = delta(n);
  std::vector<int> interior;
  for (int e = i + 1; e < i + k; ++e) interior.push_back(e);
  std::vector<chain> chains;
  const std::size_t m = interior.size();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> elems = {i};
    for (std::size_t b = 0; b < m; ++b)
      if (mask >> b & 1u) elems.push_back(interior[b]);
    elems.push_back(i + k);
    chains.push_back(make_chain(base, elems));
  }
  return build_chain_shape(base, chains);
}

sd_poset sd1(int n) {
  if (n < 0) throw validation_error("sd1: negative length");
  fin_poset base = delta(n);
  std::vector<chain> chains;
  for (int kk = 0; kk <= n; ++kk) chains.push_back(chain{{kk}});
  for (int kk = 0; kk + 1 <= n; ++kk) chains.push_back(chain{{kk, kk + 1}});
  return build_sd(base, chains);
}

std::vector<insertion> elementary_factorize(const chain& sigma, const chain& tau) {
  if (!sigma.subset_of(tau)) throw validation_error("elementary_factorize: not a subchain");
  if (sigma.max() != tau.max()) throw validation_error("elementary_factorize: maxima differ");
  std::vector<int> added;
  for (int e : tau.elems)
    if (!sigma.contains(e)) added.push_back(e);
  // tau.elems is sorted along the order, so `added` is smallest-first.
  std::vector<insertion> moves;
  std::vector<int> cur = sigma.elems;
  for (int a : added) {
    bool prepend = std::find(tau.elems.begin(), tau.elems.end(), a) - tau.elems.begin() <
                   std::find(tau.elems.begin(), tau.elems.end(), cur.front()) - tau.elems.begin();
    moves.push_back(insertion{a, prepend});
    std::size_t pos = 0;
    while (pos < cur.size() &&
           std::find(tau.elems.begin(), tau.elems.end(), cur[pos]) - tau.elems.begin() <
               std::find(tau.elems.begin(), tau.elems.end(), a) - tau.elems.begin())
      ++pos;
    cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), a);
  }
  return moves;
}

lr_factorization lr_factorize(const decomposition& dec, const chain& sigma, const chain& tau) {
  if (!sigma.subset_of(tau)) throw validation_error("lr_factorize: not a subchain");
  if (sigma.max() != tau.max()) throw validation_error("lr_factorize: maxima differ");
  std::vector<int> through = sigma.elems;
  for (int e : tau.elems)
    if (!sigma.contains(e) && dec.sieve_has(e)) through.push_back(e);
  return lr_factorization{make_chain(dec.base, through)};
}

}  // namespace laxglue
