#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "laxglue/diagram.hpp"
#include "laxglue/subdivision.hpp"

namespace laxglue {

// A section of the right-lax limit: an object per base element and, for every
// strict pair p < q, a morphism x_q -> tau^q_p(x_p) satisfying the cocycle
// condition against the comparison cells.
template <class B>
struct section {
  std::vector<typename B::obj> x;
  std::map<std::pair<int, int>, typename B::mor> phi;

  const typename B::mor& phi_at(int p, int q) const {
    auto it = phi.find({p, q});
    if (it == phi.end()) throw validation_error("section: missing component");
    return it->second;
  }
};

// A section carried on a subset of the base (a sieve or cosieve part);
// entries off the part are placeholders.
template <class B>
struct part_section {
  std::vector<char> on;
  std::vector<typename B::obj> x;
  std::map<std::pair<int, int>, typename B::mor> phi;

  bool has(int i) const { return on[static_cast<std::size_t>(i)] != 0; }
};

template <class B>
part_section<B> to_part(const lax_diagram<B>& d, const section<B>& s) {
  part_section<B> ps;
  ps.on.assign(static_cast<std::size_t>(d.base.size()), 1);
  ps.x = s.x;
  ps.phi = s.phi;
  return ps;
}

template <class B>
part_section<B> open_restrict(const lax_diagram<B>& /*d*/, const decomposition& dec,
                              const section<B>& s) {
  part_section<B> ps;
  ps.on = dec.in_sieve;
  ps.x = s.x;
  for (const auto& [key, m] : s.phi)
    if (dec.sieve_has(key.first) && dec.sieve_has(key.second)) ps.phi.insert({key, m});
  return ps;
}

template <class B>
part_section<B> closed_restrict(const lax_diagram<B>& d, const decomposition& dec,
                                const section<B>& s) {
  part_section<B> ps;
  ps.on.assign(static_cast<std::size_t>(d.base.size()), 0);
  for (int i = 0; i < d.base.size(); ++i)
    if (!dec.sieve_has(i)) ps.on[static_cast<std::size_t>(i)] = 1;
  ps.x = s.x;
  for (const auto& [key, m] : s.phi)
    if (!dec.sieve_has(key.first) && !dec.sieve_has(key.second)) ps.phi.insert({key, m});
  return ps;
}

// Iterated application of the transition functors along a chain, starting
// from the section object at the chain's minimum.
template <class B>
typename B::obj eval_chain(const lax_diagram<B>& d, const part_section<B>& ps, const chain& c) {
  if (!ps.has(c.min())) throw validation_error("eval_chain: chain starts off the carried part");
  typename B::obj o = ps.x[static_cast<std::size_t>(c.min())];
  for (std::size_t i = 0; i + 1 < c.elems.size(); ++i)
    o = apply_obj(d.tau_at(c.elems[i], c.elems[i + 1]), o);
  return o;
}

// Applies the remaining transition functors of a chain to a morphism sitting
// at position `from`.
template <class B>
typename B::mor whisker_along(const lax_diagram<B>& d, const std::vector<int>& c, std::size_t from,
                              typename B::mor m) {
  for (std::size_t i = from; i + 1 < c.size(); ++i)
    m = apply_mor(d.tau_at(c[i], c[i + 1]), m);
  return m;
}

// The structural morphism F(sigma) -> F(tau) of a max-preserving inclusion,
// built by inserting the elements of `order` one at a time: a new minimum
// whiskers the corresponding section component, an interior element whiskers
// the comparison cell at the evaluated prefix.
template <class B>
typename B::mor eval_inclusion_order(const lax_diagram<B>& d, const part_section<B>& ps,
                                     const chain& sigma, const chain& tau,
                                     const std::vector<int>& order) {
  if (!sigma.subset_of(tau)) throw validation_error("eval_inclusion: not a subchain");
  if (sigma.max() != tau.max()) throw validation_error("eval_inclusion: maxima differ");
  {
    std::vector<int> expect;
    for (int e : tau.elems)
      if (!sigma.contains(e)) expect.push_back(e);
    std::vector<int> got = order;
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    if (got != expect) throw validation_error("eval_inclusion: order is not a permutation");
  }
  std::vector<int> cur = sigma.elems;
  typename B::mor m = B::identity(eval_chain(d, ps, sigma));
  for (int a : order) {
    typename B::mor step = m;  // placeholder, reassigned below
    if (d.base.lt(a, cur.front())) {
      auto it = ps.phi.find({a, cur.front()});
      if (it == ps.phi.end())
        throw validation_error("eval_inclusion: missing section component for prepend");
      step = whisker_along(d, cur, 0, it->second);
      cur.insert(cur.begin(), a);
    } else {
      std::size_t pos = 0;
      while (pos < cur.size() && d.base.lt(cur[pos], a)) ++pos;
      if (pos == 0 || pos == cur.size())
        throw validation_error("eval_inclusion: element is not interior");
      chain prefix{std::vector<int>(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos))};
      typename B::obj y = eval_chain(d, ps, prefix);
      typename B::mor cell = d.can_at(cur[pos - 1], a, cur[pos]).at(y);
      step = whisker_along(d, cur, pos, cell);
      cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(pos), a);
    }
    m = B::compose(step, m);
  }
  return m;
}

template <class B>
typename B::mor eval_inclusion(const lax_diagram<B>& d, const part_section<B>& ps,
                               const chain& sigma, const chain& tau) {
  std::vector<int> order;
  for (int e : tau.elems)
    if (!sigma.contains(e)) order.push_back(e);
  return eval_inclusion_order(d, ps, sigma, tau, order);
}

// Cocycle validation: for every composable triple, the two routes
// x_r -> tau^r_q(tau^q_p(x_p)) agree.
template <class B>
bool validate_part_section(const lax_diagram<B>& d, const part_section<B>& ps,
                           std::string* why = nullptr) {
  const fin_poset& base = d.base;
  for (auto [p, q] : base.strict_pairs()) {
    if (!ps.has(p) || !ps.has(q)) continue;
    auto it = ps.phi.find({p, q});
    if (it == ps.phi.end()) {
      if (why) *why = "missing component at " + base.name(p) + " < " + base.name(q);
      return false;
    }
    const auto& m = it->second;
    auto target = apply_obj(d.tau_at(p, q), ps.x[static_cast<std::size_t>(p)]);
    if (!B::obj_equal(B::mor_src(m), ps.x[static_cast<std::size_t>(q)]) ||
        !B::obj_equal(B::mor_dst(m), target)) {
      if (why) *why = "component endpoints wrong at " + base.name(p) + " < " + base.name(q);
      return false;
    }
  }
  for (auto [p, q] : base.strict_pairs())
    for (int r = 0; r < base.size(); ++r) {
      if (!base.lt(q, r)) continue;
      if (!ps.has(p) || !ps.has(q) || !ps.has(r)) continue;
      auto lhs = B::compose(d.can_at(p, q, r).at(ps.x[static_cast<std::size_t>(p)]),
                            ps.phi.at({p, r}));
      auto rhs = B::compose(apply_mor(d.tau_at(q, r), ps.phi.at({p, q})), ps.phi.at({q, r}));
      if (!B::mor_equal(lhs, rhs)) {
        if (why)
          *why = "cocycle fails at " + base.name(p) + " < " + base.name(q) + " < " + base.name(r);
        return false;
      }
    }
  return true;
}

template <class B>
bool validate_section(const lax_diagram<B>& d, const section<B>& s, std::string* why = nullptr) {
  if (static_cast<int>(s.x.size()) != d.base.size()) {
    if (why) *why = "wrong number of objects";
    return false;
  }
  return validate_part_section(d, to_part(d, s), why);
}

// A morphism of sections: a componentwise morphism commuting with the
// structure maps.
template <class B>
struct section_map {
  std::vector<typename B::mor> psi;
};

template <class B>
bool validate_section_map(const lax_diagram<B>& d, const section<B>& s, const section<B>& t,
                          const section_map<B>& m, std::string* why = nullptr) {
  if (static_cast<int>(m.psi.size()) != d.base.size()) {
    if (why) *why = "wrong number of components";
    return false;
  }
  for (int p = 0; p < d.base.size(); ++p) {
    if (!B::obj_equal(B::mor_src(m.psi[static_cast<std::size_t>(p)]), s.x[static_cast<std::size_t>(p)]) ||
        !B::obj_equal(B::mor_dst(m.psi[static_cast<std::size_t>(p)]), t.x[static_cast<std::size_t>(p)])) {
      if (why) *why = "component endpoints wrong at " + d.base.name(p);
      return false;
    }
  }
  for (auto [p, q] : d.base.strict_pairs()) {
    auto lhs = B::compose(apply_mor(d.tau_at(p, q), m.psi[static_cast<std::size_t>(p)]),
                          s.phi_at(p, q));
    auto rhs = B::compose(t.phi_at(p, q), m.psi[static_cast<std::size_t>(q)]);
    if (!B::mor_equal(lhs, rhs)) {
      if (why) *why = "naturality fails at " + d.base.name(p) + " < " + d.base.name(q);
      return false;
    }
  }
  return true;
}

template <class B>
section_map<B> identity_section_map(const section<B>& s) {
  section_map<B> m;
  for (const auto& o : s.x) m.psi.push_back(B::identity(o));
  return m;
}

template <class B>
section_map<B> compose_section_maps(const section_map<B>& g, const section_map<B>& f) {
  section_map<B> m;
  for (std::size_t i = 0; i < f.psi.size(); ++i) m.psi.push_back(B::compose(g.psi[i], f.psi[i]));
  return m;
}

template <class B>
bool section_map_equal(const section_map<B>& a, const section_map<B>& b) {
  if (a.psi.size() != b.psi.size()) return false;
  for (std::size_t i = 0; i < a.psi.size(); ++i)
    if (!B::mor_equal(a.psi[i], b.psi[i])) return false;
  return true;
}

template <class B>
bool section_map_is_iso(const section_map<B>& m) {
  for (const auto& c : m.psi)
    if (!B::is_iso(c)) return false;
  return true;
}

// ---- pushforward along the open part ----

template <class B>
struct lower_diagram_data {
  chain_shape cs;
  shaped_diagram<B> dia;

  int vertex_of(const chain& c) const {
    for (std::size_t i = 0; i < cs.vertex.size(); ++i)
      if (cs.vertex[i] == c) return static_cast<int>(i);
    throw validation_error("lower diagram: chain not present");
  }
};

template <class B>
lower_diagram_data<B> build_lower_diagram(const lax_diagram<B>& d, const decomposition& dec,
                                          const part_section<B>& ps, int q) {
  lower_diagram_data<B> out;
  out.cs = lower_chain_shape(d.base, dec, chain{{q}});
  out.dia.fiber = d.fiber[static_cast<std::size_t>(q)];
  out.dia.shape = out.cs.shape;
  for (const chain& c : out.cs.vertex) out.dia.at.push_back(eval_chain(d, ps, c));
  for (auto [v, w] : out.cs.shape.covers())
    out.dia.edge.insert({{v, w}, eval_inclusion(d, ps, out.cs.vertex[static_cast<std::size_t>(v)],
                                                out.cs.vertex[static_cast<std::size_t>(w)])});
  return out;
}

template <class B>
struct pushforward_data {
  section<B> s;
  std::map<int, lower_diagram_data<B>> lds;
  std::map<int, typename B::limit_data> lims;
};

// Right adjoint to restriction along the sieve part: on the cosieve the value
// is the limit over the poset of sieve chains below the point, and the
// structure maps between cosieve points are mediated through the mapped
// limits (failing loudly if a transition does not preserve them).
template <class B>
pushforward_data<B> j_star_full(const lax_diagram<B>& d, const decomposition& dec,
                                const part_section<B>& ps) {
  pushforward_data<B> out;
  const fin_poset& base = d.base;
  out.s.x.resize(static_cast<std::size_t>(base.size()));
  for (int p : dec.sieve()) out.s.x[static_cast<std::size_t>(p)] = ps.x[static_cast<std::size_t>(p)];
  for (const auto& [key, m] : ps.phi)
    if (dec.sieve_has(key.first) && dec.sieve_has(key.second)) out.s.phi.insert({key, m});
  for (int q : dec.cosieve()) {
    auto ld = build_lower_diagram(d, dec, ps, q);
    auto lim = B::limit(d.fiber[static_cast<std::size_t>(q)], ld.dia);
    out.s.x[static_cast<std::size_t>(q)] = lim.apex;
    out.lds.emplace(q, std::move(ld));
    out.lims.emplace(q, std::move(lim));
  }
  for (auto [p, q] : base.strict_pairs()) {
    if (dec.sieve_has(p) && !dec.sieve_has(q)) {
      const auto& ld = out.lds.at(q);
      int v = ld.vertex_of(make_chain(base, {p, q}));
      out.s.phi.insert({{p, q}, out.lims.at(q).cone[static_cast<std::size_t>(v)]});
    } else if (!dec.sieve_has(p) && !dec.sieve_has(q)) {
      const auto& ldp = out.lds.at(p);
      const auto& limp = out.lims.at(p);
      const auto& ldq = out.lds.at(q);
      const auto& limq = out.lims.at(q);
      const auto& t = d.tau_at(p, q);
      shaped_diagram<B> mapped;
      mapped.fiber = d.fiber[static_cast<std::size_t>(q)];
      mapped.shape = ldp.cs.shape;
      for (const auto& o : ldp.dia.at) mapped.at.push_back(apply_obj(t, o));
      for (const auto& [key, m] : ldp.dia.edge) mapped.edge.insert({key, apply_mor(t, m)});
      auto limm = B::limit(d.fiber[static_cast<std::size_t>(q)], mapped);
      std::vector<typename B::mor> tau_cone;
      for (const auto& leg : limp.cone) tau_cone.push_back(apply_mor(t, leg));
      auto u = B::mediate(mapped, limm, apply_obj(t, limp.apex), tau_cone);
      if (!u || !B::is_iso(*u))
        throw validation_error("pushforward: transition does not preserve the defining limit at " +
                               base.name(p) + " < " + base.name(q));
      std::vector<typename B::mor> comps;
      for (std::size_t v = 0; v < ldp.cs.vertex.size(); ++v) {
        const chain& c = ldp.cs.vertex[v];
        std::vector<int> head(c.elems.begin(), c.elems.end() - 1);
        chain tau0{head};
        std::vector<int> cq = head;
        cq.push_back(q);
        int vq = ldq.vertex_of(make_chain(base, cq));
        typename B::obj y = eval_chain(d, ps, tau0);
        typename B::mor cell = d.can_at(tau0.max(), p, q).at(y);
        comps.push_back(B::compose(cell, limq.cone[static_cast<std::size_t>(vq)]));
      }
      auto med = B::mediate(mapped, limm, out.s.x[static_cast<std::size_t>(q)], comps);
      if (!med)
        throw validation_error("pushforward: mediating cone failed at " + base.name(p) + " < " +
                               base.name(q));
      out.s.phi.insert({{p, q}, B::compose(B::inverse(*u), *med)});
    }
  }
  std::string why;
  if (!validate_section(d, out.s, &why))
    throw validation_error("pushforward produced an invalid section: " + why);
  return out;
}

template <class B>
section<B> j_star(const lax_diagram<B>& d, const decomposition& dec, const part_section<B>& ps) {
  return j_star_full(d, dec, ps).s;
}

// Right adjoint to restriction along the cosieve part: terminal on the sieve.
template <class B>
section<B> i_star(const lax_diagram<B>& d, const decomposition& dec, const part_section<B>& ps) {
  section<B> out;
  const fin_poset& base = d.base;
  out.x.resize(static_cast<std::size_t>(base.size()));
  for (int q = 0; q < base.size(); ++q)
    out.x[static_cast<std::size_t>(q)] =
        dec.sieve_has(q) ? B::terminal(d.fiber[static_cast<std::size_t>(q)])
                         : ps.x[static_cast<std::size_t>(q)];
  for (const auto& [key, m] : ps.phi)
    if (!dec.sieve_has(key.first) && !dec.sieve_has(key.second)) out.phi.insert({key, m});
  for (auto [p, q] : base.strict_pairs()) {
    if (!dec.sieve_has(p)) continue;
    auto tl = apply_obj(d.tau_at(p, q), out.x[static_cast<std::size_t>(p)]);
    if (!B::is_terminal_like(d.fiber[static_cast<std::size_t>(q)], tl))
      throw validation_error("closed pushforward: transition does not preserve the terminal object");
    out.phi.insert({{p, q}, B::unique_to(out.x[static_cast<std::size_t>(q)], tl)});
  }
  std::string why;
  if (!validate_section(d, out, &why))
    throw validation_error("closed pushforward produced an invalid section: " + why);
  return out;
}

// Left adjoint to restriction along the sieve part: initial on the cosieve.
template <class B>
section<B> j_bang(const lax_diagram<B>& d, const decomposition& dec, const part_section<B>& ps) {
  section<B> out;
  const fin_poset& base = d.base;
  out.x.resize(static_cast<std::size_t>(base.size()));
  for (int q = 0; q < base.size(); ++q)
    out.x[static_cast<std::size_t>(q)] =
        dec.sieve_has(q) ? ps.x[static_cast<std::size_t>(q)]
                         : B::initial(d.fiber[static_cast<std::size_t>(q)]);
  for (const auto& [key, m] : ps.phi)
    if (dec.sieve_has(key.first) && dec.sieve_has(key.second)) out.phi.insert({key, m});
  for (auto [p, q] : base.strict_pairs()) {
    if (dec.sieve_has(q)) continue;
    out.phi.insert({{p, q}, B::unique_from(out.x[static_cast<std::size_t>(q)],
                                           apply_obj(d.tau_at(p, q),
                                                     out.x[static_cast<std::size_t>(p)]))});
  }
  std::string why;
  if (!validate_section(d, out, &why))
    throw validation_error("open extension produced an invalid section: " + why);
  return out;
}

// Unit of restriction -| pushforward at the open part: mediates the cone of
// structural inclusion morphisms into each defining limit.
template <class B>
std::optional<section_map<B>> unit_j(const lax_diagram<B>& d, const decomposition& dec,
                                     const section<B>& s, const pushforward_data<B>& pd) {
  section_map<B> m;
  m.psi.resize(static_cast<std::size_t>(d.base.size()));
  part_section<B> full = to_part(d, s);
  for (int p = 0; p < d.base.size(); ++p) {
    if (dec.sieve_has(p)) {
      m.psi[static_cast<std::size_t>(p)] = B::identity(s.x[static_cast<std::size_t>(p)]);
      continue;
    }
    const auto& ld = pd.lds.at(p);
    std::vector<typename B::mor> cone;
    for (const chain& c : ld.cs.vertex)
      cone.push_back(eval_inclusion(d, full, chain{{p}}, c));
    auto med = B::mediate(ld.dia, pd.lims.at(p), s.x[static_cast<std::size_t>(p)], cone);
    if (!med) return std::nullopt;
    m.psi[static_cast<std::size_t>(p)] = *med;
  }
  if (!validate_section_map(d, s, pd.s, m)) return std::nullopt;
  return m;
}

// Unit of restriction -| pushforward at the closed part.
template <class B>
section_map<B> unit_i(const lax_diagram<B>& d, const decomposition& dec, const section<B>& s,
                      const section<B>& is) {
  section_map<B> m;
  for (int p = 0; p < d.base.size(); ++p)
    m.psi.push_back(dec.sieve_has(p)
                        ? B::unique_to(s.x[static_cast<std::size_t>(p)],
                                       is.x[static_cast<std::size_t>(p)])
                        : B::identity(s.x[static_cast<std::size_t>(p)]));
  return m;
}

// Counit of extension -| restriction at the open part.
template <class B>
section_map<B> counit_j_bang(const lax_diagram<B>& d, const decomposition& dec,
                             const section<B>& jb, const section<B>& s) {
  section_map<B> m;
  for (int p = 0; p < d.base.size(); ++p)
    m.psi.push_back(dec.sieve_has(p)
                        ? B::identity(s.x[static_cast<std::size_t>(p)])
                        : B::unique_from(jb.x[static_cast<std::size_t>(p)],
                                         s.x[static_cast<std::size_t>(p)]));
  return m;
}

// ---- fracture square ----

template <class B>
struct fracture_result {
  section<B> open_push;    // j_* j^* s
  section<B> closed_push;  // i_* i^* s
  section<B> mixed;        // i_* i^* j_* j^* s
  section<B> pullback;
  std::optional<section_map<B>> comparison;
  bool comparison_iso = false;
  check_list checks;
};

inline fin_poset cospan_shape() {
  return fin_poset::validate({"l", "r", "t"}, {{"l", "t"}, {"r", "t"}});
}

template <class B>
fracture_result<B> fracture(const lax_diagram<B>& d, const decomposition& dec,
                            const section<B>& s) {
  fracture_result<B> out;
  const fin_poset& base = d.base;
  auto pd = j_star_full(d, dec, open_restrict(d, dec, s));
  out.open_push = pd.s;
  out.closed_push = i_star(d, dec, closed_restrict(d, dec, s));
  auto uj = unit_j(d, dec, s, pd);
  out.checks.add("unit_into_open_pushforward", uj.has_value());
  if (!uj) return out;
  section_map<B> ui = unit_i(d, dec, s, out.closed_push);
  out.mixed = i_star(d, dec, closed_restrict(d, dec, out.open_push));
  // f: open_push -> mixed, g: closed_push -> mixed
  section_map<B> f = unit_i(d, dec, out.open_push, out.mixed);
  section_map<B> g;
  for (int p = 0; p < base.size(); ++p)
    g.psi.push_back(dec.sieve_has(p)
                        ? B::unique_to(out.closed_push.x[static_cast<std::size_t>(p)],
                                       out.mixed.x[static_cast<std::size_t>(p)])
                        : uj->psi[static_cast<std::size_t>(p)]);
  out.checks.add("legs_are_section_maps",
                 validate_section_map(d, out.open_push, out.mixed, f) &&
                     validate_section_map(d, out.closed_push, out.mixed, g) &&
                     validate_section_map(d, s, out.closed_push, ui));
  bool commutes = true;
  for (int p = 0; p < base.size(); ++p)
    if (!B::mor_equal(B::compose(f.psi[static_cast<std::size_t>(p)],
                                 uj->psi[static_cast<std::size_t>(p)]),
                      B::compose(g.psi[static_cast<std::size_t>(p)],
                                 ui.psi[static_cast<std::size_t>(p)])))
      commutes = false;
  out.checks.add("square_commutes", commutes);
  if (!commutes) return out;

  fin_poset vee = cospan_shape();
  std::vector<typename B::limit_data> lims;
  std::vector<shaped_diagram<B>> cospans;
  for (int p = 0; p < base.size(); ++p) {
    shaped_diagram<B> dia;
    dia.fiber = d.fiber[static_cast<std::size_t>(p)];
    dia.shape = vee;
    dia.at = {out.open_push.x[static_cast<std::size_t>(p)],
              out.closed_push.x[static_cast<std::size_t>(p)],
              out.mixed.x[static_cast<std::size_t>(p)]};
    dia.edge.insert({{0, 2}, f.psi[static_cast<std::size_t>(p)]});
    dia.edge.insert({{1, 2}, g.psi[static_cast<std::size_t>(p)]});
    auto lim = B::limit(d.fiber[static_cast<std::size_t>(p)], dia);
    out.pullback.x.push_back(lim.apex);
    cospans.push_back(std::move(dia));
    lims.push_back(std::move(lim));
  }
  bool preserved = true;
  for (auto [p, q] : base.strict_pairs()) {
    const auto& t = d.tau_at(p, q);
    shaped_diagram<B> mapped;
    mapped.fiber = d.fiber[static_cast<std::size_t>(q)];
    mapped.shape = vee;
    for (const auto& o : cospans[static_cast<std::size_t>(p)].at)
      mapped.at.push_back(apply_obj(t, o));
    for (const auto& [key, mm] : cospans[static_cast<std::size_t>(p)].edge)
      mapped.edge.insert({key, apply_mor(t, mm)});
    auto limm = B::limit(d.fiber[static_cast<std::size_t>(q)], mapped);
    std::vector<typename B::mor> tau_cone;
    for (const auto& leg : lims[static_cast<std::size_t>(p)].cone)
      tau_cone.push_back(apply_mor(t, leg));
    auto u = B::mediate(mapped, limm,
                        apply_obj(t, out.pullback.x[static_cast<std::size_t>(p)]), tau_cone);
    if (!u || !B::is_iso(*u)) {
      preserved = false;
      break;
    }
    std::vector<typename B::mor> cone = {
        B::compose(out.open_push.phi_at(p, q), lims[static_cast<std::size_t>(q)].cone[0]),
        B::compose(out.closed_push.phi_at(p, q), lims[static_cast<std::size_t>(q)].cone[1]),
        B::compose(out.mixed.phi_at(p, q), lims[static_cast<std::size_t>(q)].cone[2])};
    auto med = B::mediate(mapped, limm, out.pullback.x[static_cast<std::size_t>(q)], cone);
    if (!med) {
      preserved = false;
      break;
    }
    out.pullback.phi.insert({{p, q}, B::compose(B::inverse(*u), *med)});
  }
  out.checks.add("transitions_preserve_fracture_pullback", preserved);
  if (!preserved) return out;
  std::string why;
  bool pb_valid = validate_section(d, out.pullback, &why);
  out.checks.add("pullback_is_a_section", pb_valid, why);
  if (!pb_valid) return out;

  section_map<B> cmp;
  bool mediated = true;
  for (int p = 0; p < base.size(); ++p) {
    std::vector<typename B::mor> cone = {uj->psi[static_cast<std::size_t>(p)],
                                         ui.psi[static_cast<std::size_t>(p)],
                                         B::compose(f.psi[static_cast<std::size_t>(p)],
                                                    uj->psi[static_cast<std::size_t>(p)])};
    auto med = B::mediate(cospans[static_cast<std::size_t>(p)], lims[static_cast<std::size_t>(p)],
                          s.x[static_cast<std::size_t>(p)], cone);
    if (!med) {
      mediated = false;
      break;
    }
    cmp.psi.push_back(*med);
  }
  out.checks.add("comparison_mediates", mediated);
  if (!mediated) return out;
  bool cmp_valid = validate_section_map(d, s, out.pullback, cmp, &why);
  out.checks.add("comparison_is_a_section_map", cmp_valid, why);
  out.comparison = cmp;
  out.comparison_iso = cmp_valid && section_map_is_iso<B>(cmp);
  out.checks.add("comparison_is_iso", out.comparison_iso);
  return out;
}

}  // namespace laxglue
