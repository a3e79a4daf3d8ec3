#pragma once

#include <array>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "laxglue/checks.hpp"
#include "laxglue/finset.hpp"
#include "laxglue/poset.hpp"
#include "laxglue/vect.hpp"

namespace laxglue {

using finset_stage =
    std::variant<stage_restrict, stage_rke, stage_extend_singleton, stage_extend_empty>;
using vect_stage = std::variant<stage_mult>;

template <class B>
struct backend_traits;

template <>
struct backend_traits<finset_backend> {
  using stage = finset_stage;
  static bool cat_equal(const finset_backend::cat& a, const finset_backend::cat& b) {
    return a.shape.equals(b.shape);
  }
  static std::string backend_name() { return "finset"; }
};

template <>
struct backend_traits<vect_backend> {
  using stage = vect_stage;
  static bool cat_equal(const vect_backend::cat& a, const vect_backend::cat& b) {
    return a.p == b.p;
  }
  static std::string backend_name() { return "vect"; }
};

// A transition functor between two fibers, represented as a pipeline of
// concrete stages applied left to right.
template <class B>
struct functor_spec {
  typename B::cat dom;
  typename B::cat cod;
  std::vector<typename backend_traits<B>::stage> stages;
};

template <class B>
typename B::obj apply_obj(const functor_spec<B>& f, typename B::obj x) {
  for (const auto& st : f.stages)
    x = std::visit([&](const auto& s) { return apply_stage(s, x); }, st);
  return x;
}

template <class B>
typename B::mor apply_mor(const functor_spec<B>& f, typename B::mor m) {
  for (const auto& st : f.stages)
    m = std::visit([&](const auto& s) { return apply_stage(s, m); }, st);
  return m;
}

// A comparison cell for one composable pair, given pointwise: at an object x
// of the lowest fiber it is a morphism tau^r_p(x) -> tau^r_q(tau^q_p(x)).
template <class B>
struct can_cell {
  std::string kind = "explicit";
  std::function<typename B::mor(const typename B::obj&)> at;
};

// A left-lax diagram of fiber categories over a finite poset: a fiber per
// element, a transition functor per strict pair, and a comparison cell per
// composable triple.
template <class B>
struct lax_diagram {
  fin_poset base;
  std::vector<typename B::cat> fiber;
  std::map<std::pair<int, int>, functor_spec<B>> tau;
  std::map<std::array<int, 3>, can_cell<B>> can;
  // Set when every transition preserves finite limits and the terminal
  // object; enables the operations that move across a sieve boundary.
  bool toposic = false;

  const functor_spec<B>& tau_at(int p, int q) const {
    auto it = tau.find({p, q});
    if (it == tau.end())
      throw validation_error("lax diagram: missing transition for " + base.name(p) + " < " +
                             base.name(q));
    return it->second;
  }
  const can_cell<B>& can_at(int p, int q, int r) const {
    auto it = can.find({p, q, r});
    if (it == can.end())
      throw validation_error("lax diagram: missing comparison cell for " + base.name(p) + " < " +
                             base.name(q) + " < " + base.name(r));
    return it->second;
  }
};

// A can cell that is literally the identity; valid when the composite
// pipeline evaluates to the same object as the direct one.
template <class B>
can_cell<B> identity_cell(functor_spec<B> direct, functor_spec<B> low, functor_spec<B> high) {
  can_cell<B> c;
  c.kind = "identity";
  c.at = [direct, low, high](const typename B::obj& x) {
    auto one = apply_obj(direct, x);
    auto two = apply_obj(high, apply_obj(low, x));
    if (!B::obj_equal(one, two))
      throw validation_error("identity comparison cell: objects differ");
    return B::identity(one);
  };
  return c;
}

// Samples a small deterministic pool of objects in one fiber: everything of
// size below a threshold plus a few random draws.
template <class B>
std::vector<typename B::obj> sample_objects(const typename B::cat& c, int enumerate_to,
                                            int random_count, int random_size,
                                            std::mt19937_64& rng) {
  std::vector<typename B::obj> out = B::enumerate_objects(c, enumerate_to);
  for (int i = 0; i < random_count; ++i) out.push_back(B::random_object(c, random_size, rng));
  return out;
}

// Checks the shape bookkeeping, the comparison-cell endpoints, naturality on
// sampled morphisms, and the cocycle identity on sampled objects for every
// composable 4-tuple. With toposic set, also spot-checks terminal and
// pullback preservation of the transitions.
template <class B>
check_list validate_diagram(const lax_diagram<B>& d, int enumerate_to, int random_count,
                            std::mt19937_64& rng) {
  check_list out;
  const fin_poset& base = d.base;
  bool shapes_ok = static_cast<int>(d.fiber.size()) == base.size();
  for (auto [p, q] : base.strict_pairs()) {
    auto it = d.tau.find({p, q});
    if (it == d.tau.end()) {
      shapes_ok = false;
      continue;
    }
    if (!backend_traits<B>::cat_equal(it->second.dom, d.fiber[static_cast<std::size_t>(p)]) ||
        !backend_traits<B>::cat_equal(it->second.cod, d.fiber[static_cast<std::size_t>(q)]))
      shapes_ok = false;
  }
  out.add("transition_shapes", shapes_ok);
  if (!shapes_ok) return out;

  std::vector<std::array<int, 3>> triples;
  for (auto [p, q] : base.strict_pairs())
    for (int r = 0; r < base.size(); ++r)
      if (base.lt(q, r)) triples.push_back({p, q, r});

  bool cells_present = true;
  for (const auto& t : triples)
    if (!d.can.count(t)) cells_present = false;
  out.add("comparison_cells_present", cells_present);
  if (!cells_present) return out;

  bool endpoints_ok = true, natural_ok = true;
  std::string endpoint_note, natural_note;
  for (const auto& t : triples) {
    auto [p, q, r] = t;
    auto pool = sample_objects<B>(d.fiber[static_cast<std::size_t>(p)], enumerate_to, random_count, 2, rng);
    const auto& cell = d.can_at(p, q, r);
    for (const auto& x : pool) {
      typename B::mor m = cell.at(x);
      auto direct = apply_obj(d.tau_at(p, r), x);
      auto composite = apply_obj(d.tau_at(q, r), apply_obj(d.tau_at(p, q), x));
      if (!B::obj_equal(B::mor_src(m), direct) || !B::obj_equal(B::mor_dst(m), composite)) {
        endpoints_ok = false;
        endpoint_note = "cell endpoints wrong at " + base.name(p) + "<" + base.name(q) + "<" +
                        base.name(r);
      }
    }
    // naturality on a few sampled morphisms between small objects
    for (std::size_t i = 0; i + 1 < pool.size() && i < 2; ++i) {
      const auto& x = pool[i];
      const auto& y = pool[i + 1];
      if (B::hom_size(x, y) > 256) continue;
      auto maps = B::hom(x, y);
      std::size_t step = maps.size() > 4 ? maps.size() / 4 : 1;
      for (std::size_t j = 0; j < maps.size(); j += step) {
        const auto& f = maps[j];
        auto lhs = B::compose(cell.at(y), apply_mor(d.tau_at(p, r), f));
        auto rhs = B::compose(apply_mor(d.tau_at(q, r), apply_mor(d.tau_at(p, q), f)), cell.at(x));
        if (!B::mor_equal(lhs, rhs)) {
          natural_ok = false;
          natural_note = "comparison cell not natural at " + base.name(p) + "<" + base.name(q) +
                         "<" + base.name(r);
        }
      }
    }
  }
  out.add("comparison_cell_endpoints", endpoints_ok, endpoint_note);
  out.add("comparison_cell_naturality", natural_ok, natural_note);

  bool cocycle_ok = true;
  std::string cocycle_note;
  for (auto [p, q] : base.strict_pairs())
    for (int r = 0; r < base.size(); ++r) {
      if (!base.lt(q, r)) continue;
      for (int s = 0; s < base.size(); ++s) {
        if (!base.lt(r, s)) continue;
        auto pool = sample_objects<B>(d.fiber[static_cast<std::size_t>(p)], enumerate_to, random_count, 2, rng);
        for (const auto& x : pool) {
          auto route1 = B::compose(d.can_at(q, r, s).at(apply_obj(d.tau_at(p, q), x)),
                                   d.can_at(p, q, s).at(x));
          auto route2 = B::compose(apply_mor(d.tau_at(r, s), d.can_at(p, q, r).at(x)),
                                   d.can_at(p, r, s).at(x));
          if (!B::mor_equal(route1, route2)) {
            cocycle_ok = false;
            cocycle_note = "cocycle fails at " + base.name(p) + "<" + base.name(q) + "<" +
                           base.name(r) + "<" + base.name(s);
          }
        }
      }
    }
  out.add("comparison_cocycle", cocycle_ok, cocycle_note);

  if (d.toposic) {
    bool term_ok = true, pb_ok = true;
    fin_poset vee = fin_poset::validate({"l", "r", "t"}, {{"l", "t"}, {"r", "t"}});
    for (auto [p, q] : base.strict_pairs()) {
      auto t = apply_obj(d.tau_at(p, q), B::terminal(d.fiber[static_cast<std::size_t>(p)]));
      if (!B::is_terminal_like(d.fiber[static_cast<std::size_t>(q)], t)) term_ok = false;
      auto pool = sample_objects<B>(d.fiber[static_cast<std::size_t>(p)], 1, 1, 2, rng);
      for (std::size_t i = 0; i + 2 < pool.size() && i < 1; ++i) {
        const auto& x = pool[i];
        const auto& y = pool[i + 1];
        const auto& z = pool[i + 2];
        if (B::hom_size(x, z) > 64 || B::hom_size(y, z) > 64) continue;
        auto fx = B::hom(x, z);
        auto fy = B::hom(y, z);
        if (fx.empty() || fy.empty()) continue;
        shaped_diagram<B> cospan{d.fiber[static_cast<std::size_t>(p)], vee, {x, y, z},
                                 {{{0, 2}, fx.front()}, {{1, 2}, fy.front()}}};
        auto lim = B::limit(d.fiber[static_cast<std::size_t>(p)], cospan);
        shaped_diagram<B> image{d.fiber[static_cast<std::size_t>(q)],
                                vee,
                                {apply_obj(d.tau_at(p, q), x), apply_obj(d.tau_at(p, q), y),
                                 apply_obj(d.tau_at(p, q), z)},
                                {{{0, 2}, apply_mor(d.tau_at(p, q), fx.front())},
                                 {{1, 2}, apply_mor(d.tau_at(p, q), fy.front())}}};
        auto lim2 = B::limit(d.fiber[static_cast<std::size_t>(q)], image);
        std::vector<typename B::mor> cone;
        for (const auto& leg : lim.cone) cone.push_back(apply_mor(d.tau_at(p, q), leg));
        auto med = B::mediate(image, lim2, apply_obj(d.tau_at(p, q), lim.apex), cone);
        if (!med || !B::is_iso(*med)) pb_ok = false;
      }
    }
    out.add("transitions_preserve_terminal", term_ok);
    out.add("transitions_preserve_pullbacks", pb_ok);
  }
  return out;
}

// The full sub lax diagram on a sieve or cosieve part, reusing full-base
// indices through the returned embedding.
template <class B>
std::pair<lax_diagram<B>, std::vector<int>> restrict_diagram(const lax_diagram<B>& d,
                                                             const std::vector<int>& part) {
  auto [sub, embed] = sub_poset(d.base, part);
  lax_diagram<B> out;
  out.base = sub;
  out.toposic = d.toposic;
  for (int i : part) out.fiber.push_back(d.fiber[static_cast<std::size_t>(i)]);
  for (std::size_t a = 0; a < part.size(); ++a)
    for (std::size_t b = 0; b < part.size(); ++b)
      if (out.base.lt(static_cast<int>(a), static_cast<int>(b)))
        out.tau.insert({{static_cast<int>(a), static_cast<int>(b)},
                        d.tau_at(part[a], part[b])});
  for (std::size_t a = 0; a < part.size(); ++a)
    for (std::size_t b = 0; b < part.size(); ++b)
      for (std::size_t c = 0; c < part.size(); ++c)
        if (out.base.lt(static_cast<int>(a), static_cast<int>(b)) &&
            out.base.lt(static_cast<int>(b), static_cast<int>(c)))
          out.can.insert({{static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)},
                          d.can_at(part[a], part[b], part[c])});
  return {out, embed};
}

}  // namespace laxglue
