#include "laxglue/strat.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace laxglue {

namespace {

std::size_t zu(int i) { return static_cast<std::size_t>(i); }

stage_extend_singleton extend_stage(const strat_space& x, int p) {
  return {x.stratum[zu(p)], x.star[zu(p)], x.stratum_in_star[zu(p)]};
}

stage_rke rke_stage(const strat_space& x, int p) {
  return {x.star[zu(p)], x.space, x.star_pts[zu(p)]};
}

std::string first_fail(const check_list& c) {
  for (const auto& it : c.items)
    if (!it.pass) return it.name + (it.note.empty() ? "" : ": " + it.note);
  return "";
}

// Hom enumeration throws past its cap; sampling sites want a skip instead.
std::vector<nat_map> homs_capped(const copresheaf& a, const copresheaf& b, std::uint64_t cap) {
  try {
    return copresheaf_hom(a, b, cap);
  } catch (const validation_error&) {
    return {};
  }
}

std::uint64_t hom_size_capped(const copresheaf& a, const copresheaf& b, std::uint64_t cap) {
  try {
    return copresheaf_hom_size(a, b, cap);
  } catch (const validation_error&) {
    return cap + 1;
  }
}

}  // namespace

strat_space strat_space::validate(fin_poset space, fin_poset strat, std::vector<int> pi) {
  if (static_cast<int>(pi.size()) != space.size())
    throw validation_error("stratified space: one stratum index per point required");
  monotone_map::validate(space, strat, pi);  // rejects bad indices and order violations
  strat_space x;
  x.space = std::move(space);
  x.strat = std::move(strat);
  x.pi = std::move(pi);
  x.op = opposite(x.strat);
  int n = x.strat.size();
  x.stratum_pts.resize(zu(n));
  x.star_pts.resize(zu(n));
  for (int w = 0; w < x.space.size(); ++w) {
    x.stratum_pts[zu(x.pi[zu(w)])].push_back(w);
    for (int p = 0; p < n; ++p)
      if (x.strat.leq(p, x.pi[zu(w)])) x.star_pts[zu(p)].push_back(w);
  }
  for (int p = 0; p < n; ++p) {
    x.stratum.push_back(sub_poset(x.space, x.stratum_pts[zu(p)]).first);
    x.star.push_back(sub_poset(x.space, x.star_pts[zu(p)]).first);
    // Both point lists ascend in space order, so positions line up monotonically.
    std::vector<int> pos;
    for (int w : x.stratum_pts[zu(p)]) {
      auto it = std::lower_bound(x.star_pts[zu(p)].begin(), x.star_pts[zu(p)].end(), w);
      pos.push_back(static_cast<int>(it - x.star_pts[zu(p)].begin()));
    }
    x.stratum_in_star.push_back(std::move(pos));
  }
  return x;
}

monotone_map strat_space::projection() const {
  return monotone_map::validate(space, strat, pi);
}

check_list stratification_axioms(const strat_space& x) {
  check_list out;
  int n = x.strat.size();

  bool open = true;
  for (int p = 0; p < n; ++p) {
    subset_kind k = classify_subset(x.space, x.star_pts[zu(p)]);
    if (k != subset_kind::cosieve && k != subset_kind::both) open = false;
  }
  out.add("stars_are_open", open, std::to_string(n) + " stars");

  std::vector<int> hits(zu(x.space.size()), 0);
  for (int p = 0; p < n; ++p)
    for (int w : x.stratum_pts[zu(p)]) ++hits[zu(w)];
  bool partition = true;
  for (int h : hits)
    if (h != 1) partition = false;
  out.add("strata_partition_the_points", partition);

  std::vector<char> covered(zu(x.space.size()), 0);
  for (int p = 0; p < n; ++p)
    for (int w : x.star_pts[zu(p)]) covered[zu(w)] = 1;
  bool cover = true;
  for (char c : covered)
    if (!c) cover = false;
  out.add("stars_cover", cover);

  bool inter = true;
  int pairs = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      ++pairs;
      std::vector<char> lhs(zu(x.space.size()), 0), rhs(zu(x.space.size()), 0);
      for (int w : x.star_pts[zu(p)]) lhs[zu(w)] = 1;
      for (std::size_t w = 0; w < lhs.size(); ++w)
        if (!x.strat.leq(q, x.pi[w])) lhs[w] = 0;
      for (int r = 0; r < n; ++r)
        if (x.strat.leq(p, r) && x.strat.leq(q, r))
          for (int w : x.star_pts[zu(r)]) rhs[zu(w)] = 1;
      if (lhs != rhs) inter = false;
    }
  out.add("star_intersections_are_unions_of_stars", inter, std::to_string(pairs) + " pairs");
  return out;
}

functor_spec<finset_backend> stratum_restrict_functor(const strat_space& x, int p) {
  functor_spec<finset_backend> f;
  f.dom = {x.space};
  f.cod = x.stratum_cat(p);
  f.stages.push_back(stage_restrict{monotone_map::validate(x.stratum[zu(p)], x.space, x.stratum_pts[zu(p)])});
  return f;
}

copresheaf stratum_restrict(const strat_space& x, int p, const sheaf& f) {
  return apply_obj(stratum_restrict_functor(x, p), f);
}

functor_spec<finset_backend> stratum_embed_functor(const strat_space& x, int p) {
  functor_spec<finset_backend> f;
  f.dom = x.stratum_cat(p);
  f.cod = {x.space};
  f.stages.push_back(extend_stage(x, p));
  f.stages.push_back(rke_stage(x, p));
  return f;
}

sheaf stratum_embed(const strat_space& x, int p, const copresheaf& y) {
  return apply_obj(stratum_embed_functor(x, p), y);
}

nat_map stratum_unit(const strat_space& x, int p, const sheaf& f) {
  copresheaf phi = stratum_restrict(x, p, f);
  stage_extend_singleton ext = extend_stage(x, p);
  stage_rke rke = rke_stage(x, p);
  copresheaf extended = apply_stage(ext, phi);
  copresheaf mid = apply_stage(rke, extended);
  std::vector<set_fn> comp;
  for (int w = 0; w < x.space.size(); ++w) {
    rke_point_data pt = rke_at_point(rke, extended, w);
    std::map<std::vector<int>, int> family_index;
    for (std::size_t i = 0; i < pt.lim.families.size(); ++i)
      family_index[pt.lim.families[i]] = static_cast<int>(i);
    set_fn c;
    c.cod = mid.sets[zu(w)].size();
    for (int e = 0; e < f.sets[zu(w)].size(); ++e) {
      std::vector<int> fam;
      for (int v : pt.verts) {
        int g = x.star_pts[zu(p)][zu(v)];
        if (x.pi[zu(g)] != p)
          fam.push_back(0);  // singleton layer of the extension
        else if (g == w)
          fam.push_back(e);
        else
          fam.push_back(f.at(w, g).to[zu(e)]);
      }
      auto it = family_index.find(fam);
      if (it == family_index.end())
        throw validation_error("stratum unit: a germ restricts to an incompatible family");
      c.to.push_back(it->second);
    }
    comp.push_back(std::move(c));
  }
  auto nm = try_make_nat_map(f, mid, std::move(comp));
  if (!nm) throw validation_error("stratum unit: components are not natural");
  return *nm;
}

nat_map stratum_counit(const strat_space& x, int p, const copresheaf& y) {
  stage_extend_singleton ext = extend_stage(x, p);
  stage_rke rke = rke_stage(x, p);
  copresheaf extended = apply_stage(ext, y);
  copresheaf emb = apply_stage(rke, extended);
  copresheaf z = stratum_restrict(x, p, emb);
  std::vector<set_fn> comp;
  for (std::size_t i = 0; i < x.stratum_pts[zu(p)].size(); ++i) {
    int w = x.stratum_pts[zu(p)][i];
    rke_point_data pt = rke_at_point(rke, extended, w);
    int own = -1;
    for (std::size_t vi = 0; vi < pt.verts.size(); ++vi)
      if (x.star_pts[zu(p)][zu(pt.verts[vi])] == w) own = static_cast<int>(vi);
    if (own < 0) throw validation_error("stratum counit: point missing from its own star");
    comp.push_back(pt.lim.cone[zu(own)]);
  }
  auto nm = try_make_nat_map(z, y, std::move(comp));
  if (!nm) throw validation_error("stratum counit: projections fail naturality");
  return *nm;
}

check_list stratum_adjunction_report(const strat_space& x, int p, int max_size,
                                     std::uint64_t seed) {
  check_list out;
  std::mt19937_64 rng(seed);
  std::vector<copresheaf> amb =
      sample_objects<finset_backend>({x.space}, max_size, 2, 2, rng);
  std::vector<copresheaf> sub =
      sample_objects<finset_backend>(x.stratum_cat(p), max_size, 2, 2, rng);

  bool counit_ok = true;
  for (const copresheaf& y : sub)
    if (!nat_is_iso(stratum_counit(x, p, y))) counit_ok = false;
  out.add("counit_iso", counit_ok,
          std::to_string(sub.size()) + " objects; the embedding is fully faithful");

  functor_spec<finset_backend> res = stratum_restrict_functor(x, p);
  functor_spec<finset_backend> emb = stratum_embed_functor(x, p);

  bool tri_restrict = true;
  for (const sheaf& f : amb) {
    copresheaf rf = stratum_restrict(x, p, f);
    nat_map lhs = nat_compose(stratum_counit(x, p, rf), apply_mor(res, stratum_unit(x, p, f)));
    if (!nat_equal(lhs, nat_identity(rf))) tri_restrict = false;
  }
  out.add("triangle_restrict", tri_restrict, std::to_string(amb.size()) + " objects");

  bool tri_embed = true;
  for (const copresheaf& y : sub) {
    copresheaf ey = stratum_embed(x, p, y);
    nat_map lhs = nat_compose(apply_mor(emb, stratum_counit(x, p, y)), stratum_unit(x, p, ey));
    if (!nat_equal(lhs, nat_identity(ey))) tri_embed = false;
  }
  out.add("triangle_embed", tri_embed, std::to_string(sub.size()) + " objects");

  bool bij = true;
  int pairs = 0, skipped = 0;
  for (const sheaf& f : amb) {
    for (const copresheaf& y : sub) {
      if (pairs >= 6) break;
      copresheaf ey = stratum_embed(x, p, y);
      copresheaf rf = stratum_restrict(x, p, f);
      if (hom_size_capped(f, ey, 512) > 512 || hom_size_capped(rf, y, 512) > 512) {
        ++skipped;
        continue;
      }
      ++pairs;
      std::vector<nat_map> up_homs = copresheaf_hom(f, ey);
      std::vector<nat_map> down_homs = copresheaf_hom(rf, y);
      if (up_homs.size() != down_homs.size()) bij = false;
      nat_map counit_y = stratum_counit(x, p, y);
      nat_map unit_f = stratum_unit(x, p, f);
      for (const nat_map& m : up_homs) {
        nat_map down = nat_compose(counit_y, apply_mor(res, m));
        nat_map back = nat_compose(apply_mor(emb, down), unit_f);
        if (!nat_equal(back, m)) bij = false;
      }
      for (const nat_map& m : down_homs) {
        nat_map up = nat_compose(apply_mor(emb, m), unit_f);
        nat_map back = nat_compose(counit_y, apply_mor(res, up));
        if (!nat_equal(back, m)) bij = false;
      }
    }
  }
  out.add("hom_bijection", bij,
          std::to_string(pairs) + " pairs, " + std::to_string(skipped) + " skipped as oversized");
  return out;
}

check_list out_of_position(const strat_space& x, int max_size) {
  check_list out;
  bool ok = true;
  int incomparable = 0, comparable = 0, inputs = 0;
  std::string bad;
  for (int p = 0; p < x.strat.size(); ++p)
    for (int q = 0; q < x.strat.size(); ++q) {
      if (x.strat.leq(q, p)) continue;  // the embedding at p is only visible from below
      if (x.strat.comparable(p, q))
        ++comparable;
      else
        ++incomparable;
      for (const copresheaf& y : enumerate_copresheaves(x.stratum[zu(p)], max_size)) {
        ++inputs;
        copresheaf z = stratum_restrict(x, q, stratum_embed(x, p, y));
        if (!finset_backend::is_terminal_like(x.stratum_cat(q), z)) {
          ok = false;
          if (bad.empty())
            bad = "fails at (" + x.strat.name(p) + ", " + x.strat.name(q) + ")";
        }
      }
    }
  out.add("out_of_position_terminal", ok,
          ok ? std::to_string(incomparable) + " incomparable and " + std::to_string(comparable) +
                   " comparable ordered pairs, " + std::to_string(inputs) + " inputs"
             : bad);
  return out;
}

lax_diagram<finset_backend> gluing_diagram(const strat_space& x) {
  lax_diagram<finset_backend> d;
  d.base = x.op;
  d.toposic = true;  // every transition is a composite of right adjoints
  for (int p = 0; p < x.strat.size(); ++p) d.fiber.push_back(x.stratum_cat(p));
  for (auto [a, b] : d.base.strict_pairs()) {
    functor_spec<finset_backend> t;
    t.dom = x.stratum_cat(a);
    t.cod = x.stratum_cat(b);
    t.stages.push_back(extend_stage(x, a));
    t.stages.push_back(rke_stage(x, a));
    functor_spec<finset_backend> res = stratum_restrict_functor(x, b);
    t.stages.insert(t.stages.end(), res.stages.begin(), res.stages.end());
    d.tau.insert({{a, b}, std::move(t)});
  }
  for (auto [a, b] : d.base.strict_pairs())
    for (int c = 0; c < d.base.size(); ++c) {
      if (!(d.base.lt(b, c))) continue;
      can_cell<finset_backend> cell;
      cell.kind = "restricted unit";
      const strat_space xc = x;
      const int aa = a, bb = b, cc = c;
      cell.at = [xc, aa, bb, cc](const copresheaf& y) {
        return apply_mor(stratum_restrict_functor(xc, cc),
                         stratum_unit(xc, bb, stratum_embed(xc, aa, y)));
      };
      d.can.insert({{a, b, c}, std::move(cell)});
    }
  std::mt19937_64 rng(2026);
  check_list checks = validate_diagram(d, 1, 2, rng);
  if (!checks.all_pass())
    throw validation_error("gluing diagram: validation failed at " + first_fail(checks));
  return d;
}

section<finset_backend> transport(const strat_space& x, const lax_diagram<finset_backend>& gd,
                                  const sheaf& f) {
  section<finset_backend> s;
  for (int p = 0; p < x.strat.size(); ++p) s.x.push_back(stratum_restrict(x, p, f));
  for (auto [a, b] : gd.base.strict_pairs())
    s.phi.insert({{a, b}, apply_mor(stratum_restrict_functor(x, b), stratum_unit(x, a, f))});
  std::string why;
  if (!validate_section(gd, s, &why)) throw validation_error("transport: " + why);
  return s;
}

reconstruction_data reconstruct_full(const strat_space& x,
                                     const lax_diagram<finset_backend>& gd,
                                     const section<finset_backend>& s) {
  reconstruction_data rd;
  rd.sdp = subdivide(x.op);
  part_section<finset_backend> ps = to_part(gd, s);
  rd.dia.fiber = {x.space};
  rd.dia.shape = rd.sdp.order;
  for (const chain& c : rd.sdp.chains)
    rd.dia.at.push_back(stratum_embed(x, c.max(), eval_chain(gd, ps, c)));
  for (auto [v, w] : rd.sdp.order.covers()) {
    const chain& small = rd.sdp.chains[zu(v)];
    const chain& big = rd.sdp.chains[zu(w)];
    if (rd.sdp.marked.count({v, w}))
      rd.dia.edge.insert({{v, w}, stratum_unit(x, big.max(), rd.dia.at[zu(v)])});
    else
      rd.dia.edge.insert({{v, w}, apply_mor(stratum_embed_functor(x, small.max()),
                                            eval_inclusion(gd, ps, small, big))});
  }
  rd.lim = finset_backend::limit(rd.dia.fiber, rd.dia);
  return rd;
}

sheaf reconstruct(const strat_space& x, const lax_diagram<finset_backend>& gd,
                  const section<finset_backend>& s) {
  return reconstruct_full(x, gd, s).lim.apex;
}

nat_map sheaf_comparison(const strat_space& x, const lax_diagram<finset_backend>& gd,
                         const sheaf& f, const reconstruction_data& rd) {
  (void)gd;
  std::vector<nat_map> cone;
  for (const chain& c : rd.sdp.chains) {
    nat_map leg = stratum_unit(x, c.elems[0], f);
    for (std::size_t i = 1; i < c.elems.size(); ++i)
      leg = nat_compose(stratum_unit(x, c.elems[i], leg.dst), leg);
    cone.push_back(std::move(leg));
  }
  auto med = finset_backend::mediate(rd.dia, rd.lim, f, cone);
  if (!med) throw validation_error("sheaf comparison: the unit cone fails to mediate");
  return *med;
}

section_map<finset_backend> section_comparison(const strat_space& x,
                                               const lax_diagram<finset_backend>& gd,
                                               const section<finset_backend>& s,
                                               const reconstruction_data& rd) {
  section<finset_backend> t = transport(x, gd, rd.value());
  section_map<finset_backend> m;
  for (int p = 0; p < x.strat.size(); ++p) {
    chain single{{p}};
    const nat_map& proj = rd.lim.cone[zu(rd.sdp.chain_index(single))];
    m.psi.push_back(nat_compose(stratum_counit(x, p, s.x[zu(p)]),
                                apply_mor(stratum_restrict_functor(x, p), proj)));
  }
  std::string why;
  if (!validate_section_map(gd, t, s, m, &why))
    throw validation_error("section comparison: " + why);
  return m;
}

sheaf characteristic_subterminal(const strat_space& x, const std::vector<int>& cosieve_elems) {
  subset_kind k = classify_subset(x.strat, cosieve_elems);
  if (k != subset_kind::cosieve && k != subset_kind::both)
    throw validation_error("characteristic subterminal: selected strata are not a cosieve");
  std::vector<char> in(zu(x.strat.size()), 0);
  for (int p : cosieve_elems) in[zu(p)] = 1;
  std::vector<fset> sets;
  for (int w = 0; w < x.space.size(); ++w)
    sets.push_back(in[zu(x.pi[zu(w)])] ? fset{{"*"}} : fset{});
  std::map<std::pair<int, int>, set_fn> given;
  for (auto [v, w] : x.space.covers()) {
    set_fn f;
    f.cod = sets[zu(w)].size();
    if (sets[zu(v)].size() == 1) f.to = {0};  // support is up-closed, so the target is a point
    given[{v, w}] = std::move(f);
  }
  return make_copresheaf(x.space, std::move(sets), given);
}

recovered_flag recover_stratification(const strat_space& x,
                                      const lax_diagram<finset_backend>& gd,
                                      const std::vector<int>& cosieve_elems) {
  subset_kind k = classify_subset(x.strat, cosieve_elems);
  if (k != subset_kind::cosieve && k != subset_kind::both)
    throw validation_error("recover stratification: selected strata are not a cosieve");
  std::vector<char> in(zu(x.strat.size()), 0);
  for (int p : cosieve_elems) in[zu(p)] = 1;
  recovered_flag out;
  for (int p = 0; p < x.strat.size(); ++p)
    out.flag.x.push_back(in[zu(p)] ? terminal_copresheaf(x.stratum[zu(p)])
                                   : initial_copresheaf(x.stratum[zu(p)]));
  for (auto [a, b] : gd.base.strict_pairs()) {
    copresheaf target = apply_obj(gd.tau_at(a, b), out.flag.x[zu(a)]);
    // a selected target stratum forces a selected source stratum, so the
    // transition value is again terminal-like; otherwise the source is empty.
    nat_map phi = in[zu(b)] ? finset_backend::unique_to(out.flag.x[zu(b)], target)
                            : finset_backend::unique_from(out.flag.x[zu(b)], target);
    out.flag.phi.insert({{a, b}, std::move(phi)});
  }
  std::string why;
  if (!validate_section(gd, out.flag, &why))
    throw validation_error("stratification flag: " + why);
  out.value = reconstruct(x, gd, out.flag);
  out.expected = characteristic_subterminal(x, cosieve_elems);
  out.subterminal = true;
  for (const fset& s : out.value.sets)
    if (s.size() > 1) out.subterminal = false;
  out.matches = copresheaf_iso(out.value, out.expected).has_value();
  return out;
}

strat_map strat_map::validate(strat_space src, strat_space dst, std::vector<int> to) {
  if (!src.strat.equals(dst.strat))
    throw validation_error("stratified map: stratifying posets differ");
  monotone_map::validate(src.space, dst.space, to);
  for (int w = 0; w < src.space.size(); ++w)
    if (dst.pi[zu(to[zu(w)])] != src.pi[zu(w)])
      throw validation_error("stratified map: projections disagree at " + src.space.name(w));
  strat_map g;
  g.src = std::move(src);
  g.dst = std::move(dst);
  g.to = std::move(to);
  return g;
}

monotone_map strat_map::as_monotone() const {
  return monotone_map::validate(src.space, dst.space, to);
}

sheaf direct_image(const strat_map& g, const sheaf& f) {
  return right_kan(g.as_monotone(), f);
}

copresheaf stratum_pushforward(const strat_map& g, int p, const copresheaf& y) {
  return stratum_restrict(g.dst, p, right_kan(g.as_monotone(), stratum_embed(g.src, p, y)));
}

nat_map stratum_pushforward_mor(const strat_map& g, int p, const nat_map& m) {
  return apply_mor(stratum_restrict_functor(g.dst, p),
                   right_kan(g.as_monotone(), apply_mor(stratum_embed_functor(g.src, p), m)));
}

nat_map pushforward_cell(const strat_map& g, int a, int b, const copresheaf& y) {
  monotone_map gm = g.as_monotone();
  sheaf ra = stratum_embed(g.src, a, y);
  sheaf ga = right_kan(gm, ra);
  nat_map land = stratum_unit(g.dst, a, ga);
  if (!nat_is_iso(land))
    throw validation_error("pushforward cell: the direct image escapes its stratum");
  nat_map across = nat_compose(right_kan(gm, stratum_unit(g.src, b, ra)), nat_inverse(land));
  return apply_mor(stratum_restrict_functor(g.dst, b), across);
}

namespace {

// Independent pointwise oracle for the direct image: the value over a point
// is the limit of the sheaf over the preimage of the point's up-set, and the
// transitions project compatible families onto the smaller preimage.
copresheaf direct_image_oracle(const strat_map& g, const sheaf& f) {
  const fin_poset& qs = g.src.space;
  const fin_poset& qd = g.dst.space;
  std::vector<std::vector<int>> pts(zu(qd.size()));
  std::vector<set_limit_data> lims;
  for (int k = 0; k < qd.size(); ++k) {
    for (int w = 0; w < qs.size(); ++w)
      if (qd.leq(k, g.to[zu(w)])) pts[zu(k)].push_back(w);
    auto [shape, embed] = sub_poset(qs, pts[zu(k)]);
    (void)embed;
    std::vector<fset> sets;
    for (int w : pts[zu(k)]) sets.push_back(f.sets[zu(w)]);
    std::map<std::pair<int, int>, set_fn> edges;
    for (std::size_t a = 0; a < pts[zu(k)].size(); ++a)
      for (std::size_t b = 0; b < pts[zu(k)].size(); ++b)
        if (shape.lt(static_cast<int>(a), static_cast<int>(b)))
          edges[{static_cast<int>(a), static_cast<int>(b)}] =
              f.at(pts[zu(k)][a], pts[zu(k)][b]);
    lims.push_back(set_limit(shape, sets, edges));
  }
  std::vector<fset> sets;
  for (int k = 0; k < qd.size(); ++k) sets.push_back(lims[zu(k)].apex);
  std::map<std::pair<int, int>, set_fn> given;
  for (auto [k, l] : qd.covers()) {
    std::vector<std::size_t> where;
    for (int w : pts[zu(l)]) {
      auto it = std::lower_bound(pts[zu(k)].begin(), pts[zu(k)].end(), w);
      where.push_back(zu(static_cast<int>(it - pts[zu(k)].begin())));
    }
    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < lims[zu(l)].families.size(); ++i)
      lookup[lims[zu(l)].families[i]] = static_cast<int>(i);
    set_fn m;
    m.cod = static_cast<int>(lims[zu(l)].families.size());
    for (const auto& fam : lims[zu(k)].families) {
      std::vector<int> proj;
      for (std::size_t pos : where) proj.push_back(fam[pos]);
      auto it = lookup.find(proj);
      if (it == lookup.end())
        throw validation_error("direct image oracle: family projection failed");
      m.to.push_back(it->second);
    }
    given[{k, l}] = std::move(m);
  }
  return make_copresheaf(qd, std::move(sets), given);
}

// Exhaustive reconstruction round trips at a pointwise size bound.
struct sweep_result {
  bool sheaves_ok = true;
  bool sections_ok = true;
  std::string sheaf_note;
  std::string section_note;
  std::vector<sheaf> sheaves;
  std::vector<section<finset_backend>> transports;
  std::vector<section<finset_backend>> sections;
};

sweep_result reconstruction_sweep(const strat_space& x, const lax_diagram<finset_backend>& gd,
                                  int max_size, std::size_t cap, bool keep) {
  sweep_result out;
  std::vector<sheaf> sheaves = enumerate_copresheaves(x.space, max_size);
  int bad = 0;
  std::string why;
  for (const sheaf& f : sheaves) {
    try {
      section<finset_backend> s = transport(x, gd, f);
      reconstruction_data rd = reconstruct_full(x, gd, s);
      nat_map cmp = sheaf_comparison(x, gd, f, rd);
      if (!nat_is_iso(cmp)) {
        ++bad;
        if (why.empty()) why = "comparison not invertible";
      }
      if (keep) out.transports.push_back(std::move(s));
    } catch (const validation_error& e) {
      ++bad;
      if (why.empty()) why = e.what();
    }
  }
  out.sheaves_ok = bad == 0;
  out.sheaf_note = out.sheaves_ok
                       ? std::to_string(sheaves.size()) + " sheaves"
                       : why + " (" + std::to_string(bad) + " of " +
                             std::to_string(sheaves.size()) + ")";
  if (keep) out.sheaves = std::move(sheaves);

  try {
    std::vector<section<finset_backend>> secs =
        enumerate_sections(gd, static_cast<std::size_t>(max_size), cap);
    int sbad = 0;
    std::string swhy;
    for (const auto& s : secs) {
      try {
        reconstruction_data rd = reconstruct_full(x, gd, s);
        section_map<finset_backend> m = section_comparison(x, gd, s, rd);
        if (!section_map_is_iso(m)) {
          ++sbad;
          if (swhy.empty()) swhy = "comparison not invertible";
        }
      } catch (const validation_error& e) {
        ++sbad;
        if (swhy.empty()) swhy = e.what();
      }
    }
    out.sections_ok = sbad == 0;
    out.section_note = out.sections_ok
                           ? std::to_string(secs.size()) + " sections"
                           : swhy + " (" + std::to_string(sbad) + " of " +
                                 std::to_string(secs.size()) + ")";
    if (keep) out.sections = std::move(secs);
  } catch (const validation_error& e) {
    out.sections_ok = false;
    out.section_note = e.what();
  }
  return out;
}

}  // namespace

check_list map_functoriality(const strat_map& g, const map_check_options& opt) {
  check_list out;
  const strat_space& xs = g.src;
  const strat_space& xd = g.dst;
  monotone_map gm = g.as_monotone();
  std::mt19937_64 rng(opt.seed);

  bool square = xs.strat.equals(xd.strat);
  for (int w = 0; square && w < xs.space.size(); ++w)
    if (xd.pi[zu(g.to[zu(w)])] != xs.pi[zu(w)]) square = false;
  out.add("projection_square", square);
  if (!square) return out;

  lax_diagram<finset_backend> gds, gdd;
  try {
    gds = gluing_diagram(xs);
    gdd = gluing_diagram(xd);
  } catch (const validation_error& e) {
    out.add("gluing_diagrams_valid", false, e.what());
    return out;
  }
  out.add("gluing_diagrams_valid", true);

  std::vector<sheaf> pool =
      sample_objects<finset_backend>({xs.space}, opt.max_size, opt.samples, opt.sample_size, rng);
  bool formula = true;
  std::string fwhy;
  for (const sheaf& f : pool) {
    sheaf gi = direct_image(g, f);
    sheaf oracle = direct_image_oracle(g, f);
    bool sizes = true;
    for (int k = 0; k < xd.space.size(); ++k)
      if (gi.sets[zu(k)].size() != oracle.sets[zu(k)].size()) sizes = false;
    if (!sizes || !copresheaf_iso(gi, oracle)) {
      formula = false;
      if (fwhy.empty()) fwhy = "pointwise limit formula fails";
    }
  }
  out.add("direct_image_formula", formula,
          formula ? std::to_string(pool.size()) + " inputs" : fwhy);

  bool funct = true;
  for (const sheaf& f : pool)
    if (!nat_equal(right_kan(gm, nat_identity(f)), nat_identity(direct_image(g, f))))
      funct = false;
  int triples = 0;
  for (std::size_t i = 0; i + 2 < pool.size() && triples < 2; ++i) {
    std::vector<nat_map> h1 = homs_capped(pool[i], pool[i + 1], 256);
    std::vector<nat_map> h2 = homs_capped(pool[i + 1], pool[i + 2], 256);
    if (h1.empty() || h2.empty()) continue;
    ++triples;
    const nat_map& m1 = h1.front();
    const nat_map& m2 = h2.front();
    if (!nat_equal(right_kan(gm, nat_compose(m2, m1)),
                   nat_compose(right_kan(gm, m2), right_kan(gm, m1))))
      funct = false;
  }
  out.add("direct_image_functorial", funct,
          std::to_string(pool.size()) + " identities, " + std::to_string(triples) +
              " composites");

  bool lands = true;
  int land_inputs = 0;
  for (int p = 0; p < xs.strat.size(); ++p) {
    std::vector<copresheaf> pool_p = sample_objects<finset_backend>(
        xs.stratum_cat(p), opt.max_size, opt.samples, opt.sample_size, rng);
    for (const copresheaf& y : pool_p) {
      ++land_inputs;
      nat_map land = stratum_unit(xd, p, right_kan(gm, stratum_embed(xs, p, y)));
      if (!nat_is_iso(land)) lands = false;
    }
  }
  out.add("direct_image_lands_in_strata", lands, std::to_string(land_inputs) + " inputs");

  bool fiber_ok = true;
  int fiber_composites = 0;
  for (int p = 0; p < xs.strat.size(); ++p) {
    std::vector<copresheaf> pool_p =
        finset_backend::enumerate_objects(xs.stratum_cat(p), opt.max_size);
    for (const copresheaf& y : pool_p)
      if (!nat_equal(stratum_pushforward_mor(g, p, nat_identity(y)),
                     nat_identity(stratum_pushforward(g, p, y))))
        fiber_ok = false;
    for (std::size_t i = 0; i + 2 < pool_p.size() && fiber_composites < 2 * (p + 1); ++i) {
      std::vector<nat_map> h1 = homs_capped(pool_p[i], pool_p[i + 1], 256);
      std::vector<nat_map> h2 = homs_capped(pool_p[i + 1], pool_p[i + 2], 256);
      if (h1.empty() || h2.empty()) continue;
      ++fiber_composites;
      if (!nat_equal(stratum_pushforward_mor(g, p, nat_compose(h2.front(), h1.front())),
                     nat_compose(stratum_pushforward_mor(g, p, h2.front()),
                                 stratum_pushforward_mor(g, p, h1.front()))))
        fiber_ok = false;
    }
  }
  out.add("fiber_functors_functorial", fiber_ok,
          std::to_string(fiber_composites) + " composites");

  bool natural = true;
  bool coherent = true;
  bool subterminal_inv = true;
  std::string cell_why;
  try {
    for (auto [a, b] : xs.op.strict_pairs()) {
      std::vector<copresheaf> pool_a = sample_objects<finset_backend>(
          xs.stratum_cat(a), opt.max_size, opt.samples, opt.sample_size, rng);
      int squares = 0;
      for (std::size_t i = 0; i < pool_a.size() && squares < 4; ++i)
        for (std::size_t j = 0; j < pool_a.size() && squares < 4; ++j) {
          std::vector<nat_map> homs = homs_capped(pool_a[i], pool_a[j], 256);
          if (homs.empty()) continue;
          ++squares;
          const nat_map& m = homs.front();
          nat_map lhs = nat_compose(pushforward_cell(g, a, b, m.dst),
                                    apply_mor(gdd.tau_at(a, b), stratum_pushforward_mor(g, a, m)));
          nat_map rhs = nat_compose(stratum_pushforward_mor(g, b, apply_mor(gds.tau_at(a, b), m)),
                                    pushforward_cell(g, a, b, m.src));
          if (!nat_equal(lhs, rhs)) natural = false;
        }
      for (const copresheaf& y : finset_backend::enumerate_objects(xs.stratum_cat(a), 1))
        if (!nat_is_iso(pushforward_cell(g, a, b, y))) subterminal_inv = false;
    }
    for (const auto& [key, cell] : gds.can) {
      (void)cell;
      int a = key[0], b = key[1], c = key[2];
      for (const copresheaf& y : finset_backend::enumerate_objects(xs.stratum_cat(a), opt.max_size)) {
        nat_map lhs = nat_compose(stratum_pushforward_mor(g, c, gds.can_at(a, b, c).at(y)),
                                  pushforward_cell(g, a, c, y));
        copresheaf gab = apply_obj(gds.tau_at(a, b), y);
        nat_map rhs = nat_compose(
            pushforward_cell(g, b, c, gab),
            nat_compose(apply_mor(gdd.tau_at(b, c), pushforward_cell(g, a, b, y)),
                        gdd.can_at(a, b, c).at(stratum_pushforward(g, a, y))));
        if (!nat_equal(lhs, rhs)) coherent = false;
      }
    }
  } catch (const validation_error& e) {
    natural = false;
    coherent = false;
    cell_why = e.what();
  }
  out.add("cells_natural", natural, cell_why);
  out.add("cells_coherent", coherent, cell_why);
  out.add("cells_invertible_on_subterminals", subterminal_inv);

  sweep_result ss = reconstruction_sweep(xs, gds, opt.max_size, 500000, false);
  out.add("source_sheaf_round_trips", ss.sheaves_ok, ss.sheaf_note);
  out.add("source_section_round_trips", ss.sections_ok, ss.section_note);
  sweep_result sd = reconstruction_sweep(xd, gdd, opt.max_size, 500000, false);
  out.add("destination_sheaf_round_trips", sd.sheaves_ok, sd.sheaf_note);
  out.add("destination_section_round_trips", sd.sections_ok, sd.section_note);
  return out;
}

check_list reconstruction_report(const strat_space& x, const reconstruction_options& opt) {
  check_list out;
  out.merge(stratification_axioms(x));
  lax_diagram<finset_backend> gd;
  try {
    gd = gluing_diagram(x);
  } catch (const validation_error& e) {
    out.add("gluing_diagram_valid", false, e.what());
    return out;
  }
  out.add("gluing_diagram_valid", true,
          std::to_string(gd.tau.size()) + " transitions, " + std::to_string(gd.can.size()) +
              " cells");
  out.merge(out_of_position(x, opt.max_size));

  sweep_result sw = reconstruction_sweep(x, gd, opt.max_size, opt.section_cap, true);
  out.add("sheaf_round_trip_iso", sw.sheaves_ok, sw.sheaf_note);
  out.add("section_round_trip_iso", sw.sections_ok, sw.section_note);

  bool aligned = !sw.sheaves.empty() && sw.sheaves.size() == sw.transports.size();
  bool hom_ok = aligned;
  int pairs = 0;
  if (aligned) {
    std::size_t n = sw.sheaves.size();
    for (int k = 0; k < opt.hom_pairs; ++k) {
      std::size_t i = (zu(k) * n) / zu(std::max(opt.hom_pairs, 1));
      std::size_t j = (i + n / 2 + zu(k)) % n;
      ++pairs;
      std::uint64_t down = copresheaf_hom_size(sw.sheaves[i], sw.sheaves[j]);
      std::uint64_t up = section_hom(gd, sw.transports[i], sw.transports[j]).size();
      if (down != up) hom_ok = false;
    }
  }
  out.add("hom_cardinality_transfer", hom_ok,
          aligned ? std::to_string(pairs) + " pairs" : "skipped after round trip failures");

  int n = x.strat.size();
  bool rec_ok = true;
  int cosieves = 0;
  std::string rwhy;
  std::vector<std::vector<int>> proper;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> elems;
    for (int p = 0; p < n; ++p)
      if (mask & (1 << p)) elems.push_back(p);
    bool up_closed = true;
    for (int p : elems)
      for (int q = 0; q < n; ++q)
        if (x.strat.leq(p, q) && !(mask & (1 << q))) up_closed = false;
    if (!up_closed) continue;
    ++cosieves;
    try {
      recovered_flag rf = recover_stratification(x, gd, elems);
      if (!rf.matches || !rf.subterminal) {
        rec_ok = false;
        if (rwhy.empty()) rwhy = "recovery mismatch";
      }
    } catch (const validation_error& e) {
      rec_ok = false;
      if (rwhy.empty()) rwhy = e.what();
    }
    if (!elems.empty() && static_cast<int>(elems.size()) < n) proper.push_back(elems);
  }
  out.add("stratification_recovery", rec_ok,
          rec_ok ? std::to_string(cosieves) + " cosieves" : rwhy);

  for (const std::vector<int>& elems : proper) {
    std::string label;
    for (int p : elems) label += "_" + x.strat.name(p);
    decomposition dec = decomposition::from_sieve(x.op, elems);
    check_list rr = recollement_report(gd, dec, {});
    out.add("recollement_cosieve" + label, rr.all_pass(),
            rr.all_pass() ? std::to_string(rr.items.size()) + " checks" : first_fail(rr));

    bool agree = true;
    int samples = 0;
    std::string awhy;
    try {
      std::vector<char> in(zu(n), 0);
      for (int p : elems) in[zu(p)] = 1;
      std::vector<int> wpts;
      for (int w = 0; w < x.space.size(); ++w)
        if (in[zu(x.pi[zu(w)])]) wpts.push_back(w);
      std::vector<int> pio;
      for (int w : wpts) {
        auto it = std::lower_bound(elems.begin(), elems.end(), x.pi[zu(w)]);
        pio.push_back(static_cast<int>(it - elems.begin()));
      }
      strat_space xo = strat_space::validate(sub_poset(x.space, wpts).first,
                                             sub_poset(x.strat, elems).first, pio);
      lax_diagram<finset_backend> gdo = gluing_diagram(xo);
      for (std::size_t oi = 0; oi < elems.size(); ++oi)
        if (!xo.stratum[oi].equals(x.stratum[zu(elems[oi])])) agree = false;
      monotone_map embed_w = monotone_map::validate(xo.space, x.space, wpts);
      std::size_t nsec = sw.sections.size();
      std::size_t step = std::max<std::size_t>(1, nsec / 5);
      for (std::size_t si = 0; si < nsec && samples < 6; si += step) {
        ++samples;
        const section<finset_backend>& s = sw.sections[si];
        section<finset_backend> so;
        for (std::size_t oi = 0; oi < elems.size(); ++oi)
          so.x.push_back(s.x[zu(elems[oi])]);
        for (std::size_t oi = 0; oi < elems.size(); ++oi)
          for (std::size_t oj = 0; oj < elems.size(); ++oj)
            if (xo.op.lt(static_cast<int>(oi), static_cast<int>(oj)))
              so.phi.insert({{static_cast<int>(oi), static_cast<int>(oj)},
                             s.phi_at(elems[oi], elems[oj])});
        std::string why2;
        if (!validate_section(gdo, so, &why2)) {
          agree = false;
          if (awhy.empty()) awhy = why2;
          continue;
        }
        sheaf to = reconstruct(xo, gdo, so);
        sheaf restr = apply_stage(stage_restrict{embed_w}, reconstruct(x, gd, s));
        if (!copresheaf_iso(to, restr)) agree = false;
      }
    } catch (const validation_error& e) {
      agree = false;
      awhy = e.what();
    }
    out.add("theta_restriction_cosieve" + label, agree,
            agree ? std::to_string(samples) + " sections" : awhy);
  }
  return out;
}

}  // namespace laxglue
