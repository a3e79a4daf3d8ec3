#include "laxglue/multdiagram.hpp"

#include <string>

namespace laxglue {

int mult_diagram::mult_at(int a, int b) const {
  auto it = mult.find({a, b});
  if (it == mult.end())
    throw validation_error("multiplicity diagram: missing multiplicity for " + base.name(a) +
                           " < " + base.name(b));
  return it->second;
}

const fmatrix& mult_diagram::cell_at(int a, int b, int c) const {
  auto it = cell.find({a, b, c});
  if (it == cell.end())
    throw validation_error("multiplicity diagram: missing cell for " + base.name(a) + " < " +
                           base.name(b) + " < " + base.name(c));
  return it->second;
}

check_list validate_mult_diagram(const mult_diagram& md) {
  check_list out;
  const fin_poset& base = md.base;
  bool shapes = true;
  for (auto [a, b] : base.strict_pairs())
    if (!md.mult.count({a, b}) || md.mult.at({a, b}) < 0) shapes = false;
  out.add("multiplicities_present", shapes);
  if (!shapes) return out;
  bool cells = true;
  std::string note;
  for (auto [a, b] : base.strict_pairs())
    for (int c = 0; c < base.size(); ++c) {
      if (!base.lt(b, c)) continue;
      auto it = md.cell.find({a, b, c});
      if (it == md.cell.end()) {
        cells = false;
        note = "missing cell";
        continue;
      }
      const fmatrix& m = it->second;
      if (m.p != md.p || m.rows != md.mult_at(b, c) * md.mult_at(a, b) ||
          m.cols != md.mult_at(a, c)) {
        cells = false;
        note = "cell shape wrong at " + base.name(a) + " < " + base.name(b) + " < " + base.name(c);
      }
    }
  out.add("cell_shapes", cells, note);
  if (!cells) return out;
  bool cocycle = true;
  std::string cnote;
  for (auto [a, b] : base.strict_pairs())
    for (int c = 0; c < base.size(); ++c) {
      if (!base.lt(b, c)) continue;
      for (int e = 0; e < base.size(); ++e) {
        if (!base.lt(c, e)) continue;
        fmatrix lhs = fm_mul(fm_kron(md.cell_at(b, c, e),
                                     fmatrix::ident(md.mult_at(a, b), md.p)),
                             md.cell_at(a, b, e));
        fmatrix rhs = fm_mul(fm_kron(fmatrix::ident(md.mult_at(c, e), md.p),
                                     md.cell_at(a, b, c)),
                             md.cell_at(a, c, e));
        if (!(lhs == rhs)) {
          cocycle = false;
          cnote = "cocycle fails at " + base.name(a) + " < " + base.name(b) + " < " +
                  base.name(c) + " < " + base.name(e);
        }
      }
    }
  out.add("cell_cocycle", cocycle, cnote);
  return out;
}

lax_diagram<vect_backend> to_lax(const mult_diagram& md) {
  lax_diagram<vect_backend> d;
  d.base = md.base;
  d.toposic = false;
  for (int i = 0; i < md.base.size(); ++i) d.fiber.push_back(vect_backend::cat{md.p});
  for (auto [a, b] : md.base.strict_pairs()) {
    functor_spec<vect_backend> f;
    f.dom = vect_backend::cat{md.p};
    f.cod = vect_backend::cat{md.p};
    f.stages.push_back(stage_mult{md.mult_at(a, b)});
    d.tau.insert({{a, b}, std::move(f)});
  }
  for (auto [a, b] : md.base.strict_pairs())
    for (int c = 0; c < md.base.size(); ++c) {
      if (!md.base.lt(b, c)) continue;
      fmatrix m = md.cell_at(a, b, c);
      can_cell<vect_backend> cell;
      cell.at = [m](const vect_backend::obj& x) {
        return fm_kron(m, fmatrix::ident(x.dim, m.p));
      };
      d.can.insert({{a, b, c}, std::move(cell)});
    }
  return d;
}

std::map<std::pair<int, int>, int> multiplicities_from_weights(const fin_poset& base,
                                                               const std::vector<int>& weight) {
  if (static_cast<int>(weight.size()) != base.size())
    throw validation_error("multiplicities: one weight per element required");
  std::map<std::pair<int, int>, int> out;
  for (auto [a, b] : base.strict_pairs()) {
    int wa = weight[static_cast<std::size_t>(a)], wb = weight[static_cast<std::size_t>(b)];
    if (wa <= 0 || wb <= 0 || wb % wa != 0)
      throw validation_error("multiplicities: weight of " + base.name(a) +
                             " must divide weight of " + base.name(b));
    out[{a, b}] = wb / wa;
  }
  return out;
}

mult_diagram coboundary_mult_diagram(const fin_poset& base, int p, const std::vector<int>& weight,
                                     std::mt19937_64& rng) {
  mult_diagram md;
  md.base = base;
  md.p = p;
  md.mult = multiplicities_from_weights(base, weight);
  std::map<std::pair<int, int>, fmatrix> lambda;
  for (auto [a, b] : base.strict_pairs())
    lambda.insert({{a, b}, fm_random_invertible(md.mult_at(a, b), p, rng)});
  for (auto [a, b] : base.strict_pairs())
    for (int c = 0; c < base.size(); ++c) {
      if (!base.lt(b, c)) continue;
      fmatrix m = fm_mul(fm_kron(lambda.at({b, c}), lambda.at({a, b})),
                         *fm_inverse(lambda.at({a, c})));
      md.cell.insert({{a, b, c}, std::move(m)});
    }
  return md;
}

mult_diagram strict_mult_diagram(const fin_poset& base, int p, const std::vector<int>& weight) {
  mult_diagram md;
  md.base = base;
  md.p = p;
  md.mult = multiplicities_from_weights(base, weight);
  for (auto [a, b] : base.strict_pairs())
    for (int c = 0; c < base.size(); ++c) {
      if (!base.lt(b, c)) continue;
      md.cell.insert({{a, b, c}, fmatrix::ident(md.mult_at(a, c), p)});
    }
  return md;
}

section<vect_backend> generator_section(const mult_diagram& md, int d0) {
  const fin_poset& base = md.base;
  auto mins = base.minimal_elements();
  if (mins.size() != 1) throw validation_error("generator section: base has no unique bottom");
  int b0 = mins[0];
  for (int q = 0; q < base.size(); ++q)
    if (q != b0 && !base.lt(b0, q))
      throw validation_error("generator section: bottom is not below every element");
  section<vect_backend> s;
  s.x.resize(base.size());
  for (int q = 0; q < base.size(); ++q)
    s.x[q] = vect_backend::obj{q == b0 ? d0 : md.mult_at(b0, q) * d0, md.p};
  for (auto [a, b] : base.strict_pairs()) {
    if (a == b0)
      s.phi.insert({{a, b}, fmatrix::ident(md.mult_at(b0, b) * d0, md.p)});
    else
      s.phi.insert({{a, b}, fm_kron(md.cell_at(b0, a, b), fmatrix::ident(d0, md.p))});
  }
  return s;
}

}  // namespace laxglue
