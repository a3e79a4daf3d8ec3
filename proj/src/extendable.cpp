#include "laxglue/extendable.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace laxglue {

namespace {

int spine_mult(const mult_diagram& md, int k) { return md.mult_at(k - 1, k); }

// The cell at (i, i+1, j) applied at a d-dimensional object.
fmatrix applied_cell(const mult_diagram& md, int i, int j, int d) {
  return fm_kron(md.cell_at(i, i + 1, j), fmatrix::ident(d, md.p));
}

fmatrix tau_of(const mult_diagram& md, int a, int b, const fmatrix& m) {
  return fm_kron(fmatrix::ident(md.mult_at(a, b), md.p), m);
}

std::uint64_t checked_pow(int p, std::uint64_t e) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (out > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(p))
      throw validation_error("fiber product count: overflow");
    out *= static_cast<std::uint64_t>(p);
  }
  return out;
}

bool dims_roll(std::vector<int>& dims, int max_dim) {
  std::size_t k = dims.size();
  while (k > 0) {
    --k;
    if (++dims[k] <= max_dim) return true;
    dims[k] = 0;
  }
  return false;
}

}  // namespace

const fmatrix& sd1_section::w_at(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > w.size())
    throw validation_error("spine: level out of range");
  return w[static_cast<std::size_t>(k - 1)];
}

int chain_length(const mult_diagram& md) {
  int n = md.base.size() - 1;
  if (n < 0) throw validation_error("chain diagram: empty base");
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (!md.base.lt(a, b)) throw validation_error("chain diagram: base is not a chain");
  return n;
}

check_list validate_sd1_section(const mult_diagram& md, const sd1_section& t) {
  check_list cl;
  int n = chain_length(md);
  bool sizes = static_cast<int>(t.v.size()) == n + 1 && static_cast<int>(t.w.size()) == n;
  cl.add("spine_sizes", sizes);
  if (!sizes) return cl;
  bool fields = true;
  for (const auto& x : t.v) fields = fields && x.p == md.p && x.dim >= 0;
  for (const auto& m : t.w) fields = fields && m.p == md.p;
  cl.add("spine_field", fields);
  bool shapes = true;
  for (int k = 1; k <= n; ++k) {
    const fmatrix& m = t.w_at(k);
    shapes = shapes && m.rows == spine_mult(md, k) * t.v[static_cast<std::size_t>(k - 1)].dim &&
             m.cols == t.v[static_cast<std::size_t>(k)].dim;
  }
  cl.add("spine_shapes", shapes);
  return cl;
}

sd1_section gamma_restrict(const mult_diagram& md, const section<vect_backend>& s) {
  int n = chain_length(md);
  if (static_cast<int>(s.x.size()) != n + 1)
    throw validation_error("spine restriction: section size mismatch");
  sd1_section t;
  t.v = s.x;
  for (int k = 1; k <= n; ++k) t.w.push_back(s.phi_at(k - 1, k));
  return t;
}

extendable_certificate check_extendable(const mult_diagram& md, const sd1_section& t) {
  int n = chain_length(md);
  if (!validate_sd1_section(md, t).all_pass())
    throw validation_error("extendable check: malformed spine");
  extendable_certificate cert;
  for (int k = 2; k <= n; ++k)
    for (int i = 0; i + k <= n; ++i) {
      if (t.v[static_cast<std::size_t>(i)].dim == 0) continue;
      const fmatrix& m = md.cell_at(i, i + 1, i + k);
      if (m.rows != m.cols || !fm_is_invertible(m)) cert.failing.push_back({i, i + 1, i + k});
    }
  cert.ok = cert.failing.empty();
  return cert;
}

bool is_extendable(const mult_diagram& md, const sd1_section& t) {
  return check_extendable(md, t).ok;
}

section<vect_backend> extend(const mult_diagram& md, const sd1_section& t) {
  int n = chain_length(md);
  extendable_certificate cert = check_extendable(md, t);
  if (!cert.ok) {
    const auto& tr = cert.failing.front();
    throw validation_error("extend: spine is not extendable at (" + std::to_string(tr[0]) + ", " +
                           std::to_string(tr[1]) + ", " + std::to_string(tr[2]) + ")");
  }
  section<vect_backend> s;
  s.x = t.v;
  for (int k = 1; k <= n; ++k) s.phi.insert({{k - 1, k}, t.w_at(k)});
  for (int span = 2; span <= n; ++span)
    for (int i = 0; i + span <= n; ++i) {
      int j = i + span;
      // the cocycle triple (i, i+1, j) rearranged for the long component
      fmatrix up = tau_of(md, i + 1, j, s.phi.at({i, i + 1}));
      fmatrix rhs = fm_mul(up, s.phi.at({i + 1, j}));
      auto inv = fm_inverse(applied_cell(md, i, j, t.v[static_cast<std::size_t>(i)].dim));
      if (!inv) throw validation_error("extend: certified cell failed to invert");
      s.phi.insert({{i, j}, fm_mul(*inv, rhs)});
    }
  std::string why;
  if (!validate_section(to_lax(md), s, &why))
    throw validation_error("extend: result is not a section: " + why);
  return s;
}

one_generated_verdict check_one_generated(const mult_diagram& md,
                                          const section<vect_backend>& s) {
  int n = chain_length(md);
  lax_diagram<vect_backend> d = to_lax(md);
  part_section<vect_backend> ps = to_part(d, s);
  one_generated_verdict out;
  for (int k = 2; k <= n; ++k)
    for (int i = 0; i + k <= n; ++i) {
      chain sigma = make_chain(d.base, {i, i + k});
      chain mid = make_chain(d.base, {i, i + 1, i + k});
      if (!fm_is_invertible(eval_inclusion(d, ps, sigma, mid))) out.edge_isos = false;
      // the cube of chains from i to i+k through at least one interior point
      chain_shape cube = interval_cube(n, i, k);
      std::vector<chain> verts;
      for (const chain& c : cube.vertex)
        if (!(c == sigma)) verts.push_back(c);
      std::vector<std::string> names;
      std::vector<std::pair<std::string, std::string>> below;
      for (const chain& c : verts) names.push_back(chain_display(d.base, c));
      for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = 0; b < verts.size(); ++b)
          if (a != b && verts[a].subset_of(verts[b])) below.push_back({names[a], names[b]});
      shaped_diagram<vect_backend> dia;
      dia.fiber = d.fiber[static_cast<std::size_t>(i + k)];
      dia.shape = fin_poset::validate(names, below);
      for (std::size_t a = 0; a < verts.size(); ++a) dia.at.push_back(eval_chain(d, ps, verts[a]));
      for (auto [a, b] : dia.shape.covers())
        dia.edge.insert({{a, b}, eval_inclusion(d, ps, verts[static_cast<std::size_t>(a)],
                                                verts[static_cast<std::size_t>(b)])});
      auto lim = vect_backend::limit(dia.fiber, dia);
      std::vector<fmatrix> cone;
      for (std::size_t a = 0; a < verts.size(); ++a)
        cone.push_back(eval_inclusion(d, ps, sigma, verts[a]));
      auto med = vect_backend::mediate(dia, lim, eval_chain(d, ps, sigma), cone);
      if (!med || !fm_is_invertible(*med)) out.cube_limits = false;
    }
  return out;
}

bool is_one_generated(const mult_diagram& md, const section<vect_backend>& s) {
  one_generated_verdict v = check_one_generated(md, s);
  if (!v.agree())
    throw validation_error("one-generation: cube-limit and edge-iso verdicts disagree");
  return v.edge_isos;
}

std::vector<sd1_section> enumerate_sd1_sections(const mult_diagram& md, int max_dim,
                                                std::size_t cap) {
  int n = chain_length(md);
  std::vector<sd1_section> out;
  std::vector<int> dims(static_cast<std::size_t>(n) + 1, 0);
  while (true) {
    std::vector<std::vector<fmatrix>> pools;
    std::uint64_t total = 1;
    for (int k = 1; k <= n; ++k) {
      pools.push_back(fm_enumerate(spine_mult(md, k) * dims[static_cast<std::size_t>(k - 1)],
                                   dims[static_cast<std::size_t>(k)], md.p, cap));
      total *= pools.back().size();
      if (out.size() + total > cap) throw validation_error("spine enumeration: exceeds cap");
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
      sd1_section t;
      for (int l = 0; l <= n; ++l)
        t.v.push_back(vect_backend::obj{dims[static_cast<std::size_t>(l)], md.p});
      for (int k = 1; k <= n; ++k)
        t.w.push_back(pools[static_cast<std::size_t>(k - 1)][pick[static_cast<std::size_t>(k - 1)]]);
      out.push_back(std::move(t));
      std::size_t k = pick.size();
      bool rolled = true;
      while (k > 0) {
        --k;
        if (++pick[k] < pools[k].size()) {
          rolled = false;
          break;
        }
        pick[k] = 0;
      }
      if (rolled) break;
    }
    if (!dims_roll(dims, max_dim)) break;
  }
  return out;
}

sd1_section random_sd1_section(const mult_diagram& md, int max_dim, std::mt19937_64& rng) {
  int n = chain_length(md);
  sd1_section t;
  for (int l = 0; l <= n; ++l)
    t.v.push_back(vect_backend::random_object(vect_backend::cat{md.p}, max_dim, rng));
  for (int k = 1; k <= n; ++k)
    t.w.push_back(fm_random(spine_mult(md, k) * t.v[static_cast<std::size_t>(k - 1)].dim,
                            t.v[static_cast<std::size_t>(k)].dim, md.p, rng));
  return t;
}

std::uint64_t count_fiber_product_points(const mult_diagram& md, int max_dim) {
  int n = chain_length(md);
  std::uint64_t total = 0;
  std::vector<int> dims(static_cast<std::size_t>(n) + 1, 0);
  while (true) {
    std::uint64_t prod = 1;
    for (int k = 1; k <= n; ++k) {
      std::uint64_t e = static_cast<std::uint64_t>(spine_mult(md, k)) *
                        static_cast<std::uint64_t>(dims[static_cast<std::size_t>(k - 1)]) *
                        static_cast<std::uint64_t>(dims[static_cast<std::size_t>(k)]);
      std::uint64_t f = checked_pow(md.p, e);
      if (prod > (std::uint64_t(1) << 62) / (f == 0 ? 1 : f))
        throw validation_error("fiber product count: overflow");
      prod *= f;
    }
    total += prod;
    if (!dims_roll(dims, max_dim)) break;
  }
  return total;
}

bool sd1_map::operator<(const sd1_map& o) const {
  if (psi.size() != o.psi.size()) return psi.size() < o.psi.size();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const fmatrix& a = psi[i];
    const fmatrix& b = o.psi[i];
    if (a.rows != b.rows) return a.rows < b.rows;
    if (a.cols != b.cols) return a.cols < b.cols;
    if (a.a != b.a) return a.a < b.a;
  }
  return false;
}

bool validate_sd1_map(const mult_diagram& md, const sd1_section& s, const sd1_section& t,
                      const sd1_map& m) {
  int n = chain_length(md);
  if (static_cast<int>(m.psi.size()) != n + 1) return false;
  for (int l = 0; l <= n; ++l) {
    const fmatrix& f = m.psi[static_cast<std::size_t>(l)];
    if (f.p != md.p || f.rows != t.v[static_cast<std::size_t>(l)].dim ||
        f.cols != s.v[static_cast<std::size_t>(l)].dim)
      return false;
  }
  for (int k = 1; k <= n; ++k) {
    fmatrix lhs = fm_mul(t.w_at(k), m.psi[static_cast<std::size_t>(k)]);
    fmatrix rhs = fm_mul(tau_of(md, k - 1, k, m.psi[static_cast<std::size_t>(k - 1)]), s.w_at(k));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

bool sd1_map_is_iso(const sd1_map& m) {
  for (const fmatrix& f : m.psi)
    if (!fm_is_invertible(f)) return false;
  return true;
}

std::vector<sd1_map> sd1_hom(const mult_diagram& md, const sd1_section& s, const sd1_section& t,
                             std::uint64_t cap) {
  int n = chain_length(md);
  std::vector<std::vector<fmatrix>> pools;
  for (int l = 0; l <= n; ++l) {
    if (vect_backend::hom_size(s.v[static_cast<std::size_t>(l)],
                               t.v[static_cast<std::size_t>(l)]) > cap)
      throw validation_error("spine hom: component hom set exceeds cap");
    pools.push_back(
        vect_backend::hom(s.v[static_cast<std::size_t>(l)], t.v[static_cast<std::size_t>(l)]));
  }
  std::vector<sd1_map> out;
  sd1_map cur;
  cur.psi.resize(static_cast<std::size_t>(n) + 1);
  auto rec = [&](auto&& self, int level) -> void {
    if (level > n) {
      out.push_back(cur);
      if (out.size() > cap) throw validation_error("spine hom: exceeds cap");
      return;
    }
    for (const fmatrix& f : pools[static_cast<std::size_t>(level)]) {
      cur.psi[static_cast<std::size_t>(level)] = f;
      if (level >= 1) {
        fmatrix lhs = fm_mul(t.w_at(level), f);
        fmatrix rhs = fm_mul(tau_of(md, level - 1, level, cur.psi[static_cast<std::size_t>(level - 1)]),
                             s.w_at(level));
        if (!(lhs == rhs)) continue;
      }
      self(self, level + 1);
    }
  };
  rec(rec, 0);
  return out;
}

mult_diagram mult_restrict(const mult_diagram& md, int lo, int hi) {
  int n = chain_length(md);
  if (lo < 0 || hi > n || lo > hi) throw validation_error("subchain: bad range");
  mult_diagram out;
  out.base = delta(hi - lo);
  out.p = md.p;
  for (int a = lo; a <= hi; ++a)
    for (int b = a + 1; b <= hi; ++b) out.mult.insert({{a - lo, b - lo}, md.mult_at(a, b)});
  for (int a = lo; a <= hi; ++a)
    for (int b = a + 1; b <= hi; ++b)
      for (int c = b + 1; c <= hi; ++c)
        out.cell.insert({{a - lo, b - lo, c - lo}, md.cell_at(a, b, c)});
  return out;
}

sd1_section sd1_restrict_low(const mult_diagram& md, int k, const sd1_section& t) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  sd1_section out;
  out.v.assign(t.v.begin(), t.v.begin() + k + 1);
  out.w.assign(t.w.begin(), t.w.begin() + k);
  return out;
}

sd1_section sd1_restrict_high(const mult_diagram& md, int k, const sd1_section& t) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  sd1_section out;
  out.v.assign(t.v.begin() + k + 1, t.v.end());
  out.w.assign(t.w.begin() + k + 1, t.w.end());
  return out;
}

sd1_section sd1_push_open(const mult_diagram& md, int k, const sd1_section& u) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  sd1_section out = u;
  for (int l = k + 1; l <= n; ++l) {
    int dim = md.mult_at(l - 1, l) * out.v.back().dim;
    out.v.push_back(vect_backend::obj{dim, md.p});
    out.w.push_back(fmatrix::ident(dim, md.p));
  }
  return out;
}

sd1_section sd1_extend_open(const mult_diagram& md, int k, const sd1_section& u) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  sd1_section out = u;
  for (int l = k + 1; l <= n; ++l) {
    out.w.push_back(fmatrix::zero(md.mult_at(l - 1, l) * out.v.back().dim, 0, md.p));
    out.v.push_back(vect_backend::obj{0, md.p});
  }
  return out;
}

sd1_section sd1_push_closed(const mult_diagram& md, int k, const sd1_section& z) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  sd1_section out;
  for (int l = 0; l <= k; ++l) {
    out.v.push_back(vect_backend::obj{0, md.p});
    if (l >= 1) out.w.push_back(fmatrix::zero(0, 0, md.p));
  }
  out.v.insert(out.v.end(), z.v.begin(), z.v.end());
  // the crossing arrow lands in the empty pushforward of the terminal object
  out.w.push_back(fmatrix::zero(0, z.v.front().dim, md.p));
  out.w.insert(out.w.end(), z.w.begin(), z.w.end());
  return out;
}

namespace {

// The unit of the open pushforward adjunction at t: identity on the low
// part, then the spine arrows transported up level by level.
sd1_map open_unit(const mult_diagram& md, int k, const sd1_section& t) {
  int n = chain_length(md);
  sd1_map eta;
  for (int l = 0; l <= k; ++l)
    eta.psi.push_back(fmatrix::ident(t.v[static_cast<std::size_t>(l)].dim, md.p));
  for (int l = k + 1; l <= n; ++l)
    eta.psi.push_back(l == k + 1
                          ? t.w_at(l)
                          : fm_mul(tau_of(md, l - 1, l, eta.psi[static_cast<std::size_t>(l - 1)]),
                                   t.w_at(l)));
  return eta;
}

// The unit of the closed restriction adjunction at t: collapse the low part.
sd1_map closed_unit(const mult_diagram& md, int k, const sd1_section& t) {
  int n = chain_length(md);
  sd1_map eta;
  for (int l = 0; l <= n; ++l)
    eta.psi.push_back(l <= k
                          ? fmatrix::zero(0, t.v[static_cast<std::size_t>(l)].dim, md.p)
                          : fmatrix::ident(t.v[static_cast<std::size_t>(l)].dim, md.p));
  return eta;
}

sd1_map truncate_low(const sd1_map& m, int k) {
  sd1_map out;
  out.psi.assign(m.psi.begin(), m.psi.begin() + k + 1);
  return out;
}

sd1_map truncate_high(const sd1_map& m, int k) {
  sd1_map out;
  out.psi.assign(m.psi.begin() + k + 1, m.psi.end());
  return out;
}

}  // namespace

check_list staircase_recollement(const mult_diagram& md, int k, const staircase_options& opt) {
  int n = chain_length(md);
  if (k < 0 || k >= n) throw validation_error("staircase: split out of range");
  check_list cl;
  mult_diagram low = mult_restrict(md, 0, k);
  mult_diagram high = mult_restrict(md, k + 1, n);
  std::mt19937_64 rng(opt.seed);
  auto pool_of = [&](const mult_diagram& m) {
    std::vector<sd1_section> pool = enumerate_sd1_sections(m, opt.max_dim, 4000);
    for (int i = 0; i < opt.sampled; ++i) pool.push_back(random_sd1_section(m, opt.sample_dim, rng));
    return pool;
  };
  std::vector<sd1_section> full_pool = pool_of(md);
  std::vector<sd1_section> low_pool = pool_of(low);
  std::vector<sd1_section> high_pool = pool_of(high);

  bool pools_valid = !full_pool.empty() && !low_pool.empty() && !high_pool.empty();
  for (const auto& t : full_pool) pools_valid = pools_valid && validate_sd1_section(md, t).all_pass();
  for (const auto& u : low_pool) pools_valid = pools_valid && validate_sd1_section(low, u).all_pass();
  for (const auto& z : high_pool)
    pools_valid = pools_valid && validate_sd1_section(high, z).all_pass();
  cl.add("spine_pools_valid", pools_valid);

  bool push_restr = true, ext_restr = true, closed_restr = true, closed_low_terminal = true;
  for (const auto& u : low_pool) {
    push_restr = push_restr && sd1_restrict_low(md, k, sd1_push_open(md, k, u)) == u;
    ext_restr = ext_restr && sd1_restrict_low(md, k, sd1_extend_open(md, k, u)) == u;
  }
  for (const auto& z : high_pool) {
    sd1_section iz = sd1_push_closed(md, k, z);
    closed_restr = closed_restr && sd1_restrict_high(md, k, iz) == z;
    for (int l = 0; l <= k; ++l)
      closed_low_terminal = closed_low_terminal && iz.v[static_cast<std::size_t>(l)].dim == 0;
  }
  cl.add("restrict_after_open_pushforward_is_identity", push_restr);
  cl.add("restrict_after_open_extension_is_identity", ext_restr);
  cl.add("restrict_after_closed_pushforward_is_identity", closed_restr);
  cl.add("open_restrict_of_closed_pushforward_is_terminal", closed_low_terminal);

  // the image characterization: the pushforward unit is a spine map, and it
  // is invertible exactly when every arrow above the split is invertible
  bool unit_valid = true, image_char = true, closed_unit_valid = true;
  for (const auto& t : full_pool) {
    sd1_section a = sd1_push_open(md, k, sd1_restrict_low(md, k, t));
    sd1_map eta = open_unit(md, k, t);
    unit_valid = unit_valid && validate_sd1_map(md, t, a, eta);
    bool upper_iso = true;
    for (int l = k + 1; l <= n; ++l) upper_iso = upper_iso && fm_is_invertible(t.w_at(l));
    image_char = image_char && sd1_map_is_iso(eta) == upper_iso;
    sd1_section b = sd1_push_closed(md, k, sd1_restrict_high(md, k, t));
    closed_unit_valid = closed_unit_valid && validate_sd1_map(md, t, b, closed_unit(md, k, t));
  }
  cl.add("open_pushforward_unit_is_spine_map", unit_valid);
  cl.add("pushforward_image_inverts_upper_spine", image_char);
  cl.add("closed_pushforward_unit_is_spine_map", closed_unit_valid);

  // hom bijections via injective truncation transposes
  bool bij_push = true, bij_ext = true, bij_closed = true;
  int pairs = 0;
  for (const auto& t : full_pool) {
    for (const auto& u : low_pool) {
      if (pairs >= opt.hom_pairs) break;
      ++pairs;
      auto into_push = sd1_hom(md, t, sd1_push_open(md, k, u));
      auto low_homs = sd1_hom(low, sd1_restrict_low(md, k, t), u);
      std::set<sd1_map> trunc;
      bool all_valid = true;
      for (const auto& h : into_push) {
        sd1_map tr = truncate_low(h, k);
        all_valid = all_valid && validate_sd1_map(low, sd1_restrict_low(md, k, t), u, tr);
        trunc.insert(tr);
      }
      bij_push = bij_push && all_valid && trunc.size() == into_push.size() &&
                 trunc == std::set<sd1_map>(low_homs.begin(), low_homs.end());

      auto from_ext = sd1_hom(md, sd1_extend_open(md, k, u), t);
      auto low_homs2 = sd1_hom(low, u, sd1_restrict_low(md, k, t));
      std::set<sd1_map> trunc2;
      bool all_valid2 = true;
      for (const auto& h : from_ext) {
        sd1_map tr = truncate_low(h, k);
        all_valid2 = all_valid2 && validate_sd1_map(low, u, sd1_restrict_low(md, k, t), tr);
        trunc2.insert(tr);
      }
      bij_ext = bij_ext && all_valid2 && trunc2.size() == from_ext.size() &&
                trunc2 == std::set<sd1_map>(low_homs2.begin(), low_homs2.end());
    }
    if (pairs >= opt.hom_pairs) break;
  }
  pairs = 0;
  for (const auto& t : full_pool) {
    for (const auto& z : high_pool) {
      if (pairs >= opt.hom_pairs) break;
      ++pairs;
      auto into_closed = sd1_hom(md, t, sd1_push_closed(md, k, z));
      auto high_homs = sd1_hom(high, sd1_restrict_high(md, k, t), z);
      std::set<sd1_map> trunc;
      bool all_valid = true;
      for (const auto& h : into_closed) {
        sd1_map tr = truncate_high(h, k);
        all_valid = all_valid && validate_sd1_map(high, sd1_restrict_high(md, k, t), z, tr);
        trunc.insert(tr);
      }
      bij_closed = bij_closed && all_valid && trunc.size() == into_closed.size() &&
                   trunc == std::set<sd1_map>(high_homs.begin(), high_homs.end());
    }
    if (pairs >= opt.hom_pairs) break;
  }
  cl.add("hom_bijection_open_pushforward", bij_push);
  cl.add("hom_bijection_open_extension", bij_ext);
  cl.add("hom_bijection_closed_pushforward", bij_closed);

  // fracture: t is the pullback of its two pushforwards over the corner
  bool frac_mediates = true, frac_map = true, frac_iso = true;
  for (const auto& t : full_pool) {
    sd1_section a = sd1_push_open(md, k, sd1_restrict_low(md, k, t));
    sd1_section b = sd1_push_closed(md, k, sd1_restrict_high(md, k, t));
    sd1_section c = sd1_push_closed(md, k, sd1_restrict_high(md, k, a));
    sd1_map eta = open_unit(md, k, t);
    sd1_map f = closed_unit(md, k, a);                     // a -> c
    sd1_map g;                                             // b -> c
    for (int l = 0; l <= n; ++l)
      g.psi.push_back(l <= k ? fmatrix::zero(0, 0, md.p) : eta.psi[static_cast<std::size_t>(l)]);
    if (!(validate_sd1_map(md, a, c, f) && validate_sd1_map(md, b, c, g))) {
      frac_map = false;
      continue;
    }
    // levelwise pullback: kernel of [f | -g], arrows mediated through the bases
    sd1_section pb;
    std::vector<fmatrix> kbasis;
    for (int l = 0; l <= n; ++l) {
      const fmatrix& fl = f.psi[static_cast<std::size_t>(l)];
      const fmatrix& gl = g.psi[static_cast<std::size_t>(l)];
      fmatrix neg = fm_sub(fmatrix::zero(gl.rows, gl.cols, md.p), gl);
      fmatrix kb = fm_kernel_basis(fm_hstack({fl, neg}));
      kbasis.push_back(kb);
      pb.v.push_back(vect_backend::obj{kb.cols, md.p});
    }
    for (int l = 1; l <= n; ++l) {
      int da = a.v[static_cast<std::size_t>(l - 1)].dim;
      fmatrix pa_prev = fm_block_rows(kbasis[static_cast<std::size_t>(l - 1)], 0, da);
      fmatrix pb_prev = fm_block_rows(kbasis[static_cast<std::size_t>(l - 1)], da,
                                      b.v[static_cast<std::size_t>(l - 1)].dim);
      int dal = a.v[static_cast<std::size_t>(l)].dim;
      fmatrix pa_l = fm_block_rows(kbasis[static_cast<std::size_t>(l)], 0, dal);
      fmatrix pb_l = fm_block_rows(kbasis[static_cast<std::size_t>(l)], dal,
                                   b.v[static_cast<std::size_t>(l)].dim);
      fmatrix sys = fm_vstack({tau_of(md, l - 1, l, pa_prev), tau_of(md, l - 1, l, pb_prev)});
      fmatrix rhs = fm_vstack({fm_mul(a.w_at(l), pa_l), fm_mul(b.w_at(l), pb_l)});
      auto sol = fm_solve(sys, rhs);
      if (!sol) {
        frac_mediates = false;
        break;
      }
      pb.w.push_back(*sol);
    }
    if (pb.w.size() != static_cast<std::size_t>(n)) continue;
    sd1_map comp;
    sd1_map iu = closed_unit(md, k, t);
    bool solved = true;
    for (int l = 0; l <= n; ++l) {
      fmatrix want = fm_vstack({eta.psi[static_cast<std::size_t>(l)],
                                iu.psi[static_cast<std::size_t>(l)]});
      auto sol = fm_solve(kbasis[static_cast<std::size_t>(l)], want);
      if (!sol) {
        solved = false;
        break;
      }
      comp.psi.push_back(*sol);
    }
    if (!solved) {
      frac_mediates = false;
      continue;
    }
    frac_map = frac_map && validate_sd1_map(md, t, pb, comp);
    frac_iso = frac_iso && sd1_map_is_iso(comp);
  }
  cl.add("fracture_pullback_mediates", frac_mediates);
  cl.add("fracture_comparison_is_spine_map", frac_map);
  cl.add("fracture_comparison_is_iso", frac_iso);
  return cl;
}

stable_grid norm_fiber_grid(const mult_diagram& md, const sd1_section& t) {
  if (chain_length(md) != 1) throw validation_error("norm grid: base must be the 2-chain");
  if (!validate_sd1_section(md, t).all_pass())
    throw validation_error("norm grid: malformed spine");
  section<vect_backend> s;
  s.x = t.v;
  s.phi.insert({{0, 1}, t.w_at(1)});
  return build_stable_grid(to_lax(md), decomposition::from_sieve(md.base, {0}), s);
}

}  // namespace laxglue
