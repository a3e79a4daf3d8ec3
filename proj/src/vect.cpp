#include "laxglue/vect.hpp"

#include <algorithm>

namespace laxglue {

namespace {

int mod_inverse(int a, int p) {
  // extended Euclid; p prime, a nonzero mod p
  int t = 0, newt = 1, r = p, newr = a % p;
  while (newr != 0) {
    int q = r / newr;
    int tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw validation_error("mod_inverse: not invertible");
  return ((t % p) + p) % p;
}

void check_field(int pa, int pb) {
  if (pa != pb) throw validation_error("matrix arithmetic: field mismatch");
}

// Row-reduces m in place; returns pivot column per pivot row.
std::vector<int> rref_inplace(fmatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int r = row; r < m.rows; ++r)
      if (m.at(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(row, c), m.at(sel, c));
    int inv = mod_inverse(m.at(row, col), m.p);
    for (int c = 0; c < m.cols; ++c)
      m.at(row, c) = static_cast<std::uint8_t>(m.at(row, c) * inv % m.p);
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || m.at(r, col) == 0) continue;
      int factor = m.at(r, col);
      for (int c = 0; c < m.cols; ++c)
        m.at(r, c) = static_cast<std::uint8_t>(((m.at(r, c) - factor * m.at(row, c)) % m.p + m.p) % m.p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

fmatrix fmatrix::zero(int rows, int cols, int p) {
  fmatrix m;
  m.rows = rows;
  m.cols = cols;
  m.p = p;
  m.a.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
  return m;
}

fmatrix fmatrix::ident(int n, int p) {
  fmatrix m = zero(n, n, p);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

fmatrix fm_mul(const fmatrix& x, const fmatrix& y) {
  check_field(x.p, y.p);
  if (x.cols != y.rows) throw validation_error("matrix multiplication: shape mismatch");
  fmatrix out = fmatrix::zero(x.rows, y.cols, x.p);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      int v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        out.at(i, j) = static_cast<std::uint8_t>((out.at(i, j) + v * y.at(k, j)) % x.p);
    }
  return out;
}

fmatrix fm_add(const fmatrix& x, const fmatrix& y) {
  check_field(x.p, y.p);
  if (x.rows != y.rows || x.cols != y.cols) throw validation_error("matrix addition: shape mismatch");
  fmatrix out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] = static_cast<std::uint8_t>((out.a[i] + y.a[i]) % x.p);
  return out;
}

fmatrix fm_sub(const fmatrix& x, const fmatrix& y) {
  check_field(x.p, y.p);
  if (x.rows != y.rows || x.cols != y.cols)
    throw validation_error("matrix subtraction: shape mismatch");
  fmatrix out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i)
    out.a[i] = static_cast<std::uint8_t>(((out.a[i] - y.a[i]) % x.p + x.p) % x.p);
  return out;
}

fmatrix fm_kron(const fmatrix& x, const fmatrix& y) {
  check_field(x.p, y.p);
  fmatrix out = fmatrix::zero(x.rows * y.rows, x.cols * y.cols, x.p);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      int v = x.at(i, j);
      if (v == 0) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          out.at(i * y.rows + k, j * y.cols + l) = static_cast<std::uint8_t>(v * y.at(k, l) % x.p);
    }
  return out;
}

fmatrix fm_vstack(const std::vector<fmatrix>& blocks) {
  if (blocks.empty()) throw validation_error("vstack: no blocks");
  int cols = blocks.front().cols, p = blocks.front().p, rows = 0;
  for (const fmatrix& b : blocks) {
    check_field(b.p, p);
    if (b.cols != cols) throw validation_error("vstack: column mismatch");
    rows += b.rows;
  }
  fmatrix out = fmatrix::zero(rows, cols, p);
  int r0 = 0;
  for (const fmatrix& b : blocks) {
    for (int r = 0; r < b.rows; ++r)
      for (int c = 0; c < cols; ++c) out.at(r0 + r, c) = b.at(r, c);
    r0 += b.rows;
  }
  return out;
}

fmatrix fm_hstack(const std::vector<fmatrix>& blocks) {
  if (blocks.empty()) throw validation_error("hstack: no blocks");
  int rows = blocks.front().rows, p = blocks.front().p, cols = 0;
  for (const fmatrix& b : blocks) {
    check_field(b.p, p);
    if (b.rows != rows) throw validation_error("hstack: row mismatch");
    cols += b.cols;
  }
  fmatrix out = fmatrix::zero(rows, cols, p);
  int c0 = 0;
  for (const fmatrix& b : blocks) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < b.cols; ++c) out.at(r, c0 + c) = b.at(r, c);
    c0 += b.cols;
  }
  return out;
}

fmatrix fm_block_rows(const fmatrix& m, int first_row, int count) {
  fmatrix out = fmatrix::zero(count, m.cols, m.p);
  for (int r = 0; r < count; ++r)
    for (int c = 0; c < m.cols; ++c) out.at(r, c) = m.at(first_row + r, c);
  return out;
}

int fm_rank(fmatrix m) { return static_cast<int>(rref_inplace(m).size()); }

fmatrix fm_kernel_basis(const fmatrix& m) {
  fmatrix r = m;
  std::vector<int> pivots = rref_inplace(r);
  std::vector<char> is_pivot(static_cast<std::size_t>(m.cols), 0);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  fmatrix k = fmatrix::zero(m.cols, static_cast<int>(free_cols.size()), m.p);
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    k.at(free_cols[j], static_cast<int>(j)) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      int v = r.at(static_cast<int>(i), free_cols[j]);
      k.at(pivots[i], static_cast<int>(j)) = static_cast<std::uint8_t>(((-v) % m.p + m.p) % m.p);
    }
  }
  return k;
}

std::optional<fmatrix> fm_solve(const fmatrix& a, const fmatrix& b) {
  check_field(a.p, b.p);
  if (a.rows != b.rows) throw validation_error("solve: row mismatch");
  fmatrix aug = fm_hstack({a, b});
  std::vector<int> pivots = rref_inplace(aug);
  for (int c : pivots)
    if (c >= a.cols) return std::nullopt;
  fmatrix x = fmatrix::zero(a.cols, b.cols, a.p);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (int j = 0; j < b.cols; ++j) x.at(pivots[i], j) = aug.at(static_cast<int>(i), a.cols + j);
  return x;
}

std::optional<fmatrix> fm_inverse(const fmatrix& m) {
  if (m.rows != m.cols) return std::nullopt;
  auto x = fm_solve(m, fmatrix::ident(m.rows, m.p));
  if (!x) return std::nullopt;
  if (!(fm_mul(m, *x) == fmatrix::ident(m.rows, m.p))) return std::nullopt;
  return x;
}

bool fm_is_invertible(const fmatrix& m) { return m.rows == m.cols && fm_rank(m) == m.rows; }

std::vector<fmatrix> fm_enumerate(int rows, int cols, int p, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < rows * cols; ++i) {
    total *= static_cast<std::uint64_t>(p);
    if (total > cap) throw validation_error("matrix enumeration exceeded cap");
  }
  std::vector<fmatrix> out;
  fmatrix m = fmatrix::zero(rows, cols, p);
  while (true) {
    out.push_back(m);
    std::size_t pos = m.a.size();
    while (pos > 0 && m.a[pos - 1] == p - 1) m.a[--pos] = 0;
    if (pos == 0) break;
    ++m.a[pos - 1];
  }
  return out;
}

fmatrix fm_random(int rows, int cols, int p, std::mt19937_64& rng) {
  fmatrix m = fmatrix::zero(rows, cols, p);
  std::uniform_int_distribution<int> d(0, p - 1);
  for (auto& v : m.a) v = static_cast<std::uint8_t>(d(rng));
  return m;
}

fmatrix fm_random_invertible(int n, int p, std::mt19937_64& rng) {
  while (true) {
    fmatrix m = fm_random(n, n, p, rng);
    if (fm_is_invertible(m)) return m;
  }
}

vect_backend::mor vect_backend::unique_to(const obj& src, const obj& terminal_like) {
  if (terminal_like.dim != 0) throw validation_error("unique_to: target is not zero-dimensional");
  return fmatrix::zero(0, src.dim, src.p);
}

vect_backend::mor vect_backend::unique_from(const obj& initial_like, const obj& dst) {
  if (initial_like.dim != 0) throw validation_error("unique_from: source is not zero-dimensional");
  return fmatrix::zero(dst.dim, 0, dst.p);
}

vect_backend::mor vect_backend::inverse(const mor& f) {
  auto inv = fm_inverse(f);
  if (!inv) throw validation_error("matrix inverse: not invertible");
  return *inv;
}

std::optional<vect_backend::mor> vect_backend::iso_check(const obj& a, const obj& b) {
  if (a.dim != b.dim || a.p != b.p) return std::nullopt;
  return fmatrix::ident(a.dim, a.p);
}

std::vector<vect_backend::mor> vect_backend::hom(const obj& a, const obj& b) {
  return fm_enumerate(b.dim, a.dim, a.p);
}

std::uint64_t vect_backend::hom_size(const obj& a, const obj& b) {
  std::uint64_t total = 1;
  for (int i = 0; i < a.dim * b.dim; ++i) total *= static_cast<std::uint64_t>(a.p);
  return total;
}

std::vector<vect_backend::obj> vect_backend::enumerate_objects(const cat& c, int max_size) {
  std::vector<obj> out;
  for (int d = 0; d <= max_size; ++d) out.push_back(obj{d, c.p});
  return out;
}

vect_backend::obj vect_backend::random_object(const cat& c, int max_size, std::mt19937_64& rng) {
  return obj{std::uniform_int_distribution<int>(0, max_size)(rng), c.p};
}

vect_backend::limit_data vect_backend::limit(const cat& c, const shaped_diagram<vect_backend>& d) {
  for (const obj& x : d.at)
    if (x.p != c.p) throw validation_error("limit: field mismatch");
  auto closed = close_edges(d);
  const int nv = d.shape.size();
  std::vector<int> offset(static_cast<std::size_t>(nv) + 1, 0);
  for (int v = 0; v < nv; ++v)
    offset[static_cast<std::size_t>(v) + 1] = offset[static_cast<std::size_t>(v)] + d.at[static_cast<std::size_t>(v)].dim;
  int total = offset[static_cast<std::size_t>(nv)];
  // Constraint rows: x_b - M_ab x_a = 0 for every closed edge.
  int n_rows = 0;
  for (const auto& [key, m] : closed) n_rows += m.rows;
  fmatrix sys = fmatrix::zero(n_rows, total, c.p);
  int r0 = 0;
  for (const auto& [key, m] : closed) {
    auto [a, b] = key;
    for (int r = 0; r < m.rows; ++r) {
      sys.at(r0 + r, offset[static_cast<std::size_t>(b)] + r) = 1;
      for (int cc = 0; cc < m.cols; ++cc)
        sys.at(r0 + r, offset[static_cast<std::size_t>(a)] + cc) =
            static_cast<std::uint8_t>(((-(int)m.at(r, cc)) % c.p + c.p) % c.p);
    }
    r0 += m.rows;
  }
  fmatrix k = n_rows == 0 ? fmatrix::ident(total, c.p) : fm_kernel_basis(sys);
  limit_data out;
  out.apex = obj{k.cols, c.p};
  for (int v = 0; v < nv; ++v)
    out.cone.push_back(fm_block_rows(k, offset[static_cast<std::size_t>(v)], d.at[static_cast<std::size_t>(v)].dim));
  return out;
}

std::optional<vect_backend::mor> vect_backend::mediate(const shaped_diagram<vect_backend>& d,
                                                       const limit_data& lim, const obj& a,
                                                       const std::vector<mor>& cone) {
  const int nv = d.shape.size();
  if (static_cast<int>(cone.size()) != nv) return std::nullopt;
  for (int v = 0; v < nv; ++v) {
    if (cone[static_cast<std::size_t>(v)].cols != a.dim) return std::nullopt;
    if (cone[static_cast<std::size_t>(v)].rows != d.at[static_cast<std::size_t>(v)].dim) return std::nullopt;
  }
  std::vector<fmatrix> kb, cb;
  for (int v = 0; v < nv; ++v) {
    kb.push_back(lim.cone[static_cast<std::size_t>(v)]);
    cb.push_back(cone[static_cast<std::size_t>(v)]);
  }
  if (nv == 0) return fmatrix::zero(lim.apex.dim, a.dim, a.p);
  fmatrix k = fm_vstack(kb);
  fmatrix target = fm_vstack(cb);
  auto x = fm_solve(k, target);
  if (!x) return std::nullopt;
  if (!(fm_mul(k, *x) == target)) return std::nullopt;
  return x;
}

std::string vect_backend::describe(const obj& x) {
  return "F" + std::to_string(x.p) + "^" + std::to_string(x.dim);
}

vect_backend::obj apply_stage(const stage_mult& s, const vect_backend::obj& x) {
  return vect_backend::obj{s.m * x.dim, x.p};
}

fmatrix apply_stage(const stage_mult& s, const fmatrix& f) {
  return fm_kron(fmatrix::ident(s.m, f.p), f);
}

}  // namespace laxglue
