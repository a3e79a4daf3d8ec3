#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "laxglue/poset.hpp"
#include "laxglue/shaped.hpp"

namespace laxglue {

// A dense matrix over the prime field F_p. A linear map V -> W with
// dim V = c, dim W = r is an r x c matrix acting on column vectors.
struct fmatrix {
  int rows = 0;
  int cols = 0;
  int p = 2;
  std::vector<std::uint8_t> a;

  static fmatrix zero(int rows, int cols, int p);
  static fmatrix ident(int n, int p);
  std::uint8_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
  std::uint8_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
  bool operator==(const fmatrix& o) const {
    return rows == o.rows && cols == o.cols && p == o.p && a == o.a;
  }
};

fmatrix fm_mul(const fmatrix& x, const fmatrix& y);
fmatrix fm_add(const fmatrix& x, const fmatrix& y);
fmatrix fm_sub(const fmatrix& x, const fmatrix& y);
fmatrix fm_kron(const fmatrix& x, const fmatrix& y);
fmatrix fm_vstack(const std::vector<fmatrix>& blocks);
fmatrix fm_hstack(const std::vector<fmatrix>& blocks);
fmatrix fm_block_rows(const fmatrix& m, int first_row, int count);
int fm_rank(fmatrix m);
// Columns form a basis of the kernel, echelon-normalized, deterministic.
fmatrix fm_kernel_basis(const fmatrix& m);
// Solves A X = B exactly; free variables are set to zero. Empty if unsolvable.
std::optional<fmatrix> fm_solve(const fmatrix& a, const fmatrix& b);
std::optional<fmatrix> fm_inverse(const fmatrix& m);
bool fm_is_invertible(const fmatrix& m);
std::vector<fmatrix> fm_enumerate(int rows, int cols, int p, std::uint64_t cap = 2000000);
fmatrix fm_random(int rows, int cols, int p, std::mt19937_64& rng);
fmatrix fm_random_invertible(int n, int p, std::mt19937_64& rng);

bool is_prime(int p);

// The backend of F_p vector-space fibers.
struct vect_backend {
  struct cat {
    int p = 2;
  };
  struct obj {
    int dim = 0;
    int p = 2;
    bool operator==(const obj& o) const { return dim == o.dim && p == o.p; }
  };
  using mor = fmatrix;

  struct limit_data {
    obj apex;
    std::vector<mor> cone;
  };

  static bool obj_equal(const obj& a, const obj& b) { return a == b; }
  static bool mor_equal(const mor& f, const mor& g) { return f == g; }
  static obj mor_src(const mor& f) { return obj{f.cols, f.p}; }
  static obj mor_dst(const mor& f) { return obj{f.rows, f.p}; }
  static mor identity(const obj& x) { return fmatrix::ident(x.dim, x.p); }
  static mor compose(const mor& g, const mor& f) { return fm_mul(g, f); }
  static obj terminal(const cat& c) { return obj{0, c.p}; }
  static obj initial(const cat& c) { return obj{0, c.p}; }
  static bool is_terminal_like(const cat& c, const obj& x) { return x.p == c.p && x.dim == 0; }
  static bool is_initial_like(const cat& c, const obj& x) { return x.p == c.p && x.dim == 0; }
  static mor unique_to(const obj& src, const obj& terminal_like);
  static mor unique_from(const obj& initial_like, const obj& dst);
  static bool is_iso(const mor& f) { return fm_is_invertible(f); }
  static mor inverse(const mor& f);
  static std::optional<mor> iso_check(const obj& a, const obj& b);
  static std::vector<mor> hom(const obj& a, const obj& b);
  static std::uint64_t hom_size(const obj& a, const obj& b);
  static std::vector<obj> enumerate_objects(const cat& c, int max_size);
  static obj random_object(const cat& c, int max_size, std::mt19937_64& rng);
  static std::size_t size_of(const obj& x) { return static_cast<std::size_t>(x.dim); }
  static limit_data limit(const cat& c, const shaped_diagram<vect_backend>& d);
  static std::optional<mor> mediate(const shaped_diagram<vect_backend>& d, const limit_data& lim,
                                    const obj& a, const std::vector<mor>& cone);
  static std::string describe(const obj& x);
};

// Multiplication by m: the functor V -> V^m on objects and A -> I_m (x) A on
// maps.
struct stage_mult {
  int m = 1;
};

vect_backend::obj apply_stage(const stage_mult& s, const vect_backend::obj& x);
fmatrix apply_stage(const stage_mult& s, const fmatrix& f);

}  // namespace laxglue
