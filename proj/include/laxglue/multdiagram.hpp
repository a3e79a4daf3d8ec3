#pragma once

#include <array>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "laxglue/diagram.hpp"
#include "laxglue/sections.hpp"
#include "laxglue/vect.hpp"

namespace laxglue {

// A linear lax diagram given by multiplicities: the transition for p < q
// sends V to V^(m_pq) (a morphism f to I_m (x) f), and the comparison cell
// for p < q < r is a single matrix M_pqr of shape (m_qr * m_pq) x m_pr,
// applied at an object V as M_pqr (x) I_dim(V). The cocycle condition reads
// (M_qrs (x) I_{m_pq}) * M_pqs = (I_{m_rs} (x) M_pqr) * M_prs.
struct mult_diagram {
  fin_poset base;
  int p = 2;  // field characteristic
  std::map<std::pair<int, int>, int> mult;
  std::map<std::array<int, 3>, fmatrix> cell;

  int mult_at(int a, int b) const;
  const fmatrix& cell_at(int a, int b, int c) const;
};

// Checks shape bookkeeping and the full cocycle identity on every 4-chain.
check_list validate_mult_diagram(const mult_diagram& md);

lax_diagram<vect_backend> to_lax(const mult_diagram& md);

// Multiplicities from a weight per element: m_pq = weight(q) / weight(p);
// every weight must divide every weight above it. This makes all cells
// square so invertible families exist.
std::map<std::pair<int, int>, int> multiplicities_from_weights(const fin_poset& base,
                                                               const std::vector<int>& weight);

// A random diagram with everywhere-invertible cells: draws an invertible
// lambda_pq per pair and sets M_pqr = (lambda_qr (x) lambda_pq) * inv(lambda_pr),
// which satisfies the cocycle identity identically.
mult_diagram coboundary_mult_diagram(const fin_poset& base, int p, const std::vector<int>& weight,
                                     std::mt19937_64& rng);

// The strict diagram: every cell is the identity matrix.
mult_diagram strict_mult_diagram(const fin_poset& base, int p, const std::vector<int>& weight);

// The section transported from a d0-dimensional space at the bottom element:
// x_q = tau^q_0(x_0), the component at 0 < q the identity, and the component
// at p < q the cell M_0pq (x) I. The section cocycle reduces to the cell
// cocycle, so this works for singular cells too. Requires a unique bottom.
section<vect_backend> generator_section(const mult_diagram& md, int d0);

}  // namespace laxglue
