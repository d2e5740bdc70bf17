#include <map>
#include <vector>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

namespace {

using Matrix = std::vector<std::vector<Poly>>;

Matrix sylvester_matrix(const Poly& f, const Poly& g, const Edge& x) {
  std::vector<Poly> a = f.coefficients_in(x);  // constant term first
  std::vector<Poly> b = g.coefficients_in(x);
  int m = static_cast<int>(a.size()) - 1;
  int n = static_cast<int>(b.size()) - 1;
  int dim = m + n;
  Matrix mat(dim, std::vector<Poly>(dim));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) mat[i][i + k] = a[m - k];
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) mat[n + i][i + k] = b[n - k];
  return mat;
}

// Fraction-free Bareiss elimination; every division is exact over the
// polynomial ring.
Poly det_bareiss(Matrix m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return Poly::constant(1);
  int sign = 1;
  Poly prev = Poly::constant(1);
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m[i][k].is_zero()) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return Poly();  // singular
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Poly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = num.is_zero() ? Poly() : divide_exact(num, prev);
      }
      m[i][k] = Poly();
    }
    prev = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

// Division-free expansion by minors, memoized over column subsets.  For the
// small Sylvester dimensions seen here it avoids the big exact divisions.
Poly det_minors(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return Poly::constant(1);
  // key: set of used columns; minors grow upward from the bottom row
  std::map<unsigned, Poly> cur;
  cur[0u] = Poly::constant(1);
  for (int r = n - 1; r >= 0; --r) {
    std::map<unsigned, Poly> next;
    for (const auto& [used, minor] : cur) {
      if (minor.is_zero()) continue;
      int used_before = 0;  // inversions contributed by picking column j
      for (int j = 0; j < n; ++j) {
        if (used & (1u << j)) {
          ++used_before;
          continue;
        }
        if (!m[r][j].is_zero()) {
          Poly contrib = m[r][j] * minor;
          if (used_before & 1) contrib = -contrib;
          auto [it, inserted] = next.try_emplace(used | (1u << j), contrib);
          if (!inserted) it->second += contrib;
        }
      }
    }
    cur = std::move(next);
  }
  auto it = cur.find((1u << n) - 1);
  return it == cur.end() ? Poly() : it->second;
}

}  // namespace

Poly resultant(const Poly& f, const Poly& g, const Edge& x, ResultantEngine engine) {
  int df = f.degree_in(x), dg = g.degree_in(x);
  if (df < 1 || dg < 1)
    throw precondition_error("resultant needs positive degree in the eliminated variable");
  Matrix m = sylvester_matrix(f, g, x);
  Poly det = engine == ResultantEngine::kBareiss ? det_bareiss(std::move(m)) : det_minors(m);
  if (det.degree_in(x) != 0) throw precondition_error("internal: resultant kept the variable");
  return det;
}

}  // namespace cmc
