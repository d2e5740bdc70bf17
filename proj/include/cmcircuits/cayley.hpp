#ifndef CMCIRCUITS_CAYLEY_HPP
#define CMCIRCUITS_CAYLEY_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmcircuits/graph.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

// n points with exact integer coordinates in the plane, labeled 1..n.
struct PlanarConfiguration {
  std::vector<std::pair<Int, Int>> points;

  int size() const { return static_cast<int>(points.size()); }
  // x_{i,j} -> exact squared distance, for all 1 <= i < j <= n
  std::map<Edge, Rat> squared_distances() const;
};

// Deterministic sampler: n pairwise distinct integer points in [-bound, bound]^2.
PlanarConfiguration random_configuration(int n, long bound, unsigned long seed);

// The symbolic Cayley matrix of n points is (n+1)x(n+1): zero diagonal, a
// border row and column of ones, and entry (i,j) = x_{i,j} for points i != j.
// Returns the exact determinant of the 5x5 submatrix on the given index
// sets (0 = border row/column), canonicalized.
Poly minor_polynomial(int n, std::array<int, 5> rows, std::array<int, 5> cols);

struct CatalogEntry {
  Poly polynomial;  // canonical form
  Graph support;
  std::string class_label;
};

struct GeneratorCatalog {
  int n = 0;
  std::vector<CatalogEntry> entries;  // sorted by polynomial text
  long distinct_polynomials = 0;
  long distinct_supports = 0;
};

// All 5x5 minors of the n-point Cayley matrix, deduplicated by canonical
// polynomial.  4 <= n <= 10; this is quadratic in C(n+1,5), so large n are
// gated behind the CLI flag.
GeneratorCatalog enumerate_generators(int n, int threads = 1);

struct SupportClass {
  std::string label;
  Graph representative;
  long members = 0;  // catalog entries in this class
};
std::vector<SupportClass> classify_supports(const GeneratorCatalog& catalog);

struct MembershipReport {
  bool in_ideal = false;  // all sampled evaluations vanished
  int samples = 0;
  // per-run bound on the false-"true" probability (Schwartz-Zippel style)
  double error_bound = 1.0;
  std::optional<int> failing_sample;
};

// One-sided probabilistic membership in the 2D Cayley-Menger ideal: evaluate
// at the squared distances of random planar configurations.  A nonzero value
// disproves membership with certainty.
MembershipReport is_in_ideal(const Poly& p, int samples, long bound, unsigned long seed);

// The catalog polynomial (relabeled onto the target support) minimizing
// (degree in the elimination variable, homogeneous degree, term count).
Poly select_leaf_generator(const GeneratorCatalog& catalog, const Graph& target,
                           const std::optional<Edge>& elim);

}  // namespace cmc

#endif
