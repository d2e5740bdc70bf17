#ifndef CMCIRCUITS_POLY_HPP
#define CMCIRCUITS_POLY_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmcircuits/graph.hpp"

namespace cmc {

using Int = mpz_class;
using Rat = mpq_class;

// Exponent vector over a polynomial's variable list.  Position i belongs to
// vars()[i]; at most kMaxPolyVars variables, exponents below 256.  The fixed
// footprint keeps monomial hashing and comparison branch-free.
inline constexpr int kMaxPolyVars = 32;

struct Monomial {
  std::array<std::uint8_t, kMaxPolyVars> e{};

  int degree() const {
    int d = 0;
    for (int i = 0; i < kMaxPolyVars; ++i) d += e[i];
    return d;
  }
  bool is_constant() const {
    for (int i = 0; i < kMaxPolyVars; ++i)
      if (e[i]) return false;
    return true;
  }
  bool divides(const Monomial& m) const {
    for (int i = 0; i < kMaxPolyVars; ++i)
      if (e[i] > m.e[i]) return false;
    return true;
  }
  bool operator==(const Monomial&) const = default;
};

// Graded lexicographic comparison: total degree first, then the exponent
// vector with the earliest variable most significant.
int mon_cmp(const Monomial& a, const Monomial& b);
Monomial mon_mul(const Monomial& a, const Monomial& b);  // throws on exponent overflow
Monomial mon_div(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

struct Term {
  Monomial mon;
  Int coeff;
};

// Sparse multivariate polynomial over the integers in edge variables
// x_{i,j}.  Terms are kept in descending graded-lex order with nonzero
// coefficients, and the variable list always equals the support.  Values are
// immutable in spirit: arithmetic returns new polynomials.
class Poly {
 public:
  Poly() = default;  // zero

  static Poly constant(Int c);
  static Poly variable(const Edge& x);
  static Poly from_terms(std::vector<Edge> vars, std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::vector<Edge>& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }

  const Term& leading_term() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return vars_ == o.vars_ && terms_equal(o); }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly mul_scalar(const Int& c) const;
  Poly pow(int k) const;

  // Total degree; -1 serves as the degree sentinel of the zero polynomial.
  int total_degree() const;
  int degree_in(const Edge& x) const;
  bool is_homogeneous() const;
  bool is_constant() const { return terms_.size() <= 1 && (terms_.empty() || terms_[0].mon.is_constant()); }
  bool is_univariate() const { return vars_.size() <= 1; }

  std::vector<Edge> support() const { return vars_; }
  Graph support_graph() const;

  // gcd of the coefficients, carrying the sign of the leading coefficient;
  // content of the zero polynomial is 1 by convention.
  Int content() const;
  Poly primitive() const;  // *this divided by content (positive leading coeff)

  Rat evaluate(const std::map<Edge, Rat>& assignment) const;

  // Substitutes one variable by an integer value.
  Poly eval_var(const Edge& x, const Int& value) const;

  // Substitutes every variable except x, clearing denominators: the result
  // is an integer polynomial in x with the same roots.
  Poly substitute_all_but(const Edge& x, const std::map<Edge, Rat>& assignment) const;

  // Coefficient polynomials with respect to x, constant term first.
  std::vector<Poly> coefficients_in(const Edge& x) const;
  static Poly from_coefficients_in(const Edge& x, const std::vector<Poly>& coeffs);

  Poly derivative(const Edge& x) const;

  // Applies a vertex relabeling to every variable; must stay loop-free and
  // injective on the support.
  Poly relabeled(const std::map<int, int>& vertex_map) const;

 private:
  bool terms_equal(const Poly& o) const;

  std::vector<Edge> vars_;
  std::vector<Term> terms_;
};

// Primitive part with positive leading coefficient plus extracted content:
// two polynomials agree up to a constant iff their canonical parts match.
struct Canonical {
  Poly poly;
  Rat content;
};
Canonical canonicalize(const Poly& p);

struct PolyMetrics {
  Graph support;
  int total_degree = -1;
  std::map<Edge, int> degree_per_variable;
  long term_count = 0;
  bool homogeneous = true;
};
PolyMetrics poly_metrics(const Poly& p);

// Text format: terms in graded-lex descending order, "-3*x1_2^2*x1_3+..."
std::string to_string(const Poly& p);
Poly parse_poly(const std::string& text);

// --- algorithms implemented in separate translation units ---

// Exact division; returns nullopt when d does not divide f.
std::optional<Poly> try_divide_exact(const Poly& f, const Poly& d);
Poly divide_exact(const Poly& f, const Poly& d);  // throws on failure

enum class ResultantEngine { kBareiss, kMinorExpansion };

// Sylvester resultant of f and g with respect to x.  Both inputs must have
// positive degree in x.  Entries are polynomials in the remaining variables;
// the default engine is fraction-free Bareiss elimination.
Poly resultant(const Poly& f, const Poly& g, const Edge& x,
               ResultantEngine engine = ResultantEngine::kBareiss);

// Greatest common divisor in canonical form; gcd(f, 0) = canonical f.
Poly gcd(const Poly& f, const Poly& g);

struct FactorBudget {
  long max_terms = 4'000'000;   // intermediate term cap
  int max_degree = 255;         // per-variable degree cap
  int max_modular_factors = 24; // univariate recombination cap
};

struct FactorResult {
  // irreducible canonical factors with multiplicities; the input equals
  // content * product(factor^multiplicity)
  std::vector<std::pair<Poly, int>> factors;
  Rat content;
};
FactorResult factor(const Poly& p, const FactorBudget& budget = {});

// Univariate real-root isolation with exact rational interval endpoints.
struct RootInterval {
  Rat lo;
  Rat hi;
  bool exact = false;  // degenerate interval [r, r]
};
std::vector<RootInterval> isolate_real_roots(const Poly& p);

}  // namespace cmc

#endif
