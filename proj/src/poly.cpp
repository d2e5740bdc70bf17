#include "cmcircuits/poly.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "cmcircuits/errors.hpp"

namespace cmc {

int mon_cmp(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  return std::memcmp(a.e.data(), b.e.data(), kMaxPolyVars);
}

Monomial mon_mul(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxPolyVars; ++i) {
    int s = a.e[i] + b.e[i];
    if (s > 255) throw budget_error("monomial exponent overflow");
    m.e[i] = static_cast<std::uint8_t>(s);
  }
  return m;
}

Monomial mon_div(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxPolyVars; ++i) {
    if (b.e[i] > a.e[i]) throw precondition_error("monomial division underflow");
    m.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
  }
  return m;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  // FNV-1a over the four 64-bit lanes
  std::uint64_t h = 1469598103934665603ull;
  const std::uint64_t* p = reinterpret_cast<const std::uint64_t*>(m.e.data());
  for (int i = 0; i < 4; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

struct TermGreater {
  bool operator()(const Term& a, const Term& b) const { return mon_cmp(a.mon, b.mon) > 0; }
};

}  // namespace

Poly Poly::constant(Int c) {
  Poly p;
  if (c != 0) p.terms_.push_back({Monomial{}, std::move(c)});
  return p;
}

Poly Poly::variable(const Edge& x) {
  Poly p;
  p.vars_ = {x};
  Monomial m;
  m.e[0] = 1;
  p.terms_.push_back({m, Int(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Edge> vars, std::vector<Term> terms) {
  if (static_cast<int>(vars.size()) > kMaxPolyVars)
    throw budget_error("too many variables in one polynomial");
  for (size_t i = 1; i < vars.size(); ++i)
    if (!(vars[i - 1] < vars[i])) throw precondition_error("variable list must be strictly increasing");
  // merge duplicate monomials
  std::sort(terms.begin(), terms.end(), TermGreater{});
  std::vector<Term> merged;
  for (Term& t : terms) {
    if (!merged.empty() && merged.back().mon == t.mon)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0; }),
               merged.end());
  // drop unused variables so the variable list equals the support
  std::vector<char> used(vars.size(), 0);
  for (const Term& t : merged)
    for (size_t i = 0; i < vars.size(); ++i)
      if (t.mon.e[i]) used[i] = 1;
  std::vector<Edge> keep;
  std::vector<int> pos(vars.size(), -1);
  for (size_t i = 0; i < vars.size(); ++i)
    if (used[i]) {
      pos[i] = static_cast<int>(keep.size());
      keep.push_back(vars[i]);
    }
  if (keep.size() != vars.size()) {
    for (Term& t : merged) {
      Monomial m;
      for (size_t i = 0; i < vars.size(); ++i)
        if (t.mon.e[i]) m.e[pos[i]] = t.mon.e[i];
      t.mon = m;
    }
    std::sort(merged.begin(), merged.end(), TermGreater{});
  }
  Poly p;
  p.vars_ = std::move(keep);
  p.terms_ = std::move(merged);
  return p;
}

const Term& Poly::leading_term() const {
  if (terms_.empty()) throw precondition_error("zero polynomial has no leading term");
  return terms_.front();
}

bool Poly::terms_equal(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].mon == o.terms_[i].mon) || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

namespace {

// Aligns two polynomials over the union of their variables; returns the
// union list and both term vectors remapped to it.
struct Aligned {
  std::vector<Edge> vars;
  std::vector<Term> a;
  std::vector<Term> b;
};

std::vector<Term> remap_terms(const std::vector<Term>& terms, const std::vector<Edge>& from,
                              const std::vector<Edge>& to) {
  std::vector<int> pos(from.size());
  for (size_t i = 0; i < from.size(); ++i) {
    auto it = std::lower_bound(to.begin(), to.end(), from[i]);
    pos[i] = static_cast<int>(it - to.begin());
  }
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) {
    Monomial m;
    for (size_t i = 0; i < from.size(); ++i)
      if (t.mon.e[i]) m.e[pos[i]] = t.mon.e[i];
    out.push_back({m, t.coeff});
  }
  return out;
}

Aligned align(const Poly& a, const Poly& b) {
  Aligned r;
  std::set_union(a.vars().begin(), a.vars().end(), b.vars().begin(), b.vars().end(),
                 std::back_inserter(r.vars));
  if (static_cast<int>(r.vars.size()) > kMaxPolyVars)
    throw budget_error("too many variables in one polynomial");
  r.a = remap_terms(a.terms(), a.vars(), r.vars);
  r.b = remap_terms(b.terms(), b.vars(), r.vars);
  // remapping to a superset preserves graded-lex order only if the relative
  // positions are shifted monotonically, which they are; still, re-sort when
  // variables were interleaved
  std::sort(r.a.begin(), r.a.end(), TermGreater{});
  std::sort(r.b.begin(), r.b.end(), TermGreater{});
  return r;
}

}  // namespace

Poly Poly::operator-() const {
  Poly p = *this;
  for (Term& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  Aligned al = align(*this, o);
  std::vector<Term> out;
  out.reserve(al.a.size() + al.b.size());
  size_t i = 0, j = 0;
  while (i < al.a.size() || j < al.b.size()) {
    if (j == al.b.size() || (i < al.a.size() && mon_cmp(al.a[i].mon, al.b[j].mon) > 0))
      out.push_back(std::move(al.a[i++]));
    else if (i == al.a.size() || mon_cmp(al.b[j].mon, al.a[i].mon) > 0)
      out.push_back(std::move(al.b[j++]));
    else {
      Int c = al.a[i].coeff + al.b[j].coeff;
      if (c != 0) out.push_back({al.a[i].mon, std::move(c)});
      ++i;
      ++j;
    }
  }
  return from_terms(std::move(al.vars), std::move(out));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  Aligned al = align(*this, o);
  const auto& small = al.a.size() <= al.b.size() ? al.a : al.b;
  const auto& big = al.a.size() <= al.b.size() ? al.b : al.a;
  std::unordered_map<Monomial, Int, MonomialHash> acc;
  acc.reserve(small.size() * 2 + big.size());
  for (const Term& s : small)
    for (const Term& t : big) {
      Monomial m = mon_mul(s.mon, t.mon);
      acc[m] += s.coeff * t.coeff;
    }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, std::move(c)});
  return from_terms(std::move(al.vars), std::move(out));
}

Poly Poly::mul_scalar(const Int& c) const {
  if (c == 0) return Poly();
  Poly p = *this;
  for (Term& t : p.terms_) t.coeff *= c;
  return p;
}

Poly Poly::pow(int k) const {
  if (k < 0) throw precondition_error("negative power");
  Poly r = Poly::constant(1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) r *= base;
    base = k > 1 ? base * base : base;
    k >>= 1;
  }
  return r;
}

int Poly::total_degree() const {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.mon.degree());
  return d;
}

int Poly::degree_in(const Edge& x) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), x);
  if (it == vars_.end() || !(*it == x)) return 0;
  int idx = static_cast<int>(it - vars_.begin());
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, static_cast<int>(t.mon.e[idx]));
  return d;
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = terms_.front().mon.degree();
  for (const Term& t : terms_)
    if (t.mon.degree() != d) return false;
  return true;
}

Graph Poly::support_graph() const { return Graph::from_edges(vars_); }

Int Poly::content() const {
  if (terms_.empty()) return 1;
  Int g = 0;
  for (const Term& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  if (terms_.front().coeff < 0) g = -g;
  return g;
}

Poly Poly::primitive() const {
  if (terms_.empty()) return *this;
  Int c = content();
  if (c == 1) return *this;
  Poly p = *this;
  for (Term& t : p.terms_) t.coeff /= c;
  return p;
}

Rat Poly::evaluate(const std::map<Edge, Rat>& assignment) const {
  std::vector<std::vector<Rat>> powers(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = assignment.find(vars_[i]);
    if (it == assignment.end())
      throw precondition_error("evaluation misses variable x" + std::to_string(vars_[i].u) + "_" +
                               std::to_string(vars_[i].v));
    powers[i] = {Rat(1), it->second};
  }
  Rat sum(0);
  for (const Term& t : terms_) {
    Rat prod(t.coeff);
    for (size_t i = 0; i < vars_.size(); ++i) {
      int e = t.mon.e[i];
      auto& pw = powers[i];
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * pw[1]);
      prod *= pw[e];
    }
    sum += prod;
  }
  sum.canonicalize();
  return sum;
}

Poly Poly::eval_var(const Edge& x, const Int& value) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), x);
  if (it == vars_.end() || !(*it == x)) return *this;
  int idx = static_cast<int>(it - vars_.begin());
  std::vector<Int> powers{Int(1)};
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    int e = t.mon.e[idx];
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
    Term r = t;
    r.mon.e[idx] = 0;
    r.coeff *= powers[e];
    out.push_back(std::move(r));
  }
  return from_terms(vars_, std::move(out));
}

Poly Poly::substitute_all_but(const Edge& x, const std::map<Edge, Rat>& assignment) const {
  std::vector<Poly> coeffs = coefficients_in(x);
  std::vector<Rat> vals;
  vals.reserve(coeffs.size());
  Int lcm_den(1);
  for (const Poly& c : coeffs) {
    Rat v = c.is_zero() ? Rat(0) : c.evaluate(assignment);
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v.get_den().get_mpz_t());
    vals.push_back(std::move(v));
  }
  std::vector<Term> terms;
  for (size_t k = 0; k < vals.size(); ++k) {
    Rat scaled = vals[k] * Rat(lcm_den);
    scaled.canonicalize();
    if (scaled == 0) continue;
    Monomial m;
    m.e[0] = static_cast<std::uint8_t>(k);
    terms.push_back({m, scaled.get_num()});
  }
  return from_terms({x}, std::move(terms));
}

std::vector<Poly> Poly::coefficients_in(const Edge& x) const {
  int d = degree_in(x);
  std::vector<std::vector<Term>> buckets(d + 1);
  auto it = std::lower_bound(vars_.begin(), vars_.end(), x);
  int idx = (it != vars_.end() && *it == x) ? static_cast<int>(it - vars_.begin()) : -1;
  for (const Term& t : terms_) {
    int e = idx >= 0 ? t.mon.e[idx] : 0;
    Term r = t;
    if (idx >= 0) r.mon.e[idx] = 0;
    buckets[e].push_back(std::move(r));
  }
  std::vector<Poly> out;
  out.reserve(d + 1);
  for (auto& b : buckets) out.push_back(from_terms(vars_, std::move(b)));
  return out;
}

Poly Poly::from_coefficients_in(const Edge& x, const std::vector<Poly>& coeffs) {
  Poly result;
  Poly xv = Poly::variable(x);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    if (coeffs[k].degree_in(x) > 0)
      throw precondition_error("coefficient polynomial contains the main variable");
    result += coeffs[k] * xv.pow(static_cast<int>(k));
  }
  return result;
}

Poly Poly::derivative(const Edge& x) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), x);
  if (it == vars_.end() || !(*it == x)) return Poly();
  int idx = static_cast<int>(it - vars_.begin());
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (!t.mon.e[idx]) continue;
    Term r = t;
    r.coeff *= static_cast<int>(t.mon.e[idx]);
    r.mon.e[idx] -= 1;
    out.push_back(std::move(r));
  }
  return from_terms(vars_, std::move(out));
}

Poly Poly::relabeled(const std::map<int, int>& vertex_map) const {
  auto mapped = [&](int v) {
    auto it = vertex_map.find(v);
    return it == vertex_map.end() ? v : it->second;
  };
  std::vector<Edge> new_vars;
  new_vars.reserve(vars_.size());
  for (const Edge& x : vars_) new_vars.emplace_back(mapped(x.u), mapped(x.v));
  std::vector<Edge> sorted = new_vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw precondition_error("relabeling collapses two variables");
  std::vector<int> pos(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), new_vars[i]);
    pos[i] = static_cast<int>(it - sorted.begin());
  }
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const Term& t : terms_) {
    Monomial m;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (t.mon.e[i]) m.e[pos[i]] = t.mon.e[i];
    terms.push_back({m, t.coeff});
  }
  return from_terms(std::move(sorted), std::move(terms));
}

Canonical canonicalize(const Poly& p) {
  if (p.is_zero()) return {Poly(), Rat(1)};
  Int c = p.content();
  Poly prim = p;
  if (c != 1) {
    prim = Poly();
    std::vector<Term> terms = p.terms();
    for (Term& t : terms) t.coeff /= c;
    prim = Poly::from_terms(p.vars(), std::move(terms));
  }
  return {std::move(prim), Rat(c)};
}

PolyMetrics poly_metrics(const Poly& p) {
  PolyMetrics m;
  m.support = p.support_graph();
  m.total_degree = p.total_degree();
  for (const Edge& x : p.vars()) m.degree_per_variable[x] = p.degree_in(x);
  m.term_count = p.term_count();
  m.homogeneous = p.is_homogeneous();
  return m;
}

}  // namespace cmc
