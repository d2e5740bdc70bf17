#include "cmcircuits/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/sparsity.hpp"

namespace cmc {

std::map<Edge, Rat> PlanarConfiguration::squared_distances() const {
  std::map<Edge, Rat> out;
  int n = size();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Int dx = points[i - 1].first - points[j - 1].first;
      Int dy = points[i - 1].second - points[j - 1].second;
      out[Edge(i, j)] = Rat(dx * dx + dy * dy);
    }
  return out;
}

PlanarConfiguration random_configuration(int n, long bound, unsigned long seed) {
  if (n < 1) throw precondition_error("configuration needs at least one point");
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    // rejection-free modulo draw; the bias is irrelevant here and the
    // sequence is identical on every platform
    unsigned long span = static_cast<unsigned long>(2 * bound + 1);
    return static_cast<long>(rng() % span) - bound;
  };
  PlanarConfiguration cfg;
  std::set<std::pair<long, long>> seen;
  while (cfg.size() < n) {
    long x = draw(), y = draw();
    if (!seen.insert({x, y}).second) continue;  // resample duplicates
    cfg.points.emplace_back(x, y);
  }
  return cfg;
}

Poly minor_polynomial(int n, std::array<int, 5> rows, std::array<int, 5> cols) {
  if (n < 4) throw precondition_error("the Cayley matrix needs at least 4 points");
  auto check = [&](const std::array<int, 5>& ix) {
    for (int i = 0; i < 5; ++i) {
      if (ix[i] < 0 || ix[i] > n) throw precondition_error("minor index out of range");
      for (int j = i + 1; j < 5; ++j)
        if (ix[i] == ix[j]) throw precondition_error("minor indices must be distinct");
    }
  };
  check(rows);
  check(cols);
  // entry(r, c): 0 on the diagonal of the full matrix, 1 against the border,
  // x_{r,c} otherwise
  struct MonLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return mon_cmp(a, b) < 0; }
  };
  std::map<Monomial, Int, MonLess> acc;
  int perm[5] = {0, 1, 2, 3, 4};
  std::set<Edge> var_set;
  for (int r : rows)
    for (int c : cols)
      if (r != c && r != 0 && c != 0) var_set.insert(Edge(r, c));
  std::vector<Edge> vars(var_set.begin(), var_set.end());
  auto var_pos = [&](const Edge& e) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), e) - vars.begin());
  };
  if (vars.size() > static_cast<size_t>(kMaxPolyVars))
    throw budget_error("too many variables in one polynomial");
  do {
    // sign of the permutation
    int inv = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j)
        if (perm[i] > perm[j]) ++inv;
    Monomial m;
    bool zero = false;
    for (int i = 0; i < 5 && !zero; ++i) {
      int r = rows[i], c = cols[perm[i]];
      if (r == c) {
        zero = true;
      } else if (r != 0 && c != 0) {
        int pos = var_pos(Edge(r, c));
        if (m.e[pos] == 255) throw budget_error("monomial exponent overflow");
        m.e[pos] += 1;
      }
      // border entries contribute a factor 1
    }
    if (!zero) acc[m] += (inv % 2) ? -1 : 1;
  } while (std::next_permutation(perm, perm + 5));
  std::vector<Term> terms;
  for (auto& [m, c] : acc)
    if (c != 0) terms.push_back({m, c});
  Poly det = Poly::from_terms(vars, std::move(terms));
  return canonicalize(det).poly;
}

namespace {

std::vector<std::array<int, 5>> five_subsets(int top) {
  std::vector<std::array<int, 5>> out;
  std::array<int, 5> ix{0, 1, 2, 3, 4};
  while (true) {
    out.push_back(ix);
    int i = 4;
    while (i >= 0 && ix[i] == top - 4 + i) --i;
    if (i < 0) break;
    ++ix[i];
    for (int j = i + 1; j < 5; ++j) ix[j] = ix[j - 1] + 1;
  }
  return out;
}

}  // namespace

GeneratorCatalog enumerate_generators(int n, int threads) {
  if (n < 4 || n > 10) throw precondition_error("generator enumeration supports 4 <= n <= 10");
  std::vector<std::array<int, 5>> subsets = five_subsets(n);
  const size_t rs = subsets.size();
  threads = std::max(1, std::min(threads, 16));

  using Bucket = std::unordered_map<std::string, CatalogEntry>;
  std::vector<Bucket> buckets(threads);
  auto worker = [&](int tid) {
    Bucket& local = buckets[tid];
    for (size_t a = tid; a < rs; a += threads) {
      for (size_t b = 0; b < rs; ++b) {
        Poly p = minor_polynomial(n, subsets[a], subsets[b]);
        if (p.is_zero()) continue;
        std::string key = to_string(p);
        if (local.count(key)) continue;
        CatalogEntry e;
        e.polynomial = std::move(p);
        e.support = e.polynomial.support_graph();
        local.emplace(std::move(key), std::move(e));
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  // deterministic merge
  std::map<std::string, CatalogEntry> merged;
  for (auto& b : buckets)
    for (auto& [k, v] : b) merged.emplace(k, std::move(v));

  GeneratorCatalog cat;
  cat.n = n;
  std::set<std::vector<Edge>> supports;
  std::map<std::string, std::string> class_cache;  // support key -> class label
  for (auto& [k, v] : merged) {
    supports.insert(v.support.edges());
    std::string skey;
    for (const Edge& e : v.support.edges()) skey += to_string(e) + ";";
    auto it = class_cache.find(skey);
    if (it == class_cache.end())
      it = class_cache.emplace(skey, canonical_label(v.support)).first;
    v.class_label = it->second;
    cat.entries.push_back(std::move(v));
  }
  cat.distinct_polynomials = static_cast<long>(cat.entries.size());
  cat.distinct_supports = static_cast<long>(supports.size());
  return cat;
}

std::vector<SupportClass> classify_supports(const GeneratorCatalog& catalog) {
  std::map<std::string, SupportClass> classes;
  for (const CatalogEntry& e : catalog.entries) {
    auto it = classes.find(e.class_label);
    if (it == classes.end()) {
      SupportClass sc;
      sc.label = e.class_label;
      sc.representative = e.support;
      sc.members = 1;
      classes.emplace(e.class_label, std::move(sc));
    } else {
      ++it->second.members;
    }
  }
  std::vector<SupportClass> out;
  for (auto& [k, v] : classes) out.push_back(std::move(v));
  // small classes first: by vertex count, then edge count, then label
  std::sort(out.begin(), out.end(), [](const SupportClass& a, const SupportClass& b) {
    if (a.representative.vertex_count() != b.representative.vertex_count())
      return a.representative.vertex_count() < b.representative.vertex_count();
    if (a.representative.edge_count() != b.representative.edge_count())
      return a.representative.edge_count() < b.representative.edge_count();
    return a.label < b.label;
  });
  return out;
}

MembershipReport is_in_ideal(const Poly& p, int samples, long bound, unsigned long seed) {
  MembershipReport rep;
  rep.samples = samples;
  if (p.is_zero()) {
    rep.in_ideal = true;
    rep.error_bound = 0.0;
    return rep;
  }
  int n = 0;
  for (const Edge& e : p.vars()) n = std::max(n, e.v);
  n = std::max(n, 2);
  for (int s = 0; s < samples; ++s) {
    PlanarConfiguration cfg = random_configuration(n, bound, seed + 7919u * s);
    Rat value = p.evaluate(cfg.squared_distances());
    if (value != 0) {
      rep.in_ideal = false;
      rep.failing_sample = s;
      rep.error_bound = 0.0;  // disproof is certain
      return rep;
    }
  }
  rep.in_ideal = true;
  // coordinates enter squared distances quadratically
  double per_sample = std::min(1.0, 2.0 * p.total_degree() / (2.0 * bound + 1.0));
  rep.error_bound = std::pow(per_sample, samples);
  return rep;
}

Poly select_leaf_generator(const GeneratorCatalog& catalog, const Graph& target,
                           const std::optional<Edge>& elim) {
  if (elim && !target.has_edge(*elim))
    throw precondition_error("elimination edge is not an edge of the leaf graph");
  std::string target_label = canonical_label(target);
  struct Candidate {
    Poly poly;
    int elim_degree;
    int total_degree;
    long terms;
    std::string text;
  };
  std::optional<Candidate> best;
  for (const CatalogEntry& e : catalog.entries) {
    if (e.class_label != target_label) continue;
    for_each_isomorphism(e.support, target, [&](const std::vector<int>& map) {
      std::map<int, int> vm;
      const auto& vs = e.support.vertices();
      const auto& ts = target.vertices();
      for (size_t i = 0; i < vs.size(); ++i) vm[vs[i]] = ts[map[i]];
      Poly relabeled = canonicalize(e.polynomial.relabeled(vm)).poly;
      Candidate c;
      c.elim_degree = elim ? relabeled.degree_in(*elim) : 0;
      c.total_degree = relabeled.total_degree();
      c.terms = relabeled.term_count();
      c.text = to_string(relabeled);
      c.poly = std::move(relabeled);
      auto better = [&](const Candidate& x, const Candidate& y) {
        if (x.elim_degree != y.elim_degree) return x.elim_degree < y.elim_degree;
        if (x.total_degree != y.total_degree) return x.total_degree < y.total_degree;
        if (x.terms != y.terms) return x.terms < y.terms;
        return x.text < y.text;
      };
      if (!best || better(c, *best)) best = std::move(c);
      return true;
    });
  }
  if (!best)
    throw precondition_error("no catalog generator matches the requested support");
  return best->poly;
}

}  // namespace cmc
