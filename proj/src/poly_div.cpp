#include <algorithm>
#include <queue>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

namespace {

struct HeapEntry {
  Monomial mon;
  int qi;
  int dj;
};

struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return mon_cmp(a.mon, b.mon) < 0;  // max-heap
  }
};

}  // namespace

// Quotient-heap exact division: the running difference f - q*d is never
// materialized; pending tail products of each discovered quotient term are
// merged lazily through a priority queue.
std::optional<Poly> try_divide_exact(const Poly& f, const Poly& d) {
  if (d.is_zero()) throw precondition_error("division by the zero polynomial");
  if (f.is_zero()) return Poly();
  // align both over the union of variables
  std::vector<Edge> uvars;
  std::set_union(f.vars().begin(), f.vars().end(), d.vars().begin(), d.vars().end(),
                 std::back_inserter(uvars));
  auto widen = [&uvars](const Poly& p) {
    std::vector<Term> ts = p.terms();
    std::vector<int> pos(p.vars().size());
    for (size_t i = 0; i < p.vars().size(); ++i)
      pos[i] = static_cast<int>(std::lower_bound(uvars.begin(), uvars.end(), p.vars()[i]) -
                                uvars.begin());
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const Term& t : ts) {
      Monomial m;
      for (size_t i = 0; i < p.vars().size(); ++i)
        if (t.mon.e[i]) m.e[pos[i]] = t.mon.e[i];
      out.push_back({m, t.coeff});
    }
    std::sort(out.begin(), out.end(),
              [](const Term& a, const Term& b) { return mon_cmp(a.mon, b.mon) > 0; });
    return out;
  };
  std::vector<Term> fv = widen(f);
  std::vector<Term> dv = widen(d);
  const Monomial& dlead = dv[0].mon;
  const Int& dlc = dv[0].coeff;
  const int nd = static_cast<int>(dv.size());

  std::vector<Term> q;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
  size_t s = 0;
  while (s < fv.size() || !heap.empty()) {
    Monomial m;
    if (s < fv.size() && (heap.empty() || mon_cmp(fv[s].mon, heap.top().mon) >= 0))
      m = fv[s].mon;
    else
      m = heap.top().mon;
    Int c(0);
    while (s < fv.size() && fv[s].mon == m) {
      c += fv[s].coeff;
      ++s;
    }
    while (!heap.empty() && heap.top().mon == m) {
      HeapEntry e = heap.top();
      heap.pop();
      c -= q[e.qi].coeff * dv[e.dj].coeff;
      if (e.dj + 1 < nd)
        heap.push({mon_mul(q[e.qi].mon, dv[e.dj + 1].mon), e.qi, e.dj + 1});
    }
    if (c == 0) continue;
    if (!dlead.divides(m)) return std::nullopt;
    Int qc;
    mpz_tdiv_qr(qc.get_mpz_t(), c.get_mpz_t(), c.get_mpz_t(), dlc.get_mpz_t());
    if (c != 0) return std::nullopt;  // coefficient not divisible
    q.push_back({mon_div(m, dlead), std::move(qc)});
    if (nd > 1) heap.push({mon_mul(q.back().mon, dv[1].mon), static_cast<int>(q.size()) - 1, 1});
  }
  return Poly::from_terms(uvars, std::move(q));
}

Poly divide_exact(const Poly& f, const Poly& d) {
  auto q = try_divide_exact(f, d);
  if (!q) throw precondition_error("inexact polynomial division");
  return *std::move(q);
}

}  // namespace cmc
