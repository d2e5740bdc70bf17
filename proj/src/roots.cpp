#include <algorithm>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"
#include "factor_detail.hpp"

namespace cmc {

namespace {

using detail::UPoly;

Rat ueval(const UPoly& f, const Rat& x) {
  Rat acc(0);
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + Rat(f[i]);
  acc.canonicalize();
  return acc;
}

int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

// Sturm chain of a squarefree polynomial: integer polynomials, each the
// negated primitive pseudo-remainder with a positive multiplier so that
// signs match the rational chain.
std::vector<UPoly> sturm_chain(const UPoly& f) {
  std::vector<UPoly> chain;
  chain.push_back(f);
  UPoly d = detail::uderiv(f);
  if (!d.empty()) chain.push_back(d);
  while (chain.size() >= 2) {
    const UPoly& a = chain[chain.size() - 2];
    const UPoly& b = chain.back();
    if (detail::udeg(b) <= 0) break;
    // positive-multiplier pseudo-remainder of a by b, then negate
    UPoly r = a;
    {
      int da = detail::udeg(a), db = detail::udeg(b);
      if (da >= db) {
        Int lcb = b.back();
        Int mult(1);
        for (int s = 0; s < da - db + 1; ++s) mult *= lcb;
        if (mult < 0) mult = -mult;
        for (Int& c : r) c *= mult;
        for (int k = da - db; k >= 0; --k) {
          if (static_cast<int>(r.size()) <= k + db || r[k + db] == 0) continue;
          Int qc = r[k + db] / lcb;
          for (int i = 0; i <= db; ++i) r[k + i] -= qc * b[i];
        }
        detail::utrim(r);
      }
    }
    if (r.empty()) break;
    for (Int& c : r) c = -c;
    // strip positive content to keep the numbers small
    Int cont = detail::ucontent(r);
    if (cont > 1)
      for (Int& c : r) c /= cont;
    chain.push_back(std::move(r));
    if (detail::udeg(chain.back()) == 0) break;
  }
  return chain;
}

int variations_at(const std::vector<UPoly>& chain, const Rat& x) {
  int var = 0, prev = 0;
  for (const UPoly& f : chain) {
    int s = sgn(ueval(f, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const Poly& p) {
  if (p.is_zero()) throw precondition_error("root isolation needs a nonzero polynomial");
  if (p.vars().size() > 1) throw precondition_error("root isolation needs a univariate polynomial");
  if (p.is_constant()) return {};
  Edge x = p.vars()[0];
  UPoly f(p.degree_in(x) + 1, Int(0));
  for (const Term& t : p.terms()) f[t.mon.e[0]] = t.coeff;

  // squarefree part
  UPoly fp = detail::uderiv(f);
  UPoly g = detail::ugcd(f, fp);
  UPoly sf;
  if (detail::udeg(g) > 0) {
    if (!detail::udiv_exact(f, g, &sf)) throw precondition_error("internal: squarefree part failed");
  } else {
    sf = f;
  }
  sf = detail::uprimitive(sf);

  // exact rational roots come from the linear factors; the nonlinear part
  // is isolated by Sturm bisection and has no rational roots left
  std::vector<RootInterval> out;
  std::vector<UPoly> irred = detail::uzassenhaus(sf, 24, 12345);
  UPoly nonlinear{Int(1)};
  std::vector<Rat> rational_roots;
  for (const UPoly& q : irred) {
    if (detail::udeg(q) == 1) {
      Rat r(-q[0], q[1]);
      r.canonicalize();
      rational_roots.push_back(r);
    } else {
      nonlinear = detail::umul(nonlinear, q);
    }
  }
  for (const Rat& r : rational_roots) out.push_back({r, r, true});

  if (detail::udeg(nonlinear) >= 2) {
    std::vector<UPoly> chain = sturm_chain(nonlinear);
    // Cauchy bound: all roots lie strictly inside (-B, B)
    Rat maxratio(0);
    for (size_t i = 0; i + 1 < nonlinear.size(); ++i) {
      Rat ratio(abs(nonlinear[i]), abs(nonlinear.back()));
      ratio.canonicalize();
      if (ratio > maxratio) maxratio = ratio;
    }
    Rat bound = maxratio + 2;
    struct Span {
      Rat lo, hi;
      int count;
    };
    auto count_open = [&](const Rat& lo, const Rat& hi) {
      return variations_at(chain, lo) - variations_at(chain, hi);
    };
    int total = count_open(-bound, bound);
    std::vector<Span> work;
    if (total > 0) work.push_back({-bound, bound, total});
    while (!work.empty()) {
      Span s = work.back();
      work.pop_back();
      if (s.count == 0) continue;
      if (s.count == 1) {
        // shrink until no exact rational root sits inside; midpoints are
        // never roots of the nonlinear part
        bool split_more = false;
        for (const Rat& r : rational_roots)
          if (s.lo < r && r < s.hi) {
            split_more = true;
            break;
          }
        if (!split_more) {
          out.push_back({s.lo, s.hi, false});
          continue;
        }
      }
      Rat mid = (s.lo + s.hi) / 2;
      mid.canonicalize();
      int left = count_open(s.lo, mid);
      if (left > 0) work.push_back({s.lo, mid, left});
      if (s.count - left > 0) work.push_back({mid, s.hi, s.count - left});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

}  // namespace cmc
