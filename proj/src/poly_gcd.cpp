#include <algorithm>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"
#include "factor_detail.hpp"

namespace cmc {

namespace {

Poly canonical_part(const Poly& p) { return canonicalize(p).poly; }

bool is_int_constant(const Poly& p) { return p.is_constant(); }

detail::UPoly to_upoly(const Poly& p, const Edge& x) {
  std::vector<Poly> cs = p.coefficients_in(x);
  detail::UPoly out(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].is_zero())
      out[i] = 0;
    else if (cs[i].is_constant())
      out[i] = cs[i].terms()[0].coeff;
    else
      throw precondition_error("polynomial is not univariate");
  }
  detail::utrim(out);
  return out;
}

Poly from_upoly(const detail::UPoly& f, const Edge& x) {
  std::vector<Term> terms;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    Monomial m;
    m.e[0] = static_cast<std::uint8_t>(i);
    terms.push_back({m, f[i]});
  }
  if (f.size() > 256) throw budget_error("univariate degree exceeds the monomial cap");
  return Poly::from_terms({x}, std::move(terms));
}

long height_bits(const Poly& p) {
  size_t bits = 1;
  for (const Term& t : p.terms()) bits = std::max(bits, mpz_sizeinbase(t.coeff.get_mpz_t(), 2));
  return static_cast<long>(bits);
}

// balanced remainder of every coefficient mod xi
Poly smod_poly(const Poly& p, const Int& xi) {
  std::vector<Term> out;
  Int half = xi / 2;
  for (const Term& t : p.terms()) {
    Int r = t.coeff % xi;
    if (r < 0) r += xi;
    if (r > half) r -= xi;
    if (r != 0) out.push_back({t.mon, std::move(r)});
  }
  return Poly::from_terms(p.vars(), std::move(out));
}

Poly div_coeffs_exact(const Poly& p, const Int& d) {
  std::vector<Term> out;
  for (const Term& t : p.terms()) out.push_back({t.mon, t.coeff / d});
  return Poly::from_terms(p.vars(), std::move(out));
}

// Integer-packing heuristic gcd (GCDHEU).  Exact: every candidate is
// verified by trial division before being returned.
std::optional<Poly> gcdheu(const Poly& f, const Poly& g, int depth) {
  if (depth > 8) return std::nullopt;
  if (f.is_constant() && g.is_constant()) {
    Int a = f.is_zero() ? Int(0) : f.terms()[0].coeff;
    Int b = g.is_zero() ? Int(0) : g.terms()[0].coeff;
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return Poly::constant(r);
  }
  Edge x = !f.vars().empty() ? f.vars()[0] : g.vars()[0];
  if (!g.vars().empty() && g.vars()[0] < x) x = g.vars()[0];
  long hb = std::max(height_bits(f), height_bits(g));
  // the packed integers grow by a factor of deg+1 per eliminated variable;
  // bail out unless the whole cascade stays small
  double cascade = static_cast<double>(hb + 8);
  for (const Edge& v : f.vars()) cascade *= f.degree_in(v) + 1;
  for (const Edge& v : g.vars()) cascade *= g.degree_in(v) + 1;
  if (cascade > 4e6) return std::nullopt;
  Int xi = Int(1) << (hb + 2);
  xi = 2 * xi + 2;
  for (int attempt = 0; attempt < 6; ++attempt) {
    long xi_bits = static_cast<long>(mpz_sizeinbase(xi.get_mpz_t(), 2));
    long est = xi_bits * (std::max(f.degree_in(x), g.degree_in(x)) + 1);
    if (est > (1L << 22)) return std::nullopt;
    Poly fe = f.eval_var(x, xi);
    Poly ge = g.eval_var(x, xi);
    auto gamma = gcdheu(fe, ge, depth + 1);
    if (gamma) {
      // rebuild a polynomial in x from balanced base-xi digits
      Poly h;
      Poly gam = *gamma;
      Poly xpow = Poly::constant(1);
      Poly xv = Poly::variable(x);
      int guard = 0;
      while (!gam.is_zero()) {
        if (++guard > 300) break;
        Poly digit = smod_poly(gam, xi);
        h += digit * xpow;
        gam = div_coeffs_exact(gam - digit, xi);
        xpow *= xv;
      }
      if (gam.is_zero() && !h.is_zero()) {
        h = canonical_part(h);
        if (try_divide_exact(f, h) && try_divide_exact(g, h)) return h;
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

// content of p w.r.t. x: gcd of its coefficient polynomials
Poly content_in(const Poly& p, const Edge& x);

// pseudo-remainder lc(b)^(da-db+1) * a mod b, viewing the polynomials in x
// with polynomial coefficients; the full multiplier is applied so the
// subresultant divisions below stay exact
Poly prem_in(const Poly& a, const Poly& b, const Edge& x) {
  int da = a.degree_in(x), db = b.degree_in(x);
  if (da < db) return a;
  Poly lcb = b.coefficients_in(x).back();
  Poly xv = Poly::variable(x);
  Poly r = a;
  for (int k = da - db; k >= 0; --k) {
    std::vector<Poly> rc = r.coefficients_in(x);
    Poly top = static_cast<int>(rc.size()) > k + db ? rc[k + db] : Poly();
    r = r * lcb;
    if (!top.is_zero()) r = r - top * xv.pow(k) * b;
  }
  if (!r.is_zero() && r.degree_in(x) >= db)
    throw precondition_error("internal: pseudo-remainder failed");
  return r;
}

Poly primitive_in(const Poly& p, const Edge& x) {
  Poly c = content_in(p, x);
  if (c.is_constant() && !c.is_zero() && c.terms()[0].coeff == 1) return p;
  return divide_exact(p, c);
}

// Brown-Traub subresultant remainder sequence: degree growth stays bounded
// and every division is exact, so only the final primitive part recurses
// into content extraction.
Poly gcd_prs(Poly f, Poly g, const Edge& x) {
  Poly cf = content_in(f, x);
  Poly cg = content_in(g, x);
  Poly c = gcd(cf, cg);
  Poly F = divide_exact(f, cf);
  Poly G = divide_exact(g, cg);
  if (F.degree_in(x) < G.degree_in(x)) std::swap(F, G);
  const long term_budget = 4'000'000;
  Poly gprev = Poly::constant(1);
  Poly h = Poly::constant(1);
  while (true) {
    int delta = F.degree_in(x) - G.degree_in(x);
    Poly r = prem_in(F, G, x);
    if (r.is_zero()) return canonical_part(c * primitive_in(G, x));
    if (r.degree_in(x) == 0) return canonical_part(c);  // coprime in x
    if (static_cast<long>(r.term_count()) > term_budget)
      throw budget_error("gcd remainder sequence exceeded the term budget");
    Poly divisor = gprev * h.pow(delta);
    F = std::move(G);
    G = divide_exact(r, divisor);
    gprev = F.coefficients_in(x).back();
    h = delta >= 1 ? divide_exact(gprev.pow(delta), h.pow(delta - 1)) : h * gprev.pow(delta);
  }
}

Poly content_in(const Poly& p, const Edge& x) {
  std::vector<Poly> cs = p.coefficients_in(x);
  Poly acc;
  for (const Poly& c : cs) {
    if (c.is_zero()) continue;
    acc = acc.is_zero() ? c : gcd(acc, c);
    if (acc.is_constant()) break;
  }
  if (acc.is_zero()) return Poly::constant(1);
  if (acc.is_constant()) {
    // keep integer content information
    Int ic = p.content();
    if (ic < 0) ic = -ic;
    return Poly::constant(ic);
  }
  // reattach the integer content across coefficients
  return canonical_part(acc).mul_scalar([&] {
    Int ic = p.content();
    return ic < 0 ? -ic : ic;
  }());
}

}  // namespace

Poly gcd(const Poly& f, const Poly& g) {
  if (f.is_zero()) return canonical_part(g);
  if (g.is_zero()) return canonical_part(f);
  if (f.is_constant() || g.is_constant()) {
    if (f.is_constant() && g.is_constant()) {
      Int r;
      mpz_gcd(r.get_mpz_t(), f.terms()[0].coeff.get_mpz_t(), g.terms()[0].coeff.get_mpz_t());
      return Poly::constant(r);
    }
    return Poly::constant(1);
  }
  Poly cf = canonical_part(f);
  Poly cg = canonical_part(g);
  if (cf == cg) return cf;
  // shared variables: none means the gcd is constant over the rationals
  std::vector<Edge> shared;
  std::set_intersection(f.vars().begin(), f.vars().end(), g.vars().begin(), g.vars().end(),
                        std::back_inserter(shared));
  if (shared.empty()) return Poly::constant(1);
  if (try_divide_exact(cg, cf)) return cf;
  if (try_divide_exact(cf, cg)) return cg;
  if (cf.is_univariate() && cg.is_univariate()) {
    Edge x = cf.vars()[0];
    detail::UPoly r = detail::ugcd(to_upoly(cf, x), to_upoly(cg, x));
    return from_upoly(r, x);
  }
  if (auto h = gcdheu(cf, cg, 0)) return canonical_part(*h);
  // main variable: a shared one with the smallest combined degree
  Edge x = shared[0];
  long best = 1L << 30;
  for (const Edge& v : shared) {
    long score = static_cast<long>(cf.degree_in(v)) + cg.degree_in(v);
    if (score < best) {
      best = score;
      x = v;
    }
  }
  return gcd_prs(cf, cg, x);
}

}  // namespace cmc
