#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <random>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"
#include "factor_detail.hpp"

namespace cmc {

namespace {

bool trace_enabled() {
  static bool on = std::getenv("CMC_TRACE") != nullptr;
  return on;
}

void trace(const std::string& msg) {
  if (trace_enabled()) std::cerr << "[factor] " << msg << std::endl;
}

using detail::UPoly;

// ---------- helpers on Poly ----------

Poly from_upoly_in(const UPoly& f, const Edge& x) {
  std::vector<Term> terms;
  if (f.size() > 255) throw budget_error("degree exceeds the monomial cap");
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    Monomial m;
    m.e[0] = static_cast<std::uint8_t>(i);
    terms.push_back({m, f[i]});
  }
  return Poly::from_terms({x}, std::move(terms));
}

UPoly to_upoly_in(const Poly& p, const Edge& x) {
  UPoly out(static_cast<size_t>(p.degree_in(x)) + 1, Int(0));
  std::vector<Poly> cs = p.coefficients_in(x);
  for (size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].is_zero())
      out[i] = 0;
    else if (cs[i].is_constant())
      out[i] = cs[i].terms()[0].coeff;
    else
      throw precondition_error("expected a univariate polynomial");
  }
  detail::utrim(out);
  return out;
}

Int smod_int(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

Poly reduce_balanced(const Poly& p, const Int& m) {
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    Int c = smod_int(t.coeff, m);
    if (c != 0) out.push_back({t.mon, std::move(c)});
  }
  return Poly::from_terms(p.vars(), std::move(out));
}

long height_bits(const Poly& p) {
  size_t bits = 1;
  for (const Term& t : p.terms()) bits = std::max(bits, mpz_sizeinbase(t.coeff.get_mpz_t(), 2));
  return static_cast<long>(bits);
}

// Taylor coefficient of order t around z = alpha.
Poly taylor_coeff(const Poly& p, const Edge& z, const Int& alpha, int t) {
  std::vector<Poly> cs = p.coefficients_in(z);
  Poly acc;
  Int apow(1);
  for (int s = t; s < static_cast<int>(cs.size()); ++s) {
    if (!cs[s].is_zero()) {
      Int binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(s), static_cast<unsigned long>(t));
      acc += cs[s].mul_scalar(binom * apow);
    }
    apow *= alpha;
  }
  return acc;
}

// ---------- dense univariate arithmetic mod a big modulus ----------

UPoly umod_reduce(UPoly f, const Int& P) {
  for (Int& c : f) c = smod_int(c, P);
  detail::utrim(f);
  return f;
}

UPoly umul_mod(const UPoly& a, const UPoly& b, const Int& P) {
  return umod_reduce(detail::umul(a, b), P);
}

// division with remainder in Z_P[x]; lc(d) must be invertible mod P
void udivrem_mod(const UPoly& f, const UPoly& d, const Int& P, UPoly* q, UPoly* r) {
  UPoly rem = f;
  detail::utrim(rem);
  int dd = detail::udeg(d);
  if (dd < 0) throw precondition_error("division by zero polynomial");
  Int inv;
  if (!mpz_invert(inv.get_mpz_t(), d.back().get_mpz_t(), P.get_mpz_t()))
    throw budget_error("leading coefficient not invertible during lifting");
  UPoly quot(rem.size() >= d.size() ? rem.size() - d.size() + 1 : 0, Int(0));
  while (detail::udeg(rem) >= dd) {
    int k = detail::udeg(rem) - dd;
    Int qc = smod_int(rem.back() * inv, P);
    quot[k] = qc;
    for (int i = 0; i <= dd; ++i) rem[k + i] = smod_int(rem[k + i] - qc * d[i], P);
    detail::utrim(rem);
    if (!rem.empty() && detail::udeg(rem) == k + dd)
      throw budget_error("modular division failed to reduce the degree");
  }
  if (q) *q = std::move(quot);
  if (r) *r = umod_reduce(std::move(rem), P);
}

// Bezout pair for coprime g, h: s*h + t*g == 1 (mod P), lifted from mod p.
struct Bezout {
  UPoly s;
  UPoly t;
};

Bezout make_bezout(const UPoly& g, const UPoly& h, const Int& p, const Int& P) {
  // extended euclid mod p
  auto mod_p = [&](UPoly f) { return umod_reduce(std::move(f), p); };
  UPoly r0 = mod_p(g), r1 = mod_p(h);
  UPoly s0{Int(1)}, s1{};  // coefficients of g
  UPoly t0{}, t1{Int(1)};  // coefficients of h
  while (!r1.empty() && detail::udeg(r1) > 0) {
    UPoly q, rem;
    udivrem_mod(r0, r1, p, &q, &rem);
    UPoly s2 = umod_reduce(detail::usub(s0, detail::umul(q, s1)), p);
    UPoly t2 = umod_reduce(detail::usub(t0, detail::umul(q, t1)), p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r1.empty() || r1.size() != 1)
    throw budget_error("images not coprime during lifting");
  Int inv;
  if (!mpz_invert(inv.get_mpz_t(), r1[0].get_mpz_t(), p.get_mpz_t()))
    throw budget_error("images not coprime during lifting");
  for (Int& c : s1) c = smod_int(c * inv, p);
  for (Int& c : t1) c = smod_int(c * inv, p);
  // here r1 came from s1*g + t1*h: swap roles so s*h + t*g = 1
  Bezout bz{t1, s1};
  // Newton-lift the identity from p to P
  Int modulus = p;
  while (modulus < P) {
    modulus = modulus * modulus;
    if (modulus > P) modulus = P;
    UPoly e = detail::usub(UPoly{Int(1)},
                           detail::uadd(detail::umul(bz.s, h), detail::umul(bz.t, g)));
    e = umod_reduce(std::move(e), modulus);
    if (e.empty()) break;
    UPoly one_plus{Int(1)};
    one_plus = detail::uadd(one_plus, e);
    bz.s = umod_reduce(detail::umul(bz.s, one_plus), modulus);
    bz.t = umod_reduce(detail::umul(bz.t, one_plus), modulus);
    // keep degrees small: s = s mod g, fold the overflow into t
    UPoly qq, rr;
    udivrem_mod(bz.s, g, modulus, &qq, &rr);
    bz.s = rr;
    bz.t = umod_reduce(detail::uadd(bz.t, umul_mod(qq, h, modulus)), modulus);
  }
  return bz;
}

// ---------- the lift ----------

struct LiftContext {
  Edge x;
  std::vector<Edge> minor_vars;  // lifting order
  std::vector<Int> point;
  Int p;
  Int P;
  std::vector<Poly> base_g;  // stage-entry values of G, index j-1 has j-1 minor vars
  std::vector<Poly> base_h;
  Bezout bez;                // for the univariate images
  long term_budget = 4'000'000;
  int dg = 0;                // x-degrees, fixed through the lift
  int dh = 0;
};

// Solves dg*baseH[lvl] + dh*baseG[lvl] = c over Z_P[x, y_1..y_lvl] with
// deg_x(dg) < ctx.dg.  Returns false when no polynomial solution emerges
// within the degree caps.
bool mdp_solve(const LiftContext& ctx, const Poly& c, int lvl, int cap, Poly* out_g, Poly* out_h) {
  if (c.is_zero()) {
    *out_g = Poly();
    *out_h = Poly();
    return true;
  }
  if (lvl == 0) {
    UPoly cu = to_upoly_in(c, ctx.x);
    UPoly g0 = to_upoly_in(ctx.base_g[0], ctx.x);
    UPoly h0 = to_upoly_in(ctx.base_h[0], ctx.x);
    // sigma = s*c mod g0 ; tau = (c - sigma*h0) / g0
    UPoly sc = umul_mod(ctx.bez.s, cu, ctx.P);
    UPoly sigma, tau, rem;
    udivrem_mod(sc, g0, ctx.P, nullptr, &sigma);
    UPoly num = umod_reduce(detail::usub(cu, detail::umul(sigma, h0)), ctx.P);
    udivrem_mod(num, g0, ctx.P, &tau, &rem);
    if (!rem.empty()) return false;
    if (detail::udeg(tau) >= ctx.dh) return false;
    *out_g = from_upoly_in(sigma, ctx.x);
    *out_h = from_upoly_in(tau, ctx.x);
    return true;
  }
  const Edge& w = ctx.minor_vars[lvl - 1];
  const Int& beta = ctx.point[lvl - 1];
  const Poly& Bg = ctx.base_g[lvl];
  const Poly& Bh = ctx.base_h[lvl];
  Poly dg_acc, dh_acc;
  Poly err = c;
  Poly wshift = Poly::variable(w) - Poly::constant(beta);
  Poly wpow = Poly::constant(1);
  for (int r = 0; r <= cap; ++r) {
    if (err.is_zero()) break;
    Poly er = taylor_coeff(err, w, beta, r);
    if (!er.is_zero()) {
      Poly a, b;
      if (!mdp_solve(ctx, reduce_balanced(er, ctx.P), lvl - 1, cap, &a, &b)) return false;
      Poly ga = a * wpow;
      Poly hb = b * wpow;
      dg_acc += ga;
      dh_acc += hb;
      err = reduce_balanced(err - ga * Bh - hb * Bg, ctx.P);
      if (err.term_count() > ctx.term_budget) throw budget_error("factor lift exceeded the term budget");
    }
    wpow *= wshift;
  }
  if (!err.is_zero()) return false;
  *out_g = reduce_balanced(dg_acc, ctx.P);
  *out_h = reduce_balanced(dh_acc, ctx.P);
  return true;
}

// Lifts the univariate split (g0, h0) of T|point to a factorization of T,
// forcing both leading coefficients (in x) to L.  Returns the lifted G.
std::optional<Poly> lift_pair(const Poly& T, const Poly& L, LiftContext& ctx, const Poly& g0,
                              const Poly& h0) {
  const int k = static_cast<int>(ctx.minor_vars.size());
  // chains of partial evaluations, index j = number of live minor vars
  std::vector<Poly> Tj(k + 1), Lj(k + 1);
  Tj[k] = T;
  Lj[k] = L;
  for (int j = k; j > 0; --j) {
    Tj[j - 1] = Tj[j].eval_var(ctx.minor_vars[j - 1], ctx.point[j - 1]);
    Lj[j - 1] = Lj[j].eval_var(ctx.minor_vars[j - 1], ctx.point[j - 1]);
  }
  Poly G = reduce_balanced(g0, ctx.P);
  Poly H = reduce_balanced(h0, ctx.P);
  ctx.base_g.assign(1, G);
  ctx.base_h.assign(1, H);
  ctx.dg = G.degree_in(ctx.x);
  ctx.dh = H.degree_in(ctx.x);
  Poly xg = Poly::variable(ctx.x).pow(ctx.dg);
  Poly xh = Poly::variable(ctx.x).pow(ctx.dh);
  for (int j = 1; j <= k; ++j) {
    const Edge& z = ctx.minor_vars[j - 1];
    const Int& alpha = ctx.point[j - 1];
    int cap = Tj[j].degree_in(z);
    Poly zshift = Poly::variable(z) - Poly::constant(alpha);
    Poly zpow = zshift;
    // the error is maintained incrementally: every update touches only a
    // thin z-slice of the factors
    Poly err = reduce_balanced(Tj[j] - G * H, ctx.P);
    for (int t = 1; t <= cap; ++t) {
      if (err.term_count() > ctx.term_budget)
        throw budget_error("factor lift exceeded the term budget");
      if (err.is_zero()) break;
      Poly et = reduce_balanced(taylor_coeff(err, z, alpha, t), ctx.P);
      if (!et.is_zero()) {
        Poly lam = reduce_balanced(taylor_coeff(Lj[j], z, alpha, t), ctx.P);
        Poly rhs = et;
        if (!lam.is_zero())
          rhs = reduce_balanced(rhs - lam * xg * ctx.base_h[j - 1] - ctx.base_g[j - 1] * lam * xh,
                                ctx.P);
        Poly dgp, dhp;
        if (!mdp_solve(ctx, rhs, j - 1, cap + Tj[k].total_degree(), &dgp, &dhp)) return std::nullopt;
        Poly add_g = (lam.is_zero() ? dgp : reduce_balanced(dgp + lam * xg, ctx.P)) * zpow;
        Poly add_h = (lam.is_zero() ? dhp : reduce_balanced(dhp + lam * xh, ctx.P)) * zpow;
        err = reduce_balanced(err - add_g * H - G * add_h - add_g * add_h, ctx.P);
        G = reduce_balanced(G + add_g, ctx.P);
        H = reduce_balanced(H + add_h, ctx.P);
      }
      zpow *= zshift;
    }
    if (!err.is_zero()) return std::nullopt;
    ctx.base_g.push_back(G);
    ctx.base_h.push_back(H);
  }
  return G;
}

// ---------- orchestration ----------

struct WorkContext {
  FactorBudget budget;
  unsigned seed = 20240001u;
};

std::vector<Poly> factor_primitive_squarefree(Poly q, const WorkContext& wc);

// picks the main variable: smallest degree, then sparsest leading coefficient
Edge choose_main_var(const Poly& q) {
  Edge best = q.vars()[0];
  long best_score = -1;
  for (const Edge& v : q.vars()) {
    int d = q.degree_in(v);
    Poly lc = q.coefficients_in(v).back();
    long score = static_cast<long>(d) * 1'000'000 + lc.term_count();
    if (best_score < 0 || score < best_score) {
      best_score = score;
      best = v;
    }
  }
  return best;
}

std::vector<Poly> eez_factor(const Poly& q, const Edge& x, const WorkContext& wc) {
  trace("eez_factor terms=" + std::to_string(q.term_count()) + " vars=" +
        std::to_string(q.vars().size()) + " main=" + to_string(x));
  std::vector<Edge> minor_vars;
  for (const Edge& v : q.vars())
    if (!(v == x)) minor_vars.push_back(v);
  Poly L = q.coefficients_in(x).back();
  const int dq = q.degree_in(x);

  // evaluation point: leading coefficient alive, squarefree image, few
  // univariate factors
  std::mt19937_64 rng(wc.seed);
  struct Candidate {
    std::vector<Int> point;
    UPoly image;
    std::vector<UPoly> ufactors;
  };
  std::vector<Candidate> candidates;
  for (int attempt = 0; attempt < 300 && candidates.size() < 3; ++attempt) {
    long range = 2 + attempt / 20;
    std::vector<Int> pt;
    for (size_t i = 0; i < minor_vars.size(); ++i)
      pt.emplace_back(static_cast<long>(rng() % (2 * range + 1)) - range);
    Poly lval = L;
    Poly qval = q;
    for (size_t i = 0; i < minor_vars.size(); ++i) {
      lval = lval.eval_var(minor_vars[i], pt[i]);
      qval = qval.eval_var(minor_vars[i], pt[i]);
    }
    if (lval.is_zero()) continue;
    UPoly img = to_upoly_in(qval, x);
    if (detail::udeg(img) != dq || !detail::uis_squarefree(img)) continue;
    Candidate c;
    c.point = std::move(pt);
    c.ufactors = detail::uzassenhaus(detail::uprimitive(img), wc.budget.max_modular_factors,
                                     static_cast<unsigned>(wc.seed + attempt));
    c.image = std::move(img);
    candidates.push_back(std::move(c));
    if (candidates.back().ufactors.size() == 1) break;  // cannot get luckier
  }
  if (candidates.empty()) throw budget_error("no usable evaluation point for factorization");
  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].ufactors.size() < candidates[best].ufactors.size()) best = i;
  const std::vector<Int>& point = candidates[best].point;
  const UPoly& image = candidates[best].image;
  const std::vector<UPoly>& ufactors = candidates[best].ufactors;
  const int m = static_cast<int>(ufactors.size());
  trace("eez image factors m=" + std::to_string(m));
  if (m == 1) return {q};

  // modulus: covers coefficients of any factor of L*q scaled by L
  Poly T = L * q;
  if (T.term_count() > wc.budget.max_terms)
    throw budget_error("factor padding exceeded the term budget");
  long bits = T.total_degree() + height_bits(T) + 24;
  static const unsigned long small_primes[] = {127, 131, 137, 139, 149, 151, 157, 163,
                                               167, 173, 179, 181, 191, 193, 197, 199};
  Int p(0), P(1);
  const Int& lc_img = image.back();
  for (unsigned long cand : small_primes) {
    if (mpz_divisible_ui_p(lc_img.get_mpz_t(), cand)) continue;
    // the image must stay squarefree mod p so every split is coprime mod p
    auto modp = [&](const UPoly& f) {
      std::vector<std::uint64_t> v(f.size());
      for (size_t i = 0; i < f.size(); ++i) v[i] = mpz_fdiv_ui(f[i].get_mpz_t(), cand);
      while (!v.empty() && v.back() == 0) v.pop_back();
      return v;
    };
    auto gcd_modp = [&](std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
      auto powmod = [&](std::uint64_t x, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e) {
          if (e & 1) r = r * x % cand;
          x = x * x % cand;
          e >>= 1;
        }
        return r;
      };
      while (!b.empty()) {
        std::uint64_t inv = powmod(b.back(), cand - 2);
        while (a.size() >= b.size()) {
          std::uint64_t qc = a.back() * inv % cand;
          size_t off = a.size() - b.size();
          for (size_t i = 0; i < b.size(); ++i)
            a[off + i] = (a[off + i] + cand - qc * b[i] % cand) % cand;
          while (!a.empty() && a.back() == 0) a.pop_back();
          if (a.empty()) break;
        }
        std::swap(a, b);
      }
      return a;
    };
    auto img_p = modp(image);
    if (static_cast<int>(img_p.size()) - 1 != dq) continue;
    auto deriv_p = modp(detail::uderiv(image));
    auto g = gcd_modp(img_p, deriv_p);
    if (g.size() > 1) continue;
    p = static_cast<long>(cand);
    break;
  }
  if (p == 0) throw budget_error("no usable prime for factor lifting");
  int ell = 1;
  while (ell * static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) < bits + 2) ++ell;
  mpz_pow_ui(P.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(ell));

  Int La = lc_img;  // = L(point), nonzero

  // subsets of modular factors, smallest first
  for (int s = 1; 2 * s <= m; ++s) {
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      // build the two scaled images
      UPoly gprod{Int(1)}, hprod{Int(1)};
      for (int i = 0, t = 0; i < m; ++i) {
        if (t < s && idx[t] == i) {
          gprod = detail::umul(gprod, ufactors[i]);
          ++t;
        } else {
          hprod = detail::umul(hprod, ufactors[i]);
        }
      }
      // scale so both leading coefficients equal L(point)
      Int sg = La / gprod.back();
      Int sh = La / hprod.back();
      UPoly g0 = gprod, h0 = hprod;
      for (Int& c : g0) c *= sg;
      for (Int& c : h0) c *= sh;
      if (sg * gprod.back() == La && sh * hprod.back() == La) {
        LiftContext ctx;
        ctx.x = x;
        ctx.minor_vars = minor_vars;
        ctx.point = point;
        ctx.p = p;
        ctx.P = P;
        ctx.term_budget = wc.budget.max_terms;
        trace("lift attempt subset size=" + std::to_string(s));
        ctx.bez = make_bezout(g0, h0, p, P);
        auto lifted = lift_pair(T, L, ctx, from_upoly_in(g0, x), from_upoly_in(h0, x));
        trace(lifted ? "lift converged" : "lift failed");
        if (lifted) {
          Poly cand = canonicalize(reduce_balanced(*lifted, P)).poly;
          if (!cand.is_constant()) {
            if (auto quot = try_divide_exact(q, cand)) {
              std::vector<Poly> rest =
                  factor_primitive_squarefree(canonicalize(*quot).poly, wc);
              rest.push_back(cand);
              return rest;
            }
          }
        }
      }
      int i = s - 1;
      while (i >= 0 && idx[i] == m - s + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {q};
}

std::vector<Poly> factor_primitive_squarefree(Poly q, const WorkContext& wc) {
  if (q.is_constant()) return {};
  if (q.is_univariate()) {
    Edge x = q.vars()[0];
    std::vector<UPoly> us = detail::uzassenhaus(to_upoly_in(q, x), wc.budget.max_modular_factors,
                                                wc.seed);
    std::vector<Poly> out;
    for (const UPoly& u : us) out.push_back(canonicalize(from_upoly_in(u, x)).poly);
    return out;
  }
  // homogeneous inputs lose one variable by setting the last one to 1
  if (q.is_homogeneous() && q.vars().size() >= 2) {
    trace("dehomogenize terms=" + std::to_string(q.term_count()));
    Edge h = q.vars().back();
    int d = q.total_degree();
    Poly dehom = q.eval_var(h, 1);
    // minimum exponent of h is zero for a monomial-free primitive input, so
    // dehomogenization keeps every term and degrees are restored exactly
    std::vector<Poly> parts = factor_primitive_squarefree(canonicalize(dehom).poly, wc);
    std::vector<Poly> out;
    int total = 0;
    for (Poly& f : parts) {
      int df = f.total_degree();
      // rehomogenize: pad every term with powers of h
      std::vector<Edge> vars = f.vars();
      bool has_h = std::binary_search(vars.begin(), vars.end(), h);
      if (has_h) throw precondition_error("internal: dehomogenized factor kept the variable");
      vars.push_back(h);
      std::sort(vars.begin(), vars.end());
      int hpos = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), h) - vars.begin());
      std::vector<int> posmap(f.vars().size());
      for (size_t i = 0; i < f.vars().size(); ++i)
        posmap[i] = static_cast<int>(
            std::lower_bound(vars.begin(), vars.end(), f.vars()[i]) - vars.begin());
      std::vector<Term> terms;
      for (const Term& t : f.terms()) {
        Monomial mm;
        for (size_t i = 0; i < f.vars().size(); ++i)
          if (t.mon.e[i]) mm.e[posmap[i]] = t.mon.e[i];
        int pad = df - t.mon.degree();
        if (pad > 255) throw budget_error("degree exceeds the monomial cap");
        mm.e[hpos] = static_cast<std::uint8_t>(pad);
        terms.push_back({mm, t.coeff});
      }
      out.push_back(canonicalize(Poly::from_terms(vars, std::move(terms))).poly);
      total += df;
    }
    int missing = d - total;
    // any leftover degree is a power of h itself
    for (int i = 0; i < missing; ++i) out.push_back(Poly::variable(h));
    return out;
  }
  Edge x = choose_main_var(q);
  // content in x.  When some coefficient is a monomial the content equals
  // the global monomial content exactly (it divides a monomial and the
  // monomial content divides everything); otherwise fold gcds.
  std::vector<Poly> coeffs = q.coefficients_in(x);
  bool monomial_coeff = false;
  for (const Poly& c : coeffs)
    if (!c.is_zero() && c.term_count() == 1) {
      monomial_coeff = true;
      break;
    }
  Poly cont;
  if (monomial_coeff) {
    std::vector<int> minexp(q.vars().size(), 255);
    for (const Term& t : q.terms())
      for (size_t i = 0; i < q.vars().size(); ++i)
        minexp[i] = std::min(minexp[i], static_cast<int>(t.mon.e[i]));
    cont = Poly::constant(1);
    for (size_t i = 0; i < q.vars().size(); ++i)
      if (minexp[i] > 0) cont *= Poly::variable(q.vars()[i]).pow(minexp[i]);
  } else {
    for (const Poly& c : coeffs) {
      if (c.is_zero()) continue;
      cont = cont.is_zero() ? c : gcd(cont, c);
      if (cont.is_constant()) break;
    }
  }
  if (!cont.is_constant()) {
    Poly pp = divide_exact(q, cont);
    std::vector<Poly> a = factor_primitive_squarefree(canonicalize(cont).poly, wc);
    std::vector<Poly> b = factor_primitive_squarefree(canonicalize(pp).poly, wc);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  return eez_factor(q, x, wc);
}

// Certificate that q is squarefree: the univariate image at a point keeping
// the leading coefficient alive is squarefree, and the content w.r.t. x is
// certainly trivial (some x-coefficient is a monomial after the input was
// monomial-stripped).  A repeated factor with positive x-degree keeps its
// own leading coefficient alive at such a point, so the image test is a
// proof, not a heuristic.
bool certainly_squarefree(const Poly& q, const Edge& /*main*/, const WorkContext& wc) {
  trace("certainly_squarefree check");
  // a variable with a monomial coefficient certifies trivial content in that
  // variable, so a squarefree image there proves q squarefree outright
  std::optional<Edge> witness;
  for (const Edge& v : q.vars()) {
    for (const Poly& c : q.coefficients_in(v))
      if (!c.is_zero() && c.term_count() == 1) {
        witness = v;
        break;
      }
    if (witness) break;
  }
  if (!witness) return false;
  const Edge& x = *witness;
  std::vector<Edge> minor_vars;
  for (const Edge& v : q.vars())
    if (!(v == x)) minor_vars.push_back(v);
  Poly L = q.coefficients_in(x).back();
  int dq = q.degree_in(x);
  std::mt19937_64 rng(wc.seed ^ 0x5f5full);
  int tested = 0;
  for (int attempt = 0; attempt < 200 && tested < 6; ++attempt) {
    long range = 2 + attempt / 10;
    Poly lval = L;
    Poly qval = q;
    for (const Edge& v : minor_vars) {
      Int a(static_cast<long>(rng() % (2 * range + 1)) - range);
      lval = lval.eval_var(v, a);
      qval = qval.eval_var(v, a);
    }
    if (lval.is_zero()) continue;
    UPoly img = to_upoly_in(qval, x);
    if (detail::udeg(img) != dq) continue;
    ++tested;  // an unlucky point can shadow a squarefree input, so retry
    if (detail::uis_squarefree(img)) {
      trace(std::string("squarefree image in ") + to_string(x));
      return true;
    }
  }
  return false;
}

// squarefree decomposition w.r.t. a main variable via Yun's algorithm
std::vector<std::pair<Poly, int>> yun_squarefree(const Poly& q, const Edge& x) {
  trace("yun_squarefree terms=" + std::to_string(q.term_count()));
  std::vector<std::pair<Poly, int>> out;
  Poly qp = q.derivative(x);
  Poly a = gcd(q, qp);
  if (a.is_constant()) {
    out.push_back({q, 1});
    return out;
  }
  Poly b = divide_exact(q, a);
  Poly c = divide_exact(qp, a);
  Poly d = c - b.derivative(x);
  int mult = 1;
  while (true) {
    Poly g = gcd(b, d);
    if (!g.is_constant()) out.push_back({g, mult});
    Poly b2 = divide_exact(b, g);
    Poly c2 = divide_exact(d, g);
    b = b2;
    ++mult;
    if (b.is_constant()) break;
    d = c2 - b.derivative(x);
  }
  return out;
}

}  // namespace

FactorResult factor(const Poly& p, const FactorBudget& budget) {
  if (p.is_zero()) throw precondition_error("factor expects a nonzero polynomial");
  WorkContext wc;
  wc.budget = budget;
  Canonical can = canonicalize(p);
  FactorResult result;
  result.content = can.content;
  Poly q = can.poly;
  if (q.is_constant()) return result;

  // split off pure variable powers (the monomial content)
  {
    std::vector<int> minexp(q.vars().size(), 255);
    for (const Term& t : q.terms())
      for (size_t i = 0; i < q.vars().size(); ++i)
        minexp[i] = std::min(minexp[i], static_cast<int>(t.mon.e[i]));
    bool any = false;
    for (size_t i = 0; i < q.vars().size(); ++i)
      if (minexp[i] > 0) {
        any = true;
        result.factors.push_back({Poly::variable(q.vars()[i]), minexp[i]});
      }
    if (any) {
      Poly div = Poly::constant(1);
      for (size_t i = 0; i < q.vars().size(); ++i)
        if (minexp[i] > 0) div *= Poly::variable(q.vars()[i]).pow(minexp[i]);
      q = divide_exact(q, div);
    }
  }
  if (!q.is_constant()) {
    Edge x = choose_main_var(q);
    if (q.is_univariate() || !certainly_squarefree(q, x, wc)) {
      for (auto& [piece, mult] : yun_squarefree(q, x)) {
        Poly piece_canon = canonicalize(piece).poly;
        for (Poly& f : factor_primitive_squarefree(piece_canon, wc))
          result.factors.push_back({std::move(f), mult});
      }
    } else {
      for (Poly& f : factor_primitive_squarefree(q, wc)) result.factors.push_back({std::move(f), 1});
    }
  }
  // canonical order and merge equal factors
  for (auto& [f, mult] : result.factors) f = canonicalize(f).poly;
  std::sort(result.factors.begin(), result.factors.end(), [](const auto& a, const auto& b) {
    if (a.first.total_degree() != b.first.total_degree())
      return a.first.total_degree() < b.first.total_degree();
    if (a.first.term_count() != b.first.term_count())
      return a.first.term_count() < b.first.term_count();
    return to_string(a.first) < to_string(b.first);
  });
  std::vector<std::pair<Poly, int>> merged;
  for (auto& fm : result.factors) {
    if (!merged.empty() && merged.back().first == fm.first)
      merged.back().second += fm.second;
    else
      merged.push_back(std::move(fm));
  }
  result.factors = std::move(merged);

  // exact reconstruction identity; a failure here is a bug surfaced loudly
  Poly check = Poly::constant(1);
  for (const auto& [f, mult] : result.factors) check *= f.pow(mult);
  Poly scaled = check.mul_scalar(result.content.get_num());
  Poly target = p.mul_scalar(result.content.get_den());
  if (!(scaled == target)) throw budget_error("factorization verification failed");
  return result;
}

}  // namespace cmc
