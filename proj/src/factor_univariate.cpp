#include "factor_detail.hpp"

#include <algorithm>
#include <random>

#include "cmcircuits/errors.hpp"

namespace cmc::detail {

int udeg(const UPoly& f) { return static_cast<int>(f.size()) - 1; }

void utrim(UPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

UPoly umul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly c(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  utrim(c);
  return c;
}

UPoly uadd(const UPoly& a, const UPoly& b) {
  UPoly c(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  utrim(c);
  return c;
}

UPoly usub(const UPoly& a, const UPoly& b) {
  UPoly c(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  utrim(c);
  return c;
}

UPoly uderiv(const UPoly& f) {
  if (f.size() <= 1) return {};
  UPoly d(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * static_cast<long>(i);
  utrim(d);
  return d;
}

Int ucontent(const UPoly& f) {
  Int g(0);
  for (const Int& c : f) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

UPoly uprimitive(const UPoly& f) {
  UPoly g = f;
  utrim(g);
  if (g.empty()) return g;
  Int c = ucontent(g);
  if (g.back() < 0) c = -c;
  if (c != 1)
    for (Int& x : g) x /= c;
  return g;
}

bool udiv_exact(const UPoly& f, const UPoly& d, UPoly* q) {
  UPoly r = f;
  utrim(r);
  UPoly dd = d;
  utrim(dd);
  if (dd.empty()) throw precondition_error("univariate division by zero");
  if (r.empty()) {
    if (q) q->clear();
    return true;
  }
  if (r.size() < dd.size()) return false;
  UPoly quot(r.size() - dd.size() + 1, Int(0));
  for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k) {
    Int num = r[k + dd.size() - 1];
    if (num == 0) continue;
    Int qc, rem;
    mpz_tdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), dd.back().get_mpz_t());
    if (rem != 0) return false;
    quot[k] = qc;
    for (size_t i = 0; i < dd.size(); ++i) r[k + i] -= qc * dd[i];
  }
  utrim(r);
  if (!r.empty()) return false;
  if (q) *q = std::move(quot);
  return true;
}

namespace {

// Primitive pseudo-remainder sequence step: returns the remainder of
// |lc(b)|^(da-db+1) * a modulo b (positive multiplier keeps signs sane).
UPoly uprem(UPoly a, const UPoly& b) {
  utrim(a);
  int da = udeg(a), db = udeg(b);
  if (da < db) return a;
  Int lcb = b.back();
  Int mult = 1;
  int steps = da - db + 1;
  for (int s = 0; s < steps; ++s) mult *= lcb;
  if (mult < 0) mult = -mult;
  for (Int& c : a) c *= mult;
  // now divide keeping the remainder; divisions by lcb are exact
  for (int k = da - db; k >= 0; --k) {
    if (static_cast<int>(a.size()) <= k + db || a[k + db] == 0) continue;
    Int qc = a[k + db] / lcb;
    for (int i = 0; i <= db; ++i) a[k + i] -= qc * b[i];
  }
  utrim(a);
  return a;
}

}  // namespace

UPoly ugcd(const UPoly& a0, const UPoly& b0) {
  UPoly a = uprimitive(a0), b = uprimitive(b0);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (udeg(a) < udeg(b)) std::swap(a, b);
  while (!b.empty()) {
    UPoly r = uprem(a, b);
    a = std::move(b);
    b = uprimitive(r);
  }
  return uprimitive(a);
}

bool uis_squarefree(const UPoly& f) {
  UPoly g = ugcd(f, uderiv(f));
  return udeg(g) == 0;
}

std::vector<UPoly> usquarefree(const UPoly& f) {
  // Yun's algorithm over the integers on a primitive input.
  std::vector<UPoly> out;
  UPoly fp = uderiv(f);
  UPoly a = ugcd(f, fp);
  if (udeg(a) == 0) {
    out.push_back(f);
    return out;
  }
  UPoly b, c;
  if (!udiv_exact(f, a, &b) || !udiv_exact(fp, a, &c))
    throw precondition_error("internal: squarefree division failed");
  UPoly d = usub(c, uderiv(b));
  while (true) {
    UPoly g = ugcd(b, d);
    out.push_back(g);
    UPoly b2, c2;
    if (!udiv_exact(b, g, &b2) || !udiv_exact(d, g, &c2))
      throw precondition_error("internal: squarefree division failed");
    b = std::move(b2);
    if (udeg(b) == 0) break;
    d = usub(c2, uderiv(b));
  }
  // normalize: keep the overall product identity by folding the stray unit
  // into the first nontrivial factor (inputs are primitive so units are +-1)
  return out;
}

// ---------------- arithmetic mod a word prime ----------------

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((__uint128_t)a * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

using MPoly = std::vector<u64>;  // dense, ascending, coefficients mod p

void mtrim(MPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int mdeg(const MPoly& f) { return static_cast<int>(f.size()) - 1; }

MPoly mmul(const MPoly& a, const MPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  MPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + (__uint128_t)a[i] * b[j]) % p;
  }
  mtrim(c);
  return c;
}

MPoly msub(const MPoly& a, const MPoly& b, u64 p) {
  MPoly c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + p - b[i]) % p;
  mtrim(c);
  return c;
}

// division with remainder; d must be nonzero
void mdivrem(const MPoly& f, const MPoly& d, u64 p, MPoly* q, MPoly* r) {
  MPoly rem = f;
  mtrim(rem);
  int dd = mdeg(d);
  u64 inv = invmod(d.back(), p);
  MPoly quot(rem.size() >= d.size() ? rem.size() - d.size() + 1 : 0, 0);
  while (mdeg(rem) >= dd && !rem.empty()) {
    int k = mdeg(rem) - dd;
    u64 qc = mulmod(rem.back(), inv, p);
    quot[k] = qc;
    for (int i = 0; i <= dd; ++i)
      rem[k + i] = (rem[k + i] + p - mulmod(qc, d[i], p)) % p;
    mtrim(rem);
  }
  if (q) *q = std::move(quot);
  if (r) *r = std::move(rem);
}

MPoly mmod(const MPoly& f, const MPoly& d, u64 p) {
  MPoly r;
  mdivrem(f, d, p, nullptr, &r);
  return r;
}

MPoly mgcd(MPoly a, MPoly b, u64 p) {
  mtrim(a);
  mtrim(b);
  while (!b.empty()) {
    MPoly r = mmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    u64 inv = invmod(a.back(), p);
    for (u64& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

MPoly mmonic(MPoly f, u64 p) {
  mtrim(f);
  if (f.empty()) return f;
  u64 inv = invmod(f.back(), p);
  for (u64& c : f) c = mulmod(c, inv, p);
  return f;
}

MPoly mderiv(const MPoly& f, u64 p) {
  if (f.size() <= 1) return {};
  MPoly d(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) d[i - 1] = mulmod(f[i], i % p, p);
  mtrim(d);
  return d;
}

MPoly mpowmod(MPoly base, Int e, const MPoly& mod, u64 p) {
  MPoly r{1};
  base = mmod(base, mod, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mmod(mmul(r, base, p), mod, p);
    base = mmod(mmul(base, base, p), mod, p);
    e >>= 1;
  }
  return r;
}

// Cantor-Zassenhaus factorization of a squarefree monic polynomial mod p.
void cz_factor(const MPoly& f, u64 p, std::mt19937_64& rng, std::vector<MPoly>& out) {
  int n = mdeg(f);
  if (n <= 0) return;
  if (n == 1) {
    out.push_back(f);
    return;
  }
  // distinct-degree: strip factors of each degree d
  MPoly rest = f;
  MPoly h{0, 1};  // x
  std::vector<std::pair<MPoly, int>> stages;  // (product of irreducibles, degree)
  int d = 0;
  while (mdeg(rest) > 0) {
    ++d;
    if (mdeg(rest) < 2 * d) {
      stages.emplace_back(rest, mdeg(rest));
      break;
    }
    h = mpowmod(std::move(h), Int(p), rest, p);
    MPoly hx = msub(h, MPoly{0, 1}, p);
    MPoly g = mgcd(rest, hx, p);
    if (mdeg(g) > 0) {
      stages.emplace_back(g, d);
      MPoly q;
      mdivrem(rest, g, p, &q, nullptr);
      rest = mmonic(std::move(q), p);
      h = mmod(h, rest, p);
    }
  }
  // equal-degree splitting
  for (auto& [prod, deg] : stages) {
    std::vector<MPoly> work{prod};
    while (!work.empty()) {
      MPoly g = std::move(work.back());
      work.pop_back();
      if (mdeg(g) == deg) {
        out.push_back(mmonic(std::move(g), p));
        continue;
      }
      // random splitting polynomial
      MPoly a(2 * deg > 1 ? 2 * deg : 2);
      for (u64& c : a) c = rng() % p;
      a.back() = a.back() % (p - 1) + 1;
      mtrim(a);
      Int pd;
      mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(deg));
      Int e = (pd - 1) / 2;  // p odd
      MPoly b = mpowmod(std::move(a), e, g, p);
      if (!b.empty()) b[0] = (b[0] + p - 1) % p;
      mtrim(b);
      MPoly s = mgcd(g, b, p);
      if (mdeg(s) <= 0 || mdeg(s) == mdeg(g)) {
        work.push_back(std::move(g));  // unlucky split, retry
        continue;
      }
      MPoly q;
      mdivrem(g, s, p, &q, nullptr);
      work.push_back(mmonic(std::move(q), p));
      work.push_back(std::move(s));
    }
  }
}

Int ipow(Int b, int e) {
  Int r(1);
  while (e-- > 0) r *= b;
  return r;
}

// inverse of b modulo the monic polynomial a (mod p); b and a coprime
MPoly minv_mod(const MPoly& b0, const MPoly& a, u64 p) {
  MPoly r0 = a, r1 = mmod(b0, a, p);
  MPoly s0{}, s1{1};
  if (r1.empty()) throw budget_error("modular factors not coprime during lifting");
  while (mdeg(r1) > 0) {
    MPoly q, rem;
    mdivrem(r0, r1, p, &q, &rem);
    MPoly s2 = msub(s0, mmod(mmul(q, s1, p), a, p), p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (r1.empty()) throw budget_error("modular factors not coprime during lifting");
  }
  u64 inv = invmod(r1[0], p);
  for (u64& c : s1) c = mulmod(c, inv, p);
  return mmod(s1, a, p);
}

// balanced representative in (-m/2, m/2]
Int smod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

}  // namespace

std::vector<UPoly> uzassenhaus(const UPoly& f0, int max_modular_factors, unsigned seed) {
  UPoly f = uprimitive(f0);
  int n = udeg(f);
  if (n <= 0) return {};
  if (n == 1) return {f};
  const Int& lc = f.back();

  // pick a prime keeping the leading coefficient a unit and the image
  // squarefree
  static const u64 primes[] = {101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157,
                               163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
                               229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283};
  u64 p = 0;
  MPoly fp;
  for (u64 cand : primes) {
    if (mpz_divisible_ui_p(lc.get_mpz_t(), cand)) continue;
    MPoly img(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
      Int c = f[i] % Int(static_cast<unsigned long>(cand));
      if (c < 0) c += static_cast<unsigned long>(cand);
      img[i] = c.get_ui();
    }
    mtrim(img);
    if (mdeg(img) != n) continue;
    MPoly g = mgcd(img, mderiv(img, cand), cand);
    if (mdeg(g) == 0) {
      p = cand;
      fp = mmonic(std::move(img), cand);
      break;
    }
  }
  if (p == 0) throw budget_error("no usable prime for univariate factorization");

  std::mt19937_64 rng(seed ^ 0x5eedf00dull);
  std::vector<MPoly> mod_factors;
  cz_factor(fp, p, rng, mod_factors);
  std::sort(mod_factors.begin(), mod_factors.end());
  if (static_cast<int>(mod_factors.size()) == 1) return {f};
  if (static_cast<int>(mod_factors.size()) > max_modular_factors)
    throw budget_error("too many modular factors in recombination");

  // coefficient bound (Landau-Mignotte flavored): factors of f, times lc
  Int norm(0);
  for (const Int& c : f) norm += c * c;
  Int bound = sqrt(norm) + 1;
  bound *= ipow(Int(2), n);
  bound *= abs(lc);
  Int pk(static_cast<unsigned long>(p));
  int k = 1;
  while (pk <= 2 * bound) {
    pk *= static_cast<unsigned long>(p);
    ++k;
  }

  // linear multifactor Hensel lift of lc * prod(monic factors) == f mod p^k
  const int r = static_cast<int>(mod_factors.size());
  std::vector<UPoly> lifted(r);
  for (int i = 0; i < r; ++i) {
    lifted[i].assign(mod_factors[i].size(), Int(0));
    for (size_t j = 0; j < mod_factors[i].size(); ++j)
      lifted[i][j] = Int(static_cast<unsigned long>(mod_factors[i][j]));
  }
  // Bezout basis mod p: s_i * prod_{j!=i} u_j == 1 (mod u_i)
  std::vector<MPoly> bez(r);
  for (int i = 0; i < r; ++i) {
    MPoly prod{1};
    for (int j = 0; j < r; ++j)
      if (j != i) prod = mmod(mmul(prod, mod_factors[j], p), mod_factors[i], p);
    bez[i] = minv_mod(prod, mod_factors[i], p);
  }

  Int modulus(static_cast<unsigned long>(p));
  UPoly target = f;
  u64 lc_inv = invmod(mpz_fdiv_ui(lc.get_mpz_t(), p), p);
  while (modulus < pk) {
    // error: f == lc * prod(lifted) (mod modulus); fix the next digit
    UPoly prod{lc};
    for (const UPoly& g : lifted) prod = umul(prod, g);
    UPoly err = usub(target, prod);
    bool zero = true;
    for (const Int& c : err)
      if (c != 0) {
        zero = false;
        break;
      }
    if (zero) break;
    MPoly emod(err.size());
    for (size_t i = 0; i < err.size(); ++i) {
      Int c = (err[i] / modulus) % Int(static_cast<unsigned long>(p));
      if (c < 0) c += static_cast<unsigned long>(p);
      emod[i] = mulmod(c.get_ui(), lc_inv, p);
    }
    mtrim(emod);
    for (int i = 0; i < r; ++i) {
      MPoly di = mmod(mmul(emod, bez[i], p), mod_factors[i], p);
      // lifted_i += modulus * di  (deg di < deg u_i keeps the factors monic)
      for (size_t j = 0; j < di.size(); ++j)
        lifted[i][j] += modulus * Int(static_cast<unsigned long>(di[j]));
    }
    modulus *= static_cast<unsigned long>(p);
  }

  // subset recombination
  std::vector<int> alive(r);
  for (int i = 0; i < r; ++i) alive[i] = i;
  std::vector<UPoly> result;
  UPoly remaining = f;
  int subset_size = 1;
  while (static_cast<int>(alive.size()) > 0 && subset_size <= static_cast<int>(alive.size())) {
    bool found = false;
    std::vector<int> idx(subset_size);
    for (int i = 0; i < subset_size; ++i) idx[i] = i;
    while (true) {
      // candidate = pp( smod(lc * prod_{i in subset} lifted_i, modulus) )
      UPoly cand{remaining.back()};
      for (int i : idx) cand = umul(cand, lifted[alive[i]]);
      for (Int& c : cand) c = smod(c, modulus);
      utrim(cand);
      UPoly g = uprimitive(cand);
      UPoly q;
      if (!g.empty() && udeg(g) >= 1 && udiv_exact(remaining, g, &q)) {
        result.push_back(g);
        remaining = uprimitive(q);
        std::vector<int> next_alive;
        for (int i = 0, t = 0; i < static_cast<int>(alive.size()); ++i) {
          if (t < subset_size && idx[t] == i)
            ++t;
          else
            next_alive.push_back(alive[i]);
        }
        alive = std::move(next_alive);
        found = true;
        break;
      }
      // next combination
      int i = subset_size - 1;
      while (i >= 0 && idx[i] == static_cast<int>(alive.size()) - subset_size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++subset_size;
    if (udeg(remaining) == 0) break;
    if (2 * subset_size > static_cast<int>(alive.size())) {
      if (udeg(remaining) >= 1) result.push_back(remaining);
      remaining = {Int(1)};
      break;
    }
  }
  if (udeg(remaining) >= 1) result.push_back(uprimitive(remaining));
  std::sort(result.begin(), result.end(), [](const UPoly& a, const UPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  return result;
}

}  // namespace cmc::detail
