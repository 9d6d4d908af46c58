#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace higgs {

using Rational = mpq_class;
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a base seed and a tag list.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::int64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (auto t : tags) h = splitmix64(h ^ static_cast<std::uint64_t>(t));
  return h;
}

inline std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rational_from_string(const std::string& s) {
  Rational r(s);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

// ---------------------------------------------------------------------------
// Finite fields.  Prime fields of any size below 2^32 use direct modular
// arithmetic; proper prime powers (q <= 4096) use log tables over a
// primitive element.

struct GfContext {
  std::uint32_t q = 0;
  std::uint32_t p = 0;
  int degree = 1;
  std::vector<std::uint32_t> add_tab, neg_tab, log_tab, exp_tab;

  bool is_prime() const { return degree == 1; }
};

std::shared_ptr<const GfContext> make_gf_context(std::uint32_t q);

struct Fq {
  std::uint32_t v = 0;
  const GfContext* ctx = nullptr;

  Fq() = default;
  Fq(std::uint32_t value, const GfContext* c) : v(value), ctx(c) {}

  friend bool operator==(const Fq& a, const Fq& b) { return a.v == b.v; }
  friend bool operator!=(const Fq& a, const Fq& b) { return a.v != b.v; }
  friend bool operator<(const Fq& a, const Fq& b) { return a.v < b.v; }

  static const GfContext* pick(const Fq& a, const Fq& b) { return a.ctx ? a.ctx : b.ctx; }

  friend Fq operator+(const Fq& a, const Fq& b) {
    const GfContext* c = pick(a, b);
    if (!c) return Fq{};
    if (c->is_prime()) {
      std::uint64_t s = std::uint64_t(a.v) + b.v;
      if (s >= c->p) s -= c->p;
      return Fq(std::uint32_t(s), c);
    }
    return Fq(c->add_tab[std::size_t(a.v) * c->q + b.v], c);
  }
  friend Fq operator-(const Fq& a) {
    if (!a.ctx) return a;
    if (a.ctx->is_prime()) return Fq(a.v == 0 ? 0 : a.ctx->p - a.v, a.ctx);
    return Fq(a.ctx->neg_tab[a.v], a.ctx);
  }
  friend Fq operator-(const Fq& a, const Fq& b) { return a + (-b); }
  friend Fq operator*(const Fq& a, const Fq& b) {
    const GfContext* c = pick(a, b);
    if (!c) return Fq{};
    if (a.v == 0 || b.v == 0) return Fq(0, c);
    if (c->is_prime()) return Fq(std::uint32_t((std::uint64_t(a.v) * b.v) % c->p), c);
    std::uint32_t e = c->log_tab[a.v] + c->log_tab[b.v];
    if (e >= c->q - 1) e -= c->q - 1;
    return Fq(c->exp_tab[e], c);
  }
  Fq inv() const {
    if (v == 0) throw std::domain_error("division by zero in finite field");
    if (ctx->is_prime()) {
      // Fermat inversion
      std::uint64_t r = 1, b = v, e = ctx->p - 2;
      while (e) {
        if (e & 1) r = r * b % ctx->p;
        b = b * b % ctx->p;
        e >>= 1;
      }
      return Fq(std::uint32_t(r), ctx);
    }
    std::uint32_t e = (ctx->q - 1 - ctx->log_tab[v]) % (ctx->q - 1);
    return Fq(ctx->exp_tab[e], ctx);
  }
  friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inv(); }
  Fq& operator+=(const Fq& b) { return *this = *this + b; }
  Fq& operator-=(const Fq& b) { return *this = *this - b; }
  Fq& operator*=(const Fq& b) { return *this = *this * b; }
  Fq& operator/=(const Fq& b) { return *this = *this / b; }
};

inline bool is_zero(const Fq& x) { return x.v == 0; }

namespace detail {

inline bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; std::uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over F_p encoded as base-p digit vectors, lowest first.
inline std::vector<std::uint32_t> digits(std::uint32_t x, std::uint32_t p, int k) {
  std::vector<std::uint32_t> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

inline std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t x = 0;
  for (int i = int(d.size()) - 1; i >= 0; --i) x = x * p + d[i];
  return x;
}

// Product in F_p[t]/(modulus) where modulus is monic of degree k
// (coefficients given lowest first, length k+1).
inline std::vector<std::uint32_t> mulmod(const std::vector<std::uint32_t>& a,
                                         const std::vector<std::uint32_t>& b,
                                         const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
  int k = int(modulus.size()) - 1;
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
  for (int d = 2 * k - 1; d >= k; --d) {
    std::uint64_t c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (int i = 0; i < k; ++i)
      prod[d - k + i] = (prod[d - k + i] + (p - c) * modulus[i]) % p;
  }
  std::vector<std::uint32_t> r(k);
  for (int i = 0; i < k; ++i) r[i] = std::uint32_t(prod[i]);
  return r;
}

}  // namespace detail

inline std::shared_ptr<const GfContext> make_gf_context(std::uint32_t q) {
  auto c = std::make_shared<GfContext>();
  c->q = q;
  if (detail::is_prime_u32(q)) {
    c->p = q;
    c->degree = 1;
    return c;
  }
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  int k = 0;
  std::uint32_t t = q;
  while (t % p == 0) {
    t /= p;
    ++k;
  }
  if (t != 1 || q > 4096) throw std::invalid_argument("unsupported field order " + std::to_string(q));
  c->p = p;
  c->degree = k;
  // Search a monic modulus of degree k for which t is a generator of the
  // multiplicative group; such a modulus is automatically irreducible.
  std::uint32_t pk = q;
  for (std::uint32_t lowbits = 0; lowbits < pk; ++lowbits) {
    std::vector<std::uint32_t> modulus = detail::digits(lowbits, p, k);
    modulus.push_back(1);
    if (modulus[0] == 0) continue;
    std::vector<std::uint32_t> x(k, 0), cur(k, 0);
    if (k >= 2) x[1] = 1;
    cur[0] = 1;
    std::vector<std::uint32_t> exps(q - 1), logs(q, 0);
    std::vector<char> seen(q, 0);
    bool ok = true;
    for (std::uint32_t e = 0; e < q - 1; ++e) {
      std::uint32_t code = detail::undigits(cur, p);
      if (seen[code] || code == 0) {
        ok = false;
        break;
      }
      seen[code] = 1;
      exps[e] = code;
      logs[code] = e;
      cur = detail::mulmod(cur, x, modulus, p);
    }
    if (!ok) continue;
    c->exp_tab = exps;
    c->log_tab = logs;
    c->add_tab.assign(std::size_t(q) * q, 0);
    c->neg_tab.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
      auto da = detail::digits(a, p, k);
      std::vector<std::uint32_t> dn(k);
      for (int i = 0; i < k; ++i) dn[i] = (p - da[i]) % p;
      c->neg_tab[a] = detail::undigits(dn, p);
      for (std::uint32_t b = 0; b < q; ++b) {
        auto db = detail::digits(b, p, k);
        std::vector<std::uint32_t> ds(k);
        for (int i = 0; i < k; ++i) ds[i] = (da[i] + db[i]) % p;
        c->add_tab[std::size_t(a) * q + b] = detail::undigits(ds, p);
      }
    }
    return c;
  }
  throw std::logic_error("no primitive modulus found");
}

// ---------------------------------------------------------------------------
// Field descriptors used by the algorithms.

struct RationalField {
  using Elem = Rational;
  int height = 1000;

  Elem zero() const { return Rational(0); }
  Elem one() const { return Rational(1); }
  Elem from_int(long long n) const { return Rational(static_cast<long>(n)); }
  bool finite() const { return false; }
  std::uint64_t order() const { return 0; }
  std::uint64_t characteristic() const { return 0; }
  // Random element of bounded height num/den.
  Elem random(Rng& rng) const {
    std::uniform_int_distribution<long> num(-height, height), den(1, 7);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
  }
  Elem random_nonzero(Rng& rng) const {
    for (;;) {
      Elem e = random(rng);
      if (!is_zero(e)) return e;
    }
  }
  std::string str(const Elem& e) const { return rational_to_string(e); }
  std::string name() const { return "Q"; }
};

struct FiniteField {
  using Elem = Fq;
  std::shared_ptr<const GfContext> ctx;

  explicit FiniteField(std::uint32_t q) : ctx(make_gf_context(q)) {}

  Elem zero() const { return Fq(0, ctx.get()); }
  Elem one() const { return from_int(1); }
  Elem from_int(long long n) const {
    long long p = ctx->p;
    long long r = ((n % p) + p) % p;
    // integers map into the prime subfield, encoded as the constant digit
    return Fq(std::uint32_t(r), ctx.get());
  }
  Elem from_index(std::uint32_t i) const { return Fq(i, ctx.get()); }
  bool finite() const { return true; }
  std::uint64_t order() const { return ctx->q; }
  std::uint64_t characteristic() const { return ctx->p; }
  Elem random(Rng& rng) const {
    std::uniform_int_distribution<std::uint32_t> d(0, ctx->q - 1);
    return Fq(d(rng), ctx.get());
  }
  Elem random_nonzero(Rng& rng) const {
    std::uniform_int_distribution<std::uint32_t> d(1, ctx->q - 1);
    return Fq(d(rng), ctx.get());
  }
  std::string str(const Elem& e) const { return std::to_string(e.v); }
  std::string name() const { return "F" + std::to_string(ctx->q); }
};

}  // namespace higgs
