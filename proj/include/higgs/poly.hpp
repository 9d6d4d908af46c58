#pragma once

#include <utility>
#include <vector>

#include "field.hpp"

namespace higgs {

// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
template <class T>
using Poly = std::vector<T>;

template <class T>
void trim(Poly<T>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

template <class T>
int degree(const Poly<T>& p) {
  return int(p.size()) - 1;
}

template <class K>
Poly<typename K::Elem> poly_const(const K& k, const typename K::Elem& c) {
  Poly<typename K::Elem> p{c};
  trim(p);
  (void)k;
  return p;
}

template <class K>
Poly<typename K::Elem> poly_x_minus(const K& k, const typename K::Elem& a) {
  return Poly<typename K::Elem>{-a, k.one()};
}

template <class K>
Poly<typename K::Elem> poly_add(const K& k, const Poly<typename K::Elem>& a, const Poly<typename K::Elem>& b) {
  Poly<typename K::Elem> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

template <class K>
Poly<typename K::Elem> poly_sub(const K& k, const Poly<typename K::Elem>& a, const Poly<typename K::Elem>& b) {
  Poly<typename K::Elem> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

template <class K>
Poly<typename K::Elem> poly_mul(const K& k, const Poly<typename K::Elem>& a, const Poly<typename K::Elem>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<typename K::Elem> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

template <class K>
Poly<typename K::Elem> poly_scale(const K& k, const Poly<typename K::Elem>& a, const typename K::Elem& c) {
  Poly<typename K::Elem> r = a;
  for (auto& x : r) x *= c;
  trim(r);
  (void)k;
  return r;
}

template <class K>
Poly<typename K::Elem> poly_pow(const K& k, Poly<typename K::Elem> a, int e) {
  Poly<typename K::Elem> r{k.one()};
  while (e > 0) {
    if (e & 1) r = poly_mul(k, r, a);
    a = poly_mul(k, a, a);
    e >>= 1;
  }
  return r;
}

// Quotient and remainder; b nonzero.
template <class K>
std::pair<Poly<typename K::Elem>, Poly<typename K::Elem>> poly_divmod(const K& k, Poly<typename K::Elem> a,
                                                                      const Poly<typename K::Elem>& b) {
  using T = typename K::Elem;
  Poly<T> q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, k.zero());
  T inv = k.one() / b.back();
  for (int i = int(a.size()) - int(b.size()); i >= 0; --i) {
    T c = a[i + b.size() - 1] * inv;
    q[i] = c;
    if (is_zero(c)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

template <class K>
Poly<typename K::Elem> poly_monic(const K& k, const Poly<typename K::Elem>& a) {
  if (a.empty()) return a;
  return poly_scale(k, a, k.one() / a.back());
}

template <class K>
Poly<typename K::Elem> poly_gcd(const K& k, Poly<typename K::Elem> a, Poly<typename K::Elem> b) {
  while (!b.empty()) {
    auto r = poly_divmod(k, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(k, a);
}

template <class K>
Poly<typename K::Elem> poly_derivative(const K& k, const Poly<typename K::Elem>& a) {
  Poly<typename K::Elem> r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * k.from_int(static_cast<long long>(i)));
  trim(r);
  return r;
}

template <class K>
typename K::Elem poly_eval(const K& k, const Poly<typename K::Elem>& a, const typename K::Elem& x) {
  typename K::Elem r = k.zero();
  for (int i = int(a.size()) - 1; i >= 0; --i) r = r * x + a[i];
  return r;
}

template <class T>
bool poly_equal(const Poly<T>& a, const Poly<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

// Yun's squarefree decomposition: returns (multiplicity, squarefree monic
// factor) for every nonconstant factor.  Valid when the characteristic is
// zero or exceeds the degree.
template <class K>
std::vector<std::pair<int, Poly<typename K::Elem>>> squarefree_decomposition(const K& k,
                                                                             const Poly<typename K::Elem>& f) {
  using P = Poly<typename K::Elem>;
  std::vector<std::pair<int, P>> out;
  if (degree(f) <= 0) return out;
  P a = poly_monic(k, f);
  P b = poly_derivative(k, a);
  P c = poly_gcd(k, a, b);
  P w = poly_divmod(k, a, c).first;
  P y = poly_divmod(k, b, c).first;
  P z = poly_sub(k, y, poly_derivative(k, w));
  int i = 1;
  while (degree(w) > 0) {
    P g = poly_gcd(k, w, z);
    if (degree(g) > 0) out.push_back({i, g});
    w = poly_divmod(k, w, g).first;
    y = poly_divmod(k, z, g).first;
    z = poly_sub(k, y, poly_derivative(k, w));
    ++i;
  }
  return out;
}

}  // namespace higgs
