#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "euler.hpp"
#include "field.hpp"
#include "kclass.hpp"
#include "linalg.hpp"
#include "partitions.hpp"

namespace higgs {

// e-factors on the left (indices weakly decreasing), h-factors on the right.
struct Monomial {
  std::vector<int> e;
  Partition h;

  void normalize() {
    std::sort(e.rbegin(), e.rend());
    h = normalize_partition(h);
  }
  KClass weight() const {
    int d = 0;
    for (int i : e) d += i;
    return KClass(int(e.size()), d + partition_size(h));
  }
  int h_degree() const { return partition_size(h); }
  std::string str() const {
    std::string s;
    for (int i : e) s += "e" + std::to_string(i);
    for (int j : h) s += "h" + std::to_string(j);
    return s.empty() ? "1" : s;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e != b.e ? a.e < b.e : a.h < b.h; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e && a.h == b.h; }
};

struct AlgebraElement {
  KClass weight;
  int floor = 0;
  std::map<Monomial, Rational> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) terms.erase(it);
    }
  }
  int max_h_degree() const {
    int d = 0;
    for (auto& [m, c] : terms) d = std::max(d, m.h_degree());
    return d;
  }
  // Drop monomials with an e-index below the floor.
  AlgebraElement truncated(int new_floor) const {
    AlgebraElement out{weight, new_floor, {}};
    for (auto& [m, c] : terms)
      if (m.e.empty() || m.e.back() >= new_floor) out.terms.emplace(m, c);
    return out;
  }
  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto& [m, c] : terms) {
      if (!s.empty()) s += " + ";
      if (c != 1) s += rational_to_string(c) + "*";
      s += m.str();
    }
    return s;
  }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.weight == b.weight && a.floor == b.floor && a.terms == b.terms;
  }
};

inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
  for (auto& [m, c] : b.terms) a.add(m, c);
  return a;
}
inline AlgebraElement operator*(const Rational& c, AlgebraElement a) {
  if (sgn(c) == 0) {
    a.terms.clear();
    return a;
  }
  for (auto& [m, x] : a.terms) x *= c;
  return a;
}
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a + Rational(-1) * b; }

inline AlgebraElement unit_element(int floor) {
  AlgebraElement u{KClass(), floor, {}};
  u.terms[Monomial{}] = 1;
  return u;
}

inline AlgebraElement monomial_element(const Monomial& m, int floor, const Rational& c = 1) {
  Monomial n = m;
  n.normalize();
  AlgebraElement x{n.weight(), floor, {}};
  x.add(n, c);
  return x;
}

struct AlgebraOptions {
  Rational bracket = 2;  // h_j e_i = e_i h_j + bracket * e_{i+j}
  int depth_margin = 0;
  bool weighted = true;  // torsion images weighted by 1/z_lambda
  // Weighted images only: compute in the basis e_S P_lambda and move each P_m
  // rightwards with P(z) e_n P(z)^{-1} = sum_C binom(bracket+C-1, C) z^C e_{n+C}.
  bool conjugation = true;
};

inline const std::vector<Partition>& partitions_cached(int m) {
  static std::vector<std::vector<Partition>> cache;
  while (int(cache.size()) <= m) cache.push_back(partitions_of(int(cache.size())));
  return cache[m];
}

inline Rational binomial_q(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

// Calls fn(absorbed degree, remaining h's, coefficient) for every
// sub-multiset of h's that is absorbed by a single e-factor.
template <class Fn>
void for_each_absorption(const Partition& h, const Rational& bracket, Fn&& fn) {
  std::vector<std::pair<int, int>> groups;  // (value, multiplicity)
  for (int j : h) {
    if (!groups.empty() && groups.back().first == j)
      groups.back().second++;
    else
      groups.push_back({j, 1});
  }
  Partition rest;
  std::function<void(std::size_t, int, Rational)> rec = [&](std::size_t g, int absorbed, Rational c) {
    if (g == groups.size()) {
      fn(absorbed, rest, c);
      return;
    }
    auto [v, mult] = groups[g];
    Rational pw = 1;
    for (int take = 0; take <= mult; ++take) {
      for (int x = 0; x < mult - take; ++x) rest.push_back(v);
      rec(g + 1, absorbed + take * v, c * binomial_q(mult, take) * pw);
      for (int x = 0; x < mult - take; ++x) rest.pop_back();
      pw *= bracket;
    }
  };
  rec(0, 0, Rational(1));
}

// a * b for monomials: each h of a either passes to the right or is absorbed
// by one e of b (ad h_j is a derivation with ad h_j (e_i) = bracket e_{i+j}).
inline void multiply_monomials(const Monomial& a, const Monomial& b, const Rational& coeff, const Rational& bracket,
                               int floor, AlgebraElement& out) {
  if (!a.e.empty() && a.e.back() < floor) return;
  std::size_t k = b.e.size();
  if (k == 0) {
    Monomial m{a.e, a.h};
    m.h.insert(m.h.end(), b.h.begin(), b.h.end());
    m.normalize();
    out.add(m, coeff);
    return;
  }
  if (k == 1) {
    if (b.e[0] + a.h_degree() < floor) return;
    for_each_absorption(a.h, bracket, [&](int absorbed, const Partition& rest, const Rational& c) {
      if (b.e[0] + absorbed < floor) return;
      Monomial m{a.e, rest};
      m.e.push_back(b.e[0] + absorbed);
      m.h.insert(m.h.end(), b.h.begin(), b.h.end());
      m.normalize();
      out.add(m, coeff * c);
    });
    return;
  }
  std::vector<int> shift(k, 0);
  Partition stay;
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t idx, Rational c) {
    if (idx == a.h.size()) {
      Monomial m;
      m.e = a.e;
      for (std::size_t i = 0; i < k; ++i) {
        int v = b.e[i] + shift[i];
        if (v < floor) return;
        m.e.push_back(v);
      }
      m.h = stay;
      m.h.insert(m.h.end(), b.h.begin(), b.h.end());
      m.normalize();
      out.add(m, c);
      return;
    }
    int j = a.h[idx];
    stay.push_back(j);
    rec(idx + 1, c);
    stay.pop_back();
    for (std::size_t i = 0; i < k; ++i) {
      shift[i] += j;
      rec(idx + 1, c * bracket);
      shift[i] -= j;
    }
  };
  rec(0, coeff);
}

// Exact product of the given representations, truncated at `floor`.
inline AlgebraElement multiply_raw(const AlgebraElement& x, const AlgebraElement& y, int floor,
                                   const Rational& bracket = 2) {
  AlgebraElement out{x.weight + y.weight, floor, {}};
  for (auto& [a, ca] : x.terms)
    for (auto& [b, cb] : y.terms) multiply_monomials(a, b, ca * cb, bracket, floor, out);
  return out;
}

inline AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y, const AlgebraOptions& opt = {}) {
  if (x.floor != y.floor) throw std::invalid_argument("multiply needs equal floors");
  return multiply_raw(x, y, x.floor, opt.bracket);
}

// z_lambda = prod_i i^{m_i} m_i!
inline Rational centralizer_order(const Partition& lam) {
  mpz_class z = 1;
  std::map<int, int> mult;
  for (int p : lam) mult[p]++;
  for (auto& [p, m] : mult)
    for (int i = 1; i <= m; ++i) z *= mpz_class(p) * i;
  return Rational(z);
}

// Sum over partitions of l of the products of h's, unweighted.
inline AlgebraElement p_l_unweighted(int l, int floor = 0) {
  if (l < 0) throw std::invalid_argument("p_l needs l >= 0");
  AlgebraElement x{KClass(0, l), floor, {}};
  for (auto& lam : partitions_cached(l)) x.add(Monomial{{}, lam}, 1);
  return x;
}

// Image of the torsion generator of degree l: the coefficient of z^l in
// exp(sum_r h_r z^r / r), i.e. sum over partitions of prod h / z_lambda.
inline AlgebraElement p_l(int l, int floor = 0) {
  if (l < 0) throw std::invalid_argument("p_l needs l >= 0");
  AlgebraElement x{KClass(0, l), floor, {}};
  for (auto& lam : partitions_cached(l)) x.add(Monomial{{}, lam}, 1 / centralizer_order(lam));
  return x;
}

inline Rational torsion_weight(const Partition& lam, bool weighted) {
  return weighted ? 1 / centralizer_order(lam) : Rational(1);
}

// Image of one generator, with line expansions kept down to e-index `low`.
inline AlgebraElement psi_generator(const Generator& g, int low, bool weighted = true) {
  if (g.tor) return weighted ? p_l(g.value, low) : p_l_unweighted(g.value, low);
  AlgebraElement x{g.cls(), low, {}};
  for (int m = 0; g.value - m >= low; ++m)
    for (auto& lam : partitions_cached(m)) x.add(Monomial{{g.value - m}, lam}, torsion_weight(lam, weighted));
  return x;
}

inline AlgebraElement psi(const Generator& g, int floor, bool weighted = true) {
  if (!g.tor && g.value < floor) throw std::invalid_argument("line index below floor");
  return psi_generator(g, floor, weighted);
}

// x * psi(g) where the line expansion of g is cut at e-index `low`; the
// terms are generated lazily, so only those that can re-enter the window
// are ever formed.
inline AlgebraElement multiply_by_generator(const AlgebraElement& x, const Generator& g, int floor, int low,
                                            const Rational& bracket, bool weighted = true) {
  AlgebraElement out{x.weight + g.cls(), floor, {}};
  if (g.tor) {
    for (auto& [a, ca] : x.terms)
      for (auto& lam : partitions_cached(g.value)) {
        Monomial m{a.e, a.h};
        m.h.insert(m.h.end(), lam.begin(), lam.end());
        m.normalize();
        out.add(m, ca * torsion_weight(lam, weighted));
      }
    return out;
  }
  for (auto& [a, ca] : x.terms) {
    if (!a.e.empty() && a.e.back() < floor) continue;
    for_each_absorption(a.h, bracket, [&](int absorbed, const Partition& rest, const Rational& c) {
      // e_{n-m} P_m with n - m >= low and n - m + absorbed >= floor
      int top = std::min(g.value - low, g.value + absorbed - floor);
      for (int m = 0; m <= top; ++m)
        for (auto& lam : partitions_cached(m)) {
          Monomial mono{a.e, rest};
          mono.e.push_back(g.value - m + absorbed);
          mono.h.insert(mono.h.end(), lam.begin(), lam.end());
          mono.normalize();
          out.add(mono, ca * c * torsion_weight(lam, weighted));
        }
    });
  }
  return out;
}

// Image of a word, multiplied left to right.  The accumulated left factor is
// exact after truncation (its e's never move); each new line factor is
// expanded deep enough for the h's on its left to lift it into the window.
inline AlgebraElement psi_word_expanded(const GeneratorWord& w, int floor, const AlgebraOptions& opt = {}) {
  KClass cls = word_class(w);
  int depth = std::max(0, cls.degree - cls.rank * floor);
  AlgebraElement acc = unit_element(floor);
  for (auto& g : w) {
    int need = std::max(depth, acc.max_h_degree()) + opt.depth_margin;
    acc = multiply_by_generator(acc, g, floor, floor - need, opt.bracket, opt.weighted);
  }
  acc.weight = cls;
  return acc;
}

// binom(c + k - 1, k) for rational c: coefficient of z^k in (1 - z)^{-c}
inline Rational conjugation_weight(const Rational& c, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (c + i) / (i + 1);
  return r;
}

// Image of a word with the Cartan part in the basis P_lambda = prod P_{lambda_i}
// (the Monomial's h lists the P indices).  Generators are applied right to
// left; a term survives only while the generators still to its left carry
// enough degree to lift every e-index to the floor.
inline AlgebraElement psi_word_p(const GeneratorWord& w, int floor, const Rational& bracket = 2) {
  KClass cls = word_class(w);
  std::vector<int> budget(w.size() + 1, 0);
  {
    int deg = 0, rank = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      budget[k] = deg - rank * floor;
      deg += w[k].cls().degree;
      rank += w[k].cls().rank;
    }
  }
  std::vector<Rational> weight;
  auto cw = [&](int k) {
    while (int(weight.size()) <= k) weight.push_back(conjugation_weight(bracket, int(weight.size())));
    return weight[k];
  };
  auto deficit = [&](const std::vector<int>& e) {
    int d = 0;
    for (int v : e) d += std::max(0, floor - v);
    return d;
  };
  // fn(raised e's, degree used, weight) over all ways to spread at most
  // `avail` degree over the e's of `e`
  auto spread = [&](const std::vector<int>& e, int avail, auto&& fn) {
    std::vector<int> cur(e);
    std::function<void(std::size_t, int, Rational)> rec = [&](std::size_t i, int used, Rational c) {
      if (i == e.size()) {
        fn(cur, used, c);
        return;
      }
      for (int x = 0; used + x <= avail; ++x) {
        cur[i] = e[i] + x;
        rec(i + 1, used + x, c * cw(x));
      }
      cur[i] = e[i];
    };
    rec(0, 0, Rational(1));
  };
  AlgebraElement acc = unit_element(floor);
  for (std::size_t k = w.size(); k-- > 0;) {
    const Generator& g = w[k];
    int b = budget[k];
    AlgebraElement out{acc.weight + g.cls(), floor, {}};
    for (auto& [a, ca] : acc.terms) {
      if (g.tor) {
        spread(a.e, g.value, [&](const std::vector<int>& e, int used, const Rational& c) {
          if (deficit(e) > b) return;
          Monomial m{e, a.h};
          if (g.value > used) m.h.push_back(g.value - used);
          m.normalize();
          out.add(m, ca * c);
        });
        continue;
      }
      // e_{n-m} P_m a; the new e is never raised by P_m itself
      int top = g.value - floor + b;
      for (int m = 0; m <= top; ++m) {
        int fresh = g.value - m;
        int left = b - std::max(0, floor - fresh);
        if (left < 0) break;
        spread(a.e, m, [&](const std::vector<int>& e, int used, const Rational& c) {
          if (deficit(e) > left) return;
          Monomial mono{e, a.h};
          mono.e.push_back(fresh);
          if (m > used) mono.h.push_back(m - used);
          mono.normalize();
          out.add(mono, ca * c);
        });
      }
    }
    acc = std::move(out);
  }
  acc.weight = cls;
  return acc;
}

// Rewrites P_lambda in terms of products of h's.
inline AlgebraElement p_basis_to_h(const AlgebraElement& x) {
  std::map<Partition, AlgebraElement> cache;
  auto expand = [&](const Partition& lam) -> const AlgebraElement& {
    auto it = cache.find(lam);
    if (it != cache.end()) return it->second;
    AlgebraElement r = unit_element(0);
    for (int l : lam) r = multiply_raw(r, p_l(l), 0);
    return cache.emplace(lam, r).first->second;
  };
  AlgebraElement out{x.weight, x.floor, {}};
  for (auto& [m, c] : x.terms)
    for (auto& [hm, hc] : expand(m.h).terms) out.add(Monomial{m.e, hm.h}, c * hc);
  return out;
}

inline bool uses_conjugation(const AlgebraOptions& opt) { return opt.weighted && opt.conjugation; }

inline AlgebraElement psi_word(const GeneratorWord& w, int floor, const AlgebraOptions& opt = {}) {
  if (uses_conjugation(opt)) return p_basis_to_h(psi_word_p(w, floor, opt.bracket));
  return psi_word_expanded(w, floor, opt);
}

// psi_word in whichever Cartan basis the options compute in; the two bases
// share the index set, so equalities and linear solves can stay there.
inline AlgebraElement psi_word_native(const GeneratorWord& w, int floor, const AlgebraOptions& opt = {}) {
  if (uses_conjugation(opt)) return psi_word_p(w, floor, opt.bracket);
  return psi_word_expanded(w, floor, opt);
}

// Linear combinations of words.
using WordCombination = std::map<GeneratorWord, Rational>;

inline void add_term(WordCombination& x, const GeneratorWord& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = x.find(w);
  if (it == x.end()) {
    x.emplace(w, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) x.erase(it);
  }
}

inline AlgebraElement psi_combination_native(const WordCombination& x, KClass cls, int floor,
                                             const AlgebraOptions& opt = {}) {
  AlgebraElement out{cls, floor, {}};
  for (auto& [w, c] : x) out = out + c * psi_word_native(w, floor, opt);
  return out;
}

inline AlgebraElement psi_combination(const WordCombination& x, KClass cls, int floor, const AlgebraOptions& opt = {}) {
  auto out = psi_combination_native(x, cls, floor, opt);
  return uses_conjugation(opt) ? p_basis_to_h(out) : out;
}

inline GeneratorWord line_word(const std::vector<int>& n) {
  GeneratorWord w;
  for (int v : n) w.push_back(Line(v));
  return w;
}

// ---------------------------------------------------------------------------
// Relations

struct RelationParams {
  int d = 1, d2 = 1;  // torsion degrees
  int n = 0, l = 0;   // line indices
};

inline bool verify_relation(int which, const RelationParams& p, int floor, const AlgebraOptions& opt = {}) {
  auto tor = [](int d) { return d == 0 ? GeneratorWord{} : GeneratorWord{Tor(d)}; };
  if (which == 1) {
    return psi_word_native({Tor(p.d), Tor(p.d2)}, floor, opt) == psi_word_native({Tor(p.d2), Tor(p.d)}, floor, opt);
  }
  if (which == 2) {
    WordCombination rhs;
    for (int c = 0; c <= p.d; ++c) {
      GeneratorWord w{Line(p.n + c)};
      auto t = tor(p.d - c);
      w.insert(w.end(), t.begin(), t.end());
      add_term(rhs, w, Rational(c + 1));
    }
    KClass cls(1, p.n + p.d);
    return psi_word_native({Tor(p.d), Line(p.n)}, floor, opt) == psi_combination_native(rhs, cls, floor, opt);
  }
  if (which == 3) {
    int n = p.n, l = p.l;
    KClass cls(2, n + l);
    WordCombination lhs, rhs;
    add_term(lhs, line_word({n - 1, l + 1}), Rational(n - l + 2));
    add_term(lhs, line_word({l - 1, n + 1}), Rational(-(n - l + 2)));
    add_term(rhs, line_word({n, l}), Rational(n - l));
    add_term(rhs, line_word({l - 2, n + 2}), Rational(-(n - l)));
    return psi_combination_native(lhs, cls, floor, opt) == psi_combination_native(rhs, cls, floor, opt);
  }
  throw std::invalid_argument("relation must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------
// Ordered basis and coordinates

// Lines with l1 <= l2 <= ... >= floor, then torsion degrees d1 >= d2 >= ...
inline std::vector<GeneratorWord> ordered_basis(KClass cls, int floor) {
  std::vector<GeneratorWord> out;
  if (cls.rank < 0) return out;
  int r = cls.rank;
  int top = cls.degree - (r - 1) * floor;  // largest possible line index
  for (int sum = r * floor; sum <= cls.degree; ++sum) {
    if (r == 0 && sum != 0) continue;
    for (auto& lines : int_partitions(r, sum, floor)) {
      if (!lines.empty() && lines[0] > top) continue;
      for (auto& lam : partitions_cached(cls.degree - sum)) {
        std::vector<int> inc(lines.rbegin(), lines.rend());
        GeneratorWord w = line_word(inc);
        for (int d : lam) w.push_back(Tor(d));
        out.push_back(w);
      }
    }
    if (r == 0) break;
  }
  return out;
}

// All normal-ordered monomials of the weight with e-indices >= floor.
inline std::vector<Monomial> weight_space_monomials(KClass cls, int floor) {
  std::vector<Monomial> out;
  for (auto& w : ordered_basis(cls, floor)) {
    Monomial m;
    for (auto& g : w)
      if (g.tor)
        m.h.push_back(g.value);
      else
        m.e.push_back(g.value);
    m.normalize();
    out.push_back(m);
  }
  return out;
}

// Columns are the images of the basis words; with `native` they are left in
// the Cartan basis the options compute in.
inline Matrix<Rational> psi_matrix(const std::vector<GeneratorWord>& basis, const std::vector<Monomial>& monos,
                                   int floor, const AlgebraOptions& opt, bool native = false) {
  RationalField k;
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
  Matrix<Rational> m = zero_matrix(k, monos.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto img = native ? psi_word_native(basis[j], floor, opt) : psi_word(basis[j], floor, opt);
    for (auto& [mono, c] : img.terms) m[index.at(mono)][j] = c;
  }
  return m;
}

inline std::vector<Rational> solve_ordered_coords(const AlgebraElement& x, KClass cls, int floor,
                                                  const AlgebraOptions& opt, bool native) {
  RationalField k;
  auto basis = ordered_basis(cls, floor);
  auto monos = weight_space_monomials(cls, floor);
  auto m = psi_matrix(basis, monos, floor, opt, native);
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
  std::vector<Rational> rhs(monos.size(), Rational(0));
  for (auto& [mono, c] : x.terms) {
    auto it = index.find(mono);
    if (it == index.end()) throw NotInSpan("monomial " + mono.str() + " outside the weight space");
    rhs[it->second] = c;
  }
  auto sol = solve(k, m, rhs, basis.size());
  if (!sol) throw NotInSpan("element is not in the span of the ordered products");
  return *sol;
}

// x is written in h's.
inline std::vector<Rational> to_ordered_coords(const AlgebraElement& x, KClass cls, int floor,
                                               const AlgebraOptions& opt = {}) {
  return solve_ordered_coords(x, cls, floor, opt, false);
}

inline std::vector<Rational> to_ordered_coords(const GeneratorWord& w, int floor, const AlgebraOptions& opt = {}) {
  return solve_ordered_coords(psi_word_native(w, floor, opt), word_class(w), floor, opt, true);
}

inline WordCombination coords_to_combination(const std::vector<Rational>& coords, KClass cls, int floor) {
  auto basis = ordered_basis(cls, floor);
  WordCombination out;
  for (std::size_t i = 0; i < basis.size(); ++i) add_term(out, basis[i], coords[i]);
  return out;
}

// Straightening by the displayed identities: torsion moves right through
// lines, torsion degrees sort decreasingly, line pairs sort increasingly.
// Words whose leading line index is below the floor vanish in the window.
inline WordCombination straighten(const GeneratorWord& w, int floor, int max_steps = 200000) {
  WordCombination done, todo;
  add_term(todo, w, 1);
  int steps = 0;
  while (!todo.empty()) {
    if (++steps > max_steps) throw SearchExhausted("straightening did not terminate");
    auto [word, coeff] = *todo.begin();
    todo.erase(todo.begin());
    std::size_t i = 0;
    for (; i + 1 < word.size(); ++i) {
      auto& a = word[i];
      auto& b = word[i + 1];
      if (a.tor && !b.tor) break;
      if (a.tor && b.tor && a.value < b.value) break;
      if (!a.tor && !b.tor && a.value > b.value) break;
    }
    if (i + 1 >= word.size()) {
      if (!word.empty() && !word[0].tor && word[0].value < floor) continue;
      add_term(done, word, coeff);
      continue;
    }
    auto replace = [&](const GeneratorWord& mid, const Rational& c) {
      GeneratorWord nw(word.begin(), word.begin() + i);
      nw.insert(nw.end(), mid.begin(), mid.end());
      nw.insert(nw.end(), word.begin() + i + 2, word.end());
      add_term(todo, nw, coeff * c);
    };
    auto& a = word[i];
    auto& b = word[i + 1];
    if (a.tor && b.tor) {
      replace({b, a}, 1);
    } else if (a.tor) {
      int d = a.value, n = b.value;
      for (int c = 0; c <= d; ++c) {
        GeneratorWord mid{Line(n + c)};
        if (d - c > 0) mid.push_back(Tor(d - c));
        replace(mid, Rational(c + 1));
      }
    } else {
      // line relation at n = x, l = y; the unordered term has gap x - y - 2
      int x = a.value, y = b.value;
      Rational f = Rational(x - y + 2) / (x - y);
      replace(line_word({y - 2, x + 2}), 1);
      replace(line_word({x - 1, y + 1}), f);
      replace(line_word({y - 1, x + 1}), -f);
    }
  }
  return done;
}

}  // namespace higgs
