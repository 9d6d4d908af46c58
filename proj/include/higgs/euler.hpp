#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"
#include "field.hpp"
#include "kclass.hpp"
#include "linalg.hpp"
#include "partitions.hpp"
#include "poly.hpp"
#include "sheaf.hpp"

namespace higgs {

// ---------------------------------------------------------------------------
// Generator words

struct Generator {
  bool tor = false;
  int value = 0;

  KClass cls() const { return tor ? KClass(0, value) : KClass(1, value); }
  friend bool operator==(const Generator& a, const Generator& b) { return a.tor == b.tor && a.value == b.value; }
  friend bool operator<(const Generator& a, const Generator& b) {
    return a.tor != b.tor ? a.tor < b.tor : a.value < b.value;
  }
};

inline Generator Tor(int d) {
  if (d < 1) throw std::invalid_argument("Tor(d) needs d >= 1");
  return {true, d};
}
inline Generator Line(int n) { return {false, n}; }

using GeneratorWord = std::vector<Generator>;

inline KClass word_class(const GeneratorWord& w) {
  KClass c;
  for (auto& g : w) c = c + g.cls();
  return c;
}

inline std::string word_to_string(const GeneratorWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += (w[i].tor ? "T" : "L") + std::to_string(w[i].value);
  }
  return s.empty() ? "1" : s;
}

// Accepts "L1 L0 T2", "L(1)L(0)T(2)" and similar spellings.
inline GeneratorWord parse_word(const std::string& text) {
  GeneratorWord w;
  std::size_t i = 0;
  auto skip = [&]() {
    while (i < text.size() && (text[i] == ' ' || text[i] == '*' || text[i] == ',' || text[i] == '(' || text[i] == ')'))
      ++i;
  };
  skip();
  if (text.substr(i) == "1") return w;
  while (i < text.size()) {
    char c = text[i++];
    if (c != 'L' && c != 'T') throw std::invalid_argument("bad word: " + text);
    skip();
    std::size_t j = i;
    if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw std::invalid_argument("bad word: " + text);
    int v = std::stoi(text.substr(i, j - i));
    i = j;
    w.push_back(c == 'T' ? Tor(v) : Line(v));
    skip();
  }
  return w;
}

// ---------------------------------------------------------------------------
// Euler characteristics of torsion Grassmannians (torus fixed points)

inline long long chi_torsion_grassmannian_point(const Partition& mu, int m) {
  std::vector<long long> ways(std::max(m, 0) + 1, 0);
  if (m < 0) return 0;
  ways[0] = 1;
  for (int part : mu) {
    std::vector<long long> next(m + 1, 0);
    for (int s = 0; s <= m; ++s)
      if (ways[s])
        for (int b = 0; b <= part && s + b <= m; ++b) next[s + b] += ways[s];
    ways = next;
  }
  return ways[m];
}

// Convolution over the support points.
inline long long chi_torsion_grassmannian(const std::vector<Partition>& points, int m) {
  std::vector<long long> total(std::max(m, 0) + 1, 0);
  if (m < 0) return 0;
  total[0] = 1;
  for (auto& mu : points) {
    std::vector<long long> next(m + 1, 0);
    for (int s = 0; s <= m; ++s)
      if (total[s])
        for (int b = 0; s + b <= m; ++b) next[s + b] += total[s] * chi_torsion_grassmannian_point(mu, b);
    total = next;
  }
  return total[m];
}

// ---------------------------------------------------------------------------
// Group orders over F_q

inline mpz_class qpow(std::uint64_t q, long long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(e));
  return r;
}

inline mpz_class gl_order(std::uint64_t q, int n) {
  mpz_class r = 1;
  for (int i = 0; i < n; ++i) r *= qpow(q, n) - qpow(q, i);
  return r;
}

// |Aut(O(e_1) + ... + O(e_r))|: GL blocks for equal twists, free upward maps.
inline mpz_class aut_split_order(std::uint64_t q, std::vector<int> twists) {
  std::map<int, int> mult;
  for (int e : twists) mult[e]++;
  mpz_class r = 1;
  long long up = 0;
  for (auto& [e, m] : mult) {
    r *= gl_order(q, m);
    for (auto& [e2, m2] : mult)
      if (e2 > e) up += 1LL * m * m2 * (e2 - e + 1);
  }
  return r * qpow(q, up);
}

// ---------------------------------------------------------------------------
// Binary forms

template <class K>
struct FormFactor {
  Poly<typename K::Elem> finite;  // monic part on z = X/Y
  int inf = 0;                    // multiplicity of the root at infinity
  int degree() const { return int(finite.size()) - 1 + inf; }
};

template <class K>
FormFactor<K> form_factor(const K& k, const std::vector<typename K::Elem>& form) {
  FormFactor<K> f;
  f.finite = poly_monic(k, dehomogenize_finite(form));
  f.inf = int(form.size()) - int(f.finite.size());
  return f;
}

// Exact quotient of a form by a factor that divides it.
template <class K>
std::vector<typename K::Elem> form_divide(const K& k, const std::vector<typename K::Elem>& form,
                                          const FormFactor<K>& g) {
  auto [quo, rem] = poly_divmod(k, dehomogenize_finite(form), g.finite);
  if (!rem.empty()) throw std::logic_error("form does not divide");
  int out_len = int(form.size()) - g.degree();
  quo.resize(std::max(out_len, 0), k.zero());
  return quo;
}

// ---------------------------------------------------------------------------
// Subspace and submodule enumeration over F_q

// Calls fn(rows) for every j-dimensional subspace of F_q^m, rows in RREF.
inline void for_each_subspace(const FiniteField& k, int m, int j, const std::function<void(const Matrix<Fq>&)>& fn) {
  std::uint32_t q = std::uint32_t(k.order());
  std::vector<int> piv;
  std::function<void(int)> choose = [&](int start) {
    if (int(piv.size()) == j) {
      // free positions: row r, column c > piv[r], c not a pivot
      std::vector<std::pair<int, int>> free;
      for (int r = 0; r < j; ++r)
        for (int c = piv[r] + 1; c < m; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back({r, c});
      Matrix<Fq> rows = zero_matrix(k, j, m);
      for (int r = 0; r < j; ++r) rows[r][piv[r]] = k.one();
      std::vector<std::uint32_t> idx(free.size(), 0);
      for (;;) {
        for (std::size_t t = 0; t < free.size(); ++t) rows[free[t].first][free[t].second] = k.from_index(idx[t]);
        fn(rows);
        std::size_t t = 0;
        while (t < idx.size() && ++idx[t] == q) idx[t++] = 0;
        if (t == idx.size()) break;
      }
      return;
    }
    for (int c = start; c < m; ++c) {
      piv.push_back(c);
      choose(c + 1);
      piv.pop_back();
    }
  };
  choose(0);
}

template <class K>
bool subspace_contains(const K& k, const Matrix<typename K::Elem>& rows, const Matrix<typename K::Elem>& sub) {
  if (sub.empty()) return true;
  Matrix<typename K::Elem> both = rows;
  both.insert(both.end(), sub.begin(), sub.end());
  return matrix_rank(k, both) == matrix_rank(k, rows);
}

// Row basis of the column space of a matrix.
template <class K>
Matrix<typename K::Elem> column_space(const K& k, const Matrix<typename K::Elem>& a) {
  using T = typename K::Elem;
  if (a.empty() || a[0].empty()) return {};
  Matrix<T> t = zero_matrix(k, a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  auto piv = rref(k, t, a.size());
  t.resize(piv.size());
  return t;
}

// Submodule generated by vectors under the nilpotent action.
template <class K>
Matrix<typename K::Elem> generated_submodule(const K& k, const Matrix<typename K::Elem>& nil,
                                             const Matrix<typename K::Elem>& gens) {
  using T = typename K::Elem;
  Matrix<T> rows;
  for (auto v : gens)
    for (std::size_t a = 0; a <= nil.size(); ++a) {
      rows.push_back(v);
      v = mat_vec(nil, v, k.zero());
    }
  if (rows.empty()) return rows;
  auto piv = rref(k, rows, nil.size());
  rows.resize(piv.size());
  return rows;
}

// Enumerations are capped both in the exponent and in the number q^dim of
// elements visited.
inline constexpr double kEnumerationCap = double(1u << 20);
inline constexpr double kWorkCap = double(1u << 21);

inline bool enumeration_fits(std::uint64_t q, long long dim, int budget_exponent) {
  return dim <= budget_exponent && double(dim) * std::log2(double(q)) <= std::log2(kEnumerationCap);
}

// All j-dimensional submodules containing `required`.
inline std::vector<Matrix<Fq>> submodules(const FiniteField& k, const Matrix<Fq>& nil, int j, const Matrix<Fq>& required,
                                          int budget_exponent) {
  int m = int(nil.size());
  std::vector<Matrix<Fq>> out;
  if (j < 0 || j > m) return out;
  if (int(required.size()) > j) return out;
  if (j == 0) {
    out.push_back({});
    return out;
  }
  auto type = jordan_type(k, nil);
  if (type.size() == 1) {
    // cyclic: the unique submodule of each dimension is the image of N^{m-j}
    Matrix<Fq> pw = identity_matrix(m, k.zero(), k.one());
    for (int e = 0; e < m - j; ++e) pw = mat_mul(pw, nil, k.zero());
    auto w = column_space(k, pw);
    if (subspace_contains(k, w, required)) out.push_back(w);
    return out;
  }
  if (!enumeration_fits(k.order(), j * (m - j), budget_exponent)) throw BudgetExceeded("submodule enumeration too large");
  for_each_subspace(k, m, j, [&](const Matrix<Fq>& rows) {
    for (auto& r : rows) {
      auto img = mat_vec(nil, r, k.zero());
      if (!subspace_contains(k, rows, Matrix<Fq>{img})) return;
    }
    if (subspace_contains(k, rows, required)) out.push_back(rows);
  });
  return out;
}

// A submodule W of a local module together with quotient coordinates.
template <class K>
struct LocalSplit {
  using T = typename K::Elem;
  Matrix<T> incl;     // m x j, columns span W
  Matrix<T> lift;     // m x (m-j), complement columns
  Matrix<T> proj;     // (m-j) x m
  Matrix<T> sub_nil;  // j x j
  Matrix<T> quot_nil;
};

template <class K>
LocalSplit<K> split_local(const K& k, const Matrix<typename K::Elem>& nil, const Matrix<typename K::Elem>& w) {
  using T = typename K::Elem;
  std::size_t m = nil.size(), j = w.size();
  LocalSplit<K> s;
  Matrix<T> basis = w;
  std::vector<std::size_t> comp;
  for (std::size_t e = 0; e < m && basis.size() < m; ++e) {
    std::vector<T> u(m, k.zero());
    u[e] = k.one();
    Matrix<T> trial = basis;
    trial.push_back(u);
    if (matrix_rank(k, trial) == trial.size()) {
      basis = trial;
      comp.push_back(e);
    }
  }
  // B has the basis vectors as columns
  Matrix<T> b = zero_matrix(k, m, m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < m; ++r) b[r][c] = basis[c][r];
  s.incl = zero_matrix(k, m, j);
  s.lift = zero_matrix(k, m, m - j);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < j; ++c) s.incl[r][c] = b[r][c];
    for (std::size_t c = j; c < m; ++c) s.lift[r][c - j] = b[r][c];
  }
  // inverse of B via solves
  Matrix<T> inv = zero_matrix(k, m, m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<T> e(m, k.zero());
    e[c] = k.one();
    auto x = solve(k, b, e, m);
    for (std::size_t r = 0; r < m; ++r) inv[r][c] = (*x)[r];
  }
  s.proj.assign(inv.begin() + j, inv.end());
  s.sub_nil = restrict_to_subspace(k, nil, w);
  s.quot_nil = mat_mul(mat_mul(s.proj, nil, k.zero()), s.lift, k.zero());
  return s;
}

template <class T>
bool is_zero_morphism(const Morphism<T>& f) {
  for (auto& row : f.ll)
    for (auto& form : row)
      for (auto& c : form)
        if (!is_zero(c)) return false;
  for (auto& row : f.lt)
    for (auto& v : row)
      for (auto& c : v)
        if (!is_zero(c)) return false;
  for (auto& m : f.tt)
    if (!is_zero_matrix(m)) return false;
  return true;
}

// Iterate every coefficient vector of F_q^d.
inline void for_each_vector(const FiniteField& k, std::size_t d, const std::function<void(const std::vector<Fq>&)>& fn) {
  std::uint32_t q = std::uint32_t(k.order());
  std::vector<std::uint32_t> idx(d, 0);
  std::vector<Fq> v(d, k.zero());
  for (;;) {
    for (std::size_t t = 0; t < d; ++t) v[t] = k.from_index(idx[t]);
    fn(v);
    std::size_t t = 0;
    while (t < d && ++idx[t] == q) idx[t++] = 0;
    if (t == d) break;
  }
}

// ---------------------------------------------------------------------------
// Chain counting over F_q.
//
// count(F, f, g_1 ... g_t) sums over subsheaves H of F with
// class(F/H) = class(g_1) and f(F) inside H(-2) (so the induced field on F/H
// vanishes) the count of (H, f|H, g_2 ... g_t).  H = E + T with T inside the
// torsion of F and E split; H is the preimage of an injective psi : E -> F/T.

class ChainCounter {
 public:
  explicit ChainCounter(const FiniteField& k, int budget_exponent = 14) : k_(k), budget_(budget_exponent) {}

  mpz_class count(const Sheaf<Fq>& f_sheaf, const HiggsField<Fq>& f, const GeneratorWord& w) {
    if (f_sheaf.cls() != word_class(w)) return 0;
    return count_at(f_sheaf, f, w, 0);
  }

  // Number of subsheaves of G isomorphic to a model on G's points, by
  // enumerating T inside the torsion and then all maps E -> G/T.
  mpz_class count_subsheaves_iso(const Sheaf<Fq>& g, const SheafModel<Fq>& target) {
    std::vector<int> e = target.twists;
    std::map<int, Partition> want;
    for (auto& t : target.torsion) {
      int p = g.find_local(t.point);
      if (p < 0) return 0;
      want[p] = t.type;
    }
    mpz_class total = 0;
    std::vector<Matrix<Fq>> chosen(g.local.size());
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
      if (p == g.local.size()) {
        auto data = split_all(g, chosen);
        mpz_class n = 0;
        Sheaf<Fq> quotient = data.quotient;
        auto basis = hom_basis(k_, sheaf_of(e), quotient, 0);
        check_budget(basis.size());
        Morphism<Fq> zero = zero_morphism(k_, sheaf_of(e), quotient, 0);
        if (e.empty()) {
          n = 1;
        } else {
          for_each_vector(k_, basis.size(), [&](const std::vector<Fq>& c) {
            auto psi = combine(k_, zero, basis, c);
            if (sections_injective_map(psi, quotient)) ++n;
          });
          n /= aut_split_order(k_.order(), e);
        }
        total += n;
        return;
      }
      Partition type = want.count(int(p)) ? want[int(p)] : Partition{};
      for (auto& w : submodules(k_, g.local[p].nil, partition_size(type), {}, budget_)) {
        if (!w.empty() && jordan_type(k_, restrict_to_subspace(k_, g.local[p].nil, w)) != type) continue;
        chosen[p] = w;
        rec(p + 1);
      }
    };
    rec(0);
    return total;
  }

  // Number of injective maps E -> V between split bundles.
  mpz_class count_injective(const std::vector<int>& e, const std::vector<int>& v) {
    if (e.empty()) return 1;
    Sheaf<Fq> src = sheaf_of(e), dst = sheaf_of(v);
    auto basis = hom_basis(k_, src, dst, 0);
    if (e.size() == 1) return qpow(k_.order(), basis.size()) - 1;
    check_budget(basis.size());
    mpz_class n = 0;
    Morphism<Fq> zero = zero_morphism(k_, src, dst, 0);
    for_each_vector(k_, basis.size(), [&](const std::vector<Fq>& c) {
      if (sections_injective_map(combine(k_, zero, basis, c), dst)) ++n;
    });
    return n;
  }

  std::uint64_t q() const { return k_.order(); }

 private:
  struct SplitData {
    std::vector<LocalSplit<FiniteField>> parts;  // per local module of F
    Sheaf<Fq> quotient;                          // F/T
    std::vector<int> quotient_index;             // F local -> quotient local (or -1)
    std::vector<LocalModule<Fq>> sub_modules;    // T pieces, possibly empty
    int t_degree = 0;
  };

  const FiniteField& k_;
  int budget_;
  double spent_ = 0;
  std::map<std::string, mpz_class> zero_memo_;

  // Every enumeration is charged against one running total per field.
  void check_budget(std::size_t dim) {
    spent_ += std::pow(double(k_.order()), double(dim));
    if (!enumeration_fits(k_.order(), static_cast<long long>(dim), budget_) || spent_ > kWorkCap)
      throw BudgetExceeded("enumeration of q^" + std::to_string(dim) + " maps over F_" + std::to_string(k_.order()) +
                           " exceeds budget");
  }

  Sheaf<Fq> sheaf_of(const std::vector<int>& twists) const { return Sheaf<Fq>{twists, {}}; }

  bool sections_injective_map(const Morphism<Fq>& psi, const Sheaf<Fq>& dst) const {
    std::size_t r = dst.twists.size(), s = psi.ll.empty() ? 0 : psi.ll[0].size();
    if (s == 0) return true;
    PolyMatrix<Fq> m(r, std::vector<Poly<Fq>>(s));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < s; ++i) m[j][i] = dehomogenize_finite(psi.ll[j][i]);
    return poly_matrix_rank(k_, m) == s;
  }

  SplitData split_all(const Sheaf<Fq>& f, const std::vector<Matrix<Fq>>& chosen) const {
    SplitData d;
    d.quotient.twists = f.twists;
    d.quotient_index.assign(f.local.size(), -1);
    for (std::size_t p = 0; p < f.local.size(); ++p) {
      d.parts.push_back(split_local(k_, f.local[p].nil, chosen[p]));
      d.t_degree += int(chosen[p].size());
      d.sub_modules.push_back({f.local[p].point, d.parts.back().sub_nil});
      if (f.local[p].dim() > chosen[p].size()) {
        d.quotient_index[p] = int(d.quotient.local.size());
        d.quotient.local.push_back({f.local[p].point, d.parts.back().quot_nil});
      }
    }
    return d;
  }

  // H = E + T and the inclusion built from psi : E -> F/T.
  Sheaf<Fq> h_sheaf(const std::vector<int>& e, const SplitData& d) const {
    Sheaf<Fq> h;
    h.twists = e;
    for (auto& m : d.sub_modules)
      if (m.dim() > 0) h.local.push_back(m);
    return h;
  }

  Morphism<Fq> iota(const Sheaf<Fq>& f, const Sheaf<Fq>& h, const SplitData& d, const Morphism<Fq>* psi) const {
    Morphism<Fq> io = zero_morphism(k_, h, f, 0);
    if (psi) {
      io.ll = psi->ll;
      for (std::size_t p = 0; p < f.local.size(); ++p) {
        int qi = d.quotient_index[p];
        if (qi < 0) continue;
        for (std::size_t i = 0; i < h.twists.size(); ++i)
          io.lt[p][i] = mat_vec(d.parts[p].lift, psi->lt[qi][i], k_.zero());
      }
    }
    for (std::size_t p = 0; p < f.local.size(); ++p)
      if (h.find_local(f.local[p].point) >= 0) io.tt[p] = d.parts[p].incl;
    return io;
  }

  // Solve io o g = f for g : F -> H(-2); returns f|H = g o io when it exists.
  std::optional<Morphism<Fq>> restrict_field(const Sheaf<Fq>& f_sheaf, const Morphism<Fq>& f, const Sheaf<Fq>& h,
                                             const Morphism<Fq>& io,
                                             const std::vector<Morphism<Fq>>& g_basis) const {
    auto rhs = flatten(f);
    Morphism<Fq> gz = zero_morphism(k_, f_sheaf, h, -2);
    if (g_basis.empty()) {
      for (auto& x : rhs)
        if (!is_zero(x)) return std::nullopt;
      return zero_morphism(k_, h, h, -2);
    }
    Matrix<Fq> m = zero_matrix(k_, rhs.size(), g_basis.size());
    for (std::size_t b = 0; b < g_basis.size(); ++b) {
      auto col = flatten(compose(k_, f_sheaf, h, f_sheaf, io, g_basis[b]));
      for (std::size_t r = 0; r < rhs.size(); ++r) m[r][b] = col[r];
    }
    std::optional<std::vector<Fq>> x;
    if (rhs.empty())
      x = std::vector<Fq>(g_basis.size(), k_.zero());
    else
      x = solve(k_, m, rhs, g_basis.size());
    if (!x) return std::nullopt;
    auto g = combine(k_, gz, g_basis, *x);
    return compose(k_, h, f_sheaf, h, g, io);
  }

  // Image of f at each point when f has no line-to-line part.
  Matrix<Fq> local_image(const Sheaf<Fq>& f_sheaf, const Morphism<Fq>& f, std::size_t p) const {
    Matrix<Fq> gens;
    auto& tt = f.tt[p];
    for (std::size_t c = 0; c < f_sheaf.local[p].dim(); ++c) {
      std::vector<Fq> col(f_sheaf.local[p].dim());
      for (std::size_t r = 0; r < col.size(); ++r) col[r] = tt[r][c];
      gens.push_back(col);
    }
    for (auto& v : f.lt[p]) gens.push_back(v);
    return generated_submodule(k_, f_sheaf.local[p].nil, gens);
  }

  std::string zero_key(const Sheaf<Fq>& f, std::size_t pos, const GeneratorWord& w) const {
    std::ostringstream os;
    auto tw = f.twists;
    std::sort(tw.rbegin(), tw.rend());
    for (int n : tw) os << n << ",";
    os << "|";
    std::vector<Partition> types;
    for (auto& l : f.local) types.push_back(jordan_type(k_, l.nil));
    std::sort(types.begin(), types.end());
    for (auto& t : types) os << partition_str(t);
    os << "|" << word_to_string(GeneratorWord(w.begin() + pos, w.end()));
    return os.str();
  }

  template <class Fn>
  void for_each_t(const Sheaf<Fq>& f, int t, const std::vector<Matrix<Fq>>& required, Fn&& fn) const {
    std::vector<Matrix<Fq>> chosen(f.local.size());
    std::function<void(std::size_t, int)> rec = [&](std::size_t p, int left) {
      if (p == f.local.size()) {
        if (left == 0) fn(chosen);
        return;
      }
      int m = int(f.local[p].dim());
      for (int j = 0; j <= std::min(m, left); ++j) {
        int rest = 0;
        for (std::size_t x = p + 1; x < f.local.size(); ++x) rest += int(f.local[x].dim());
        if (left - j > rest) continue;
        for (auto& w : submodules(k_, f.local[p].nil, j, required[p], budget_)) {
          chosen[p] = w;
          rec(p + 1, left - j);
        }
      }
    };
    rec(0, t);
  }

  std::vector<std::vector<int>> e_types(const Sheaf<Fq>& f, int rank, int degree) const {
    std::vector<std::vector<int>> out;
    if (rank == 0) {
      if (degree == 0) out.push_back({});
      return out;
    }
    if (rank > f.rank()) return out;
    auto v = f.twists;
    std::sort(v.rbegin(), v.rend());
    int top = v[0];
    long long lo = static_cast<long long>(degree) - static_cast<long long>(rank - 1) * top;
    for (auto& e : int_partitions(rank, degree, int(lo))) {
      bool ok = true;
      for (int i = 0; i < rank; ++i)
        if (e[i] > v[i]) ok = false;
      if (ok) out.push_back(e);
    }
    return out;
  }

  mpz_class count_at(const Sheaf<Fq>& f_sheaf, const Morphism<Fq>& f, const GeneratorWord& w, std::size_t pos) {
    std::size_t left = w.size() - pos;
    if (left == 0) return (f_sheaf.rank() == 0 && f_sheaf.torsion_degree() == 0) ? 1 : 0;
    if (left == 1) return (f_sheaf.cls() == w[pos].cls() && is_zero_morphism(f)) ? 1 : 0;
    KClass top = w[pos].cls();
    int hr = f_sheaf.rank() - top.rank, hd = f_sheaf.degree() - top.degree;
    if (hr < 0 || (hr == 0 && hd < 0)) return 0;
    bool zero_field = is_zero_morphism(f);
    if (zero_field) {
      auto key = zero_key(f_sheaf, pos, w);
      auto it = zero_memo_.find(key);
      if (it != zero_memo_.end()) return it->second;
      auto v = count_zero_field(f_sheaf, w, pos, hr, hd);
      zero_memo_[key] = v;
      return v;
    }
    return count_general(f_sheaf, f, w, pos, hr, hd);
  }

  // f = 0: the count below H depends only on the isomorphism class of H.
  mpz_class count_zero_field(const Sheaf<Fq>& f_sheaf, const GeneratorWord& w, std::size_t pos, int hr, int hd) {
    mpz_class total = 0;
    std::vector<Matrix<Fq>> none(f_sheaf.local.size());
    for (int t = 0; t <= f_sheaf.torsion_degree(); ++t) {
      auto etypes = e_types(f_sheaf, hr, hd - t);
      if (etypes.empty()) continue;
      for_each_t(f_sheaf, t, none, [&](const std::vector<Matrix<Fq>>& chosen) {
        auto d = split_all(f_sheaf, chosen);
        for (auto& e : etypes) {
          mpz_class inj = count_injective(e, f_sheaf.twists) *
                          qpow(k_.order(), 1LL * int(e.size()) * (f_sheaf.torsion_degree() - t));
          mpz_class aut = aut_split_order(k_.order(), e);
          if (inj % aut != 0) throw std::logic_error("automorphisms do not act freely");
          mpz_class n = inj / aut;
          if (n == 0) continue;
          Sheaf<Fq> h = h_sheaf(e, d);
          mpz_class below = count_at(h, zero_higgs(k_, h), w, pos + 1);
          total += n * below;
        }
      });
    }
    return total;
  }

  mpz_class count_general(const Sheaf<Fq>& f_sheaf, const Morphism<Fq>& f, const GeneratorWord& w, std::size_t pos,
                          int hr, int hd) {
    // necessary: f(tau) inside T
    std::vector<Matrix<Fq>> required(f_sheaf.local.size());
    bool line_part = false;
    for (auto& row : f.ll)
      for (auto& form : row)
        for (auto& c : form)
          if (!is_zero(c)) line_part = true;
    PolyMatrix<Fq> vv(f_sheaf.twists.size(), std::vector<Poly<Fq>>(f_sheaf.twists.size()));
    for (std::size_t j = 0; j < vv.size(); ++j)
      for (std::size_t i = 0; i < vv.size(); ++i) vv[j][i] = dehomogenize_finite(f.ll[j][i]);
    std::size_t image_rank = line_part ? poly_matrix_rank(k_, vv) : 0;
    if (int(image_rank) > hr) return 0;
    for (std::size_t p = 0; p < f_sheaf.local.size(); ++p) {
      if (line_part) {
        required[p] = column_space(k_, f.tt[p]);
      } else {
        required[p] = local_image(f_sheaf, f, p);
      }
    }
    // saturated direction of the image when it is a line
    std::optional<std::pair<int, std::vector<std::vector<Fq>>>> direction;
    if (image_rank == 1) direction = image_direction(f_sheaf, f);

    mpz_class total = 0;
    bool last_pair = (w.size() - pos == 2);
    for (int t = 0; t <= f_sheaf.torsion_degree(); ++t) {
      auto etypes = e_types(f_sheaf, hr, hd - t);
      if (etypes.empty()) continue;
      for_each_t(f_sheaf, t, required, [&](const std::vector<Matrix<Fq>>& chosen) {
        auto d = split_all(f_sheaf, chosen);
        for (auto& e : etypes) {
          Sheaf<Fq> h = h_sheaf(e, d);
          Sheaf<Fq> es = sheaf_of(e);
          auto g_basis = hom_basis(k_, f_sheaf, h, -2);
          mpz_class aut = aut_split_order(k_.order(), e);
          if (e.empty()) {
            auto io = iota(f_sheaf, h, d, nullptr);
            auto fh = restrict_field(f_sheaf, f, h, io, g_basis);
            if (fh) total += count_at(h, *fh, w, pos + 1);
            continue;
          }
          if (!line_part && last_pair && e.size() == 1) {
            total += last_step_linear(f_sheaf, f, h, d, e) / aut;
            continue;
          }
          Morphism<Fq> psi_zero = zero_morphism(k_, es, d.quotient, 0);
          mpz_class sum = 0;
          auto visit = [&](const Morphism<Fq>& psi) {
            if (!sections_injective_map(psi, d.quotient)) return;
            auto io = iota(f_sheaf, h, d, &psi);
            auto fh = restrict_field(f_sheaf, f, h, io, g_basis);
            if (fh) sum += count_at(h, *fh, w, pos + 1);
          };
          if (direction && e.size() == 1) {
            // psi's line part is u * (saturated image direction)
            int ew = direction->first;
            int ulen = form_len(ew - e[0]);
            if (ulen == 0) continue;
            std::vector<Morphism<Fq>> tors_basis;
            for (auto& b : hom_basis(k_, es, d.quotient, 0)) {
              bool pure_tors = true;
              for (auto& row : b.ll)
                for (auto& form : row)
                  for (auto& c : form)
                    if (!is_zero(c)) pure_tors = false;
              if (pure_tors) tors_basis.push_back(b);
            }
            check_budget(ulen + tors_basis.size());
            for_each_vector(k_, ulen + tors_basis.size(), [&](const std::vector<Fq>& c) {
              Morphism<Fq> psi = psi_zero;
              bool nonzero_u = false;
              for (int x = 0; x < ulen; ++x) nonzero_u = nonzero_u || !is_zero(c[x]);
              if (!nonzero_u) return;
              for (std::size_t j = 0; j < psi.ll.size(); ++j) {
                auto& wj = direction->second[j];
                auto& out = psi.ll[j][0];
                for (int x = 0; x < ulen; ++x)
                  for (std::size_t y = 0; y < wj.size(); ++y) out[x + y] += c[x] * wj[y];
              }
              for (std::size_t b = 0; b < tors_basis.size(); ++b) axpy(k_, psi, c[ulen + b], tors_basis[b]);
              visit(psi);
            });
          } else {
            auto basis = hom_basis(k_, es, d.quotient, 0);
            check_budget(basis.size());
            for_each_vector(k_, basis.size(), [&](const std::vector<Fq>& c) { visit(combine(k_, psi_zero, basis, c)); });
          }
          if (sum % aut != 0) throw std::logic_error("automorphisms do not act freely");
          total += sum / aut;
        }
      });
    }
    return total;
  }

  // (e_w, w): the image of the line part is generically the saturated line
  // O(e_w) -> V given by the form vector w.
  std::optional<std::pair<int, std::vector<std::vector<Fq>>>> image_direction(const Sheaf<Fq>& f_sheaf,
                                                                               const Morphism<Fq>& f) const {
    std::size_t r = f_sheaf.twists.size();
    for (std::size_t i = 0; i < r; ++i) {
      bool nz = false;
      for (std::size_t j = 0; j < r; ++j)
        for (auto& c : f.ll[j][i])
          if (!is_zero(c)) nz = true;
      if (!nz) continue;
      std::optional<FormFactor<FiniteField>> g;
      for (std::size_t j = 0; j < r; ++j) {
        auto& c = f.ll[j][i];
        if (dehomogenize_finite(c).empty()) continue;
        auto ff = form_factor(k_, c);
        if (!g) {
          g = ff;
        } else {
          g->finite = poly_gcd(k_, g->finite, ff.finite);
          g->inf = std::min(g->inf, ff.inf);
        }
      }
      int ew = f_sheaf.twists[i] + 2 + g->degree();
      std::vector<std::vector<Fq>> w(r);
      for (std::size_t j = 0; j < r; ++j) {
        int len = form_len(f_sheaf.twists[j] - ew);
        if (dehomogenize_finite(f.ll[j][i]).empty())
          w[j].assign(len, k_.zero());
        else
          w[j] = form_divide(k_, f.ll[j][i], *g);
      }
      return std::make_pair(ew, w);
    }
    return std::nullopt;
  }

  // Last generator below a line step when f has no line-to-line part: the
  // conditions on psi (f o io = 0) are linear.
  mpz_class last_step_linear(const Sheaf<Fq>& f_sheaf, const Morphism<Fq>& f, const Sheaf<Fq>& h,
                             const SplitData& d, const std::vector<int>& e) {
    // f must vanish on T
    for (std::size_t p = 0; p < f_sheaf.local.size(); ++p)
      if (!is_zero_matrix(mat_mul(f.tt[p], d.parts[p].incl, k_.zero()))) return 0;
    if (f_sheaf.cls() - h.cls() != KClass(f_sheaf.rank() - h.rank(), f_sheaf.degree() - h.degree())) return 0;
    Sheaf<Fq> es = sheaf_of(e);
    auto basis = hom_basis(k_, es, d.quotient, 0);
    Morphism<Fq> psi_zero = zero_morphism(k_, es, d.quotient, 0);
    Sheaf<Fq> line = sheaf_of(e);
    // columns: f o lift(psi_b), restricted to the E summand
    std::vector<std::vector<Fq>> cols;
    std::vector<char> line_coord;
    for (auto& b : basis) {
      Morphism<Fq> lifted = zero_morphism(k_, line, f_sheaf, 0);
      lifted.ll = b.ll;
      for (std::size_t p = 0; p < f_sheaf.local.size(); ++p) {
        int qi = d.quotient_index[p];
        if (qi >= 0) lifted.lt[p][0] = mat_vec(d.parts[p].lift, b.lt[qi][0], k_.zero());
      }
      cols.push_back(flatten(compose(k_, line, f_sheaf, f_sheaf, f, lifted)));
      bool lc = false;
      for (auto& row : b.ll)
        for (auto& c : row[0])
          if (!is_zero(c)) lc = true;
      line_coord.push_back(lc);
    }
    std::size_t n = basis.size();
    std::size_t rows = cols.empty() ? 0 : cols[0].size();
    Matrix<Fq> m = zero_matrix(k_, rows, n);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t r = 0; r < rows; ++r) m[r][b] = cols[b][r];
    std::size_t dim_l = rows ? nullity(k_, m, n) : n;
    // add equations killing the line coordinates
    Matrix<Fq> m2 = m;
    for (std::size_t b = 0; b < n; ++b)
      if (line_coord[b]) {
        std::vector<Fq> row(n, k_.zero());
        row[b] = k_.one();
        m2.push_back(row);
      }
    std::size_t dim_t = m2.empty() ? n : nullity(k_, m2, n);
    return qpow(k_.order(), dim_l) - qpow(k_.order(), dim_t);
  }
};

// ---------------------------------------------------------------------------
// Interpolation at q = 1

struct QCountSeries {
  std::vector<std::pair<std::uint64_t, mpz_class>> counts;
  std::vector<Rational> poly;  // coefficients in q, lowest first
  Rational at_one;

  std::string csv() const {
    std::string s = "q,count\n";
    for (auto& [q, c] : counts) s += std::to_string(q) + "," + c.get_str() + "\n";
    return s;
  }
  Rational eval(const Rational& x) const {
    Rational r = 0;
    for (int i = int(poly.size()) - 1; i >= 0; --i) r = r * x + poly[i];
    return r;
  }
};

// Coefficients of the interpolating polynomial through the points.
inline std::vector<Rational> interpolate(const std::vector<std::pair<std::uint64_t, mpz_class>>& pts) {
  std::size_t n = pts.size();
  std::vector<Rational> coef(n, Rational(0));
  // Lagrange basis expanded into monomials
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> basis{Rational(1)};
    Rational denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<Rational> next(basis.size() + 1, Rational(0));
      Rational xj(static_cast<unsigned long>(pts[j].first));
      for (std::size_t a = 0; a < basis.size(); ++a) {
        next[a + 1] += basis[a];
        next[a] -= xj * basis[a];
      }
      basis = next;
      denom *= Rational(static_cast<unsigned long>(pts[i].first)) - xj;
    }
    Rational yi(pts[i].second);
    for (std::size_t a = 0; a < basis.size(); ++a) coef[a] += yi * basis[a] / denom;
  }
  while (!coef.empty() && sgn(coef.back()) == 0) coef.pop_back();
  return coef;
}

// Accept a fit once the interpolant through the first points reproduces the
// remaining `confirmations` points; the fitted degree must stay within bound.
inline std::optional<QCountSeries> try_fit(const std::vector<std::pair<std::uint64_t, mpz_class>>& pts, int degree_bound,
                                           int confirmations) {
  int n = int(pts.size());
  int fit_points = n - confirmations;
  if (fit_points < 1) return std::nullopt;
  std::vector<std::pair<std::uint64_t, mpz_class>> head(pts.begin(), pts.begin() + fit_points);
  QCountSeries s;
  s.counts = pts;
  s.poly = interpolate(head);
  if (int(s.poly.size()) - 1 > degree_bound) return std::nullopt;
  for (auto& [q, c] : pts)
    if (s.eval(Rational(static_cast<unsigned long>(q))) != Rational(c)) return std::nullopt;
  s.at_one = s.eval(Rational(1));
  return s;
}

inline QCountSeries fit_series(const std::vector<std::pair<std::uint64_t, mpz_class>>& pts, int degree_bound,
                               int confirmations) {
  for (std::size_t n = 1; n <= pts.size(); ++n) {
    std::vector<std::pair<std::uint64_t, mpz_class>> head(pts.begin(), pts.begin() + n);
    if (auto s = try_fit(head, degree_bound, confirmations)) {
      // the fit must reproduce everything recorded
      bool all = true;
      for (auto& [q, c] : pts)
        if (s->eval(Rational(static_cast<unsigned long>(q))) != Rational(c)) all = false;
      if (all) {
        s->counts = pts;
        return *s;
      }
    }
  }
  throw InterpolationInconsistent("counts over " + std::to_string(pts.size()) +
                                  " fields do not fit a polynomial of degree <= " + std::to_string(degree_bound));
}

// ---------------------------------------------------------------------------
// Generic values

struct ChiOptions {
  std::vector<std::uint32_t> primes{2, 3, 4, 5, 7, 8, 9, 11, 13};
  int trials = 3;
  int confirmations = 2;
  int degree_slack = 4;
  int budget_exponent = 14;
  int sample_attempts = 12;
  std::uint64_t seed = 1;
};

// Invariants whose generic value certifies a sample: kernel types of the
// powers of the field.
template <class K>
std::string genericity_fingerprint(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h) {
  using T = typename K::Elem;
  std::ostringstream os;
  Morphism<T> pw = h;
  int steps = f.rank() + f.torsion_degree() + 1;
  for (int j = 1; j <= steps; ++j) {
    // target of f^j is F(-2j); model it with shifted twists
    Sheaf<T> target = f;
    auto km = morphism_kernel(k, f, target, pw);
    os << "[";
    for (int n : km.twists) os << n << ",";
    os << partition_str(km.torsion_partition()) << "]";
    if (is_zero_morphism(pw)) break;
    pw = compose(k, f, f, f, h, pw);
  }
  return os.str();
}

// Sampled line-to-line and line-to-torsion coefficients all nonzero, and the
// functionals v -> f(v) mod t at the torsion points in general position on
// every piece O(>= n) of the bundle.  Draws failing this lie on a proper
// closed set that the kernel types above do not always see; over a small
// field it can contain every draw, and that field is then skipped.
template <class K>
bool coefficients_generic(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h) {
  using T = typename K::Elem;
  for (auto& row : h.ll)
    for (auto& form : row)
      for (auto& c : form)
        if (is_zero(c)) return false;
  for (auto& row : h.lt)
    for (auto& v : row)
      for (auto& c : v)
        if (is_zero(c)) return false;
  std::size_t r = f.twists.size();
  if (r == 0) return true;
  Matrix<T> rows;
  for (std::size_t p = 0; p < f.local.size(); ++p) {
    std::size_t m = f.local[p].dim();
    Matrix<T> nt = zero_matrix(k, m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) nt[i][j] = f.local[p].nil[j][i];
    for (auto& y : nullspace(k, nt, m)) {
      std::vector<T> row(r, k.zero());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < m; ++c) row[i] += y[c] * h.lt[p][i][c];
      rows.push_back(row);
    }
  }
  if (rows.size() > 16) return true;
  std::set<int> levels(f.twists.begin(), f.twists.end());
  for (int n : levels) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < r; ++i)
      if (f.twists[i] >= n) cols.push_back(i);
    for (std::uint32_t mask = 1; mask < (1u << rows.size()); ++mask) {
      std::size_t size = std::popcount(mask);
      if (size > cols.size()) continue;
      Matrix<T> sub;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (mask >> i & 1) {
          std::vector<T> row;
          for (auto c : cols) row.push_back(rows[i][c]);
          sub.push_back(row);
        }
      if (matrix_rank(k, sub) != size) return false;
    }
  }
  return true;
}

template <class K>
std::string component_fingerprint(const K& k, const std::vector<int>& twists, const Partition& lambda, std::uint64_t seed,
                                  int samples = 3) {
  std::map<std::string, int> votes;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, {0xF1, s}));
    auto p = sample_generic_pair(k, twists, lambda, rng);
    votes[genericity_fingerprint(k, p.sheaf, p.field)]++;
  }
  return std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
}

// The first field over budget ends the sweep; with no fit from the fields
// before it, BudgetExceeded is raised.
inline QCountSeries fit_within_budget(const std::vector<std::pair<std::uint64_t, mpz_class>>& pts, int bound,
                                      int confirmations, const std::optional<std::string>& over_budget) {
  try {
    return fit_series(pts, bound, confirmations);
  } catch (const InterpolationInconsistent&) {
    if (over_budget) throw BudgetExceeded(*over_budget + " after " + std::to_string(pts.size()) + " fields");
    throw;
  }
}

inline int degree_bound_for(const GeneratorWord& w, int slack) {
  int d = 0;
  for (auto& g : w) d += std::abs(g.value);
  return d + slack;
}

inline mpz_class majority(const std::vector<mpz_class>& v) {
  std::map<mpz_class, int> votes;
  for (auto& x : v) votes[x]++;
  return std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
}

// Generic value of a word on the component labelled (twists, lambda).
inline QCountSeries chi_word_series(const GeneratorWord& word, const std::vector<int>& twists, const Partition& lambda,
                                    const ChiOptions& opt) {
  KClass cls(int(twists.size()), partition_size(lambda));
  for (int n : twists) cls.degree += n;
  if (word_class(word) != cls) throw std::invalid_argument("word class differs from component class");
  // reference fingerprint over a large prime field (cheap and exact)
  FiniteField big(2147483647u);
  std::string ref = component_fingerprint(big, twists, lambda, derive_seed(opt.seed, {0xAB}));
  int bound = degree_bound_for(word, opt.degree_slack);
  std::vector<std::pair<std::uint64_t, mpz_class>> pts;
  std::optional<std::string> over_budget;
  for (auto q : opt.primes) {
    FiniteField k(q);
    ChainCounter counter(k, opt.budget_exponent);
    std::vector<mpz_class> counts;
    bool usable = true;
    for (int t = 0; t < opt.trials && usable && !over_budget; ++t) {
      bool found = false;
      for (int a = 0; a < opt.sample_attempts && !found; ++a) {
        Rng rng(derive_seed(opt.seed, {static_cast<std::int64_t>(q), t, a}));
        HiggsPair<Fq> p;
        try {
          p = sample_generic_pair(k, twists, lambda, rng);
        } catch (const FieldTooSmall&) {
          usable = false;
          break;
        }
        if (!coefficients_generic(k, p.sheaf, p.field) || genericity_fingerprint(k, p.sheaf, p.field) != ref) continue;
        try {
          counts.push_back(counter.count(p.sheaf, p.field, word));
        } catch (const BudgetExceeded& e) {
          over_budget = e.what();
          break;
        }
        found = true;
      }
      if (!found) usable = false;
    }
    if (over_budget) break;
    if (!usable || counts.empty()) continue;
    pts.push_back({q, majority(counts)});
    if (auto s = try_fit(pts, bound, opt.confirmations)) return *s;
  }
  return fit_within_budget(pts, bound, opt.confirmations, over_budget);
}

inline Rational chi_word(const GeneratorWord& word, const std::vector<int>& twists, const Partition& lambda,
                         const ChiOptions& opt) {
  return chi_word_series(word, twists, lambda, opt).at_one;
}

// Reduce a pair over Q modulo a prime; nullopt on bad reduction.
inline std::optional<HiggsPair<Fq>> reduce_pair(const HiggsPair<Rational>& pair, const FiniteField& k) {
  std::uint64_t p = k.characteristic();
  if (k.order() != p) return std::nullopt;
  bool bad = false;
  auto red = [&](const Rational& x) -> Fq {
    mpz_class num = x.get_num() % mpz_class(static_cast<unsigned long>(p));
    mpz_class den = x.get_den() % mpz_class(static_cast<unsigned long>(p));
    if (den == 0) {
      bad = true;
      return k.zero();
    }
    if (num < 0) num += p;
    return k.from_int(num.get_si()) / k.from_int(den.get_si());
  };
  HiggsPair<Fq> out;
  out.model.twists = pair.model.twists;
  for (auto& t : pair.model.torsion) {
    auto pt = t.point.at_infinity() ? infinity_point(k) : finite_point(k, red(t.point.a));
    for (auto& o : out.model.torsion)
      if (o.point == pt) bad = true;
    out.model.torsion.push_back({pt, t.type});
  }
  out.sheaf.twists = pair.sheaf.twists;
  for (std::size_t i = 0; i < pair.sheaf.local.size(); ++i) {
    auto& l = pair.sheaf.local[i];
    LocalModule<Fq> m;
    m.point = l.point.at_infinity() ? infinity_point(k) : finite_point(k, red(l.point.a));
    m.nil = zero_matrix(k, l.dim(), l.dim());
    for (std::size_t r = 0; r < l.dim(); ++r)
      for (std::size_t c = 0; c < l.dim(); ++c) m.nil[r][c] = red(l.nil[r][c]);
    out.sheaf.local.push_back(m);
  }
  for (std::size_t i = 0; i < out.sheaf.local.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (out.sheaf.local[i].point == out.sheaf.local[j].point) bad = true;
  out.field = zero_higgs(k, out.sheaf);
  for (std::size_t j = 0; j < pair.field.ll.size(); ++j)
    for (std::size_t i = 0; i < pair.field.ll[j].size(); ++i)
      for (std::size_t e = 0; e < pair.field.ll[j][i].size(); ++e) out.field.ll[j][i][e] = red(pair.field.ll[j][i][e]);
  for (std::size_t p = 0; p < pair.field.lt.size(); ++p)
    for (std::size_t i = 0; i < pair.field.lt[p].size(); ++i)
      for (std::size_t e = 0; e < pair.field.lt[p][i].size(); ++e) out.field.lt[p][i][e] = red(pair.field.lt[p][i][e]);
  for (std::size_t p = 0; p < pair.field.tt.size(); ++p)
    for (std::size_t r = 0; r < pair.field.tt[p].size(); ++r)
      for (std::size_t c = 0; c < pair.field.tt[p][r].size(); ++c) out.field.tt[p][r][c] = red(pair.field.tt[p][r][c]);
  if (bad) return std::nullopt;
  return out;
}

// The value of a word at an explicit pair over Q, by reduction modulo primes.
inline QCountSeries chi_word_at_pair(const GeneratorWord& word, const HiggsPair<Rational>& pair, const ChiOptions& opt) {
  RationalField qq;
  std::string ref = genericity_fingerprint(qq, pair.sheaf, pair.field);
  int bound = degree_bound_for(word, opt.degree_slack);
  std::vector<std::pair<std::uint64_t, mpz_class>> pts;
  std::optional<std::string> over_budget;
  for (auto q : opt.primes) {
    FiniteField k(q);
    if (k.order() != k.characteristic()) continue;
    auto red = reduce_pair(pair, k);
    if (!red || genericity_fingerprint(k, red->sheaf, red->field) != ref) continue;
    ChainCounter counter(k, opt.budget_exponent);
    try {
      pts.push_back({q, counter.count(red->sheaf, red->field, word)});
    } catch (const BudgetExceeded& e) {
      over_budget = e.what();
      break;
    }
    if (auto s = try_fit(pts, bound, opt.confirmations)) return *s;
  }
  return fit_within_budget(pts, bound, opt.confirmations, over_budget);
}

// Subsheaf Grassmannian of G for the type `target`: direct count and the
// product of its torsion and free factors.
struct GrassmannianCounts {
  mpz_class direct;
  mpz_class torsion_part;
  mpz_class free_part;
  long long q_exponent = 0;
};

inline GrassmannianCounts grassmannian_counts(const FiniteField& k, const Sheaf<Fq>& g, const SheafModel<Fq>& target,
                                              int budget_exponent = 14) {
  ChainCounter c(k, budget_exponent);
  GrassmannianCounts out;
  out.direct = c.count_subsheaves_iso(g, target);
  Sheaf<Fq> gtor{{}, g.local};
  SheafModel<Fq> ttor{{}, target.torsion};
  out.torsion_part = c.count_subsheaves_iso(gtor, ttor);
  Sheaf<Fq> gfree{g.twists, {}};
  SheafModel<Fq> tfree{target.twists, {}};
  out.free_part = c.count_subsheaves_iso(gfree, tfree);
  out.q_exponent = 1LL * target.rank() * (g.torsion_degree() - target.torsion_degree());
  return out;
}

// q-count of m-dimensional submodules of a local module.
inline mpz_class qcount_submodules(const FiniteField& k, const Matrix<Fq>& nil, int m, int budget_exponent = 14) {
  return mpz_class(static_cast<unsigned long>(submodules(k, nil, m, {}, budget_exponent).size()));
}

}  // namespace higgs
