#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "kclass.hpp"
#include "linalg.hpp"
#include "partitions.hpp"
#include "poly.hpp"

namespace higgs {

// ---------------------------------------------------------------------------
// Points and sheaf models

template <class T>
struct ProjPoint {
  T a;
  T b;
  bool at_infinity() const { return is_zero(b); }
  friend bool operator==(const ProjPoint& x, const ProjPoint& y) { return x.a == y.a && x.b == y.b; }
};

template <class K>
ProjPoint<typename K::Elem> make_point(const K& k, const typename K::Elem& a, const typename K::Elem& b) {
  if (is_zero(a) && is_zero(b)) throw std::invalid_argument("degenerate projective point");
  if (!is_zero(b)) return {a / b, k.one()};
  return {k.one(), k.zero()};
}

template <class K>
ProjPoint<typename K::Elem> finite_point(const K& k, const typename K::Elem& a) {
  return {a, k.one()};
}

template <class K>
ProjPoint<typename K::Elem> infinity_point(const K& k) {
  return {k.one(), k.zero()};
}

template <class T>
struct TorsionPart {
  ProjPoint<T> point;
  Partition type;
};

template <class T>
struct SheafModel {
  std::vector<int> twists;  // weakly decreasing
  std::vector<TorsionPart<T>> torsion;

  int rank() const { return int(twists.size()); }
  int torsion_degree() const {
    int d = 0;
    for (auto& t : torsion) d += partition_size(t.type);
    return d;
  }
  int degree() const {
    int d = torsion_degree();
    for (int n : twists) d += n;
    return d;
  }
  KClass cls() const { return KClass(rank(), degree()); }
  bool empty() const { return twists.empty() && torsion.empty(); }

  // All block lengths, merged over points.
  Partition torsion_partition() const {
    Partition p;
    for (auto& t : torsion) p.insert(p.end(), t.type.begin(), t.type.end());
    return normalize_partition(p);
  }

  void validate() const {
    for (std::size_t i = 1; i < twists.size(); ++i)
      if (twists[i] > twists[i - 1]) throw std::invalid_argument("twists must be weakly decreasing");
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      if (torsion[i].type.empty()) throw std::invalid_argument("empty torsion type");
      if (normalize_partition(torsion[i].type) != torsion[i].type)
        throw std::invalid_argument("torsion type is not a partition");
      for (std::size_t j = 0; j < i; ++j)
        if (torsion[i].point == torsion[j].point) throw std::invalid_argument("repeated torsion point");
    }
  }
};

// A local torsion module: K^m with the uniformizer acting by a nilpotent
// matrix.  The Jordan normal form is only the default; submodules and
// quotients produce arbitrary nilpotent actions.
template <class T>
struct LocalModule {
  ProjPoint<T> point;
  Matrix<T> nil;
  std::size_t dim() const { return nil.size(); }
};

template <class T>
struct Sheaf {
  std::vector<int> twists;
  std::vector<LocalModule<T>> local;

  int rank() const { return int(twists.size()); }
  int torsion_degree() const {
    int d = 0;
    for (auto& m : local) d += int(m.dim());
    return d;
  }
  int degree() const {
    int d = torsion_degree();
    for (int n : twists) d += n;
    return d;
  }
  KClass cls() const { return KClass(rank(), degree()); }
  int find_local(const ProjPoint<T>& p) const {
    for (std::size_t i = 0; i < local.size(); ++i)
      if (local[i].point == p) return int(i);
    return -1;
  }
};

template <class T>
Sheaf<T> line_sheaf(int n) {
  return Sheaf<T>{{n}, {}};
}

// Basis order: block by block; inside a block of length L the generator is
// vector 0 and the uniformizer shifts i -> i+1.
template <class K>
Matrix<typename K::Elem> jordan_matrix(const K& k, const Partition& mu) {
  int m = partition_size(mu);
  auto n = zero_matrix(k, m, m);
  int off = 0;
  for (int len : mu) {
    for (int i = 0; i + 1 < len; ++i) n[off + i + 1][off + i] = k.one();
    off += len;
  }
  return n;
}

template <class K>
Partition jordan_type(const K& k, const Matrix<typename K::Elem>& n) {
  using T = typename K::Elem;
  std::size_t m = n.size();
  if (m == 0) return {};
  // blocks of size >= j  =  rank N^{j-1} - rank N^j
  std::vector<std::size_t> ranks{m};
  Matrix<T> p = n;
  for (std::size_t j = 1; j <= m; ++j) {
    ranks.push_back(matrix_rank(k, p));
    if (ranks.back() == 0) break;
    p = mat_mul(p, n, k.zero());
  }
  Partition parts;
  for (std::size_t j = 1; j < ranks.size(); ++j) {
    std::size_t at_least_j = ranks[j - 1] - ranks[j];
    std::size_t at_least_next = j + 1 < ranks.size() ? ranks[j] - ranks[j + 1] : 0;
    for (std::size_t c = 0; c < at_least_j - at_least_next; ++c) parts.push_back(int(j));
  }
  return normalize_partition(parts);
}

template <class K>
Sheaf<typename K::Elem> to_sheaf(const K& k, const SheafModel<typename K::Elem>& m) {
  Sheaf<typename K::Elem> s;
  s.twists = m.twists;
  for (auto& t : m.torsion) s.local.push_back({t.point, jordan_matrix(k, t.type)});
  return s;
}

template <class K>
SheafModel<typename K::Elem> to_model(const K& k, const Sheaf<typename K::Elem>& s) {
  SheafModel<typename K::Elem> m;
  m.twists = s.twists;
  std::sort(m.twists.rbegin(), m.twists.rend());
  for (auto& l : s.local)
    if (l.dim() > 0) m.torsion.push_back({l.point, jordan_type(k, l.nil)});
  return m;
}

// ---------------------------------------------------------------------------
// Morphisms A -> B(shift).  Binary forms are coefficient vectors indexed by the
// power of X (the power of Y is the complement).  Torsion data is read through
// the local trivializations Y^n near finite points and X^n near infinity, which
// also identify tau(-2) with tau.

inline int form_len(int deg) { return deg < 0 ? 0 : deg + 1; }

template <class T>
struct Morphism {
  int shift = 0;
  std::vector<std::vector<std::vector<T>>> ll;  // [target line][source line] form
  std::vector<std::vector<std::vector<T>>> lt;  // [target local][source line] vector
  std::vector<Matrix<T>> tt;                    // [target local] module map
};

template <class T>
using HiggsField = Morphism<T>;

template <class K>
Morphism<typename K::Elem> zero_morphism(const K& k, const Sheaf<typename K::Elem>& a,
                                         const Sheaf<typename K::Elem>& b, int shift) {
  using T = typename K::Elem;
  Morphism<T> f;
  f.shift = shift;
  f.ll.assign(b.twists.size(), std::vector<std::vector<T>>(a.twists.size()));
  for (std::size_t j = 0; j < b.twists.size(); ++j)
    for (std::size_t i = 0; i < a.twists.size(); ++i)
      f.ll[j][i].assign(form_len(b.twists[j] + shift - a.twists[i]), k.zero());
  f.lt.resize(b.local.size());
  f.tt.resize(b.local.size());
  for (std::size_t p = 0; p < b.local.size(); ++p) {
    f.lt[p].assign(a.twists.size(), std::vector<T>(b.local[p].dim(), k.zero()));
    int pa = a.find_local(b.local[p].point);
    f.tt[p] = zero_matrix(k, b.local[p].dim(), pa < 0 ? 0 : a.local[pa].dim());
  }
  return f;
}

// Local action of a binary form on a vector of a local module.
template <class K>
std::vector<typename K::Elem> apply_form_local(const K& k, const std::vector<typename K::Elem>& form,
                                               const LocalModule<typename K::Elem>& mod,
                                               const std::vector<typename K::Elem>& v) {
  using T = typename K::Elem;
  std::size_t m = mod.dim();
  std::vector<T> r(m, k.zero());
  if (form.empty()) return r;
  int deg = int(form.size()) - 1;
  auto nv = [&](const std::vector<T>& x) { return mat_vec(mod.nil, x, k.zero()); };
  if (!mod.point.at_infinity()) {
    // sum_e c_e (aI+N)^e v, Horner from the top
    const T& a = mod.point.a;
    for (std::size_t i = 0; i < m; ++i) r[i] = form[deg] * v[i];
    for (int e = deg - 1; e >= 0; --e) {
      auto t = nv(r);
      for (std::size_t i = 0; i < m; ++i) r[i] = t[i] + a * r[i] + form[e] * v[i];
    }
  } else {
    // sum_e c_e N^{deg-e} v
    for (std::size_t i = 0; i < m; ++i) r[i] = form[0] * v[i];
    for (int e = 1; e <= deg; ++e) {
      auto t = nv(r);
      for (std::size_t i = 0; i < m; ++i) r[i] = t[i] + form[e] * v[i];
    }
  }
  return r;
}

template <class K>
Morphism<typename K::Elem> compose(const K& k, const Sheaf<typename K::Elem>& a, const Sheaf<typename K::Elem>& b,
                                   const Sheaf<typename K::Elem>& c, const Morphism<typename K::Elem>& g,
                                   const Morphism<typename K::Elem>& f) {
  using T = typename K::Elem;
  Morphism<T> h = zero_morphism(k, a, c, f.shift + g.shift);
  for (std::size_t l = 0; l < c.twists.size(); ++l)
    for (std::size_t i = 0; i < a.twists.size(); ++i) {
      auto& out = h.ll[l][i];
      if (out.empty()) continue;
      for (std::size_t j = 0; j < b.twists.size(); ++j) {
        auto& gf = g.ll[l][j];
        auto& ff = f.ll[j][i];
        if (gf.empty() || ff.empty()) continue;
        for (std::size_t x = 0; x < gf.size(); ++x) {
          if (is_zero(gf[x])) continue;
          for (std::size_t y = 0; y < ff.size(); ++y) out[x + y] += gf[x] * ff[y];
        }
      }
    }
  for (std::size_t p = 0; p < c.local.size(); ++p) {
    int pb = b.find_local(c.local[p].point);
    for (std::size_t i = 0; i < a.twists.size(); ++i) {
      auto& out = h.lt[p][i];
      for (std::size_t j = 0; j < b.twists.size(); ++j) {
        auto t = apply_form_local(k, f.ll[j][i], c.local[p], g.lt[p][j]);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += t[x];
      }
      if (pb >= 0) {
        auto t = mat_vec(g.tt[p], f.lt[pb][i], k.zero());
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += t[x];
      }
    }
    int pa = a.find_local(c.local[p].point);
    if (pa >= 0 && pb >= 0) h.tt[p] = mat_mul(g.tt[p], f.tt[pb], k.zero());
  }
  return h;
}

template <class T>
std::vector<T> flatten(const Morphism<T>& f) {
  std::vector<T> out;
  for (auto& row : f.ll)
    for (auto& form : row) out.insert(out.end(), form.begin(), form.end());
  for (auto& row : f.lt)
    for (auto& v : row) out.insert(out.end(), v.begin(), v.end());
  for (auto& m : f.tt)
    for (auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

template <class K>
void axpy(const K& k, Morphism<typename K::Elem>& y, const typename K::Elem& c, const Morphism<typename K::Elem>& x) {
  (void)k;
  if (is_zero(c)) return;
  for (std::size_t j = 0; j < y.ll.size(); ++j)
    for (std::size_t i = 0; i < y.ll[j].size(); ++i)
      for (std::size_t e = 0; e < y.ll[j][i].size(); ++e) y.ll[j][i][e] += c * x.ll[j][i][e];
  for (std::size_t p = 0; p < y.lt.size(); ++p)
    for (std::size_t i = 0; i < y.lt[p].size(); ++i)
      for (std::size_t e = 0; e < y.lt[p][i].size(); ++e) y.lt[p][i][e] += c * x.lt[p][i][e];
  for (std::size_t p = 0; p < y.tt.size(); ++p)
    for (std::size_t r = 0; r < y.tt[p].size(); ++r)
      for (std::size_t e = 0; e < y.tt[p][r].size(); ++e) y.tt[p][r][e] += c * x.tt[p][r][e];
}

template <class K>
Morphism<typename K::Elem> combine(const K& k, const Morphism<typename K::Elem>& zero,
                                   const std::vector<Morphism<typename K::Elem>>& basis,
                                   const std::vector<typename K::Elem>& coeffs) {
  Morphism<typename K::Elem> out = zero;
  for (std::size_t b = 0; b < basis.size(); ++b) axpy(k, out, coeffs[b], basis[b]);
  return out;
}

// Basis of {M : nb M = M na}.
template <class K>
std::vector<Matrix<typename K::Elem>> module_hom_basis(const K& k, const Matrix<typename K::Elem>& nb,
                                                       const Matrix<typename K::Elem>& na) {
  using T = typename K::Elem;
  std::size_t mb = nb.size(), ma = na.size();
  std::size_t unknowns = mb * ma;
  std::vector<Matrix<T>> out;
  if (unknowns == 0) return out;
  Matrix<T> eq = zero_matrix(k, unknowns, unknowns);
  for (std::size_t i = 0; i < mb; ++i)
    for (std::size_t j = 0; j < ma; ++j) {
      auto& row = eq[i * ma + j];
      for (std::size_t l = 0; l < mb; ++l)
        if (!is_zero(nb[i][l])) row[l * ma + j] += nb[i][l];
      for (std::size_t l = 0; l < ma; ++l)
        if (!is_zero(na[l][j])) row[i * ma + l] -= na[l][j];
    }
  for (auto& v : nullspace(k, eq, unknowns)) {
    Matrix<T> m = zero_matrix(k, mb, ma);
    for (std::size_t i = 0; i < mb; ++i)
      for (std::size_t j = 0; j < ma; ++j) m[i][j] = v[i * ma + j];
    out.push_back(std::move(m));
  }
  return out;
}

template <class K>
std::vector<Morphism<typename K::Elem>> hom_basis(const K& k, const Sheaf<typename K::Elem>& a,
                                                  const Sheaf<typename K::Elem>& b, int shift) {
  using T = typename K::Elem;
  std::vector<Morphism<T>> basis;
  Morphism<T> zero = zero_morphism(k, a, b, shift);
  for (std::size_t j = 0; j < zero.ll.size(); ++j)
    for (std::size_t i = 0; i < zero.ll[j].size(); ++i)
      for (std::size_t e = 0; e < zero.ll[j][i].size(); ++e) {
        basis.push_back(zero);
        basis.back().ll[j][i][e] = k.one();
      }
  for (std::size_t p = 0; p < zero.lt.size(); ++p)
    for (std::size_t i = 0; i < zero.lt[p].size(); ++i)
      for (std::size_t e = 0; e < zero.lt[p][i].size(); ++e) {
        basis.push_back(zero);
        basis.back().lt[p][i][e] = k.one();
      }
  for (std::size_t p = 0; p < b.local.size(); ++p) {
    int pa = a.find_local(b.local[p].point);
    if (pa < 0) continue;
    for (auto& m : module_hom_basis(k, b.local[p].nil, a.local[pa].nil)) {
      basis.push_back(zero);
      basis.back().tt[p] = m;
    }
  }
  return basis;
}

// Closed-form dimension of Hom(F, G) between normal-form models.
template <class T>
long long hom_dim(const SheafModel<T>& f, const SheafModel<T>& g) {
  long long d = 0;
  for (int a : f.twists)
    for (int b : g.twists) d += std::max(0, b - a + 1);
  d += 1LL * f.rank() * g.torsion_degree();
  for (auto& tf : f.torsion)
    for (auto& tg : g.torsion) {
      if (!(tf.point == tg.point)) continue;
      for (int x : tf.type)
        for (int y : tg.type) d += std::min(x, y);
    }
  return d;
}

// ---------------------------------------------------------------------------
// Higgs fields

template <class K>
HiggsField<typename K::Elem> zero_higgs(const K& k, const Sheaf<typename K::Elem>& f) {
  return zero_morphism(k, f, f, -2);
}

template <class K>
bool is_nilpotent(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h) {
  for (std::size_t p = 0; p < f.local.size(); ++p) {
    auto m = h.tt[p];
    std::size_t n = f.local[p].dim();
    auto pw = m;
    for (std::size_t i = 1; i < n; ++i) pw = mat_mul(pw, m, k.zero());
    if (n > 0 && !is_zero_matrix(pw)) return false;
  }
  return true;
}

template <class K>
void require_nilpotent(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h) {
  if (!is_nilpotent(k, f, h)) throw std::invalid_argument("Higgs field is not nilpotent");
}

// Basis of {phi in Hom(O(n), A) : g o phi = 0} for g : A -> B(shift).
template <class K>
std::vector<Morphism<typename K::Elem>> kernel_sections(const K& k, const Sheaf<typename K::Elem>& a,
                                                        const Sheaf<typename K::Elem>& b,
                                                        const Morphism<typename K::Elem>& g, int n) {
  using T = typename K::Elem;
  Sheaf<T> src = line_sheaf<T>(n);
  auto basis = hom_basis(k, src, a, 0);
  std::vector<Morphism<T>> out;
  if (basis.empty()) return out;
  std::vector<std::vector<T>> cols;
  for (auto& phi : basis) cols.push_back(flatten(compose(k, src, a, b, g, phi)));
  std::size_t rows = cols[0].size();
  Matrix<T> m = zero_matrix(k, rows, basis.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) m[r][c] = cols[c][r];
  if (rows == 0) return basis;
  Morphism<T> zero = zero_morphism(k, src, a, 0);
  for (auto& v : nullspace(k, m, basis.size())) out.push_back(combine(k, zero, basis, v));
  return out;
}

template <class K>
long long kernel_section_dim(const K& k, const Sheaf<typename K::Elem>& a, const Sheaf<typename K::Elem>& b,
                             const Morphism<typename K::Elem>& g, int n) {
  using T = typename K::Elem;
  Sheaf<T> src = line_sheaf<T>(n);
  auto basis = hom_basis(k, src, a, 0);
  if (basis.empty()) return 0;
  std::vector<std::vector<T>> cols;
  for (auto& phi : basis) cols.push_back(flatten(compose(k, src, a, b, g, phi)));
  std::size_t rows = cols[0].size();
  if (rows == 0) return (long long)basis.size();
  Matrix<T> m = zero_matrix(k, rows, basis.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) m[r][c] = cols[c][r];
  return (long long)nullity(k, m, basis.size());
}

// h(n) = dim Hom(O(n), Ker f)
template <class K>
long long hom_profile(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h, int n) {
  require_nilpotent(k, f, h);
  return kernel_section_dim(k, f, f, h, n);
}

template <class K>
long long rank_k(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h, int n) {
  return hom_profile(k, f, h, n) - hom_profile(k, f, h, n + 1);
}

// ---------------------------------------------------------------------------
// Polynomial matrices on the affine charts

template <class T>
using PolyMatrix = std::vector<std::vector<Poly<T>>>;

// Chart z = X/Y.
template <class T>
Poly<T> dehomogenize_finite(const std::vector<T>& form) {
  Poly<T> p = form;
  trim(p);
  return p;
}

// Chart w = Y/X.
template <class T>
Poly<T> dehomogenize_infinite(const std::vector<T>& form) {
  Poly<T> p(form.rbegin(), form.rend());
  trim(p);
  return p;
}

// Rank over the fraction field, by fraction-free (Bareiss) elimination.
template <class K>
std::size_t poly_matrix_rank(const K& k, PolyMatrix<typename K::Elem> a) {
  using P = Poly<typename K::Elem>;
  if (a.empty()) return 0;
  std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  P prev{k.one()};
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c].empty()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        P t = poly_sub(k, poly_mul(k, a[r][c], a[i][j]), poly_mul(k, a[i][c], a[r][j]));
        a[i][j] = poly_divmod(k, t, prev).first;
      }
      a[i][c].clear();
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

template <class K>
struct SmithForm {
  std::vector<Poly<typename K::Elem>> diagonal;  // monic, nonzero, each divides the next
  std::size_t rows = 0;
  std::size_t cols = 0;
};

template <class K>
SmithForm<K> smith_form(const K& k, PolyMatrix<typename K::Elem> a) {
  using P = Poly<typename K::Elem>;
  SmithForm<K> out;
  out.rows = a.size();
  out.cols = a.empty() ? 0 : a[0].size();
  std::size_t rows = out.rows, cols = out.cols;
  auto move_min_to = [&](std::size_t t, bool whole) -> bool {
    int best = -1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (!whole && i != t && j != t) continue;
        if (a[i][j].empty()) continue;
        if (best < 0 || degree(a[i][j]) < best) {
          best = degree(a[i][j]);
          bi = i;
          bj = j;
        }
      }
    if (best < 0) return false;
    std::swap(a[t], a[bi]);
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][bj]);
    return true;
  };
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    if (!move_min_to(t, true)) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t].empty()) continue;
        P q = poly_divmod(k, a[i][t], a[t][t]).first;
        for (std::size_t j = t; j < cols; ++j) a[i][j] = poly_sub(k, a[i][j], poly_mul(k, q, a[t][j]));
        if (!a[i][t].empty()) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j].empty()) continue;
        P q = poly_divmod(k, a[t][j], a[t][t]).first;
        for (std::size_t i = t; i < rows; ++i) a[i][j] = poly_sub(k, a[i][j], poly_mul(k, q, a[i][t]));
        if (!a[t][j].empty()) clean = false;
      }
      if (!clean) {
        move_min_to(t, false);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!a[i][j].empty() && !poly_divmod(k, a[i][j], a[t][t]).second.empty()) {
            for (std::size_t c = t; c < cols; ++c) a[t][c] = poly_add(k, a[t][c], a[i][c]);
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.diagonal.push_back(poly_monic(k, a[t][t]));
  }
  return out;
}

// Nonunit invariant factors of the cokernel.
template <class K>
std::vector<Poly<typename K::Elem>> smith_invariant_factors(const K& k, const PolyMatrix<typename K::Elem>& a) {
  std::vector<Poly<typename K::Elem>> out;
  for (auto& d : smith_form(k, a).diagonal)
    if (degree(d) >= 1) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// Kernels

template <class K>
Matrix<typename K::Elem> restrict_to_subspace(const K& k, const Matrix<typename K::Elem>& n,
                                              const Matrix<typename K::Elem>& basis) {
  // columns of the result express n*w_j in the basis (w_j); basis vectors are rows
  using T = typename K::Elem;
  std::size_t d = basis.size();
  if (d == 0) return {};
  std::size_t m = basis[0].size();
  Matrix<T> w = zero_matrix(k, m, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < m; ++i) w[i][j] = basis[j][i];
  Matrix<T> out = zero_matrix(k, d, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto img = mat_vec(n, basis[j], k.zero());
    auto c = solve(k, w, img, d);
    if (!c) throw std::logic_error("subspace is not invariant");
    for (std::size_t i = 0; i < d; ++i) out[i][j] = (*c)[i];
  }
  return out;
}

// Isomorphism type of Ker(g) for g : A -> B(shift).
template <class K>
SheafModel<typename K::Elem> morphism_kernel(const K& k, const Sheaf<typename K::Elem>& a,
                                             const Sheaf<typename K::Elem>& b, const Morphism<typename K::Elem>& g) {
  using T = typename K::Elem;
  SheafModel<T> out;
  PolyMatrix<T> vv(b.twists.size(), std::vector<Poly<T>>(a.twists.size()));
  for (std::size_t j = 0; j < b.twists.size(); ++j)
    for (std::size_t i = 0; i < a.twists.size(); ++i) vv[j][i] = dehomogenize_finite(g.ll[j][i]);
  int kernel_rank = a.rank() - int(poly_matrix_rank(k, vv));
  if (kernel_rank > 0) {
    int top = *std::max_element(a.twists.begin(), a.twists.end());
    long long above = kernel_section_dim(k, a, b, g, top + 1);
    long long prev_count = 0;
    int found = 0;
    long long h_next = above;
    for (int n = top; found < kernel_rank; --n) {
      long long h = kernel_section_dim(k, a, b, g, n);
      long long count = h - h_next;  // #{twists >= n}
      for (long long c = prev_count; c < count; ++c) {
        out.twists.push_back(n);
        ++found;
      }
      prev_count = count;
      h_next = h;
      if (n < top - 4096) throw std::logic_error("kernel profile does not stabilise");
    }
  }
  for (std::size_t p = 0; p < a.local.size(); ++p) {
    int pb = b.find_local(a.local[p].point);
    Matrix<T> ker;
    if (pb < 0) {
      ker = identity_matrix(a.local[p].dim(), k.zero(), k.one());
    } else {
      ker = nullspace(k, g.tt[pb], a.local[p].dim());
    }
    if (ker.empty()) continue;
    auto restricted = restrict_to_subspace(k, a.local[p].nil, ker);
    out.torsion.push_back({a.local[p].point, jordan_type(k, restricted)});
  }
  return out;
}

template <class K>
SheafModel<typename K::Elem> kernel_model(const K& k, const Sheaf<typename K::Elem>& f,
                                          const HiggsField<typename K::Elem>& h) {
  require_nilpotent(k, f, h);
  return morphism_kernel(k, f, f, h);
}

// O(m)^d -> F, d = dim Hom(O(m), F): summand c goes to sum_b g[b][c] s_b over
// the basis s_b of Hom(O(m), F).  Surjective when g is invertible and every
// twist of F is >= m.
template <class K>
Morphism<typename K::Elem> evaluation_map(const K& k, const Sheaf<typename K::Elem>& f, int m,
                                          const Matrix<typename K::Elem>& g) {
  using T = typename K::Elem;
  auto basis = hom_basis(k, line_sheaf<T>(m), f, 0);
  std::size_t d = basis.size();
  if (g.size() != d || (d > 0 && g[0].size() != d)) throw std::invalid_argument("evaluation_map: g must be d x d");
  Sheaf<T> src{std::vector<int>(d, m), {}};
  auto out = zero_morphism(k, src, f, 0);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t b = 0; b < d; ++b) {
      if (is_zero(g[b][c])) continue;
      for (std::size_t j = 0; j < f.twists.size(); ++j)
        for (std::size_t e = 0; e < out.ll[j][c].size(); ++e) out.ll[j][c][e] += g[b][c] * basis[b].ll[j][0][e];
      for (std::size_t p = 0; p < f.local.size(); ++p)
        for (std::size_t e = 0; e < out.lt[p][c].size(); ++e) out.lt[p][c][e] += g[b][c] * basis[b].lt[p][0][e];
    }
  return out;
}

template <class K>
int image_degree(const K& k, const Sheaf<typename K::Elem>& f, const HiggsField<typename K::Elem>& h) {
  return f.degree() - kernel_model(k, f, h).degree();
}

// ---------------------------------------------------------------------------
// Quotients by sections

template <class K>
struct QuotientType {
  std::vector<int> twists;                        // decreasing
  Partition lambda;                               // block lengths, merged over points
  std::vector<Poly<typename K::Elem>> finite_factors;  // invariant factors on the chart z = X/Y
  std::vector<int> infinity_blocks;

  int rank() const { return int(twists.size()); }
  int degree() const {
    int d = partition_size(lambda);
    for (int n : twists) d += n;
    return d;
  }
  KClass cls() const { return KClass(rank(), degree()); }
};

// Isomorphism type of F / (sum of the images of the sections O(n) -> F).
// The sections must be jointly injective.
template <class K>
QuotientType<K> quotient_type(const K& k, const Sheaf<typename K::Elem>& f, int n,
                              const std::vector<Morphism<typename K::Elem>>& sections) {
  using T = typename K::Elem;
  using P = Poly<T>;
  QuotientType<K> out;
  std::size_t r = f.twists.size(), s = sections.size();
  int expected_rank = int(r) - int(s);
  if (expected_rank > 0) {
    int lo = *std::min_element(f.twists.begin(), f.twists.end());
    // g(j) = dim {psi in Hom(F, O(j)) : psi o sec = 0}; g(j) - g(j-1) = #{q <= j}
    auto g = [&](int j) -> long long {
      std::vector<int> off(r + 1, 0);
      for (std::size_t i = 0; i < r; ++i) off[i + 1] = off[i] + form_len(j - f.twists[i]);
      std::size_t unknowns = off[r];
      if (unknowns == 0) return 0;
      int out_len = form_len(j - n);
      Matrix<T> m = zero_matrix(k, s * std::max(out_len, 0), unknowns);
      for (std::size_t l = 0; l < s; ++l)
        for (std::size_t i = 0; i < r; ++i) {
          auto& sec = sections[l].ll[i][0];
          for (int x = 0; x < form_len(j - f.twists[i]); ++x)
            for (std::size_t y = 0; y < sec.size(); ++y)
              m[l * out_len + x + y][off[i] + x] += sec[y];
        }
      if (m.empty()) return (long long)unknowns;
      return (long long)nullity(k, m, unknowns);
    };
    long long prev_g = 0, count = 0;
    for (int j = lo; int(out.twists.size()) < expected_rank; ++j) {
      long long gj = g(j);
      long long c = gj - prev_g;
      for (long long x = count; x < c; ++x) out.twists.push_back(j);
      count = c;
      prev_g = gj;
      if (j > lo + 4096) throw std::logic_error("quotient profile does not stabilise");
    }
    std::sort(out.twists.rbegin(), out.twists.rend());
  }

  // chart z = X/Y: free generators, then the finite local modules
  {
    std::vector<std::size_t> mods;
    std::size_t rows = r;
    std::vector<std::size_t> off;
    for (std::size_t p = 0; p < f.local.size(); ++p)
      if (!f.local[p].point.at_infinity()) {
        mods.push_back(p);
        off.push_back(rows);
        rows += f.local[p].dim();
      }
    PolyMatrix<T> pres(rows);
    auto add_col = [&](std::vector<P> col) {
      for (std::size_t i = 0; i < rows; ++i) pres[i].push_back(std::move(col[i]));
    };
    for (std::size_t mi = 0; mi < mods.size(); ++mi) {
      auto& mod = f.local[mods[mi]];
      for (std::size_t v = 0; v < mod.dim(); ++v) {
        std::vector<P> col(rows);
        for (std::size_t u = 0; u < mod.dim(); ++u) {
          P e;
          if (u == v) e = P{-mod.point.a, k.one()};
          if (!is_zero(mod.nil[u][v])) e = poly_sub(k, e, P{mod.nil[u][v]});
          col[off[mi] + u] = e;
        }
        add_col(std::move(col));
      }
    }
    for (auto& sec : sections) {
      std::vector<P> col(rows);
      for (std::size_t i = 0; i < r; ++i) col[i] = dehomogenize_finite(sec.ll[i][0]);
      for (std::size_t mi = 0; mi < mods.size(); ++mi)
        for (std::size_t u = 0; u < f.local[mods[mi]].dim(); ++u) {
          P e{sec.lt[mods[mi]][0][u]};
          trim(e);
          col[off[mi] + u] = e;
        }
      add_col(std::move(col));
    }
    if (rows > 0) out.finite_factors = smith_invariant_factors(k, pres);
  }

  // chart w = Y/X, localized at infinity
  {
    int pinf = -1;
    for (std::size_t p = 0; p < f.local.size(); ++p)
      if (f.local[p].point.at_infinity()) pinf = int(p);
    std::size_t m = pinf < 0 ? 0 : f.local[pinf].dim();
    std::size_t rows = r + m;
    PolyMatrix<T> pres(rows);
    auto add_col = [&](std::vector<P> col) {
      for (std::size_t i = 0; i < rows; ++i) pres[i].push_back(std::move(col[i]));
    };
    for (std::size_t v = 0; v < m; ++v) {
      std::vector<P> col(rows);
      for (std::size_t u = 0; u < m; ++u) {
        P e;
        if (u == v) e = P{k.zero(), k.one()};
        if (!is_zero(f.local[pinf].nil[u][v])) e = poly_sub(k, e, P{f.local[pinf].nil[u][v]});
        col[r + u] = e;
      }
      add_col(std::move(col));
    }
    for (auto& sec : sections) {
      std::vector<P> col(rows);
      for (std::size_t i = 0; i < r; ++i) col[i] = dehomogenize_infinite(sec.ll[i][0]);
      for (std::size_t u = 0; u < m; ++u) {
        P e{sec.lt[pinf][0][u]};
        trim(e);
        col[r + u] = e;
      }
      add_col(std::move(col));
    }
    if (rows > 0)
      for (auto& d : smith_invariant_factors(k, pres)) {
        int v = 0;
        while (v < int(d.size()) && is_zero(d[v])) ++v;
        if (v > 0) out.infinity_blocks.push_back(v);
      }
  }

  int finite_deg = 0;
  for (auto& d : out.finite_factors) finite_deg += degree(d);
  int inf_deg = 0;
  for (int v : out.infinity_blocks) inf_deg += v;
  int free_deg = 0;
  for (int q : out.twists) free_deg += q;
  if (free_deg + finite_deg + inf_deg != f.degree() - int(s) * n)
    throw std::logic_error("quotient degree bookkeeping failed");

  if (out.finite_factors.size() > 1 || out.infinity_blocks.size() > 1)
    throw NotGeneric("quotient has a torsion point with several blocks");
  Partition lam(out.infinity_blocks.begin(), out.infinity_blocks.end());
  if (!out.finite_factors.empty()) {
    auto sqf = squarefree_decomposition(k, out.finite_factors[0]);
    int check = 0;
    for (auto& [e, fac] : sqf) {
      for (int c = 0; c < degree(fac); ++c) lam.push_back(e);
      check += e * degree(fac);
    }
    if (check != finite_deg) throw NotGeneric("squarefree decomposition incomplete in this characteristic");
  }
  out.lambda = normalize_partition(lam);
  return out;
}

// Generic injectivity of sections O(n)^s -> F, via the rank of their free part.
template <class K>
bool sections_injective(const K& k, const Sheaf<typename K::Elem>& f,
                        const std::vector<Morphism<typename K::Elem>>& sections) {
  using T = typename K::Elem;
  PolyMatrix<T> m(f.twists.size(), std::vector<Poly<T>>(sections.size()));
  for (std::size_t l = 0; l < sections.size(); ++l)
    for (std::size_t i = 0; i < f.twists.size(); ++i) m[i][l] = dehomogenize_finite(sections[l].ll[i][0]);
  return poly_matrix_rank(k, m) == sections.size();
}

template <class K>
std::vector<Morphism<typename K::Elem>> random_kernel_sections(const K& k, const Sheaf<typename K::Elem>& f,
                                                               const HiggsField<typename K::Elem>& h, int n,
                                                               int s, Rng& rng) {
  using T = typename K::Elem;
  auto basis = kernel_sections(k, f, f, h, n);
  Morphism<T> zero = zero_morphism(k, line_sheaf<T>(n), f, 0);
  std::vector<Morphism<T>> out;
  for (int l = 0; l < s; ++l) {
    std::vector<T> c(basis.size());
    for (auto& x : c) x = k.random(rng);
    out.push_back(combine(k, zero, basis, c));
  }
  return out;
}

template <class K>
QuotientType<K> quotient_by_sections(const K& k, const Sheaf<typename K::Elem>& f,
                                     const HiggsField<typename K::Elem>& h, int n, int s, std::uint64_t seed,
                                     int attempts = 8) {
  require_nilpotent(k, f, h);
  if (s < 1) throw std::invalid_argument("need at least one section");
  long long rk = rank_k(k, f, h, n);
  if (s > rk) throw RankTooSmall("rank_k is " + std::to_string(rk) + ", requested " + std::to_string(s));
  for (int at = 0; at < attempts; ++at) {
    Rng rng(derive_seed(seed, {0x51, at}));
    auto secs = random_kernel_sections(k, f, h, n, s, rng);
    if (!sections_injective(k, f, secs)) continue;
    return quotient_type(k, f, n, secs);
  }
  throw NotGeneric("no injective section sample found");
}

// ---------------------------------------------------------------------------
// Generic sampling

template <class K>
std::vector<ProjPoint<typename K::Elem>> random_distinct_points(const K& k, std::size_t count, Rng& rng) {
  using T = typename K::Elem;
  std::vector<ProjPoint<T>> pts;
  if constexpr (requires { k.from_index(0u); }) {
    std::uint64_t total = k.order() + 1;
    if (count > total) throw FieldTooSmall("need " + std::to_string(count) + " points over " + k.name());
    std::vector<std::uint64_t> chosen;
    if (total > 4096) {
      std::uniform_int_distribution<std::uint64_t> d(0, total - 1);
      while (chosen.size() < count) {
        auto i = d(rng);
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
      }
    } else {
      std::vector<std::uint64_t> idx(total);
      for (std::uint64_t i = 0; i < total; ++i) idx[i] = i;
      for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::uint64_t> d(i, total - 1);
        std::swap(idx[i], idx[d(rng)]);
        chosen.push_back(idx[i]);
      }
    }
    for (auto i : chosen) {
      if (i == k.order())
        pts.push_back(infinity_point(k));
      else
        pts.push_back(finite_point(k, k.from_index(std::uint32_t(i))));
    }
  } else {
    while (pts.size() < count) {
      auto p = finite_point(k, k.random(rng));
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
  }
  return pts;
}

template <class T>
struct HiggsPair {
  SheafModel<T> model;
  Sheaf<T> sheaf;
  HiggsField<T> field;
};

// Generic pair on the component labelled (twists, lambda): one single-block
// point per part of lambda, random blocks, split forms between lines, and
// t*(unit) on each block.
template <class K>
HiggsPair<typename K::Elem> sample_generic_pair(const K& k, const std::vector<int>& twists, const Partition& lambda,
                                                Rng& rng) {
  using T = typename K::Elem;
  HiggsPair<T> out;
  out.model.twists = twists;
  std::sort(out.model.twists.rbegin(), out.model.twists.rend());
  std::size_t roots = 0;
  for (int a : twists)
    for (int b : twists) roots += std::size_t(std::max(0, b - 2 - a));
  auto pts = random_distinct_points(k, lambda.size() + roots, rng);
  for (std::size_t i = 0; i < lambda.size(); ++i) out.model.torsion.push_back({pts[i], Partition{lambda[i]}});
  std::size_t next_root = lambda.size();
  out.sheaf = to_sheaf(k, out.model);
  auto& sh = out.sheaf;
  out.field = zero_higgs(k, sh);
  // line-to-line forms as c * prod (b t - a) over fresh distinct points (a:b):
  // a dominant parametrization whose fibres split over the sampling field
  for (auto& row : out.field.ll)
    for (auto& form : row) {
      if (form.empty()) continue;
      std::vector<T> acc{k.random_nonzero(rng)};
      for (std::size_t d = 1; d < form.size(); ++d) {
        auto& r = pts[next_root++];
        std::vector<T> next(acc.size() + 1, k.zero());
        for (std::size_t i = 0; i < acc.size(); ++i) {
          next[i + 1] += r.b * acc[i];
          next[i] -= r.a * acc[i];
        }
        acc = std::move(next);
      }
      form = acc;
    }
  for (auto& row : out.field.lt)
    for (auto& v : row)
      for (auto& c : v) c = k.random(rng);
  for (std::size_t p = 0; p < sh.local.size(); ++p) {
    std::size_t m = sh.local[p].dim();
    // t * (c0 + c1 t + ...), c0 != 0
    Matrix<T> acc = zero_matrix(k, m, m);
    Matrix<T> pw = sh.local[p].nil;
    for (std::size_t e = 0; e + 1 < m; ++e) {
      T c = e == 0 ? k.random_nonzero(rng) : k.random(rng);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) acc[i][j] += c * pw[i][j];
      pw = mat_mul(pw, sh.local[p].nil, k.zero());
    }
    out.field.tt[p] = acc;
  }
  return out;
}

}  // namespace higgs
