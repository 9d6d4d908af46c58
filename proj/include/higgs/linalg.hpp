#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "field.hpp"

namespace higgs {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class K>
Matrix<typename K::Elem> zero_matrix(const K& k, std::size_t rows, std::size_t cols) {
  return Matrix<typename K::Elem>(rows, std::vector<typename K::Elem>(cols, k.zero()));
}

// In-place reduced row echelon form; returns pivot columns.
template <class K>
std::vector<std::size_t> rref(const K& k, Matrix<typename K::Elem>& a, std::size_t ncols) {
  using T = typename K::Elem;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
    std::size_t piv = row;
    while (piv < a.size() && is_zero(a[piv][col])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[row]);
    T inv = k.one() / a[row][col];
    for (std::size_t j = col; j < a[row].size(); ++j) a[row][j] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || is_zero(a[i][col])) continue;
      T f = a[i][col];
      for (std::size_t j = col; j < a[i].size(); ++j)
        if (!is_zero(a[row][j])) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class K>
std::size_t matrix_rank(const K& k, Matrix<typename K::Elem> a) {
  if (a.empty()) return 0;
  return rref(k, a, a[0].size()).size();
}

// Basis of {x : a x = 0} for an m x n matrix.
template <class K>
Matrix<typename K::Elem> nullspace(const K& k, Matrix<typename K::Elem> a, std::size_t n) {
  using T = typename K::Elem;
  auto piv = rref(k, a, n);
  std::vector<char> is_piv(n, 0);
  for (auto c : piv) is_piv[c] = 1;
  Matrix<T> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_piv[free]) continue;
    std::vector<T> v(n, k.zero());
    v[free] = k.one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class K>
std::size_t nullity(const K& k, const Matrix<typename K::Elem>& a, std::size_t n) {
  if (a.empty()) return n;
  return n - matrix_rank(k, a);
}

// One solution of a x = b, if any.
template <class K>
std::optional<std::vector<typename K::Elem>> solve(const K& k, const Matrix<typename K::Elem>& a,
                                                   const std::vector<typename K::Elem>& b,
                                                   std::size_t n) {
  using T = typename K::Elem;
  Matrix<T> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto piv = rref(k, aug, n + 1);
  if (!piv.empty() && piv.back() == n) return std::nullopt;
  std::vector<T> x(n, k.zero());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][n];
  return x;
}

template <class K>
typename K::Elem determinant(const K& k, Matrix<typename K::Elem> a) {
  using T = typename K::Elem;
  std::size_t n = a.size();
  T det = k.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(a[p][c])) ++p;
    if (p == n) return k.zero();
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    T inv = k.one() / a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(a[i][c])) continue;
      T f = a[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), inner = b.size();
  Matrix<T> c(n, std::vector<T>(m, zero));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < inner; ++l) {
      if (is_zero(a[i][l])) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& a, const std::vector<T>& x, const T& zero) {
  std::vector<T> y(a.size(), zero);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!is_zero(a[i][j]) && !is_zero(x[j])) y[i] += a[i][j] * x[j];
  return y;
}

template <class T>
bool is_zero_matrix(const Matrix<T>& a) {
  for (auto& r : a)
    for (auto& x : r)
      if (!is_zero(x)) return false;
  return true;
}

template <class T>
Matrix<T> identity_matrix(std::size_t n, const T& zero, const T& one) {
  Matrix<T> m(n, std::vector<T>(n, zero));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = one;
  return m;
}

}  // namespace higgs
