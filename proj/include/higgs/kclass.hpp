#pragma once

#include <stdexcept>
#include <string>

namespace higgs {

struct KClass {
  int rank = 0;
  int degree = 0;

  KClass() = default;
  KClass(int r, int d) : rank(r), degree(d) {
    if (r < 0) throw std::invalid_argument("negative rank");
  }

  bool is_zero() const { return rank == 0 && degree == 0; }
  bool in_positive_cone() const { return rank >= 1 || (rank == 0 && degree >= 0); }

  friend KClass operator+(KClass a, KClass b) { return KClass(a.rank + b.rank, a.degree + b.degree); }
  friend KClass operator-(KClass a, KClass b) { return KClass(a.rank - b.rank, a.degree - b.degree); }
  friend bool operator==(KClass a, KClass b) { return a.rank == b.rank && a.degree == b.degree; }
  friend bool operator!=(KClass a, KClass b) { return !(a == b); }
  friend bool operator<(KClass a, KClass b) {
    return a.rank != b.rank ? a.rank < b.rank : a.degree < b.degree;
  }

  std::string str() const { return "(" + std::to_string(rank) + "," + std::to_string(degree) + ")"; }
};

// <a,b> = r r' + r d' - d r'
inline long long euler_form(KClass a, KClass b) {
  return 1LL * a.rank * b.rank + 1LL * a.rank * b.degree - 1LL * a.degree * b.rank;
}

// Coordinates on the basis (alpha_1, delta).
struct WeightVector {
  int a1 = 0;
  int delta = 0;

  friend WeightVector operator+(WeightVector x, WeightVector y) { return {x.a1 + y.a1, x.delta + y.delta}; }
  friend WeightVector operator-(WeightVector x, WeightVector y) { return {x.a1 - y.a1, x.delta - y.delta}; }
  friend bool operator==(WeightVector x, WeightVector y) { return x.a1 == y.a1 && x.delta == y.delta; }

  std::string str() const {
    return std::to_string(a1) + "a1" + (delta < 0 ? "" : "+") + std::to_string(delta) + "d";
  }
};

inline WeightVector weight_of(KClass c) { return {c.rank, c.degree}; }
inline KClass class_of(WeightVector w) { return KClass(w.a1, w.delta); }

// The simple root direction alpha_1 + k delta.
inline WeightVector root_k(int k) { return {1, k}; }

}  // namespace higgs
