#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "kclass.hpp"
#include "partitions.hpp"
#include "sheaf.hpp"

namespace higgs {

// Label (twists, lambda) of an irreducible component of the nilpotent cone.
struct IrrComponent {
  std::vector<int> twists;  // weakly decreasing
  Partition lambda;

  IrrComponent() = default;
  IrrComponent(std::vector<int> t, Partition l) : twists(std::move(t)), lambda(normalize_partition(std::move(l))) {
    std::sort(twists.rbegin(), twists.rend());
  }

  int rank() const { return int(twists.size()); }
  KClass cls() const {
    int d = partition_size(lambda);
    for (int n : twists) d += n;
    return KClass(rank(), d);
  }
  bool is_empty() const { return twists.empty() && lambda.empty(); }

  std::string str() const {
    std::string s = "V=[";
    for (std::size_t i = 0; i < twists.size(); ++i) s += (i ? "," : "") + std::to_string(twists[i]);
    s += "];L=[";
    for (std::size_t i = 0; i < lambda.size(); ++i) s += (i ? "," : "") + std::to_string(lambda[i]);
    return s + "]";
  }

  friend auto operator<=>(const IrrComponent&, const IrrComponent&) = default;
  friend bool operator==(const IrrComponent&, const IrrComponent&) = default;
  friend std::ostream& operator<<(std::ostream& os, const IrrComponent& z) { return os << z.str(); }
};

inline std::vector<int> parse_int_list(const std::string& body) {
  std::vector<int> out;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto a = tok.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t used = 0;
    int v = std::stoi(tok.substr(a), &used);
    if (tok.find_first_not_of(" \t", a + used) != std::string::npos) throw std::invalid_argument("bad integer '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

// Parses "V=[2,0];L=[1]".
inline IrrComponent parse_component(const std::string& s) {
  auto v = s.find("V=[");
  auto l = s.find("L=[");
  if (v == std::string::npos || l == std::string::npos) throw std::invalid_argument("component must read V=[..];L=[..]");
  auto ve = s.find(']', v);
  auto le = s.find(']', l);
  if (ve == std::string::npos || le == std::string::npos) throw std::invalid_argument("unterminated list in " + s);
  auto lam = parse_int_list(s.substr(l + 3, le - l - 3));
  for (int p : lam)
    if (p <= 0) throw std::invalid_argument("partition parts must be positive");
  return IrrComponent(parse_int_list(s.substr(v + 3, ve - v - 3)), lam);
}

// All labels of the class with every twist >= floor.
inline std::vector<IrrComponent> enumerate_components(KClass cls, int floor) {
  std::vector<IrrComponent> out;
  if (!cls.in_positive_cone()) return out;
  if (cls.rank == 0) {
    for (auto& lam : partitions_of(cls.degree)) out.emplace_back(std::vector<int>{}, lam);
    return out;
  }
  for (int m = 0; m <= cls.degree - cls.rank * floor; ++m)
    for (auto& lam : partitions_of(m))
      for (auto& tw : int_partitions(cls.rank, cls.degree - m, floor)) out.emplace_back(tw, lam);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

struct SampleOptions {
  int trials = 5;
  std::uint64_t seed = 1;
};

inline const FiniteField& sampling_field() {
  static const FiniteField k(2147483647u);
  return k;
}

inline std::uint64_t component_seed(const IrrComponent& z, std::uint64_t seed, std::initializer_list<std::int64_t> tags) {
  std::uint64_t s = derive_seed(seed, {static_cast<std::int64_t>(hash_string(z.str()))});
  return derive_seed(s, tags);
}

inline HiggsPair<Fq> sample_component(const IrrComponent& z, std::uint64_t seed) {
  Rng rng(seed);
  return sample_generic_pair(sampling_field(), z.twists, z.lambda, rng);
}

// Most frequent value; stops once a value holds a strict majority of `trials`.
template <class T, class Fn>
T majority_vote(int trials, Fn&& draw) {
  std::map<T, int> votes;
  for (int t = 0; t < trials; ++t) {
    auto v = draw(t);
    if (++votes[v] * 2 > trials) return v;
  }
  if (votes.empty()) throw NotGeneric("no trials");
  return std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
}

struct StrataInvariants {
  int k = 0;
  int n = 0;  // dim Hom(O(k), Ker f)
  int s = 0;  // rk_k(Ker f)

  friend bool operator==(const StrataInvariants&, const StrataInvariants&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrataInvariants& v) {
    return os << "k=" << v.k << " n=" << v.n << " s=" << v.s;
  }
};

inline StrataInvariants strata_invariants(const IrrComponent& z, int k, const SampleOptions& opt = {}) {
  auto v = majority_vote<std::pair<int, int>>(opt.trials, [&](int t) {
    auto p = sample_component(z, component_seed(z, opt.seed, {0x57, k, t}));
    auto& f = sampling_field();
    return std::pair<int, int>(int(hom_profile(f, p.sheaf, p.field, k)), int(rank_k(f, p.sheaf, p.field, k)));
  });
  return {k, v.first, v.second};
}

// ---------------------------------------------------------------------------
// Stability

// Generic point is stable iff it carries no nonzero nilpotent Higgs field.
// Bundles: no Hom(O(a), O(b-2)) between summands, i.e. max - min <= 1.
// Torsion at distinct points: nilpotent endomorphisms exist iff a block has
// length >= 2; with a bundle present, V -> tau is always square-zero.
inline bool is_stable(const IrrComponent& z) {
  if (z.lambda.empty()) return z.twists.empty() || z.twists.front() - z.twists.back() <= 1;
  if (!z.twists.empty()) return false;
  return z.lambda.front() == 1;
}

// Dimension of the nilpotent Higgs fields on a sampled generic sheaf of z.
// With one block per point every field is block triangular, and it is
// nilpotent iff each torsion block has zero constant term.
inline int nilpotent_higgs_dimension(const IrrComponent& z, std::uint64_t seed = 1) {
  auto& k = sampling_field();
  auto p = sample_component(z, component_seed(z, seed, {0x5e}));
  auto basis = hom_basis(k, p.sheaf, p.sheaf, -2);
  std::size_t pts = p.sheaf.local.size();
  if (basis.empty()) return 0;
  if (pts == 0) return int(basis.size());
  Matrix<Fq> m = zero_matrix(k, pts, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t q = 0; q < pts; ++q)
      if (!basis[j].tt[q].empty()) m[q][j] = basis[j].tt[q][0][0];
  return int(nullity(k, m, basis.size()));
}

inline bool is_stable_sampled(const IrrComponent& z, std::uint64_t seed = 1) {
  return nilpotent_higgs_dimension(z, seed) == 0;
}

// ---------------------------------------------------------------------------
// Dimension bookkeeping between strata.  Z1 has rank r, Z2 rank r - s:
// dim Z1 = dim Z2 - 2s(r-s) - s^2 must agree with purity (-r^2), and the
// intermediate Z3 satisfies both expressions of its dimension.
inline bool dimension_check(int r, int s, int n) {
  if (!(0 < s && s <= r)) throw std::invalid_argument("need 0 < s <= r");
  long long R = r, S = s, N = n;
  long long z2 = -(R - S) * (R - S);
  long long z1 = z2 - 2 * S * (R - S) - S * S;
  long long z3 = z2 - 2 * S * (R - S) + S * (N - S) - S * S;
  return z1 == -R * R && z3 == z1 + S * (N - S);
}

}  // namespace higgs
