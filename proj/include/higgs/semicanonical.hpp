#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "components.hpp"
#include "drinfeld.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "partitions.hpp"

namespace higgs {

struct SemicanOptions {
  ChiOptions chi;
  int torsion_budget = 4;  // largest torsion degree a window may reach
  int degree_cap = 2;
};

// Memoized generic values rho_Z(word).
class GenericValues {
 public:
  explicit GenericValues(ChiOptions opt = {}) : opt_(std::move(opt)) {}

  const ChiOptions& options() const { return opt_; }

  Rational word(const IrrComponent& z, const GeneratorWord& w) {
    auto key = std::make_pair(z, w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto v = chi_word(w, z.twists, z.lambda, opt_);
    cache_.emplace(key, v);
    return v;
  }

  Rational rho(const IrrComponent& z, const WordCombination& x) {
    Rational out = 0;
    for (auto& [w, c] : x) {
      if (word_class(w) != z.cls()) throw std::invalid_argument("combination class differs from " + z.str());
      out += c * word(z, w);
    }
    return out;
  }

 private:
  ChiOptions opt_;
  std::map<std::pair<IrrComponent, GeneratorWord>, Rational> cache_;
};

inline Rational rho(const IrrComponent& z, const WordCombination& x, const ChiOptions& opt = {}) {
  GenericValues g(opt);
  return g.rho(z, x);
}

inline WordCombination scaled(const WordCombination& x, const Rational& c) {
  WordCombination out;
  for (auto& [w, v] : x) add_term(out, w, v * c);
  return out;
}

inline void add_scaled(WordCombination& x, const WordCombination& y, const Rational& c) {
  for (auto& [w, v] : y) add_term(x, w, v * c);
}

// 1_{n} 1_{lambda'}: lines from the smallest twist on the left, then the
// torsion chain T(lambda'_1) T(lambda'_2) ... whose rightmost letter is the
// innermost subsheaf.
inline GeneratorWord leading_word(const IrrComponent& z) {
  GeneratorWord w;
  for (auto it = z.twists.rbegin(); it != z.twists.rend(); ++it) w.push_back(Line(*it));
  for (int p : conjugate(z.lambda)) w.push_back(Tor(p));
  return w;
}

// f_lambda for every lambda |- d, by induction up the dominance order:
// f_lambda = (1_{lambda'} - sum_{mu < lambda} rho_mu(1_{lambda'}) f_mu) / pivot.
inline std::map<Partition, WordCombination> semican_torsion(int d, GenericValues& g, int budget = 4) {
  if (d < 1) throw std::invalid_argument("torsion degree must be positive");
  if (d > budget) throw BudgetExceeded("torsion degree " + std::to_string(d) + " over budget " + std::to_string(budget));
  auto parts = partitions_of(d);
  std::sort(parts.begin(), parts.end());  // lexicographic refines dominance
  std::map<Partition, WordCombination> out;
  for (auto& lam : parts) {
    IrrComponent z({}, lam);
    WordCombination lead;
    add_term(lead, leading_word(z), 1);
    WordCombination x = lead;
    for (auto& [mu, f] : out)
      if (dominates(lam, mu)) add_scaled(x, f, -g.rho(IrrComponent({}, mu), lead));
    Rational pivot = g.rho(z, x);
    if (sgn(pivot) == 0) throw NotInSpan("vanishing pivot at " + partition_str(lam));
    out[lam] = scaled(x, 1 / pivot);
  }
  return out;
}

inline std::map<Partition, WordCombination> semican_torsion(int d, const ChiOptions& opt = {}, int budget = 4) {
  GenericValues g(opt);
  return semican_torsion(d, g, budget);
}

// Semicanonical elements of every component of the class alive at `floor`.
// Components run in label order: twists first (the order on the line part),
// then torsion; each leading word is cleared against the earlier elements and
// normalized, and a backward pass clears any value left on later components.
inline std::map<IrrComponent, WordCombination> semican_window(KClass cls, int floor, GenericValues& g,
                                                              int torsion_budget = 4) {
  int tau = cls.degree - cls.rank * floor;
  if (cls.rank > 0 && tau > torsion_budget)
    throw WindowTooSmall("torsion bound " + std::to_string(tau) + " over budget " + std::to_string(torsion_budget));
  if (cls.rank == 0 && cls.degree > torsion_budget) throw BudgetExceeded("torsion degree over budget");
  auto comps = enumerate_components(cls, floor);
  std::sort(comps.begin(), comps.end());
  std::vector<WordCombination> f(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j) {
    WordCombination x;
    add_term(x, leading_word(comps[j]), 1);
    for (std::size_t i = 0; i < j; ++i) {
      auto a = g.rho(comps[i], x);
      if (sgn(a) != 0) add_scaled(x, f[i], -a);
    }
    Rational pivot = g.rho(comps[j], x);
    if (sgn(pivot) == 0) throw NotInSpan("vanishing pivot at " + comps[j].str());
    f[j] = scaled(x, 1 / pivot);
  }
  for (std::size_t j = comps.size(); j-- > 0;)
    for (std::size_t i = j + 1; i < comps.size(); ++i) {
      auto a = g.rho(comps[i], f[j]);
      if (sgn(a) != 0) add_scaled(f[j], f[i], -a);
    }
  std::map<IrrComponent, WordCombination> out;
  for (std::size_t j = 0; j < comps.size(); ++j) out.emplace(comps[j], std::move(f[j]));
  return out;
}

inline WordCombination semican_element(const IrrComponent& z, int floor, GenericValues& g, const SemicanOptions& opt = {}) {
  if (z.rank() > 2) throw std::invalid_argument("semicanonical elements are built for rank <= 2");
  if (!z.twists.empty() && z.twists.back() < floor) throw std::invalid_argument(z.str() + " has a twist below the floor");
  if (z.cls().degree > opt.degree_cap) throw std::invalid_argument(z.str() + " exceeds the degree cap");
  return semican_window(z.cls(), floor, g, opt.torsion_budget).at(z);
}

inline WordCombination semican_element(const IrrComponent& z, int floor, const SemicanOptions& opt = {}) {
  GenericValues g(opt.chi);
  return semican_element(z, floor, g, opt);
}

}  // namespace higgs
