#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "components.hpp"
#include "errors.hpp"
#include "kclass.hpp"
#include "sheaf.hpp"

namespace higgs {

struct CrystalOptions {
  SampleOptions sample;
  int search_radius = 3;
  int attempts = 4;  // resamples of a trial that hit a non-generic draw
  bool prune = true;  // false: scan the whole search window for e_k
};

// Parts of lambda shrunk or dropped one by one (the torsion of a subsheaf of
// a generic sheaf with one block per point).
inline std::vector<Partition> sub_partitions(const Partition& lambda) {
  std::set<Partition> out;
  Partition cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == lambda.size()) {
      out.insert(normalize_partition(cur));
      return;
    }
    for (int v = 0; v <= lambda[i]; ++v) {
      cur.push_back(v);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return {out.begin(), out.end()};
}

// a, b decreasing with equal length and sum: every prefix sum of a is <= b's.
inline bool majorized_by(const std::vector<int>& a, const std::vector<int>& b) {
  long long sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa > sb) return false;
  }
  return sa == sb;
}

struct PathStep {
  char op = 'f';  // 'f': f_k applied to the previous node; 'e': f_k maps `to` back onto it
  int k = 0;
  IrrComponent to;
};

struct CrystalEdge {
  IrrComponent source, target;
  int k = 0;
  char op = 'f';

  friend auto operator<=>(const CrystalEdge&, const CrystalEdge&) = default;
  friend std::ostream& operator<<(std::ostream& os, const CrystalEdge& e) {
    return os << e.source << " -" << e.op << ":" << e.k << "-> " << e.target;
  }
};

struct CrystalGraph {
  std::set<IrrComponent> nodes;
  std::set<CrystalEdge> edges;
};

inline IrrComponent ladder(int j, Partition lambda = {}) {
  std::vector<int> tw;
  for (int i = j; i >= 0; --i) tw.push_back(2 * i);
  return IrrComponent(tw, std::move(lambda));
}

inline Partition reduce_parts(const Partition& lambda) {
  Partition out;
  for (int p : lambda) out.push_back(p - 1);
  return normalize_partition(out);
}

// Loop-crystal operators with memoized generic computations.  All results
// depend only on the options, not on call order.
class LoopCrystal {
 public:
  explicit LoopCrystal(CrystalOptions opt = {}) : opt_(opt) {}

  const CrystalOptions& options() const { return opt_; }

  StrataInvariants strata(const IrrComponent& z, int k) {
    auto key = std::make_pair(z, k);
    auto it = strata_.find(key);
    if (it != strata_.end()) return it->second;
    auto v = strata_invariants(z, k, opt_.sample);
    strata_.emplace(key, v);
    return v;
  }

  WeightVector wt(const IrrComponent& z) const { return weight_of(z.cls()); }
  int epsilon(const IrrComponent& z, int k) { return -strata(z, k).s; }
  int phi(const IrrComponent& z, int k) { return epsilon(z, k) + 2 * z.rank(); }

  // Label of F / O(k) for a generic pair and a generic section O(k) -> Ker f;
  // nullopt when rk_k(Ker f) = 0 generically.
  std::optional<IrrComponent> f(const IrrComponent& z, int k) {
    auto key = std::make_pair(z, k);
    auto it = f_.find(key);
    if (it != f_.end()) return it->second;
    auto& fld = sampling_field();
    auto v = majority_vote<std::optional<IrrComponent>>(opt_.sample.trials, [&](int t) {
      for (int a = 0; a < opt_.attempts; ++a) {
        auto p = sample_component(z, component_seed(z, opt_.sample.seed, {0xf0, k, t, a}));
        if (rank_k(fld, p.sheaf, p.field, k) == 0) return std::optional<IrrComponent>();
        try {
          auto q = quotient_by_sections(fld, p.sheaf, p.field, k, 1, component_seed(z, opt_.sample.seed, {0xf1, k, t, a}));
          return std::optional<IrrComponent>(IrrComponent(q.twists, q.lambda));
        } catch (const NotGeneric&) {
        }
      }
      throw NotGeneric("f_" + std::to_string(k) + " of " + z.str() + ": no generic draw");
    });
    f_.emplace(key, v);
    return v;
  }

  // Candidates for e_k(z): the search window, cut down by two necessary
  // conditions on an extension 0 -> O(k) -> F -> G -> 0 with G generic in z:
  // tau_F embeds in tau_G point by point, and the bundle part of F is an
  // extension of z's bundle by O(c), c = k + |lambda| - |lambda_F|, so its
  // type is majorized by twists + {c}.
  std::vector<IrrComponent> e_candidates(const IrrComponent& z, int k) const {
    std::vector<IrrComponent> out;
    int lo = std::min(z.twists.empty() ? k : z.twists.back(), k) - opt_.search_radius;
    int lam = partition_size(z.lambda);
    if (!opt_.prune) {
      for (auto& c : enumerate_components(KClass(z.rank() + 1, z.cls().degree + k), lo))
        if (partition_size(c.lambda) <= lam + std::abs(k) + opt_.search_radius) out.push_back(c);
      return out;
    }
    int tsum = 0;
    for (int n : z.twists) tsum += n;
    for (auto& sub : sub_partitions(z.lambda)) {
      int c = k + lam - partition_size(sub);
      std::vector<int> base = z.twists;
      base.push_back(c);
      std::sort(base.rbegin(), base.rend());
      int from = std::max(lo, base.back());
      for (auto& tw : int_partitions(int(base.size()), tsum + c, from))
        if (majorized_by(tw, base)) out.emplace_back(tw, sub);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  IrrComponent e(const IrrComponent& z, int k) {
    auto key = std::make_pair(z, k);
    auto it = e_.find(key);
    if (it != e_.end()) return it->second;
    auto st = strata(z, k);
    std::vector<IrrComponent> hits;
    for (auto& c : e_candidates(z, k)) {
      auto sc = strata(c, k);
      if (sc.s != st.s + 1 || sc.n != st.n + 1) continue;
      auto img = f(c, k);
      if (img && *img == z) hits.push_back(c);
    }
    if (hits.empty()) throw SearchExhausted("e_" + std::to_string(k) + " of " + z.str() + " not found; raise the radius");
    if (hits.size() > 1) throw NotUnique("e_" + std::to_string(k) + " of " + z.str() + ": " + hits[0].str() + " and " + hits[1].str());
    e_.emplace(key, hits[0]);
    return hits[0];
  }

  // The affine sl2 operators: e~1 = e_0, f~1 = f_0, e~0 = f_{-1}, f~0 = e_{-1}.
  // Since e~0 and f~0 run against k = -1, eps~0 and phi~0 swap as well.
  std::optional<IrrComponent> sl2hat(const IrrComponent& z, int i, char direction) {
    if (i != 0 && i != 1) throw std::invalid_argument("sl2hat index must be 0 or 1");
    if (direction != 'e' && direction != 'f') throw std::invalid_argument("direction must be e or f");
    if (i == 1) return direction == 'e' ? std::optional<IrrComponent>(e(z, 0)) : f(z, 0);
    return direction == 'e' ? f(z, -1) : std::optional<IrrComponent>(e(z, -1));
  }
  int sl2hat_epsilon(const IrrComponent& z, int i) { return i == 1 ? epsilon(z, 0) : phi(z, -1); }
  int sl2hat_phi(const IrrComponent& z, int i) { return i == 1 ? phi(z, 0) : epsilon(z, -1); }

  CrystalGraph graph(const std::vector<KClass>& classes, int floor, const std::vector<int>& ks, bool stable_only) {
    CrystalGraph g;
    for (auto c : classes)
      for (auto& z : enumerate_components(c, floor))
        if (!stable_only || is_stable(z)) g.nodes.insert(z);
    for (auto& z : g.nodes)
      for (int k : ks) {
        auto t = f(z, k);
        if (!t || !g.nodes.count(*t)) continue;
        g.edges.insert({z, *t, k, 'f'});
        g.edges.insert({*t, z, k, 'e'});
      }
    return g;
  }

  // A walk to the empty component: kill the rank with f_k, k = max twist - |lambda|;
  // then climb the ladder (V_j, mu) <- (V_{j+1}, mu - 1) along f_d edges,
  // d = 2j + 2 - l(mu); then strip V_J with f_{2J}, ..., f_0.
  std::vector<PathStep> path_to_empty(IrrComponent z, int floor) {
    std::vector<PathStep> path;
    auto need = [&](int k) {
      if (k < floor) throw NoPathWithinFloor("path needs k = " + std::to_string(k) + " below floor " + std::to_string(floor));
    };
    while (z.rank() > 0) {
      int k = z.twists.front() - partition_size(z.lambda);
      need(k);
      auto t = f(z, k);
      if (!t) throw NotGeneric("rk_" + std::to_string(k) + " vanished on " + z.str());
      z = *t;
      path.push_back({'f', k, z});
    }
    int j = -1;
    while (!z.lambda.empty()) {
      int d = 2 * j + 2 - int(z.lambda.size());
      need(d);
      IrrComponent up = ladder(j + 1, reduce_parts(z.lambda));
      auto t = f(up, d);
      if (!t || *t != z) up = e(z, d);
      z = up;
      path.push_back({'e', d, z});
      ++j;
    }
    for (int i = j; i >= 0; --i) {
      need(2 * i);
      auto t = f(z, 2 * i);
      if (!t) throw NotGeneric("ladder strip failed at " + z.str());
      z = *t;
      path.push_back({'f', 2 * i, z});
    }
    if (!z.is_empty()) throw std::logic_error("ladder strip ended at " + z.str());
    return path;
  }

 private:
  CrystalOptions opt_;
  std::map<std::pair<IrrComponent, int>, StrataInvariants> strata_;
  std::map<std::pair<IrrComponent, int>, std::optional<IrrComponent>> f_;
  std::map<std::pair<IrrComponent, int>, IrrComponent> e_;
};

inline std::string to_dot(const CrystalGraph& g, std::uint64_t seed) {
  std::ostringstream os;
  os << "digraph crystal {\n  // seed " << seed << "\n";
  for (auto& z : g.nodes) os << "  \"" << z.str() << "\";\n";
  for (auto& e : g.edges)
    if (e.op == 'f') os << "  \"" << e.source.str() << "\" -> \"" << e.target.str() << "\" [label=\"f:" << e.k << "\"];\n";
  os << "}\n";
  return os.str();
}

// Nodes reachable from the empty component, edges read in both directions.
inline std::set<IrrComponent> reachable_from_empty(const CrystalGraph& g) {
  std::set<IrrComponent> seen;
  IrrComponent empty;
  if (!g.nodes.count(empty)) return seen;
  std::vector<IrrComponent> todo{empty};
  seen.insert(empty);
  while (!todo.empty()) {
    auto z = todo.back();
    todo.pop_back();
    for (auto& e : g.edges) {
      const IrrComponent* nb = nullptr;
      if (e.source == z) nb = &e.target;
      if (e.target == z) nb = &e.source;
      if (nb && seen.insert(*nb).second) todo.push_back(*nb);
    }
  }
  return seen;
}

}  // namespace higgs
