#include <gtest/gtest.h>

#include "higgs/loopcrystal.hpp"

using namespace higgs;

namespace {

IrrComponent C(std::vector<int> t, Partition l = {}) { return IrrComponent(std::move(t), std::move(l)); }

LoopCrystal& crystal() {
  static LoopCrystal lc;
  return lc;
}

std::vector<IrrComponent> window(int rmax, int dlo, int dhi, int floor) {
  std::vector<IrrComponent> out;
  for (int r = 0; r <= rmax; ++r)
    for (int d = dlo; d <= dhi; ++d)
      for (auto& z : enumerate_components(KClass(r, d), floor)) out.push_back(z);
  return out;
}

// Stable component of rank n and degree p.
std::optional<IrrComponent> stable(int n, int p) {
  for (auto& z : enumerate_components(KClass(n, p), p - 2 * n - 2))
    if (is_stable(z)) return z;
  return std::nullopt;
}

std::set<CrystalEdge> f_edges(const CrystalGraph& g) {
  std::set<CrystalEdge> out;
  for (auto& e : g.edges)
    if (e.op == 'f') out.insert(e);
  return out;
}

}  // namespace

TEST(LoopCrystal, OperatorExamples) {
  auto& lc = crystal();
  EXPECT_EQ(lc.f(C({0}), 0), IrrComponent());
  EXPECT_EQ(lc.f(C({2, 0}), 1), C({0}, {1}));
  EXPECT_EQ(lc.f(C({}, {1}), 0), std::nullopt);
  EXPECT_EQ(lc.e(IrrComponent(), 0), C({0}));
  EXPECT_EQ(lc.e(IrrComponent(), -1), C({-1}));
  // The unique lift of the point along O(1) is O(2), not ([1],(1)).
  EXPECT_EQ(lc.e(C({}, {1}), 1), C({2}));
  EXPECT_EQ(lc.f(C({1}, {1}), 1), std::nullopt);
}

TEST(LoopCrystal, WeightAndStatistics) {
  auto& lc = crystal();
  EXPECT_EQ(lc.wt(C({2, 0}, {1})), (WeightVector{2, 3}));
  EXPECT_EQ(lc.epsilon(C({0, 0}), 0), -2);
  EXPECT_EQ(lc.phi(C({0, 0}), 0), 2);
}

TEST(LoopCrystal, AffineAliases) {
  auto& lc = crystal();
  EXPECT_EQ(lc.sl2hat(C({0}), 1, 'f'), IrrComponent());
  EXPECT_EQ(lc.sl2hat(IrrComponent(), 0, 'f'), C({-1}));
  EXPECT_EQ(lc.sl2hat(C({-1}), 0, 'e'), IrrComponent());
  EXPECT_EQ(lc.sl2hat(IrrComponent(), 1, 'e'), C({0}));
  EXPECT_THROW(lc.sl2hat(C({0}), 2, 'f'), std::invalid_argument);
  EXPECT_THROW(lc.sl2hat(C({0}), 1, 'x'), std::invalid_argument);
}

// Every candidate the pruned e_k search drops is one the full window rejects.
TEST(LoopCrystal, PrunedSearchMatchesFullWindow) {
  CrystalOptions full;
  full.prune = false;
  LoopCrystal wide(full);
  auto& lc = crystal();
  for (auto& z : window(1, -1, 1, -2))
    for (int k : {-1, 0, 1}) EXPECT_EQ(lc.e(z, k), wide.e(z, k)) << z.str() << " k=" << k;
}

TEST(LoopCrystal, PropertiesOnWindow) {
  auto& lc = crystal();
  for (auto& z : window(2, -1, 1, -2))
    for (int k = -2; k <= 1; ++k) {
      SCOPED_TRACE(z.str() + " k=" + std::to_string(k));
      EXPECT_EQ(lc.phi(z, k) - lc.epsilon(z, k), 2 * z.rank());
      auto up = lc.e(z, k);
      EXPECT_EQ(lc.wt(up), lc.wt(z) + root_k(k));
      EXPECT_EQ(lc.epsilon(up, k), lc.epsilon(z, k) - 1);
      EXPECT_EQ(lc.phi(up, k), lc.phi(z, k) + 1);
      EXPECT_EQ(lc.f(up, k), z);
      auto down = lc.f(z, k);
      EXPECT_EQ(down.has_value(), lc.strata(z, k).s > 0);
      if (!down) continue;
      EXPECT_EQ(lc.wt(*down), lc.wt(z) - root_k(k));
      EXPECT_EQ(lc.epsilon(*down, k), lc.epsilon(z, k) + 1);
      EXPECT_EQ(lc.phi(*down, k), lc.phi(z, k) - 1);
      EXPECT_EQ(lc.e(*down, k), z);
    }
}

TEST(LoopCrystal, AffineCrystalAxioms) {
  auto& lc = crystal();
  for (auto& z : window(2, -1, 1, -2))
    for (int i : {0, 1}) {
      SCOPED_TRACE(z.str() + " i=" + std::to_string(i));
      int pairing = (i == 1 ? 2 : -2) * z.rank();
      EXPECT_EQ(lc.sl2hat_phi(z, i) - lc.sl2hat_epsilon(z, i), pairing);
      auto fz = lc.sl2hat(z, i, 'f');
      if (fz) {
        EXPECT_EQ(lc.sl2hat(*fz, i, 'e'), z);
        EXPECT_EQ(lc.sl2hat_epsilon(*fz, i), lc.sl2hat_epsilon(z, i) + 1);
        EXPECT_EQ(lc.sl2hat_phi(*fz, i), lc.sl2hat_phi(z, i) - 1);
      }
      auto ez = lc.sl2hat(z, i, 'e');
      if (ez) {
        EXPECT_EQ(lc.sl2hat(*ez, i, 'f'), z);
        EXPECT_EQ(lc.sl2hat_epsilon(*ez, i), lc.sl2hat_epsilon(z, i) - 1);
      }
    }
}

// f_d(V_{j+1}, lambda - 1) = (V_j, lambda) with d = 2j + 2 - l(lambda).
TEST(LoopCrystal, LadderStep) {
  auto& lc = crystal();
  for (int j : {0, 1})
    for (Partition lam : {Partition{1}, Partition{2}, Partition{1, 1}, Partition{3}, Partition{2, 1}}) {
      int d = 2 * j + 2 - int(lam.size());
      EXPECT_EQ(lc.f(ladder(j + 1, reduce_parts(lam)), d), ladder(j, lam)) << j << " " << partition_str(lam);
    }
}

TEST(Graph, FirstStableFigure) {
  auto& lc = crystal();
  std::vector<KClass> cls{{0, 0}, {1, 0}, {2, 0}, {1, -1}, {2, -1}, {2, -2}};
  auto g = lc.graph(cls, -4, {0, -1}, true);
  std::set<IrrComponent> nodes{IrrComponent(), C({0}), C({0, 0}), C({-1}), C({0, -1}), C({-1, -1})};
  EXPECT_EQ(g.nodes, nodes);
  std::set<CrystalEdge> want{
      {C({0, 0}), C({0}), 0, 'f'},       {C({0}), IrrComponent(), 0, 'f'},  {C({0, -1}), C({-1}), 0, 'f'},
      {C({0, -1}), C({0}), -1, 'f'},     {C({-1}), IrrComponent(), -1, 'f'}, {C({-1, -1}), C({-1}), -1, 'f'},
  };
  EXPECT_EQ(f_edges(g), want);
  for (auto& e : f_edges(g)) EXPECT_TRUE(g.edges.count({e.target, e.source, e.k, 'e'}));
}

// f~1 = f_0 walks n_p -> (n-1)_p and f~0 = e_{-1} walks (n-1)_p -> n_{p-1}.
// A stable bundle carries f = 0, so f_k needs a twist >= k.
TEST(Graph, StableChain) {
  auto& lc = crystal();
  std::vector<KClass> cls;
  for (int r = 0; r <= 2; ++r)
    for (int d = -2; d <= 0; ++d) cls.emplace_back(r, d);
  auto g = lc.graph(cls, -4, {0, -1}, true);
  std::set<CrystalEdge> want;
  for (int n = 1; n <= 2; ++n)
    for (int p = -2; p <= 0; ++p) {
      auto src = *stable(n, p);
      int top = src.twists.front();
      if (auto t = stable(n - 1, p); t && top >= 0) want.insert({src, *t, 0, 'f'});
      if (auto t = stable(n - 1, p + 1); t && p + 1 <= 0 && top >= -1) want.insert({src, *t, -1, 'f'});
    }
  EXPECT_EQ(f_edges(g), want);
  for (int n = 1; n <= 2; ++n)
    for (int p = -1; p <= 0; ++p) {
      auto t = stable(n - 1, p);
      if (!t) continue;
      if (stable(n, p)->twists.front() >= 0) EXPECT_EQ(lc.sl2hat(*stable(n, p), 1, 'f'), *t);
      EXPECT_EQ(lc.sl2hat(*t, 0, 'f'), stable(n, p - 1));
    }
}

TEST(Graph, TrivialClass) {
  auto g = crystal().graph({KClass(0, 0)}, 0, {0, -1, 1}, false);
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
}

// The loop crystal is connected; its affine sl2 part is not.  A node whose
// path to the empty component stays inside the window is reached in the graph.
TEST(Graph, WindowReachesEmpty) {
  auto& lc = crystal();
  std::vector<KClass> cls;
  for (int r = 0; r <= 2; ++r)
    for (int d = -1; d <= 2; ++d) cls.emplace_back(r, d);
  std::vector<int> ks;
  for (int k = -4; k <= 3; ++k) ks.push_back(k);
  auto g = lc.graph(cls, -1, ks, false);
  auto seen = reachable_from_empty(g);
  std::size_t closed = 0;
  for (auto& z : g.nodes) {
    auto path = lc.path_to_empty(z, -40);
    bool inside = std::all_of(path.begin(), path.end(), [&](const PathStep& st) {
      return g.nodes.count(st.to) && std::find(ks.begin(), ks.end(), st.k) != ks.end();
    });
    if (!inside) continue;
    ++closed;
    EXPECT_TRUE(seen.count(z)) << z.str();
  }
  EXPECT_GT(closed * 3, g.nodes.size());
  auto affine = lc.graph(cls, -1, {0, -1}, false);
  EXPECT_LT(reachable_from_empty(affine).size(), affine.nodes.size());
}

TEST(Graph, DotOutput) {
  auto g = crystal().graph({KClass(0, 0), KClass(1, 0)}, 0, {0}, false);
  auto dot = to_dot(g, 42);
  EXPECT_NE(dot.find("// seed 42"), std::string::npos);
  EXPECT_NE(dot.find("\"V=[0];L=[]\" -> \"V=[];L=[]\" [label=\"f:0\"]"), std::string::npos);
  EXPECT_EQ(dot, to_dot(crystal().graph({KClass(0, 0), KClass(1, 0)}, 0, {0}, false), 42));
}

TEST(Path, Examples) {
  auto& lc = crystal();
  auto p = lc.path_to_empty(C({0}), -4);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].k, 0);
  EXPECT_TRUE(p[0].to.is_empty());
  EXPECT_TRUE(lc.path_to_empty(IrrComponent(), -4).empty());
  auto q = lc.path_to_empty(C({}, {1}), -4);
  EXPECT_LE(q.size(), 4u);
  EXPECT_TRUE(q.back().to.is_empty());
  EXPECT_THROW(lc.path_to_empty(C({-3}, {2}), -2), NoPathWithinFloor);
}

// Each step is an f_k edge read forwards ('f') or backwards ('e').
TEST(Path, StepsAreEdges) {
  auto& lc = crystal();
  for (auto& z : window(2, -2, 2, -3)) {
    auto path = lc.path_to_empty(z, -40);
    IrrComponent cur = z;
    for (auto& st : path) {
      if (st.op == 'f')
        EXPECT_EQ(lc.f(cur, st.k), st.to) << z.str();
      else
        EXPECT_EQ(lc.f(st.to, st.k), cur) << z.str();
      cur = st.to;
    }
    EXPECT_TRUE(cur.is_empty()) << z.str();
  }
}
