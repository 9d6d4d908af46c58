#include <gtest/gtest.h>

#include "higgs/semicanonical.hpp"

using namespace higgs;

namespace {

IrrComponent C(std::vector<int> t, Partition l = {}) { return IrrComponent(std::move(t), std::move(l)); }

WordCombination single(const GeneratorWord& w, Rational c = 1) {
  WordCombination x;
  add_term(x, w, c);
  return x;
}

ChiOptions fresh_seed(std::uint64_t s) {
  ChiOptions o;
  o.seed = s;
  return o;
}

void expect_kronecker(const std::map<IrrComponent, WordCombination>& basis, std::uint64_t seed) {
  GenericValues check(fresh_seed(seed));
  for (auto& [z, f] : basis)
    for (auto& [w, _] : basis) EXPECT_EQ(check.rho(w, f), Rational(z == w ? 1 : 0)) << z.str() << " on " << w.str();
}

}  // namespace

TEST(Rho, TorsionValues) {
  GenericValues g;
  EXPECT_EQ(g.rho(C({}, {2}), single({Tor(1), Tor(1)})), Rational(1));
  EXPECT_EQ(g.rho(C({}, {1, 1}), single({Tor(1), Tor(1)})), Rational(2));
  EXPECT_EQ(g.rho(C({}, {1, 1}), single({Tor(2)})), Rational(1));
  EXPECT_EQ(g.rho(C({}, {2}), single({Tor(2)})), Rational(0));
  EXPECT_EQ(rho(C({}, {1, 1}), single({Tor(1), Tor(1)}, Rational(1) / 2)), Rational(1));
}

TEST(Rho, Linearity) {
  GenericValues g;
  WordCombination x;
  add_term(x, {Tor(1), Tor(1)}, 3);
  add_term(x, {Tor(2)}, -5);
  auto z = C({}, {1, 1});
  EXPECT_EQ(g.rho(z, x), 3 * g.rho(z, single({Tor(1), Tor(1)})) - 5 * g.rho(z, single({Tor(2)})));
  EXPECT_EQ(g.rho(z, WordCombination{}), Rational(0));
}

TEST(Rho, ClassMismatch) {
  EXPECT_THROW(rho(C({}, {2}), single({Tor(1)})), std::invalid_argument);
}

TEST(SemicanTorsion, SmallDegrees) {
  auto b1 = semican_torsion(1);
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1.at({1}), single({Tor(1)}));

  auto b2 = semican_torsion(2);
  EXPECT_EQ(b2.at({1, 1}), single({Tor(2)}));
  WordCombination f2;
  add_term(f2, {Tor(1), Tor(1)}, 1);
  add_term(f2, {Tor(2)}, -2);
  EXPECT_EQ(b2.at({2}), f2);
  EXPECT_EQ(semican_torsion(3).size(), 3u);
}

TEST(SemicanTorsion, KroneckerUnderFreshSeeds) {
  for (int d = 1; d <= 4; ++d) {
    auto b = semican_torsion(d);
    EXPECT_EQ(b.size(), std::size_t(partition_count(d)));
    for (std::uint64_t seed : {11u, 202u}) {
      GenericValues check(fresh_seed(seed));
      for (auto& [lam, f] : b)
        for (auto& [mu, _] : b)
          EXPECT_EQ(check.rho(C({}, mu), f), Rational(lam == mu ? 1 : 0)) << d << " " << partition_str(lam) << " on "
                                                                          << partition_str(mu);
    }
  }
}

// f_lambda = 1_{lambda'} + lower terms 1_{mu'} with mu below lambda in
// dominance, so the change of basis is unitriangular.
TEST(SemicanTorsion, UnitriangularAgainstProducts) {
  for (int d = 1; d <= 4; ++d) {
    auto b = semican_torsion(d);
    auto parts = partitions_of(d);
    std::map<GeneratorWord, std::size_t> col;
    for (std::size_t i = 0; i < parts.size(); ++i) col[leading_word(C({}, parts[i]))] = i;
    RationalField k;
    Matrix<Rational> m = zero_matrix(k, parts.size(), parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto& f = b.at(parts[i]);
      for (auto& [w, c] : f) {
        ASSERT_TRUE(col.count(w)) << word_to_string(w);
        std::size_t j = col[w];
        m[i][j] = c;
        if (i != j) EXPECT_TRUE(dominates(parts[i], parts[j])) << partition_str(parts[i]) << " " << partition_str(parts[j]);
      }
      EXPECT_EQ(m[i][i], Rational(1));
    }
    auto det = determinant(k, m);
    EXPECT_TRUE(det == 1 || det == -1) << det.get_str();
  }
}

TEST(SemicanTorsion, Budget) {
  EXPECT_THROW(semican_torsion(5), BudgetExceeded);
  EXPECT_THROW(semican_torsion(0), std::invalid_argument);
}

TEST(SemicanElement, TopLineNeedsNoCorrection) {
  for (int n : {-1, 0, 1}) EXPECT_EQ(semican_element(C({n}), n), single({Line(n)}));
  EXPECT_EQ(semican_element(C({0}), -2), single({Line(0)}));
  EXPECT_EQ(semican_element(C({1}), -1), single({Line(1)}));
}

TEST(SemicanElement, TorsionClassAgreesWithInduction) {
  SemicanOptions wide;
  wide.degree_cap = 3;
  for (int d = 1; d <= 3; ++d)
    for (auto& [lam, f] : semican_torsion(d)) EXPECT_EQ(semican_element(C({}, lam), 0, wide), f) << partition_str(lam);
}

TEST(SemicanElement, MixedKronecker) {
  auto f = semican_element(C({-1}, {1}), -1);
  GenericValues check(fresh_seed(77));
  EXPECT_EQ(check.rho(C({-1}, {1}), f), Rational(1));
  EXPECT_EQ(check.rho(C({0}), f), Rational(0));

  for (auto [cls, floor] : std::vector<std::pair<KClass, int>>{{{1, 0}, -2}, {{1, 1}, -1}, {{2, 0}, -1}, {{2, 2}, 0}}) {
    GenericValues g;
    expect_kronecker(semican_window(cls, floor, g), 31);
  }
}

// Each element is its own leading word (an ordered basis word) over its pivot
// plus leading words of earlier labels.
TEST(SemicanElement, TriangularInOrderedBasis) {
  for (auto [cls, floor] : std::vector<std::pair<KClass, int>>{{{1, 0}, -2}, {{2, 0}, -1}, {{2, 2}, 0}}) {
    GenericValues g;
    auto basis = semican_window(cls, floor, g);
    auto words = ordered_basis(cls, floor);
    std::set<GeneratorWord> ob(words.begin(), words.end());
    std::map<GeneratorWord, IrrComponent> owner;
    for (auto& [z, _] : basis) {
      EXPECT_TRUE(ob.count(leading_word(z))) << z.str();
      owner.emplace(leading_word(z), z);
    }
    for (auto& [z, f] : basis) {
      auto diag = f.find(leading_word(z));
      ASSERT_NE(diag, f.end()) << z.str();
      EXPECT_EQ(diag->second, 1 / g.word(z, leading_word(z))) << z.str();
      for (auto& [w, c] : f) EXPECT_LE(owner.at(w), z) << z.str() << " uses " << word_to_string(w);
    }
  }
}

// Lowering the floor by one leaves the values on the components alive at the
// higher floor unchanged.
TEST(SemicanElement, WindowCompatibility) {
  for (auto [cls, floor] : std::vector<std::pair<KClass, int>>{{{1, 0}, -1}, {{1, 1}, 0}, {{2, 0}, 0}}) {
    GenericValues g;
    auto hi = semican_window(cls, floor, g);
    auto lo = semican_window(cls, floor - 1, g);
    GenericValues check(fresh_seed(5));
    for (auto& [z, f] : hi)
      for (auto& [w, _] : hi) EXPECT_EQ(check.rho(w, lo.at(z)), check.rho(w, f)) << z.str() << " on " << w.str();
  }
}

TEST(SemicanElement, Preconditions) {
  EXPECT_THROW(semican_element(C({0, 0, 0}), 0), std::invalid_argument);
  EXPECT_THROW(semican_element(C({3}), 0), std::invalid_argument);
  EXPECT_THROW(semican_element(C({-2}), -1), std::invalid_argument);
  EXPECT_THROW(semican_element(C({2}), -3), WindowTooSmall);
}
