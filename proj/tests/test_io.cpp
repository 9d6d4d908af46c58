#include <gtest/gtest.h>

#include "higgs/io.hpp"
#include "higgs/semicanonical.hpp"

using namespace higgs;

namespace {

RationalField QQ;

}  // namespace

TEST(Json, ComponentFormat) {
  IrrComponent z({0, 2}, {1});
  EXPECT_EQ(to_json(z).dump(), R"({"lambda":[1],"twists":[2,0]})");
  EXPECT_EQ(component_from_json(json::parse(R"({"twists":[2,0],"lambda":[1]})")), z);
  EXPECT_THROW(component_from_json(json::parse(R"({"twists":[2,0]})")), std::invalid_argument);
  EXPECT_THROW(component_from_json(json::parse(R"({"twists":[2],"lambda":[0]})")), std::invalid_argument);
  EXPECT_THROW(component_from_json(json::parse(R"({"twists":["a"],"lambda":[]})")), std::invalid_argument);
}

TEST(Json, ComponentRoundTrip) {
  for (int r = 0; r <= 2; ++r)
    for (int d = -2; d <= 3; ++d)
      for (auto& z : enumerate_components(KClass(r, d), -2))
        EXPECT_EQ(component_from_json(json::parse(to_json(z).dump())), z) << z.str();
}

TEST(Json, WordFormat) {
  GeneratorWord w{Tor(2), Line(-1)};
  EXPECT_EQ(word_to_json(w).dump(), R"({"word":[{"tor":2},{"line":-1}]})");
  EXPECT_EQ(word_from_json(json::parse(R"({"word":[{"tor":2},{"line":-1}]})")), w);
  EXPECT_EQ(word_from_json(json::parse(R"({"word":[]})")), GeneratorWord{});
  EXPECT_THROW(word_from_json(json::parse(R"({"word":[{"tor":0}]})")), std::invalid_argument);
  EXPECT_THROW(word_from_json(json::parse(R"({"word":[{"line":1,"tor":1}]})")), std::invalid_argument);
}

TEST(Json, CombinationRoundTrip) {
  WordCombination x;
  add_term(x, {Tor(1), Tor(1)}, 1);
  add_term(x, {Tor(2)}, -2);
  auto j = combination_to_json(x, KClass(0, 2));
  EXPECT_EQ(j["class"], json({0, 2}));
  EXPECT_EQ(j["terms"][1]["c"], "-2");
  auto [cls, y] = combination_from_json(json::parse(j.dump()));
  EXPECT_EQ(cls, KClass(0, 2));
  EXPECT_EQ(y, x);

  auto [c0, z0] = combination_from_json(combination_to_json({}, KClass(1, -3)));
  EXPECT_EQ(c0, KClass(1, -3));
  EXPECT_TRUE(z0.empty());

  EXPECT_THROW(combination_to_json(x, KClass(0, 3)), std::invalid_argument);
  EXPECT_THROW(combination_from_json(json::parse(R"({"class":[0,1],"terms":[{"word":[{"tor":2}],"c":"1"}]})")),
               std::invalid_argument);

  for (int d = 1; d <= 3; ++d)
    for (auto& [lam, f] : semican_torsion(d))
      EXPECT_EQ(combination_from_json(json::parse(combination_to_json(f, KClass(0, d)).dump())).second, f);
}

TEST(Json, Rationals) {
  EXPECT_EQ(rational_from_json("3/2"), Rational(3) / 2);
  EXPECT_EQ(rational_from_json("-4/6"), Rational(-2) / 3);
  EXPECT_EQ(rational_from_json(5), Rational(5));
  EXPECT_THROW(rational_from_json("1/0"), std::invalid_argument);
  EXPECT_THROW(rational_from_json("x"), std::invalid_argument);
  EXPECT_THROW(rational_from_json(""), std::invalid_argument);
  EXPECT_THROW(rational_from_json(1.5), std::invalid_argument);
}

TEST(Json, AlgebraElementRoundTrip) {
  auto x = psi_word(parse_word("L1 L0"), -2);
  auto j = to_json(x);
  EXPECT_EQ(j["weight"], json({2, 1}));
  EXPECT_EQ(j["floor"], -2);
  EXPECT_EQ(element_from_json(json::parse(j.dump())), x);

  auto y = element_from_json(json::parse(R"({"weight":[2,-1],"floor":-4,"terms":[{"e":[0,-1],"h":[],"c":"3/2"}]})"));
  EXPECT_EQ(y.terms.size(), 1u);
  EXPECT_EQ(y.terms.begin()->second, Rational(3) / 2);
  EXPECT_EQ(element_from_json(to_json(y)), y);
  EXPECT_THROW(element_from_json(json::parse(R"({"weight":[2,0],"floor":-4,"terms":[{"e":[0,-1],"h":[],"c":"1"}]})")),
               std::invalid_argument);
}

TEST(Json, SheafAndFieldRoundTrip) {
  Rng rng(9);
  std::vector<std::pair<std::vector<int>, Partition>> comps = {{{2, 0}, {1}}, {{1}, {2, 1}}, {{}, {3}}, {{3, -1}, {}}};
  for (auto& [tw, lam] : comps) {
    auto p = sample_generic_pair(QQ, tw, lam, rng);
    auto m = sheaf_model_from_json(json::parse(to_json(p.model).dump()));
    EXPECT_EQ(m.twists, p.model.twists);
    ASSERT_EQ(m.torsion.size(), p.model.torsion.size());
    for (std::size_t i = 0; i < m.torsion.size(); ++i) {
      EXPECT_EQ(m.torsion[i].point, p.model.torsion[i].point);
      EXPECT_EQ(m.torsion[i].type, p.model.torsion[i].type);
    }
    auto h = morphism_from_json(json::parse(to_json(p.field).dump()), p.sheaf, p.sheaf);
    EXPECT_EQ(flatten(h), flatten(p.field));
    EXPECT_EQ(h.shift, -2);
  }
  auto f = to_sheaf(QQ, sheaf_model_from_json(json::parse(R"({"twists":[1],"torsion":[{"point":["1","0"],"type":[1]}]})")));
  EXPECT_TRUE(f.local[0].point.at_infinity());
  EXPECT_THROW(
      sheaf_model_from_json(json::parse(R"({"twists":[0,1],"torsion":[]})")), std::invalid_argument);
  auto bad = to_json(zero_higgs(QQ, f));
  bad["block_vt"] = json::array();
  EXPECT_THROW(morphism_from_json(bad, f, f), std::invalid_argument);
}
