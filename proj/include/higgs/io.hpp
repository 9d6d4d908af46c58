#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "components.hpp"
#include "drinfeld.hpp"
#include "euler.hpp"
#include "sheaf.hpp"

namespace higgs {

using json = nlohmann::json;

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw std::invalid_argument("rational must be a \"num/den\" string");
  try {
    auto s = j.get<std::string>();
    if (s.empty()) throw std::invalid_argument("empty");
    Rational r(s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational " + j.dump());
  }
}

namespace io_detail {

inline std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<int> out;
  for (auto& v : j) {
    if (!v.is_number_integer()) throw std::invalid_argument(std::string(what) + " must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

inline Partition partition(const json& j, const char* what) {
  auto p = int_list(j, what);
  for (int v : p)
    if (v <= 0) throw std::invalid_argument(std::string(what) + " parts must be positive");
  return normalize_partition(p);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline KClass kclass(const json& j, const char* what) {
  auto v = int_list(j, what);
  if (v.size() != 2) throw std::invalid_argument(std::string(what) + " must be [rank, degree]");
  return KClass(v[0], v[1]);
}

inline json rational_list(const std::vector<Rational>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(rational_to_string(x));
  return a;
}

inline std::vector<Rational> rational_list(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("coefficient list must be an array");
  std::vector<Rational> out;
  for (auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Components and words

inline json to_json(const IrrComponent& z) { return {{"twists", z.twists}, {"lambda", z.lambda}}; }

inline IrrComponent component_from_json(const json& j) {
  return IrrComponent(io_detail::int_list(io_detail::field(j, "twists"), "twists"),
                      io_detail::partition(io_detail::field(j, "lambda"), "lambda"));
}

inline json word_letters(const GeneratorWord& w) {
  json a = json::array();
  for (auto& g : w) a.push_back(g.tor ? json{{"tor", g.value}} : json{{"line", g.value}});
  return a;
}

inline GeneratorWord word_from_letters(const json& a) {
  if (!a.is_array()) throw std::invalid_argument("word must be an array of letters");
  GeneratorWord w;
  for (auto& g : a) {
    if (g.is_object() && g.size() == 1 && g.contains("tor") && g["tor"].is_number_integer())
      w.push_back(Tor(g["tor"].get<int>()));
    else if (g.is_object() && g.size() == 1 && g.contains("line") && g["line"].is_number_integer())
      w.push_back(Line(g["line"].get<int>()));
    else
      throw std::invalid_argument("bad letter " + g.dump());
  }
  return w;
}

inline json word_to_json(const GeneratorWord& w) { return {{"word", word_letters(w)}}; }

inline GeneratorWord word_from_json(const json& j) { return word_from_letters(io_detail::field(j, "word")); }

// {"class":[r,d],"terms":[...]}; every word must have class cls.
inline json combination_to_json(const WordCombination& x, KClass cls) {
  json terms = json::array();
  for (auto& [w, c] : x) {
    if (word_class(w) != cls) throw std::invalid_argument("word " + word_to_string(w) + " is not of class " + cls.str());
    terms.push_back({{"word", word_letters(w)}, {"c", rational_to_string(c)}});
  }
  return {{"class", {cls.rank, cls.degree}}, {"terms", terms}};
}

inline std::pair<KClass, WordCombination> combination_from_json(const json& j) {
  KClass cls = io_detail::kclass(io_detail::field(j, "class"), "class");
  WordCombination x;
  auto& terms = io_detail::field(j, "terms");
  if (!terms.is_array()) throw std::invalid_argument("terms must be an array");
  for (auto& t : terms) {
    auto w = word_from_letters(io_detail::field(t, "word"));
    if (word_class(w) != cls) throw std::invalid_argument("term class differs from " + cls.str());
    add_term(x, w, rational_from_json(io_detail::field(t, "c")));
  }
  return {cls, x};
}

// ---------------------------------------------------------------------------
// Algebra elements

inline json to_json(const AlgebraElement& x) {
  json terms = json::array();
  for (auto& [m, c] : x.terms) terms.push_back({{"e", m.e}, {"h", m.h}, {"c", rational_to_string(c)}});
  return {{"weight", {x.weight.rank, x.weight.degree}}, {"floor", x.floor}, {"terms", terms}};
}

inline AlgebraElement element_from_json(const json& j) {
  AlgebraElement x;
  x.weight = io_detail::kclass(io_detail::field(j, "weight"), "weight");
  auto& fl = io_detail::field(j, "floor");
  if (!fl.is_number_integer()) throw std::invalid_argument("floor must be an integer");
  x.floor = fl.get<int>();
  auto& terms = io_detail::field(j, "terms");
  if (!terms.is_array()) throw std::invalid_argument("terms must be an array");
  for (auto& t : terms) {
    Monomial m{io_detail::int_list(io_detail::field(t, "e"), "e"), io_detail::partition(io_detail::field(t, "h"), "h")};
    m.normalize();
    if (m.weight() != x.weight) throw std::invalid_argument("monomial " + m.str() + " has the wrong weight");
    x.add(m, rational_from_json(io_detail::field(t, "c")));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Sheaves and Higgs fields over Q

inline json to_json(const SheafModel<Rational>& m) {
  json tors = json::array();
  for (auto& t : m.torsion)
    tors.push_back({{"point", {rational_to_string(t.point.a), rational_to_string(t.point.b)}}, {"type", t.type}});
  return {{"twists", m.twists}, {"torsion", tors}};
}

inline SheafModel<Rational> sheaf_model_from_json(const json& j) {
  RationalField qq;
  SheafModel<Rational> m;
  m.twists = io_detail::int_list(io_detail::field(j, "twists"), "twists");
  auto& tors = io_detail::field(j, "torsion");
  if (!tors.is_array()) throw std::invalid_argument("torsion must be an array");
  for (auto& t : tors) {
    auto pt = io_detail::rational_list(io_detail::field(t, "point"));
    if (pt.size() != 2) throw std::invalid_argument("point must be [a, b]");
    auto type = io_detail::int_list(io_detail::field(t, "type"), "type");
    m.torsion.push_back({make_point(qq, pt[0], pt[1]), type});
  }
  m.validate();
  return m;
}

inline json to_json(const Morphism<Rational>& f) {
  json ll = json::array(), lt = json::array(), tt = json::array();
  for (auto& row : f.ll) {
    json r = json::array();
    for (auto& form : row) r.push_back(io_detail::rational_list(form));
    ll.push_back(r);
  }
  for (auto& row : f.lt) {
    json r = json::array();
    for (auto& v : row) r.push_back(io_detail::rational_list(v));
    lt.push_back(r);
  }
  for (auto& m : f.tt) {
    json r = json::array();
    for (auto& row : m) r.push_back(io_detail::rational_list(row));
    tt.push_back(r);
  }
  return {{"shift", f.shift}, {"block_vv", ll}, {"block_vt", lt}, {"block_tt", tt}};
}

// Shapes are checked against the morphism a -> b(shift).
inline Morphism<Rational> morphism_from_json(const json& j, const Sheaf<Rational>& a, const Sheaf<Rational>& b) {
  RationalField qq;
  auto& sh = io_detail::field(j, "shift");
  if (!sh.is_number_integer()) throw std::invalid_argument("shift must be an integer");
  auto f = zero_morphism(qq, a, b, sh.get<int>());
  auto nested = [](const json& x, std::size_t n, const char* what) -> const json& {
    if (!x.is_array() || x.size() != n) throw std::invalid_argument(std::string(what) + " has the wrong shape");
    return x;
  };
  auto fill = [&](std::vector<Rational>& dst, const json& src, const char* what) {
    auto v = io_detail::rational_list(nested(src, dst.size(), what));
    dst = std::move(v);
  };
  auto& ll = nested(io_detail::field(j, "block_vv"), f.ll.size(), "block_vv");
  for (std::size_t r = 0; r < f.ll.size(); ++r)
    for (std::size_t c = 0; c < f.ll[r].size(); ++c) fill(f.ll[r][c], nested(ll[r], f.ll[r].size(), "block_vv")[c], "block_vv");
  auto& lt = nested(io_detail::field(j, "block_vt"), f.lt.size(), "block_vt");
  for (std::size_t p = 0; p < f.lt.size(); ++p)
    for (std::size_t c = 0; c < f.lt[p].size(); ++c) fill(f.lt[p][c], nested(lt[p], f.lt[p].size(), "block_vt")[c], "block_vt");
  auto& tt = nested(io_detail::field(j, "block_tt"), f.tt.size(), "block_tt");
  for (std::size_t p = 0; p < f.tt.size(); ++p)
    for (std::size_t r = 0; r < f.tt[p].size(); ++r) fill(f.tt[p][r], nested(tt[p], f.tt[p].size(), "block_tt")[r], "block_tt");
  return f;
}

}  // namespace higgs
