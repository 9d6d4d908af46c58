#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../tests/acceptance_suite.hpp"
#include "higgs/io.hpp"

using namespace higgs;

namespace {

struct RunConfig {
  std::uint64_t seed = 1;
  std::vector<std::uint32_t> primes{3, 5, 7, 11, 13};
  int trials = 5;
  int floor = -4;
  int depth_margin = 3;
  int search_radius = 3;
  std::string format;  // empty: the command's own default
  std::string out;

  ChiOptions chi() const {
    ChiOptions o;
    o.primes = primes;
    o.trials = trials;
    o.seed = seed;
    return o;
  }
  CrystalOptions crystal() const {
    CrystalOptions o;
    o.sample.trials = trials;
    o.sample.seed = seed;
    o.search_radius = search_radius;
    return o;
  }
  AlgebraOptions algebra() const {
    AlgebraOptions o;
    o.depth_margin = depth_margin;
    return o;
  }
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::invalid_argument("cannot write " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json with_seed(const RunConfig& cfg, json body) {
  body["seed"] = cfg.seed;
  return body;
}

// ---------------------------------------------------------------------------

void components_list(const RunConfig& cfg, const std::vector<int>& cls) {
  auto comps = enumerate_components(KClass(cls.at(0), cls.at(1)), cfg.floor);
  if (cfg.format == "json") {
    json rows = json::array();
    for (auto& z : comps) rows.push_back(to_json(z));
    emit(cfg, dump(with_seed(cfg, {{"class", cls}, {"floor", cfg.floor}, {"components", rows}})));
    return;
  }
  std::string s = "# seed " + std::to_string(cfg.seed) + "\n";
  for (auto& z : comps) s += z.str() + "\n";
  emit(cfg, s);
}

void components_strata(const RunConfig& cfg, const std::string& comp, int k) {
  auto z = parse_component(comp);
  auto st = strata_invariants(z, k, cfg.crystal().sample);
  emit(cfg, dump(with_seed(cfg, {{"component", to_json(z)}, {"k", k}, {"n", st.n}, {"s", st.s},
                                 {"stable", is_stable(z)}})));
}

void crystal_graph(const RunConfig& cfg, int rank_max, int deg_min, int deg_max, const std::vector<int>& ops,
                   bool stable) {
  if (deg_min > deg_max) throw std::invalid_argument("--deg-min exceeds --deg-max");
  LoopCrystal lc(cfg.crystal());
  std::vector<KClass> cls;
  for (int r = 0; r <= rank_max; ++r)
    for (int d = deg_min; d <= deg_max; ++d) cls.emplace_back(r, d);
  auto g = lc.graph(cls, cfg.floor, ops, stable);
  auto reach = reachable_from_empty(g);
  emit(cfg, to_dot(g, cfg.seed));
  std::cerr << "nodes " << g.nodes.size() << ", edges " << g.edges.size() / 2 << ", reachable from empty "
            << reach.size() << "\n";
}

void crystal_apply(const RunConfig& cfg, const std::string& comp, const std::string& op) {
  auto z = parse_component(comp);
  auto colon = op.find(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("--op must read f:K or e:K");
  std::string kind = op.substr(0, colon);
  int k = 0;
  try {
    k = std::stoi(op.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad operator index in " + op);
  }
  LoopCrystal lc(cfg.crystal());
  json res;
  if (kind == "f") {
    auto t = lc.f(z, k);
    res = t ? to_json(*t) : json(nullptr);
  } else if (kind == "e") {
    res = to_json(lc.e(z, k));
  } else {
    throw std::invalid_argument("operator must be e or f");
  }
  emit(cfg, dump(with_seed(cfg, {{"component", to_json(z)}, {"op", op}, {"result", res},
                                 {"epsilon", lc.epsilon(z, k)}, {"phi", lc.phi(z, k)}})));
}

void crystal_path(const RunConfig& cfg, const std::string& comp, int path_floor) {
  auto z = parse_component(comp);
  LoopCrystal lc(cfg.crystal());
  json steps = json::array();
  for (auto& s : lc.path_to_empty(z, path_floor))
    steps.push_back({{"op", std::string(1, s.op) + ":" + std::to_string(s.k)}, {"to", to_json(s.to)}});
  emit(cfg, dump(with_seed(cfg, {{"component", to_json(z)}, {"steps", steps}})));
}

void algebra_verify(const RunConfig& cfg, int relation, const RelationParams& p, int floor) {
  bool ok = verify_relation(relation, p, floor, cfg.algebra());
  emit(cfg, std::string(ok ? "OK" : "FAIL") + " relation " + std::to_string(relation) + " seed " +
                std::to_string(cfg.seed) + "\n");
  if (!ok) throw Failure("relation " + std::to_string(relation) + " does not hold");
}

void algebra_coords(const RunConfig& cfg, const std::string& word, int floor) {
  auto w = parse_word(word);
  auto opt = cfg.algebra();
  auto coords = to_ordered_coords(w, floor, opt);
  auto cls = word_class(w);
  auto comb = coords_to_combination(coords, cls, floor);
  emit(cfg, dump(with_seed(cfg, {{"word", word_letters(w)},
                                 {"floor", floor},
                                 {"coords", combination_to_json(comb, cls)},
                                 {"image", to_json(psi_word(w, floor, opt))}})));
}

void semican_torsion_cmd(const RunConfig& cfg, int d) {
  GenericValues g(cfg.chi());
  json basis = json::array();
  for (auto& [lam, f] : semican_torsion(d, g))
    basis.push_back({{"component", to_json(IrrComponent({}, lam))}, {"element", combination_to_json(f, KClass(0, d))}});
  emit(cfg, dump(with_seed(cfg, {{"d", d}, {"basis", basis}})));
}

void semican_element_cmd(const RunConfig& cfg, const std::string& comp, int floor) {
  auto z = parse_component(comp);
  GenericValues g(cfg.chi());
  SemicanOptions opt;
  opt.chi = cfg.chi();
  auto f = semican_element(z, floor, g, opt);
  emit(cfg, dump(with_seed(cfg, {{"component", to_json(z)}, {"floor", floor}, {"element", combination_to_json(f, z.cls())}})));
}

void evaluate_cmd(const RunConfig& cfg, const std::string& comp, const std::string& word) {
  auto z = parse_component(comp);
  auto w = parse_word(word);
  if (word_class(w) != z.cls()) throw std::invalid_argument("word class " + word_class(w).str() + " differs from " + z.cls().str());
  auto series = chi_word_series(w, z.twists, z.lambda, cfg.chi());
  if (cfg.format == "csv") {
    emit(cfg, "# seed " + std::to_string(cfg.seed) + "\n" + series.csv());
    return;
  }
  json counts = json::array();
  for (auto& [q, c] : series.counts) counts.push_back({q, c.get_str()});
  emit(cfg, dump(with_seed(cfg, {{"component", to_json(z)},
                                 {"word", word_letters(w)},
                                 {"value", rational_to_string(series.at_one)},
                                 {"counts", counts}})));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* s = std::getenv("HIGGS_SEED")) {
    try {
      cfg.seed = std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "HIGGS_SEED is not an integer\n";
      return 1;
    }
  }

  CLI::App app{"Nilpotent Higgs sheaves on P1: components, loop crystal, Drinfeld images, semicanonical elements"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "random seed (default: HIGGS_SEED or 1)");
  app.add_option("--primes", cfg.primes, "field sizes for q-interpolation")->delimiter(',');
  app.add_option("--trials", cfg.trials, "samples per majority vote")->check(CLI::PositiveNumber);
  app.add_option("--floor", cfg.floor, "lowest twist / e-index in the window");
  app.add_option("--margin", cfg.depth_margin, "extra expansion depth for truncated products")->check(CLI::NonNegativeNumber);
  app.add_option("--radius", cfg.search_radius, "search radius for e_k")->check(CLI::NonNegativeNumber);
  app.add_option("--format", cfg.format, "json, dot, csv or text")->check(CLI::IsMember({"json", "dot", "csv", "text"}));
  app.add_option("--out", cfg.out, "output file (default: stdout)");

  std::function<void()> action;

  auto* comp = app.add_subcommand("components", "enumerate irreducible components");
  comp->require_subcommand(1);
  std::vector<int> cls;
  auto* list = comp->add_subcommand("list", "components of a class above the floor");
  list->add_option("--class", cls, "rank,degree")->required()->delimiter(',')->expected(2);
  list->callback([&] { action = [&] { components_list(cfg, cls); }; });
  std::string component;
  int k = 0;
  auto* strata = comp->add_subcommand("strata", "generic (n, s) of Hom(O(k), Ker f)");
  strata->add_option("--component", component, "label V=[..];L=[..]")->required();
  strata->add_option("--k", k)->required();
  strata->callback([&] { action = [&] { components_strata(cfg, component, k); }; });

  auto* crystal = app.add_subcommand("crystal", "loop crystal operators");
  crystal->require_subcommand(1);
  int rank_max = 1, deg_min = 0, deg_max = 0;
  std::vector<int> ops{0, -1};
  bool stable = false;
  auto* graph = crystal->add_subcommand("graph", "DOT graph of f_k edges on a window");
  graph->add_option("--rank-max", rank_max)->check(CLI::NonNegativeNumber);
  graph->add_option("--deg-min", deg_min);
  graph->add_option("--deg-max", deg_max);
  graph->add_option("--ops", ops, "k values")->delimiter(',');
  graph->add_flag("--stable", stable, "stable components only");
  graph->callback([&] { action = [&] { crystal_graph(cfg, rank_max, deg_min, deg_max, ops, stable); }; });
  std::string op;
  auto* apply = crystal->add_subcommand("apply", "apply e_k or f_k");
  apply->add_option("--component", component)->required();
  apply->add_option("--op", op, "f:K or e:K")->required();
  apply->callback([&] { action = [&] { crystal_apply(cfg, component, op); }; });
  int path_floor = -80;
  auto* path = crystal->add_subcommand("path", "walk to the empty component");
  path->add_option("--component", component)->required();
  path->add_option("--path-floor", path_floor, "lowest k a step may use");
  path->callback([&] { action = [&] { crystal_path(cfg, component, path_floor); }; });

  auto* algebra = app.add_subcommand("algebra", "images in the loop algebra");
  algebra->require_subcommand(1);
  int relation = 1, alg_floor = -8;
  RelationParams rp;
  auto* verify = algebra->add_subcommand("verify", "check a defining relation");
  verify->add_option("--relation", relation)->required()->check(CLI::Range(1, 3));
  verify->add_option("--d", rp.d)->check(CLI::PositiveNumber);
  verify->add_option("--d2", rp.d2)->check(CLI::PositiveNumber);
  verify->add_option("--n", rp.n);
  verify->add_option("--l", rp.l);
  verify->add_option("--floor", alg_floor);
  verify->callback([&] { action = [&] { algebra_verify(cfg, relation, rp, alg_floor); }; });
  std::string word;
  auto* coords = algebra->add_subcommand("coords", "coordinates of a word in the ordered basis");
  coords->add_option("--word", word, "e.g. 'L1 L0 T2'")->required();
  coords->add_option("--floor", alg_floor);
  coords->callback([&] { action = [&] { algebra_coords(cfg, word, alg_floor); }; });

  auto* semican = app.add_subcommand("semican", "semicanonical elements");
  semican->require_subcommand(1);
  int d = 1, sc_floor = 0;
  auto* tors = semican->add_subcommand("torsion", "basis f_lambda for all lambda |- d");
  tors->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  tors->callback([&] { action = [&] { semican_torsion_cmd(cfg, d); }; });
  auto* elem = semican->add_subcommand("element", "f_Z in its floor window");
  elem->add_option("--component", component)->required();
  elem->add_option("--floor", sc_floor)->required();
  elem->callback([&] { action = [&] { semican_element_cmd(cfg, component, sc_floor); }; });

  auto* evaluate = app.add_subcommand("evaluate", "generic value of a word on a component");
  evaluate->add_option("--component", component)->required();
  evaluate->add_option("--word", word)->required();
  evaluate->callback([&] { action = [&] { evaluate_cmd(cfg, component, word); }; });

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->callback([&] {
    action = [&] {
      acceptance::Config ac;
      ac.seed = cfg.seed;
      ac.trials = cfg.trials;
      std::ostringstream os;
      int failed = acceptance::run_all(ac, os);
      emit(cfg, os.str());
      if (failed) throw Failure(std::to_string(failed) + " criteria failed");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    action();
  } catch (const Failure& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const ComputationError& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
