#include "maxlip/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "maxlip/error.hpp"
#include "maxlip/grid_io.hpp"

namespace maxlip {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

double required_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return number(j.at(key), where + "." + key);
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

const std::set<std::string> kFunctionKinds{"const", "affine", "power", "step", "sine", "random", "csv"};
const std::set<std::string> kExponentKinds{"const", "affine", "step", "csv"};

FunctionSpec parse_function(const json& j, const std::string& where, const std::set<std::string>& kinds) {
  std::set<std::string> allowed = kinds;
  allowed.insert("name");
  require_keys(j, allowed, where);
  std::string kind;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (!kind.empty()) throw ConfigError(where + ": more than one formula (\"" + kind + "\", \"" + key + "\")");
    kind = key;
  }
  if (kind.empty()) throw ConfigError(where + ": no formula given");
  const json& body = j.at(kind);
  const std::string at = where + "." + kind;
  FunctionSpec spec;
  if (kind == "const") {
    spec.formula = formula::Const{number(body, at)};
  } else if (kind == "affine") {
    require_keys(body, {"a", "b"}, at);
    spec.formula = formula::Affine{number_or(body, "a", 0.0, at), number_or(body, "b", 0.0, at)};
  } else if (kind == "power") {
    require_keys(body, {"center", "gamma"}, at);
    formula::Power p{{}, required_number(body, "gamma", at)};
    if (body.contains("center")) {
      const json& c = body.at("center");
      if (c.is_array()) {
        for (std::size_t i = 0; i < c.size(); ++i) p.center.push_back(number(c[i], at + ".center"));
      } else {
        p.center.push_back(number(c, at + ".center"));
      }
    }
    spec.formula = p;
  } else if (kind == "step") {
    require_keys(body, {"left", "right", "split"}, at);
    spec.formula = formula::Step{required_number(body, "left", at), required_number(body, "right", at),
                                 number_or(body, "split", 0.5, at)};
  } else if (kind == "sine") {
    require_keys(body, {"amplitude", "frequency", "offset"}, at);
    spec.formula = formula::Sine{number_or(body, "amplitude", 1.0, at), number_or(body, "frequency", 1.0, at),
                                 number_or(body, "offset", 0.0, at)};
  } else if (kind == "random") {
    require_keys(body, {"seed", "low", "high"}, at);
    if (!body.contains("seed")) throw ConfigError(at + ": random functions need an explicit \"seed\"");
    if (!body.at("seed").is_number_unsigned()) throw ConfigError(at + ".seed: expected a non-negative integer");
    formula::Random r{body.at("seed").get<std::uint64_t>(), number_or(body, "low", -1.0, at),
                      number_or(body, "high", 1.0, at)};
    if (!(r.low < r.high)) throw ConfigError(at + ": need low < high");
    spec.formula = r;
  } else {
    spec.formula = formula::Csv{string(body, at)};
  }
  spec.name = j.contains("name") ? string(j.at("name"), where + ".name") : kind;
  return spec;
}

std::vector<FunctionSpec> parse_list(const json& j, const std::string& where, const std::set<std::string>& kinds) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list");
  std::vector<FunctionSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_function(j[i], where + "[" + std::to_string(i) + "]", kinds));
  return out;
}

FamilyChoice parse_family(const json& j) {
  const std::string s = string(j, "cube_family");
  if (s == "full") return FamilyChoice::Full;
  if (s == "dyadic") return FamilyChoice::Dyadic;
  if (s == "auto") return FamilyChoice::Auto;
  throw ConfigError("cube_family: expected \"full\", \"dyadic\" or \"auto\", got \"" + s + "\"");
}

const char* family_name(FamilyChoice c) {
  switch (c) {
    case FamilyChoice::Full:
      return "full";
    case FamilyChoice::Dyadic:
      return "dyadic";
    default:
      return "auto";
  }
}

std::vector<FunctionSpec> default_exponents() {
  return {{"q=2", formula::Const{2.0}},
          {"q=4", formula::Const{4.0}},
          {"step(2,4)", formula::Step{2.0, 4.0, 0.5}},
          {"affine(2+x)", formula::Affine{2.0, 1.0}}};
}

std::vector<FunctionSpec> default_pair_exponents() {
  return {{"p=1.5", formula::Const{1.5}}, {"affine(1.2+0.5x)", formula::Affine{1.2, 0.5}}};
}

std::vector<FunctionSpec> default_symbols(int dim, double beta) {
  const std::vector<double> origin(std::size_t(dim), 0.0), middle(std::size_t(dim), 0.5);
  return {{"x", formula::Affine{0.0, 1.0}},
          {"|x|^beta", formula::Power{origin, beta}},
          {"|x-1/2|^beta", formula::Power{middle, beta}},
          {"sine", formula::Sine{}},
          {"random(1)", formula::Random{1, -1.0, 1.0}}};
}

std::vector<FunctionSpec> default_functions() {
  return {{"random(11)", formula::Random{11, -1.0, 1.0}},
          {"random(12)", formula::Random{12, 0.0, 1.0}},
          {"random(13)", formula::Random{13, -2.0, 2.0}},
          {"step(1,-1)", formula::Step{1.0, -1.0, 0.5}}};
}

json function_json(const FunctionSpec& s) {
  json body = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, formula::Const>) return {{"const", f.value}};
        if constexpr (std::is_same_v<T, formula::Affine>) return {{"affine", {{"a", f.a}, {"b", f.b}}}};
        if constexpr (std::is_same_v<T, formula::Power>) return {{"power", {{"center", f.center}, {"gamma", f.gamma}}}};
        if constexpr (std::is_same_v<T, formula::Step>)
          return {{"step", {{"left", f.left}, {"right", f.right}, {"split", f.split}}}};
        if constexpr (std::is_same_v<T, formula::Sine>)
          return {{"sine", {{"amplitude", f.amplitude}, {"frequency", f.frequency}, {"offset", f.offset}}}};
        if constexpr (std::is_same_v<T, formula::Random>)
          return {{"random", {{"seed", f.seed}, {"low", f.low}, {"high", f.high}}}};
        if constexpr (std::is_same_v<T, formula::Csv>) return {{"csv", f.path}};
      },
      s.formula);
  body["name"] = s.name;
  return body;
}

json list_json(const std::vector<FunctionSpec>& list) {
  json out = json::array();
  for (const auto& s : list) out.push_back(function_json(s));
  return out;
}

std::filesystem::path csv_path(const ScenarioConfig& cfg, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || cfg.base_dir.empty() ? path : cfg.base_dir / path;
}

}  // namespace

GridFunction realize(const FunctionSpec& spec, const Grid& g) {
  return std::visit(
      [&](const auto& f) -> GridFunction {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, formula::Const>) {
          return GridFunction::constant(g, f.value);
        } else if constexpr (std::is_same_v<T, formula::Affine>) {
          return sample(g, [&](const Point& x) { return f.a + f.b * x[0]; });
        } else if constexpr (std::is_same_v<T, formula::Power>) {
          Point c = Point::Zero();
          for (int a = 0; a < g.dim(); ++a)
            c[a] = f.center.empty() ? 0.0 : f.center.size() == 1 ? f.center[0] : f.center.at(std::size_t(a));
          return sample(g, [&](const Point& x) { return std::pow((x - c).head(g.dim()).norm(), f.gamma); });
        } else if constexpr (std::is_same_v<T, formula::Step>) {
          return sample(g, [&](const Point& x) { return x[0] < f.split ? f.left : f.right; });
        } else if constexpr (std::is_same_v<T, formula::Sine>) {
          return sample(g, [&](const Point& x) {
            return f.offset + f.amplitude * std::sin(2.0 * std::numbers::pi * f.frequency * x[0]);
          });
        } else if constexpr (std::is_same_v<T, formula::Random>) {
          std::mt19937_64 rng(f.seed);
          std::uniform_real_distribution<double> u(f.low, f.high);
          Eigen::ArrayXd v(g.size());
          for (auto& x : v) x = u(rng);
          return GridFunction(g, std::move(v));
        } else {
          return read_csv(std::filesystem::path(f.path), g);
        }
      },
      spec.formula);
}

bool resamplable(const FunctionSpec& spec) { return !std::holds_alternative<formula::Csv>(spec.formula); }

ScenarioConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  require_keys(j, {"scenario", "grid", "beta", "cube_family", "exponents", "pair_exponents", "functions",
                   "tolerances", "refinement", "ratio_factor", "monitored_fail_factor", "log_holder_threshold",
                   "split_r", "nonlipschitz_gamma", "cube", "lip_sampling"},
               "config");
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  if (j.contains("scenario")) {
    cfg.scenario = string(j.at("scenario"), "scenario");
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), *cfg.scenario) == names.end())
      throw ConfigError("scenario: unknown scenario \"" + *cfg.scenario + "\"");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, {"dim", "cells", "origin", "side"}, "grid");
    if (g.contains("dim")) cfg.grid.dim = integer(g.at("dim"), "grid.dim");
    if (cfg.grid.dim == 2) cfg.grid.cells = 16, cfg.refinement = {8, 16, 32};
    if (g.contains("cells")) cfg.grid.cells = integer(g.at("cells"), "grid.cells");
    if (g.contains("side")) cfg.grid.side = number(g.at("side"), "grid.side");
    if (g.contains("origin")) {
      const json& o = g.at("origin");
      if (!o.is_array()) throw ConfigError("grid.origin: expected a list");
      for (const auto& v : o) cfg.grid.origin.push_back(number(v, "grid.origin"));
    }
    if (cfg.grid.dim != 1 && cfg.grid.dim != 2) throw ConfigError("grid.dim: must be 1 or 2");
    if (cfg.grid.cells < 2) throw ConfigError("grid.cells: need at least 2 cells per axis");
    if (!(cfg.grid.side > 0.0)) throw ConfigError("grid.side: must be positive");
    if (!cfg.grid.origin.empty() && cfg.grid.origin.size() != std::size_t(cfg.grid.dim))
      throw ConfigError("grid.origin: expected " + std::to_string(cfg.grid.dim) + " components");
  }
  if (cfg.grid.origin.empty()) cfg.grid.origin.assign(std::size_t(cfg.grid.dim), 0.0);

  if (j.contains("beta")) cfg.beta = number(j.at("beta"), "beta");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ConfigError("beta: must lie in (0,1)");
  if (j.contains("cube_family")) cfg.cube_family = parse_family(j.at("cube_family"));

  cfg.exponents = j.contains("exponents") ? parse_list(j.at("exponents"), "exponents", kExponentKinds)
                                          : default_exponents();
  cfg.pair_exponents = j.contains("pair_exponents")
                           ? parse_list(j.at("pair_exponents"), "pair_exponents", kExponentKinds)
                           : default_pair_exponents();
  cfg.symbols = default_symbols(cfg.grid.dim, cfg.beta);
  cfg.functions = default_functions();
  if (j.contains("functions")) {
    const json& f = j.at("functions");
    require_keys(f, {"b", "f"}, "functions");
    if (f.contains("b")) cfg.symbols = parse_list(f.at("b"), "functions.b", kFunctionKinds);
    if (f.contains("f")) cfg.functions = parse_list(f.at("f"), "functions.f", kFunctionKinds);
  }
  if (cfg.exponents.empty()) throw ConfigError("exponents: need at least one exponent");
  if (cfg.symbols.empty()) throw ConfigError("functions.b: need at least one symbol");
  if (cfg.functions.empty()) throw ConfigError("functions.f: need at least one function");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_keys(t, {"identity_tol", "oracle_tol", "sharpness_tol"}, "tolerances");
    cfg.tolerances.identity = number_or(t, "identity_tol", cfg.tolerances.identity, "tolerances");
    cfg.tolerances.oracle = number_or(t, "oracle_tol", cfg.tolerances.oracle, "tolerances");
    cfg.tolerances.sharpness = number_or(t, "sharpness_tol", cfg.tolerances.sharpness, "tolerances");
    if (!(cfg.tolerances.identity >= 0 && cfg.tolerances.oracle >= 0 && cfg.tolerances.sharpness >= 0))
      throw ConfigError("tolerances: must be non-negative");
  }
  if (j.contains("refinement")) {
    const json& r = j.at("refinement");
    if (!r.is_array() || r.empty()) throw ConfigError("refinement: expected a non-empty list of cell counts");
    cfg.refinement.clear();
    for (const auto& v : r) {
      const int n = integer(v, "refinement");
      if (n < 2) throw ConfigError("refinement: cell counts must be at least 2");
      cfg.refinement.push_back(n);
    }
  }
  if (j.contains("ratio_factor")) cfg.ratio_factor = number(j.at("ratio_factor"), "ratio_factor");
  if (!(cfg.ratio_factor >= 1.0)) throw ConfigError("ratio_factor: must be at least 1");
  if (j.contains("monitored_fail_factor") && !j.at("monitored_fail_factor").is_null())
    cfg.monitored_fail_factor = number(j.at("monitored_fail_factor"), "monitored_fail_factor");
  if (j.contains("log_holder_threshold") && !j.at("log_holder_threshold").is_null())
    cfg.log_holder_threshold = number(j.at("log_holder_threshold"), "log_holder_threshold");
  if (j.contains("split_r")) cfg.split_r = number(j.at("split_r"), "split_r");
  if (j.contains("nonlipschitz_gamma")) {
    cfg.nonlipschitz_gamma = number(j.at("nonlipschitz_gamma"), "nonlipschitz_gamma");
    if (!(*cfg.nonlipschitz_gamma > 0.0 && *cfg.nonlipschitz_gamma < cfg.beta))
      throw ConfigError("nonlipschitz_gamma: must lie in (0, beta)");
  }
  if (j.contains("cube")) {
    const json& c = j.at("cube");
    require_keys(c, {"start", "side"}, "cube");
    Cube q{{0, 0}, integer(c.value("side", json(1)), "cube.side")};
    if (c.contains("start")) {
      const json& s = c.at("start");
      if (!s.is_array() || s.size() != std::size_t(cfg.grid.dim))
        throw ConfigError("cube.start: expected " + std::to_string(cfg.grid.dim) + " indices");
      for (std::size_t a = 0; a < s.size(); ++a) q.start[a] = integer(s[a], "cube.start");
    }
    cfg.cube = q;
  }
  if (j.contains("lip_sampling")) {
    const json& l = j.at("lip_sampling");
    require_keys(l, {"pairs", "seed"}, "lip_sampling");
    if (l.contains("pairs")) cfg.lip_random_pairs = std::size_t(integer(l.at("pairs"), "lip_sampling.pairs"));
    if (l.contains("seed")) {
      if (!l.at("seed").is_number_unsigned()) throw ConfigError("lip_sampling.seed: expected a non-negative integer");
      cfg.lip_seed = l.at("seed").get<std::uint64_t>();
    }
  }
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, base_dir);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  if (cfg.scenario) j["scenario"] = *cfg.scenario;
  j["grid"] = {{"dim", cfg.grid.dim}, {"cells", cfg.grid.cells}, {"origin", cfg.grid.origin}, {"side", cfg.grid.side}};
  j["beta"] = cfg.beta;
  j["cube_family"] = family_name(cfg.cube_family);
  j["exponents"] = list_json(cfg.exponents);
  j["pair_exponents"] = list_json(cfg.pair_exponents);
  j["functions"] = {{"b", list_json(cfg.symbols)}, {"f", list_json(cfg.functions)}};
  j["tolerances"] = {{"identity_tol", cfg.tolerances.identity},
                     {"oracle_tol", cfg.tolerances.oracle},
                     {"sharpness_tol", cfg.tolerances.sharpness}};
  j["refinement"] = cfg.refinement;
  j["ratio_factor"] = cfg.ratio_factor;
  j["monitored_fail_factor"] = cfg.monitored_fail_factor ? json(*cfg.monitored_fail_factor) : json(nullptr);
  j["log_holder_threshold"] = cfg.log_holder_threshold ? json(*cfg.log_holder_threshold) : json(nullptr);
  if (cfg.split_r) j["split_r"] = *cfg.split_r;
  if (cfg.nonlipschitz_gamma) j["nonlipschitz_gamma"] = *cfg.nonlipschitz_gamma;
  if (cfg.cube) {
    std::vector<int> start(cfg.cube->start.begin(), cfg.cube->start.begin() + cfg.grid.dim);
    j["cube"] = {{"start", start}, {"side", cfg.cube->side}};
  }
  j["lip_sampling"] = {{"pairs", cfg.lip_random_pairs}, {"seed", cfg.lip_seed}};
  return j;
}

Grid make_grid(const GridSpec& spec) { return with_cells(spec, spec.cells); }

Grid with_cells(const GridSpec& spec, int cells) {
  std::vector<double> origin = spec.origin;
  if (origin.empty()) origin.assign(std::size_t(spec.dim), 0.0);
  return make_grid(spec.dim, cells, origin, spec.side);
}

CubeFamily resolve_family(FamilyChoice choice, const Grid& g) {
  if (choice == FamilyChoice::Full) return CubeFamily::Full;
  if (choice == FamilyChoice::Dyadic) return CubeFamily::DyadicSides;
  const int limit = g.dim() == 1 ? 64 : 16;
  return g.cells() <= limit ? CubeFamily::Full : CubeFamily::DyadicSides;
}

Resolved resolve(const ScenarioConfig& cfg) { return resolve(cfg, cfg.grid.cells); }

Resolved resolve(const ScenarioConfig& cfg, int cells) {
  const bool native = cells == cfg.grid.cells;
  Grid g = [&] {
    try {
      return with_cells(cfg.grid, cells);
    } catch (const GridError& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }();
  Resolved r{g, resolve_family(cfg.cube_family, g), {}, {}, {}, {}};

  auto evaluate = [&](const FunctionSpec& spec, const std::string& where) -> std::optional<GridFunction> {
    if (!resamplable(spec) && !native) return std::nullopt;
    FunctionSpec local = spec;
    if (auto* c = std::get_if<formula::Csv>(&local.formula)) c->path = csv_path(cfg, c->path).string();
    try {
      return realize(local, g);
    } catch (const IoError& e) {
      throw IoError(where + " (" + spec.name + "): " + e.what());
    } catch (const GridError& e) {
      throw ConfigError(where + " (" + spec.name + "): " + e.what());
    }
  };
  auto exponent = [&](const FunctionSpec& spec, const std::string& where) -> std::optional<VariableExponent> {
    auto f = evaluate(spec, where);
    if (!f) return std::nullopt;
    try {
      return validate_exponent(*f);
    } catch (const ExponentError& e) {
      throw ConfigError(where + " (" + spec.name + "): " + e.what() + " [class P requires 1 < p_-]");
    }
  };

  for (std::size_t i = 0; i < cfg.exponents.size(); ++i)
    if (auto e = exponent(cfg.exponents[i], "exponents[" + std::to_string(i) + "]"))
      r.exponents.push_back({cfg.exponents[i].name, std::move(*e)});
  for (std::size_t i = 0; i < cfg.pair_exponents.size(); ++i) {
    const std::string where = "pair_exponents[" + std::to_string(i) + "]";
    if (auto e = exponent(cfg.pair_exponents[i], where)) {
      try {
        r.pairs.push_back({cfg.pair_exponents[i].name, build_pair(*e, cfg.beta)});
      } catch (const ExponentError& err) {
        throw ConfigError(where + " (" + cfg.pair_exponents[i].name + "): " + err.what());
      }
    }
  }
  for (std::size_t i = 0; i < cfg.symbols.size(); ++i)
    if (auto f = evaluate(cfg.symbols[i], "functions.b[" + std::to_string(i) + "]"))
      r.symbols.push_back({cfg.symbols[i].name, std::move(*f)});
  for (std::size_t i = 0; i < cfg.functions.size(); ++i)
    if (auto f = evaluate(cfg.functions[i], "functions.f[" + std::to_string(i) + "]"))
      r.functions.push_back({cfg.functions[i].name, std::move(*f)});
  return r;
}

}  // namespace maxlip
