#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "maxlip/exponents.hpp"
#include "maxlip/grid.hpp"

namespace maxlip {

// Closed-form catalog. x1 is the first coordinate; |x - c| is Euclidean.
namespace formula {
struct Const {
  double value;
};
struct Affine {  // a + b x1
  double a;
  double b;
};
struct Power {  // |x - center|^gamma
  std::vector<double> center;
  double gamma;
};
struct Step {  // left where x1 < split, right elsewhere
  double left;
  double right;
  double split;
};
struct Sine {  // offset + amplitude sin(2 pi frequency x1)
  double amplitude = 1.0;
  double frequency = 1.0;
  double offset = 0.0;
};
struct Random {  // uniform in [low, high), one draw per cell in row-major order
  std::uint64_t seed;
  double low = -1.0;
  double high = 1.0;
};
struct Csv {
  std::string path;
};
}  // namespace formula

using Formula = std::variant<formula::Const, formula::Affine, formula::Power, formula::Step, formula::Sine,
                             formula::Random, formula::Csv>;

struct FunctionSpec {
  std::string name;
  Formula formula;
};

// Evaluates the formula on the grid. CSV files are read on every call.
GridFunction realize(const FunctionSpec& spec, const Grid& g);
// Csv-backed functions only exist on the grid they were written for.
bool resamplable(const FunctionSpec& spec);

enum class FamilyChoice { Full, Dyadic, Auto };

struct GridSpec {
  int dim = 1;
  int cells = 64;  // 16 when dim = 2 is parsed without cells
  std::vector<double> origin;  // empty: zeros
  double side = 1.0;
};

struct Tolerances {
  double identity = 1e-9;
  double oracle = 1e-12;
  double sharpness = 1e-6;
};

struct ScenarioConfig {
  std::optional<std::string> scenario;
  GridSpec grid;
  double beta = 0.5;
  FamilyChoice cube_family = FamilyChoice::Auto;
  std::vector<FunctionSpec> exponents;       // q(.) for the oscillation functionals
  std::vector<FunctionSpec> pair_exponents;  // p(.) for (p, q) pairs
  std::vector<FunctionSpec> symbols;         // the b bank
  std::vector<FunctionSpec> functions;       // the f bank
  Tolerances tolerances;
  std::vector<int> refinement{32, 64, 128};  // {8, 16, 32} in dim 2
  double ratio_factor = 3.0;
  std::optional<double> monitored_fail_factor;  // off unless set
  std::optional<double> log_holder_threshold;
  std::optional<double> split_r;             // default dim/(dim-beta) + 1
  std::optional<double> nonlipschitz_gamma;  // default beta/2
  std::optional<Cube> cube;                  // for `compute local`; default whole box
  std::size_t lip_random_pairs = 200000;
  std::uint64_t lip_seed = 20240601;
  std::filesystem::path base_dir;  // relative csv paths resolve against this
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"lemmas",   "identities", "theorem1",        "theorem2",
                                              "theorem3", "normequiv",  "counterexamples", "all"};
  return names;
}

// Throws ConfigError on schema problems, unknown keys included.
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
// IoError when the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

// Normalized form with every default filled in.
nlohmann::json to_json(const ScenarioConfig& cfg);

Grid make_grid(const GridSpec& spec);
Grid with_cells(const GridSpec& spec, int cells);
CubeFamily resolve_family(FamilyChoice choice, const Grid& g);

template <class T>
struct Named {
  std::string name;
  T value;
};

// Everything the config refers to, evaluated on one grid.
struct Resolved {
  Grid grid;
  CubeFamily family;
  std::vector<Named<VariableExponent>> exponents;
  std::vector<Named<ExponentPair>> pairs;
  std::vector<Named<GridFunction>> symbols;
  std::vector<Named<GridFunction>> functions;
};

// Validates exponents and pairs; failures become ConfigError naming the
// entry. With `cells`, csv-backed entries are dropped when the grid differs.
Resolved resolve(const ScenarioConfig& cfg);
Resolved resolve(const ScenarioConfig& cfg, int cells);

}  // namespace maxlip
