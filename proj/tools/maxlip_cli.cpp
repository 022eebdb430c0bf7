#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "maxlip/config.hpp"
#include "maxlip/error.hpp"
#include "maxlip/grid_io.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/lux_norm.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/report.hpp"
#include "maxlip/scenarios.hpp"

namespace {

using namespace maxlip;

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kIo = 3 };

// Empty path or "-" means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

template <class T>
const Named<T>& pick(const std::vector<Named<T>>& bank, std::size_t index, const char* what) {
  if (index >= bank.size())
    throw ConfigError(std::string(what) + " index " + std::to_string(index) + " out of range (bank has " +
                      std::to_string(bank.size()) + ")");
  return bank[index];
}

struct ComputeArgs {
  std::string op;
  std::string config;
  std::string out;
  std::size_t symbol = 0;
  std::size_t function = 0;
  std::size_t exponent = 0;
  double alpha = -1.0;  // negative: use beta
};

std::string scalar_csv(const std::string& quantity, double value, const std::string& witness) {
  std::ostringstream os;
  os << "quantity,value,witness\n" << quantity << ',' << format_number(value) << ',' << witness << '\n';
  return os.str();
}

int run_compute(const ComputeArgs& a) {
  const ScenarioConfig cfg = load_config(a.config);
  const Resolved r = resolve(cfg);
  const int d = r.grid.dim();
  const auto mode = r.family;

  const auto grid_op = [&]() -> std::optional<OperatorTag> {
    const auto& b = [&]() -> const GridFunction& { return pick(r.symbols, a.symbol, "symbol").value; };
    if (a.op == "hl") return op::HardyLittlewood{};
    if (a.op == "sharp") return op::Sharp{};
    if (a.op == "frac") return op::Fractional{a.alpha >= 0.0 ? a.alpha : cfg.beta};
    if (a.op == "local") return op::Local{cfg.cube.value_or(whole(r.grid))};
    if (a.op == "maxcomm") return op::MaxCommutator{b()};
    if (a.op == "comm_hl") return op::CommutatorHL{b()};
    if (a.op == "comm_sharp") return op::CommutatorSharp{b()};
    return std::nullopt;
  }();
  if (grid_op) {
    const GridFunction out = apply(*grid_op, pick(r.functions, a.function, "function").value, mode);
    std::ostringstream os;
    write_csv(os, out);
    emit(a.out, os.str());
    return kPass;
  }

  const LipSampling sampling{cfg.lip_random_pairs, cfg.lip_seed};
  LipResult v;
  if (a.op == "lip") {
    v = lip_seminorm(pick(r.symbols, a.symbol, "symbol").value, cfg.beta, sampling);
  } else if (a.op == "osc") {
    const double q = pick(r.exponents, a.exponent, "exponent").value.minus();
    v = osc_norm_q(pick(r.symbols, a.symbol, "symbol").value, cfg.beta, q, mode);
  } else if (a.op == "lambda_var" || a.op == "lambda_star" || a.op == "lambda_sharp") {
    const auto& b = pick(r.symbols, a.symbol, "symbol").value;
    const auto& q = pick(r.exponents, a.exponent, "exponent").value;
    v = a.op == "lambda_var"    ? lambda_var(b, cfg.beta, q, mode)
        : a.op == "lambda_star" ? lambda_star(b, cfg.beta, q, mode)
                                : lambda_sharp(b, cfg.beta, q, mode);
  } else if (a.op == "lux_norm") {
    const auto n = lux_norm(pick(r.functions, a.function, "function").value,
                            pick(r.exponents, a.exponent, "exponent").value);
    emit(a.out, scalar_csv(a.op, n.value, "iterations=" + std::to_string(n.iterations)));
    return kPass;
  } else {
    throw ConfigError("unknown op \"" + a.op + "\"");
  }
  emit(a.out, scalar_csv(a.op, v.value, to_string(v.witness, d) + (v.exact ? "" : " (sampled)")));
  return kPass;
}

int run_verify(const std::string& scenario, const std::string& config, const std::string& format,
               const std::string& out) {
  const ScenarioConfig cfg = load_config(config);
  const Report report = run_scenario(cfg, scenario);
  std::ostringstream os;
  if (format == "csv")
    write_report_csv(os, report);
  else
    write_report_json(os, report);
  emit(out, os.str());
  const Summary s = report.summary();
  std::fprintf(stderr, "%s: %d checks, %d pass, %d fail, %d monitored\n", scenario.c_str(), s.total, s.pass, s.fail,
               s.monitored);
  return s.fail == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxlip: discrete maximal commutators and Lipschitz spaces with variable exponents"};
  app.set_version_flag("--version", std::string("maxlip ") + kToolVersion);
  app.require_subcommand(1);

  std::string scenario, config, format = "json", out;
  auto* verify = app.add_subcommand("verify", "run a scenario and write its report");
  verify->add_option("scenario", scenario, "scenario name")->required()->check(CLI::IsMember(scenario_names()));
  verify->add_option("--config", config, "JSON config")->required();
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", out, "output path (default stdout)");

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "evaluate one operator or norm");
  compute
      ->add_option("op", ca.op,
                   "hl | sharp | frac | local | maxcomm | comm_hl | comm_sharp | lip | osc | lambda_var | "
                   "lambda_star | lambda_sharp | lux_norm")
      ->required();
  compute->add_option("--config", ca.config, "JSON config")->required();
  compute->add_option("--out", ca.out, "output CSV path")->required();
  compute->add_option("--symbol", ca.symbol, "index into the symbol bank");
  compute->add_option("--function", ca.function, "index into the function bank");
  compute->add_option("--exponent", ca.exponent, "index into the exponent list (osc uses its q_-)");
  compute->add_option("--alpha", ca.alpha, "order for frac (default beta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*verify) return run_verify(scenario, config, format, out);
    return run_compute(ca);
  } catch (const IoError& e) {
    std::cerr << "maxlip: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "maxlip: invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "maxlip: " << e.what() << '\n';
    return kConfig;
  }
}
