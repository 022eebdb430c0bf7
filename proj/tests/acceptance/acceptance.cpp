// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "maxlip/config.hpp"
#include "maxlip/exponents.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/lux_norm.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/scenarios.hpp"

using namespace maxlip;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Grid unit_grid(int dim, int n) {
  return dim == 1 ? make_grid(1, n, {0.0}, 1.0) : make_grid(2, n, {0.0, 0.0}, 1.0);
}

GridFunction random_function(const Grid& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::ArrayXd v(g.size());
  for (auto& x : v) x = u(rng);
  return GridFunction(g, std::move(v));
}

VariableExponent random_exponent(const Grid& g, std::uint64_t seed, double lo, double hi) {
  return validate_exponent(random_function(g, seed, lo, hi));
}

// Collects the reasons a criterion failed; empty means pass.
struct Criterion {
  std::vector<std::string> problems;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int report(int index, const std::string& title, const Criterion& c) {
  const bool ok = c.problems.empty();
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << index << ": " << title;
  if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
  std::cout << '\n';
  for (const auto& p : c.problems) std::cout << "    - " << p << '\n';
  std::cout.flush();
  return ok ? 0 : 1;
}

Criterion guarded(const std::function<Criterion()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Criterion c;
    c.problems.push_back(std::string("exception: ") + e.what());
    return c;
  }
}

// ------------------------------------------------------------------ 1

Criterion oracle_equivalence() {
  Criterion c;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& [dim, n] : {std::pair{1, 32}, std::pair{2, 8}}) {
    const Grid g = unit_grid(dim, n);
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto b = random_function(g, 1000 + k);
      const auto f = random_function(g, 2000 + k);
      const std::vector<OperatorTag> ops{op::HardyLittlewood{}, op::Sharp{},          op::Fractional{0.25},
                                         op::Fractional{0.5},   op::MaxCommutator{b}, op::CommutatorHL{b},
                                         op::CommutatorSharp{b}};
      for (const auto& tag : ops) {
        const double dev = oracle_check(tag, f);
        worst = std::max(worst, dev);
        c.require(dev <= 1e-12, name(tag) + " dim " + std::to_string(dim) + " pair " + std::to_string(k) +
                                    ": deviation " + num(dev));
      }
    }
  }
  const double t = seconds_since(t0);
  c.require(t < 10.0, "runtime " + num(t) + " s >= 10 s");
  c.detail = "max deviation " + num(worst) + ", " + num(t) + " s";
  return c;
}

// ------------------------------------------------------------------ 2

Criterion indicator_identities() {
  Criterion c;
  const Grid g = unit_grid(1, 32);
  const int n = g.cells();
  double hl = 0.0, sharp = 0.0, frac = 0.0;
  for (const auto& q : enumerate_cubes(g, CubeFamily::Full)) {
    const auto chi = indicator(g, q);
    hl = std::max(hl, (restrict_to(hl_max(chi), q) - 1.0).abs().maxCoeff());
    if (2 * q.side <= n) sharp = std::max(sharp, (restrict_to(sharp_max(chi), q) - 0.5).abs().maxCoeff());
    for (double alpha : {0.25, 0.5}) {
      const double expect = std::pow(measure(g, q), alpha);
      frac = std::max(frac, (restrict_to(frac_max(chi, alpha), q) - expect).abs().maxCoeff());
    }
  }
  c.require(hl == 0.0, "M(chi_Q)(x)=chi_Q(x) off by " + num(hl));
  c.require(sharp <= 1e-12, "M#(chi_Q)(x)=1/2 off by " + num(sharp));
  c.require(frac <= 1e-12, "M_alpha(chi_Q)=|Q|^{alpha/n} off by " + num(frac));
  c.detail = "max errors " + num(hl) + ", " + num(sharp) + ", " + num(frac);
  return c;
}

// ------------------------------------------------------------------ 3

Criterion luxemburg() {
  Criterion c;
  double worst_rel = 0.0, worst_unit = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Grid g = unit_grid(k % 5 == 4 ? 2 : 1, k % 5 == 4 ? 8 : 16 + int(k));
    const auto f = random_function(g, 500 + k, -3.0, 3.0);
    const double p = 1.1 + 0.37 * double(k % 17);
    const auto pe = constant_exponent(g, p);
    const double closed = std::pow((f.values().abs().pow(p)).sum() * g.cell_measure(), 1.0 / p);
    const auto r = lux_norm(f, pe);
    const double rel = std::abs(r.value - closed) / closed;
    worst_rel = std::max(worst_rel, rel);
    c.require(rel <= 1e-10, "closed form p=" + num(p) + " seed " + std::to_string(500 + k) + ": rel " + num(rel));

    const auto pv = random_exponent(g, 900 + k, 1.05, 6.0);
    const auto rv = lux_norm(f, pv);
    const double unit = std::abs(modular(f.with_values(f.values() / rv.value), pv) - 1.0);
    worst_unit = std::max(worst_unit, unit);
    c.require(unit <= 1e-9, "unit modular seed " + std::to_string(900 + k) + ": " + num(unit));
  }
  const Grid g = unit_grid(1, 64);
  const auto half = sample(g, [](const Point& x) { return x[0] < 0.5 ? 2.0 : 0.0; });
  const double v = lux_norm(half, constant_exponent(g, 2.0)).value;
  c.require(std::abs(v - std::sqrt(2.0)) <= 1e-10, "||2 chi_[0,1/2]||_2 = " + num(v));
  c.detail = "max rel " + num(worst_rel) + ", max unit-modular " + num(worst_unit);
  return c;
}

// ------------------------------------------------------------------ 4

Criterion lemma_suite() {
  Criterion c;
  double holder = INFINITY, snorm = -INFINITY, dual = 0.0, embed = 0.0, power = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Grid g = unit_grid(k % 4 == 3 ? 2 : 1, k % 4 == 3 ? 6 : 24);
    const auto f = random_function(g, 3000 + k, -2.0, 2.0);
    const auto h = random_function(g, 4000 + k, -1.0, 1.0);
    const auto p = k % 2 ? random_exponent(g, 5000 + k, 1.1, 5.0) : constant_exponent(g, 1.2 + 0.1 * double(k % 30));
    holder = std::min(holder, holder_defect(f, h, p));
  }
  c.require(holder >= -1e-9, "holder_defect min " + num(holder));

  const Grid g = unit_grid(1, 32);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto f = random_function(g, 6000 + k);
    // (s p)_- >= 1 for every s below needs p_- >= 2.
    for (const auto& p : {random_exponent(g, 7000 + k, 2.0, 6.0), constant_exponent(g, 2.0 + double(k))})
      for (double s : {0.5, 1.0, 1.5, 2.0}) snorm = std::max(snorm, check_s_norm(f, p, s));
  }
  c.require(snorm <= 1e-9, "check_s_norm max " + num(snorm));

  const auto cubes = enumerate_cubes(g, CubeFamily::Full);
  for (double q : {1.5, 2.0, 3.0, 7.0}) {
    const auto qe = constant_exponent(g, q);
    for (const auto& cube : cubes) dual = std::max(dual, std::abs(cube_duality_product(cube, qe) - 1.0));
  }
  for (double p : {1.2, 1.5, 1.9}) {
    const auto pair = build_pair(constant_exponent(g, p), 0.5);
    for (const auto& cube : cubes) embed = std::max(embed, std::abs(cube_embedding_ratio(cube, pair) - 1.0));
  }
  const auto qv = random_exponent(g, 8000, 1.2, 4.0);
  const auto qa = validate_exponent(sample(g, [](const Point& x) { return 2.0 + x[0]; }));
  for (const auto* q : {&qv, &qa})
    for (double r : {2.0, 3.0}) {
      const auto rq = scaled(*q, r);
      for (const auto& cube : cubes)
        power = std::max(power, std::abs(indicator_norm(cube, rq) - std::pow(indicator_norm(cube, *q), 1.0 / r)));
    }
  c.require(dual <= 1e-9, "cube duality off by " + num(dual));
  c.require(embed <= 1e-9, "cube embedding off by " + num(embed));
  c.require(power <= 1e-9, "indicator power identity off by " + num(power));
  c.detail = "holder min " + num(holder) + ", s-norm max " + num(snorm) + ", duality " + num(dual) + ", embedding " +
             num(embed) + ", power " + num(power);
  return c;
}

// ------------------------------------------------------------------ 5

Criterion proof_machinery() {
  Criterion c;
  // Catalog symbols on an N=32 grid, every cube of the full family.
  const ScenarioConfig cfg = parse_config_text(R"j({
    "grid": {"dim": 1, "cells": 32}, "beta": 0.5, "cube_family": "full",
    "tolerances": {"identity_tol": 1e-9},
    "functions": {"b": [
      {"name": "x", "affine": {"a": 0, "b": 1}},
      {"name": "x^beta", "power": {"center": 0, "gamma": 0.5}},
      {"name": "|x-1/2|^beta", "power": {"center": 0.5, "gamma": 0.5}},
      {"name": "sine", "sine": {}},
      {"name": "random(5)", "random": {"seed": 5}}]}})j");
  const std::vector<std::string> wanted{
      "theorem1.pointwise",  "identities.median_split",   "identities.factor2",
      "identities.negative_part", "theorem3.mean_bound", "theorem2.mb_domination",
      "theorem1.mb_domination",   "theorem3.lip_domination"};
  std::vector<int> seen(wanted.size(), 0);
  int hard = 0;
  for (const char* scenario : {"identities", "theorem1", "theorem2", "theorem3"}) {
    for (const auto& ch : scenario_checks(cfg, scenario)) {
      for (std::size_t i = 0; i < wanted.size(); ++i) {
        if (ch.check_id.rfind(wanted[i] + "[", 0) != 0) continue;
        ++seen[i];
        ++hard;
        c.require(ch.status == Status::Pass, ch.check_id + " " + to_string(ch.status) + ": lhs " + num(ch.lhs) +
                                                 " rhs " + num(ch.rhs) + " at " + ch.witness);
        c.require(ch.tolerance <= 1e-9, ch.check_id + " tolerance " + num(ch.tolerance));
      }
    }
  }
  // The nonnegative symbols x, x^beta, |x-1/2|^beta carry the b >= 0 dominations.
  const std::vector<int> expected{5, 5, 5, 5, 5, 3, 5, 3};
  for (std::size_t i = 0; i < wanted.size(); ++i)
    c.require(seen[i] == expected[i], wanted[i] + ": " + std::to_string(seen[i]) + " checks, expected " +
                                          std::to_string(expected[i]));
  c.detail = std::to_string(hard) + " checks";
  return c;
}

// ------------------------------------------------------------------ 6

Criterion counterexample() {
  Criterion c;
  const Grid g = unit_grid(1, 256);
  const auto minus = GridFunction::constant(g, -1.0);
  const auto q = constant_exponent(g, 2.0);
  const auto mode = resolve_family(FamilyChoice::Auto, g);
  const double star = lambda_star(minus, 0.5, q, mode).value;
  const double var = lambda_var(minus, 0.5, q, mode).value;
  c.require(std::abs(star - 32.0) <= 1e-6, "lambda_star(-1) = " + num(star));
  c.require(std::abs(var) <= 1e-9, "lambda_var(-1) = " + num(var));
  c.detail = "lambda_star " + num(star) + ", lambda_var " + num(var);
  return c;
}

// ------------------------------------------------------------------ 7

Criterion norm_equivalence() {
  Criterion c;
  const auto t0 = Clock::now();
  const ScenarioConfig cfg = load_config(fs::path(MAXLIP_CONFIG_DIR) / "normequiv_x.json");
  const auto checks = scenario_checks(cfg, "normequiv");
  const double upper = std::pow(double(cfg.grid.dim), cfg.beta / 2.0);
  int ratios = 0, bounds = 0;
  double lo = INFINITY, hi = 0.0;
  for (const auto& ch : checks) {
    if (ch.check_id.rfind("normequiv.var_ratio[x,", 0) == 0) {
      ++ratios;
      lo = std::min(lo, ch.lhs);
      hi = std::max(hi, ch.lhs);
      c.require(ch.lhs >= 0.01 && ch.lhs <= upper, ch.check_id + " ratio " + num(ch.lhs) + " outside [0.01, n^{beta/2}]");
    }
    if (ch.check_id.rfind("normequiv.var_upper[x,", 0) == 0) {
      ++bounds;
      c.require(ch.status == Status::Pass && ch.tolerance <= 1e-9, ch.check_id + " " + to_string(ch.status));
    }
    if (ch.check_id == "normequiv.var_spread[x]")
      c.require(ch.lhs < 3.0, "ratio spread " + num(ch.lhs) + " >= 3");
  }
  c.require(ratios == 12, std::to_string(ratios) + " ratio entries, expected 3 N x 4 exponents");
  c.require(bounds == 12, std::to_string(bounds) + " upper-bound checks, expected 12");

  // The whole default suite, timed.
  const auto t1 = Clock::now();
  const auto all = scenario_checks(load_config(fs::path(MAXLIP_CONFIG_DIR) / "default.json"), "all");
  const double t_all = seconds_since(t1);
  for (const auto& ch : all)
    if (ch.status == Status::Fail) c.problems.push_back("default suite: " + ch.check_id + " failed");
  c.require(t_all < 60.0, "full default suite took " + num(t_all) + " s");
  c.detail = "ratios in [" + num(lo) + ", " + num(hi) + "], spread " + num(hi / lo) + ", table " +
             num(seconds_since(t0) - t_all) + " s, full suite " + num(t_all) + " s";
  return c;
}

// ------------------------------------------------------------------ 8

struct Run {
  int code = -1;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Run cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = quote(MAXLIP_CLI_PATH) + " " + args + " > " + quote((dir / "stdout.txt").string()) +
                          " 2> " + quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string strip_timestamp(const std::string& s) {
  static const std::regex ts("\"timestamp\": \"[^\"]*\"");
  return std::regex_replace(s, ts, "\"timestamp\": \"\"");
}

Criterion interface_contract() {
  Criterion c;
  const fs::path dir = fs::temp_directory_path() / ("maxlip_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string configs = MAXLIP_CONFIG_DIR;
  const std::string ident = quote(configs + "/identities_n32.json");

  const Run a = cli("verify identities --config " + ident + " --out " + quote((dir / "a.json").string()), dir);
  const Run b = cli("verify identities --config " + ident + " --out " + quote((dir / "b.json").string()), dir);
  c.require(a.code == 0 && b.code == 0, "passing config exit codes " + std::to_string(a.code) + ", " +
                                            std::to_string(b.code) + " (expected 0)");
  const std::string ja = slurp(dir / "a.json"), jb = slurp(dir / "b.json");
  c.require(!ja.empty() && strip_timestamp(ja) == strip_timestamp(jb), "reports differ beyond the timestamp");

  const Run csv1 = cli("verify counterexamples --config " + quote(configs + "/counterexamples_n256.json") +
                           " --format csv --out " + quote((dir / "a.csv").string()),
                       dir);
  const Run csv2 = cli("verify counterexamples --config " + quote(configs + "/counterexamples_n256.json") +
                           " --format csv --out " + quote((dir / "b.csv").string()),
                       dir);
  c.require(csv1.code == 0 && csv2.code == 0, "counterexamples exit " + std::to_string(csv1.code));
  c.require(slurp(dir / "a.csv") == slurp(dir / "b.csv"), "csv reports differ");

  const Run gate = cli("verify normequiv --config " + quote(configs + "/regression_gate.json"), dir);
  c.require(gate.code == 1, "failing check exit code " + std::to_string(gate.code) + " (expected 1)");

  const Run bad = cli("verify lemmas --config " + quote(configs + "/bad_p_equals_one.json"), dir);
  c.require(bad.code == 2, "p = 1 exit code " + std::to_string(bad.code) + " (expected 2)");
  c.require(bad.err.find("1 < p_-") != std::string::npos, "p = 1 diagnostic lacks \"1 < p_-\": " + bad.err);

  std::ofstream(dir / "unknown.json") << R"({"gird": {"cells": 8}})";
  const Run unknown = cli("verify lemmas --config " + quote((dir / "unknown.json").string()), dir);
  c.require(unknown.code == 2, "unknown key exit code " + std::to_string(unknown.code) + " (expected 2)");

  const Run unwritable =
      cli("verify identities --config " + ident + " --out " + quote((dir / "missing" / "r.json").string()), dir);
  c.require(unwritable.code == 3, "unwritable output exit code " + std::to_string(unwritable.code) + " (expected 3)");
  const Run missing = cli("verify identities --config " + quote((dir / "nope.json").string()), dir);
  c.require(missing.code == 3, "missing config exit code " + std::to_string(missing.code) + " (expected 3)");

  fs::remove_all(dir);
  c.detail = "exit codes 0/1/2/3 = " + std::to_string(a.code) + "/" + std::to_string(gate.code) + "/" +
             std::to_string(bad.code) + "/" + std::to_string(unwritable.code);
  return c;
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, "oracle equivalence of fast paths (N=32 dim 1, N=8 dim 2)", guarded(oracle_equivalence));
  failed += report(2, "indicator identities on every cube (N=32)", guarded(indicator_identities));
  failed += report(3, "Luxemburg norm closed forms and unit-modular law", guarded(luxemburg));
  failed += report(4, "variable-exponent lemma suite", guarded(lemma_suite));
  failed += report(5, "proof-machinery inequalities on every cube (N=32)", guarded(proof_machinery));
  failed += report(6, "lambda_star(-1) = 2h^-beta = 32 at N=256, lambda_var(-1) = 0", guarded(counterexample));
  failed += report(7, "norm-equivalence ratios for b(x)=x across exponents and refinements",
                   guarded(norm_equivalence));
  failed += report(8, "determinism and exit-code contract", guarded(interface_contract));
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
