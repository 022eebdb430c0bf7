#include "maxlip/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "maxlip/error.hpp"
#include "maxlip/grid_io.hpp"

namespace maxlip {

namespace {

using nlohmann::json;

// JSON has no inf/nan; those travel as strings.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw Error("report: malformed number");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Check make(std::string id, std::string anchor, double lhs, Relation rel, double rhs, double tol, std::string witness,
           Status status) {
  return Check{std::move(id), std::move(anchor), lhs, rhs, rel, tol, status, std::move(witness)};
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    default:
      return "monitored";
  }
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessEq:
      return "<=";
    case Relation::GreaterEq:
      return ">=";
    default:
      return "==";
  }
}

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "monitored") return Status::Monitored;
  throw Error("report: unknown status \"" + s + "\"");
}

Relation parse_relation(const std::string& s) {
  if (s == "<=") return Relation::LessEq;
  if (s == ">=") return Relation::GreaterEq;
  if (s == "==") return Relation::Equal;
  throw Error("report: unknown relation \"" + s + "\"");
}

bool holds(double lhs, Relation rel, double rhs, double tol) {
  switch (rel) {
    case Relation::LessEq:
      return lhs <= rhs + tol;
    case Relation::GreaterEq:
      return lhs >= rhs - tol;
    default:
      return std::abs(lhs - rhs) <= tol;
  }
}

Check verdict(std::string id, std::string anchor, double lhs, Relation rel, double rhs, double tol,
              std::string witness) {
  const Status s = holds(lhs, rel, rhs, tol) ? Status::Pass : Status::Fail;
  return make(std::move(id), std::move(anchor), lhs, rel, rhs, tol, std::move(witness), s);
}

Check monitored(std::string id, std::string anchor, double lhs, Relation rel, double rhs, double tol,
                std::string witness) {
  return make(std::move(id), std::move(anchor), lhs, rel, rhs, tol, std::move(witness), Status::Monitored);
}

Summary Report::summary() const {
  Summary s;
  for (const auto& c : checks) {
    ++s.total;
    if (c.status == Status::Pass) ++s.pass;
    if (c.status == Status::Fail) ++s.fail;
    if (c.status == Status::Monitored) ++s.monitored;
  }
  return s;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"check_id", c.check_id},
                      {"anchor", c.anchor},
                      {"lhs", number_json(c.lhs)},
                      {"rhs", number_json(c.rhs)},
                      {"relation", to_string(c.relation)},
                      {"tolerance", number_json(c.tolerance)},
                      {"status", to_string(c.status)},
                      {"witness", c.witness}});
  }
  const Summary s = r.summary();
  return {{"tool", "maxlip"},
          {"version", r.tool_version},
          {"timestamp", r.timestamp},
          {"scenario", r.scenario},
          {"summary", {{"total", s.total}, {"pass", s.pass}, {"fail", s.fail}, {"monitored", s.monitored}}},
          {"config", r.config},
          {"checks", checks}};
}

Report report_from_json(const json& j) {
  Report r;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    r.tool_version = j.at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config = j.at("config");
    for (const auto& c : j.at("checks")) {
      r.checks.push_back(Check{c.at("check_id").get<std::string>(), c.at("anchor").get<std::string>(),
                               number_from(c.at("lhs")), number_from(c.at("rhs")),
                               parse_relation(c.at("relation").get<std::string>()), number_from(c.at("tolerance")),
                               parse_status(c.at("status").get<std::string>()), c.at("witness").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

void write_report_csv(std::ostream& out, const Report& r) {
  out << "check_id,anchor,lhs,rhs,relation,tolerance,status,witness\n";
  for (const auto& c : r.checks) {
    out << csv_field(c.check_id) << ',' << csv_field(c.anchor) << ',' << format_number(c.lhs) << ','
        << format_number(c.rhs) << ',' << csv_field(to_string(c.relation)) << ',' << format_number(c.tolerance)
        << ',' << to_string(c.status) << ',' << csv_field(c.witness) << '\n';
  }
}

void write_report_json(std::ostream& out, const Report& r) { out << to_json(r).dump(2) << '\n'; }

}  // namespace maxlip
