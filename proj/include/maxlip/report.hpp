#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace maxlip {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Status { Pass, Fail, Monitored };
enum class Relation { LessEq, GreaterEq, Equal };

std::string to_string(Status s);
std::string to_string(Relation r);
Status parse_status(const std::string& s);
Relation parse_relation(const std::string& s);

struct Check {
  std::string check_id;
  std::string anchor;  // the formula being checked
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::LessEq;
  double tolerance = 0.0;
  Status status = Status::Pass;
  std::string witness;

  bool operator==(const Check&) const = default;
};

// True when lhs relation rhs holds within the tolerance.
bool holds(double lhs, Relation rel, double rhs, double tol);

// Hard check: pass or fail from the relation.
Check verdict(std::string id, std::string anchor, double lhs, Relation rel, double rhs, double tol,
              std::string witness);
// Never affects the exit code.
Check monitored(std::string id, std::string anchor, double lhs, Relation rel, double rhs, double tol,
                std::string witness);

struct Summary {
  int total = 0;
  int pass = 0;
  int fail = 0;
  int monitored = 0;
  bool operator==(const Summary&) const = default;
};

struct Report {
  std::string scenario;
  std::string tool_version = kToolVersion;
  std::string timestamp;
  nlohmann::json config;
  std::vector<Check> checks;

  Summary summary() const;
  bool passed() const { return summary().fail == 0; }
  bool operator==(const Report&) const = default;
};

// UTC, ISO 8601.
std::string utc_timestamp();

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

// Header plus one row per check; numbers at 17 significant digits.
void write_report_csv(std::ostream& out, const Report& r);
void write_report_json(std::ostream& out, const Report& r);

}  // namespace maxlip
