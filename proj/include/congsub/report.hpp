#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace congsub {

using Json = nlohmann::ordered_json;

/// Versioned run report. Keys keep insertion order, so equal runs serialize
/// to equal bytes apart from the timing block.
struct Report {
  static constexpr int kSchemaVersion = 1;

  std::string command;
  Json config = Json::object();
  Json cases = Json::array();
  Json result = Json::object();
  Json anomalies = Json::array();
  std::vector<std::string> failures;
  double seconds = 0.0;

  bool passed() const { return failures.empty(); }
  /// Everything except timing and the digest itself.
  Json content() const;
  /// FNV-1a 64 of content().dump(), as 16 hex digits.
  std::string digest() const;
  Json to_json(bool with_timing = true) const;
  /// Flat CSV of the cases array (columns from the first case).
  std::string cases_csv() const;
};

std::string fnv1a64_hex(const std::string& bytes);

/// Rebuilds a report from its JSON form (used by report-merge).
Report report_from_json(const Json& j);

/// Merge: cases tagged with their source command, ordered by (command, digest).
Report merge_reports(const std::vector<Report>& inputs);

/// JSON schema of the report document.
const char* report_schema();

}  // namespace congsub
