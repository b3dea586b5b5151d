#include "congsub/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace congsub {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json Report::content() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["cases"] = cases;
  j["result"] = result;
  Json agg;
  agg["pass"] = passed();
  agg["cases"] = cases.size();
  agg["failures"] = failures;
  j["aggregate"] = agg;
  j["anomalies"] = anomalies;
  return j;
}

std::string Report::digest() const { return fnv1a64_hex(content().dump()); }

Json Report::to_json(bool with_timing) const {
  Json j = content();
  j["digest"] = digest();
  if (with_timing) j["timing"] = Json{{"seconds", seconds}};
  return j;
}

namespace {

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string Report::cases_csv() const {
  std::ostringstream os;
  if (cases.empty() || !cases.front().is_object()) return "";
  std::vector<std::string> cols;
  for (const auto& [k, v] : cases.front().items()) cols.push_back(k);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& row : cases) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ",";
      if (row.contains(cols[i])) os << csv_cell(row[cols[i]]);
    }
    os << "\n";
  }
  return os.str();
}

Report report_from_json(const Json& j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  r.config = j.value("config", Json::object());
  r.cases = j.value("cases", Json::array());
  r.result = j.value("result", Json::object());
  r.anomalies = j.value("anomalies", Json::array());
  if (j.contains("aggregate")) r.failures = j["aggregate"].value("failures", std::vector<std::string>{});
  if (j.contains("timing")) r.seconds = j["timing"].value("seconds", 0.0);
  return r;
}

Report merge_reports(const std::vector<Report>& inputs) {
  std::vector<const Report*> sorted;
  for (const auto& r : inputs) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Report* a, const Report* b) {
    if (a->command != b->command) return a->command < b->command;
    return a->digest() < b->digest();
  });
  Report out;
  out.command = "report-merge";
  Json sources = Json::array();
  for (const Report* r : sorted) {
    sources.push_back(Json{{"command", r->command}, {"digest", r->digest()}, {"pass", r->passed()}});
    for (const auto& c : r->cases) {
      Json tagged;
      tagged["source"] = r->command;
      tagged["source_digest"] = r->digest();
      for (const auto& [k, v] : c.items()) tagged[k] = v;
      out.cases.push_back(tagged);
    }
    for (const auto& a : r->anomalies) out.anomalies.push_back(a);
    for (const auto& f : r->failures) out.failures.push_back(r->command + ": " + f);
    out.seconds += r->seconds;
  }
  out.config["inputs"] = sources.size();
  out.result["sources"] = sources;
  return out;
}

const char* report_schema() {
  return R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "congsub report",
  "type": "object",
  "required": ["schema_version", "command", "config", "cases", "result", "aggregate", "anomalies", "digest"],
  "properties": {
    "schema_version": {"const": 1},
    "command": {"enum": ["approx", "nori", "phi", "cdelta", "count", "explog-selftest", "report-merge"]},
    "config": {"type": "object"},
    "cases": {"type": "array", "items": {"type": "object"}},
    "result": {"type": "object"},
    "aggregate": {
      "type": "object",
      "required": ["pass", "cases", "failures"],
      "properties": {
        "pass": {"type": "boolean"},
        "cases": {"type": "integer", "minimum": 0},
        "failures": {"type": "array", "items": {"type": "string"}}
      }
    },
    "anomalies": {"type": "array"},
    "digest": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
    "timing": {"type": "object", "properties": {"seconds": {"type": "number"}}}
  }
}
)";
}

}  // namespace congsub
