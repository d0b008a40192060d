#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lightcone {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "lightcone";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Verdict { pass, fail, skipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "?";
}

/// One verification record: what was checked (anchor states the identity or
/// bound as text), the numeric evidence, the tolerance it was held to and
/// the verdict.
struct CheckRecord {
  std::string name;
  std::string anchor;
  Json values = Json::object();
  double tolerance = 0.0;
  Verdict verdict = Verdict::skipped;

  static CheckRecord make(std::string name, std::string anchor, double tolerance, bool ok,
                          Json values) {
    CheckRecord c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.tolerance = tolerance;
    c.verdict = ok ? Verdict::pass : Verdict::fail;
    c.values = std::move(values);
    return c;
  }

  static CheckRecord skip(std::string name, std::string anchor, Json values = Json::object()) {
    CheckRecord c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.values = std::move(values);
    c.verdict = Verdict::skipped;
    return c;
  }
};

/// Per-point evaluation row for the eval command and the CSV projection.
struct EvalRow {
  int chart = 0;
  double s = 0.0, t = 0.0;
  std::vector<std::pair<std::string, double>> values;
  bool spacelike = true;
};

struct Report {
  Json config = Json::object();
  std::vector<CheckRecord> checks;
  std::vector<EvalRow> points;

  bool all_pass() const {
    for (const CheckRecord& c : checks)
      if (c.verdict == Verdict::fail) return false;
    return true;
  }

  Json to_json() const {
    Json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config;
    Json jchecks = Json::array();
    int npass = 0, nfail = 0, nskip = 0;
    for (const CheckRecord& c : checks) {
      Json jc;
      jc["name"] = c.name;
      jc["anchor"] = c.anchor;
      jc["tolerance"] = c.tolerance;
      jc["verdict"] = to_string(c.verdict);
      jc["values"] = c.values;
      jchecks.push_back(jc);
      (c.verdict == Verdict::pass ? npass : c.verdict == Verdict::fail ? nfail : nskip)++;
    }
    j["checks"] = jchecks;
    if (!points.empty()) {
      Json jp = Json::array();
      for (const EvalRow& r : points) {
        Json row;
        row["chart"] = r.chart;
        row["s"] = r.s;
        row["t"] = r.t;
        row["spacelike"] = r.spacelike;
        for (const auto& [k, v] : r.values) row[k] = v;
        jp.push_back(row);
      }
      j["points"] = jp;
    }
    j["summary"] = Json{{"pass", npass}, {"fail", nfail}, {"skipped", nskip}};
    return j;
  }

  /// CSV projection, one row per (point, value) and one per check.
  /// Column order is fixed: record,name,chart,s,t,key,value,tolerance,verdict
  std::string to_csv() const {
    std::string out = "record,name,chart,s,t,key,value,tolerance,verdict\n";
    auto num = [](double v) {
      Json j = v;
      return j.dump();
    };
    for (const EvalRow& r : points)
      for (const auto& [k, v] : r.values)
        out += "point,," + std::to_string(r.chart) + "," + num(r.s) + "," + num(r.t) + "," + k +
               "," + num(v) + ",," + (r.spacelike ? "pass" : "fail") + "\n";
    for (const CheckRecord& c : checks) {
      std::string key, value;
      for (const auto& [k, v] : c.values.items()) {
        if (v.is_number()) {
          key = k;
          value = v.dump();
          break;
        }
      }
      out += "check," + c.name + ",,,," + key + "," + value + "," + num(c.tolerance) + "," +
             to_string(c.verdict) + "\n";
    }
    return out;
  }
};

}  // namespace lightcone
