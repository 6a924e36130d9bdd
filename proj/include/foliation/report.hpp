#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace foliation {

inline constexpr int kReportSchemaVersion = 1;

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v) noexcept;
Verdict parse_verdict(const std::string& s);

struct CheckResult {
    std::string name;
    Verdict verdict = Verdict::pass;
    // "exact" for symbolic claims, otherwise the numeric tolerance used.
    std::string tolerance = "exact";
    std::string detail;
    std::string blocked_by;  // upstream check when inconclusive
    nlohmann::json values = nlohmann::json::object();
    double seconds = 0.0;  // emitted only with timings enabled

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct Provenance {
    std::string tool = "foliation";
    std::string version;
    nlohmann::json config = nlohmann::json::object();
    bool timings = false;
    double total_seconds = 0.0;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ScenarioReport {
    nlohmann::json scenario = nlohmann::json::object();
    std::vector<CheckResult> checks;
    Provenance provenance;

    bool failed() const;
    int count(Verdict v) const;
    friend bool operator==(const ScenarioReport&, const ScenarioReport&) = default;
};

enum class ReportFormat { json, csv, text };

ReportFormat parse_format(const std::string& s);

nlohmann::json to_json(const ScenarioReport& r);
ScenarioReport report_from_json(const nlohmann::json& j);

// One document for several reports: a json object with a "reports" array,
// one csv header followed by one row per check, or concatenated text.
std::string emit_report(const std::vector<ScenarioReport>& reports, ReportFormat format);
std::string emit_report(const ScenarioReport& report, ReportFormat format);

}  // namespace foliation
