#include "foliation/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "foliation/errors.hpp"

namespace foliation {

using nlohmann::json;

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict parse_verdict(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "fail") return Verdict::fail;
    if (s == "inconclusive") return Verdict::inconclusive;
    throw PreconditionError("unknown verdict '" + s + "'");
}

ReportFormat parse_format(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "text") return ReportFormat::text;
    throw PreconditionError("unknown format '" + s + "' (json, csv, text)");
}

bool ScenarioReport::failed() const { return count(Verdict::fail) > 0; }

int ScenarioReport::count(Verdict v) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [v](const auto& c) { return c.verdict == v; }));
}

json to_json(const ScenarioReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json jc = {{"name", c.name},           {"verdict", verdict_name(c.verdict)}, {"tolerance", c.tolerance},
                   {"detail", c.detail},       {"values", c.values}};
        if (!c.blocked_by.empty()) jc["blocked_by"] = c.blocked_by;
        if (r.provenance.timings) jc["seconds"] = c.seconds;
        checks.push_back(std::move(jc));
    }
    json prov = {{"tool", r.provenance.tool}, {"version", r.provenance.version}, {"config", r.provenance.config}};
    if (r.provenance.timings) prov["total_seconds"] = r.provenance.total_seconds;
    return {{"schema_version", kReportSchemaVersion},
            {"scenario", r.scenario},
            {"checks", std::move(checks)},
            {"summary",
             {{"pass", r.count(Verdict::pass)},
              {"fail", r.count(Verdict::fail)},
              {"inconclusive", r.count(Verdict::inconclusive)}}},
            {"provenance", std::move(prov)}};
}

ScenarioReport report_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) throw PreconditionError("unsupported report schema");
    ScenarioReport r;
    r.scenario = j.at("scenario");
    const auto& p = j.at("provenance");
    r.provenance.tool = p.at("tool").get<std::string>();
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.config = p.at("config");
    r.provenance.timings = p.contains("total_seconds");
    if (r.provenance.timings) r.provenance.total_seconds = p.at("total_seconds").get<double>();
    for (const auto& jc : j.at("checks")) {
        CheckResult c;
        c.name = jc.at("name").get<std::string>();
        c.verdict = parse_verdict(jc.at("verdict").get<std::string>());
        c.tolerance = jc.at("tolerance").get<std::string>();
        c.detail = jc.at("detail").get<std::string>();
        c.values = jc.at("values");
        if (jc.contains("blocked_by")) c.blocked_by = jc.at("blocked_by").get<std::string>();
        if (jc.contains("seconds")) c.seconds = jc.at("seconds").get<double>();
        r.checks.push_back(std::move(c));
    }
    return r;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string scenario_name(const ScenarioReport& r) {
    return r.scenario.contains("name") ? r.scenario["name"].get<std::string>() : std::string();
}

}  // namespace

std::string emit_report(const std::vector<ScenarioReport>& reports, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::json: {
            json all = json::array();
            for (const auto& r : reports) all.push_back(to_json(r));
            out << json{{"schema_version", kReportSchemaVersion}, {"reports", all}}.dump(2) << '\n';
            break;
        }
        case ReportFormat::csv: {
            out << "scenario,check,verdict,tolerance,detail,blocked_by\n";
            for (const auto& r : reports)
                for (const auto& c : r.checks)
                    out << csv_field(scenario_name(r)) << ',' << csv_field(c.name) << ',' << verdict_name(c.verdict)
                        << ',' << csv_field(c.tolerance) << ',' << csv_field(c.detail) << ','
                        << csv_field(c.blocked_by) << '\n';
            break;
        }
        case ReportFormat::text: {
            for (const auto& r : reports) {
                out << "scenario " << scenario_name(r);
                if (r.scenario.contains("kind")) out << " [" << r.scenario["kind"].get<std::string>() << "]";
                out << '\n';
                for (const auto& c : r.checks) {
                    out << "  " << std::left << std::setw(13) << verdict_name(c.verdict) << c.name;
                    if (!c.detail.empty()) out << ": " << c.detail;
                    out << " (" << c.tolerance << ")";
                    if (!c.blocked_by.empty()) out << " blocked by " << c.blocked_by;
                    if (r.provenance.timings) out << " " << std::fixed << std::setprecision(3) << c.seconds << "s"
                                                  << std::defaultfloat;
                    out << '\n';
                }
                out << "  " << r.count(Verdict::pass) << " pass, " << r.count(Verdict::fail) << " fail, "
                    << r.count(Verdict::inconclusive) << " inconclusive\n";
            }
            break;
        }
    }
    return out.str();
}

std::string emit_report(const ScenarioReport& report, ReportFormat format) {
    return emit_report(std::vector<ScenarioReport>{report}, format);
}

}  // namespace foliation
