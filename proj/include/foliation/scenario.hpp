#pragma once

// Scenarios: a kind, its parameters and an ordered list of checks.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foliation/integrator.hpp"
#include "foliation/report.hpp"

namespace foliation {

struct ScenarioSpec {
    std::string name;
    std::string kind;
    std::map<std::string, std::string> params;
    int order = 10;
    std::uint64_t seed = 1;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::vector<std::string> checks;  // empty: every check of the kind

    bool has(const std::string& key) const { return params.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    IntegratorConfig integrator() const;
    nlohmann::json to_json() const;
};

struct KindInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> params;
};

const std::vector<KindInfo>& scenario_kinds();

// Throws PreconditionError for unknown kinds, parameters or check names.
void validate(const ScenarioSpec& spec);

// Check names for this spec in execution order.
std::vector<std::string> scenario_checks(const ScenarioSpec& spec);

struct RunOptions {
    bool timings = false;
};

// Never throws for bad input: problems become failed checks.
ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

struct ScenarioSection {
    std::string name;
    int line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
};

// [scenario.<name>] headers followed by key = value lines; '#' comments.
std::vector<ScenarioSection> parse_scenario_file(std::string_view text);

// Keys kind, order, seed, rel_tol, abs_tol and checks set fields; anything
// else is a parameter.
void apply_entries(ScenarioSpec& spec, const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace foliation
