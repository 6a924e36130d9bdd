#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "foliation/errors.hpp"
#include "foliation/gallery.hpp"
#include "foliation/parser.hpp"
#include "foliation/scenario.hpp"

using namespace foliation;

namespace {

struct Globals {
    std::string format = "text";
    std::optional<std::uint64_t> seed;
    std::optional<int> order;
    std::optional<double> rel_tol, abs_tol;
    std::string scenario_file;
    bool timings = false;
};

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("FOLIATION_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (errno != 0 || *end != '\0') throw PreconditionError(std::string("FOLIATION_SEED is not an integer: ") + s);
    return v;
}

// Command-line values win over gallery defaults; FOLIATION_SEED only
// replaces a default seed.
void apply_globals(ScenarioSpec& s, const Globals& g, bool seed_from_file) {
    if (g.seed)
        s.seed = *g.seed;
    else if (!seed_from_file)
        if (auto e = env_seed()) s.seed = *e;
    if (g.order) s.order = *g.order;
    if (g.rel_tol) s.rel_tol = g.rel_tol;
    if (g.abs_tol) s.abs_tol = g.abs_tol;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool section_sets_seed(const ScenarioSection& sec) {
    for (const auto& [k, v] : sec.entries)
        if (k == "seed") return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formal first integrals, focal values and holonomy of holomorphic foliations"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", g.seed, "seed for randomized scenarios");
    app.add_option("--order", g.order, "truncation order N");
    app.add_option("--tol-rel", g.rel_tol, "integrator relative tolerance");
    app.add_option("--tol-abs", g.abs_tol, "integrator absolute tolerance");
    app.add_option("--scenario-file", g.scenario_file, "file with [scenario.<name>] sections")->check(CLI::ExistingFile);
    app.add_flag("--timings", g.timings, "include wall-clock timings in reports");

    ScenarioSpec spec;
    std::string form, field, family, q, coeffs, expect;
    int nvars = 0, count = 0, chart = 0;
    double x0 = 0.2;
    std::string gallery_name;
    bool list = false;

    auto add_form = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("form", form, "one-form, e.g. \"d(x*y)\"");
        if (required) o->required();
        sub->add_option("--nvars", nvars, "pad the variable universe to this many variables");
    };
    auto add_field = [&](CLI::App* sub) {
        sub->add_option("--field", field, "planar field \"P, Q\"");
        sub->add_option("--family", family, "rotation | hamiltonian | reversible | weak-focus");
    };

    auto* check = app.add_subcommand("check", "integrability and leading jet");
    add_form(check, true);
    auto* fi = app.add_subcommand("first-integral", "solve omega = g df through order N");
    add_form(fi, true);
    fi->add_option("--q", q, "leading homogeneous polynomial Q");
    fi->add_option("--expect", expect, "solved | obstructed");
    auto* focal = app.add_subcommand("focal", "focal values of a planar center");
    add_form(focal, false);
    add_field(focal);
    focal->add_option("--count", count, "number of focal values to report");
    auto* bl = app.add_subcommand("blowup", "quadratic blow-up chart");
    add_form(bl, true);
    bl->add_option("--chart", chart, "chart index j")->check(CLI::NonNegativeNumber);
    auto* hol = app.add_subcommand("holonomy", "holonomy germ of the exceptional divisor");
    add_form(hol, true);
    hol->add_option("--chart", chart, "chart index j")->check(CLI::Range(0, 1));
    auto* poin = app.add_subcommand("poincare", "first return map on the positive x-axis");
    add_form(poin, false);
    add_field(poin);
    poin->add_option("--x0", x0, "seed on the transversal")->check(CLI::PositiveNumber);
    auto* rs = app.add_subcommand("restrict", "restrict to x_n = sum a_j x_j");
    add_form(rs, true);
    rs->add_option("--coeffs", coeffs, "a_1,...,a_{n-1}")->required();
    auto* gal = app.add_subcommand("gallery", "run named scenarios (all when no name is given)");
    gal->add_option("name", gallery_name, "scenario name");
    gal->add_flag("--list", list, "list scenario names and kinds");
    auto* run = app.add_subcommand("run", "run every section of --scenario-file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const ReportFormat fmt = parse_format(g.format);
        std::vector<ScenarioSpec> specs;
        auto adhoc = [&](const std::string& name, const std::string& kind) {
            ScenarioSpec s;
            s.name = name;
            s.kind = kind;
            if (!form.empty()) s.params["form"] = form;
            if (nvars > 0) s.params["nvars"] = std::to_string(nvars);
            if (!field.empty()) s.params["field"] = field;
            if (!family.empty()) s.params["family"] = family;
            apply_globals(s, g, false);
            return s;
        };

        if (*check) {
            specs.push_back(adhoc("check", "check"));
        } else if (*fi) {
            auto s = adhoc("first-integral", "first-integral");
            if (!q.empty()) s.params["q"] = q;
            if (!expect.empty()) s.params["expect"] = expect;
            specs.push_back(s);
        } else if (*focal) {
            auto s = adhoc("focal", "focal");
            if (count > 0) s.params["count"] = std::to_string(count);
            specs.push_back(s);
        } else if (*bl) {
            auto s = adhoc("blowup", "blowup");
            s.params["chart"] = std::to_string(chart);
            specs.push_back(s);
        } else if (*hol) {
            auto s = adhoc("holonomy", "holonomy");
            s.params["chart"] = std::to_string(chart);
            specs.push_back(s);
        } else if (*poin) {
            auto s = adhoc("poincare", "poincare");
            std::ostringstream o;
            o.precision(17);
            o << x0;
            s.params["x0"] = o.str();
            specs.push_back(s);
        } else if (*rs) {
            auto s = adhoc("restrict", "restrict");
            s.params["coeffs"] = coeffs;
            specs.push_back(s);
        } else if (*gal) {
            if (list) {
                for (const auto& s : gallery_list()) std::cout << s.name << "\t" << s.kind << "\n";
                return 0;
            }
            if (gallery_name.empty()) {
                specs = gallery_list();
            } else {
                auto s = gallery_find(gallery_name);
                if (!s) throw PreconditionError("no gallery scenario named '" + gallery_name + "'");
                specs.push_back(*s);
            }
            for (auto& s : specs) apply_globals(s, g, false);
        } else if (*run) {
            if (g.scenario_file.empty()) throw PreconditionError("run needs --scenario-file");
        }

        if (!g.scenario_file.empty()) {
            auto sections = parse_scenario_file(read_file(g.scenario_file));
            auto from_file = specs_from_sections(sections);
            if (*gal && !gallery_name.empty()) {
                // the file may refine the selected entry
                for (std::size_t i = 0; i < sections.size(); ++i)
                    if (from_file[i].name == gallery_name) {
                        specs = {from_file[i]};
                        apply_globals(specs[0], g, section_sets_seed(sections[i]));
                    }
            } else if (*run) {
                for (std::size_t i = 0; i < sections.size(); ++i) {
                    apply_globals(from_file[i], g, section_sets_seed(sections[i]));
                    specs.push_back(from_file[i]);
                }
            }
        }

        std::vector<ScenarioReport> reports;
        RunOptions ro;
        ro.timings = g.timings;
        for (const auto& s : specs) reports.push_back(run_scenario(s, ro));
        std::cout << emit_report(reports, fmt);
        for (const auto& r : reports)
            if (r.failed()) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "foliation: " << e.what() << "\n";
        return 2;
    }
}
