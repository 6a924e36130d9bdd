#include "foliation/gallery.hpp"

#include "foliation/errors.hpp"

namespace foliation {

namespace {

ScenarioSpec make(std::string name, std::string kind, std::map<std::string, std::string> params, int order = 10,
                  std::uint64_t seed = 1) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.kind = std::move(kind);
    s.params = std::move(params);
    s.order = order;
    s.seed = seed;
    return s;
}

std::vector<ScenarioSpec> build() {
    std::vector<ScenarioSpec> g;
    g.push_back(make("holonomy-xy", "holonomy",
                     {{"form", "d(x*y)"},
                      {"chart", "0"},
                      {"multiplier_tol", "1e-6"},
                      {"period_two_tol", "1e-8"},
                      {"stability_tol", "1e-7"}}));
    g.push_back(make("holonomy-xy-perturbed", "holonomy",
                     {{"form", "d(x*y + x^2*y^2)"},
                      {"chart", "0"},
                      {"seed_radius", "0.1"},
                      {"multiplier_tol", "1e-6"},
                      {"period_two_tol", "1e-5"}}));
    // the loop around t = i avoids both divisor points +-i
    g.push_back(make("linear-center", "planar-center",
                     {{"form", "d(x^2 + y^2)"},
                      {"expect_focal", "zero"},
                      {"expect_probe", "closed"},
                      {"displacement_tol", "1e-10"},
                      {"holonomy", "1"},
                      {"center_im", "1"},
                      {"anchor_re", "0"},
                      {"anchor_im", "0"},
                      {"multiplier_tol", "1e-6"},
                      {"period_two_tol", "1e-8"}},
                     12));
    g.push_back(make("hamiltonian-center", "planar-center",
                     {{"family", "hamiltonian"}, {"expect_focal", "zero"}, {"expect_probe", "closed"}}, 12, 11));
    g.push_back(make("reversible-center", "planar-center",
                     {{"family", "reversible"}, {"expect_focal", "zero"}, {"expect_probe", "closed"}}, 12, 21));
    g.push_back(make("weak-focus", "planar-center",
                     {{"family", "weak-focus"}, {"expect_focal", "nonzero"}, {"expect_probe", "recurrent"},
                      {"returnmap", "1"}},
                     12, 31));
    g.push_back(make("counterexample-r2", "first-integral",
                     {{"form", "d(x^4 + y^4) - 2*x^2*y^2*dy"},
                      {"nvars", "3"},
                      {"expect", "obstructed"},
                      {"expect_degree", "4"},
                      {"oracle", "lie"}},
                     12));
    g.push_back(make("pham-invariance", "pham-invariance", {{"r", "3"}, {"n", "4"}, {"d", "3"}}, 10, 7));
    g.push_back(make("pham-quadric", "pham-invariance", {{"r", "3"}, {"n", "3"}, {"d", "2"}}, 10, 3));
    g.push_back(make("pham-quartic", "pham-invariance", {{"r", "3"}, {"n", "4"}, {"d", "4"}}, 10, 5));
    g.push_back(make("reeb-full-rank", "reeb-full-rank", {{"n", "3"}}, 8, 41));
    g.push_back(make("restriction-chain", "restriction-chain", {{"draws", "100"}}, 8, 51));
    g.push_back(make("totally-real-fg", "totally-real", {{"pairs", "10"}, {"points", "5"}}, 8, 61));
    g.push_back(make("parabolic-demo", "parabolic-demo", {{"iterations", "200"}}));
    g.push_back(make("exterior-suite", "exterior-suite", {{"cases", "500"}}, 8, 71));
    g.push_back(make("radial-dicritical", "blowup",
                     {{"form", "x*dy - y*dx"}, {"chart", "0"}, {"expect_dicritical", "1"}, {"expect_strict", "dt"}}));
    g.push_back(make("siegel-linear", "holonomy",
                     {{"form", "x*dy - 2*y*dx"}, {"chart", "0"}, {"multiplier_tol", "1e-6"}}));
    g.push_back(make("xy-blowup", "blowup",
                     {{"form", "d(x*y)"},
                      {"chart", "0"},
                      {"expect_strict", "2*t*dx + x*dt"},
                      {"expect_multiplicity", "1"},
                      {"expect_irreducibility", "reducible"},
                      {"expect_ratio", "-2"}}));
    for (const auto& s : g) validate(s);
    return g;
}

}  // namespace

const std::vector<ScenarioSpec>& gallery_list() {
    static const std::vector<ScenarioSpec> g = build();
    return g;
}

std::optional<ScenarioSpec> gallery_find(std::string_view name) {
    for (const auto& s : gallery_list())
        if (s.name == name) return s;
    return std::nullopt;
}

std::vector<ScenarioSpec> specs_from_sections(const std::vector<ScenarioSection>& sections) {
    std::vector<ScenarioSpec> out;
    for (const auto& sec : sections) {
        ScenarioSpec s;
        if (auto base = gallery_find(sec.name)) s = *base;
        s.name = sec.name;
        apply_entries(s, sec.entries);
        if (s.kind.empty())
            throw PreconditionError("scenario " + sec.name + " (line " + std::to_string(sec.line) + ") has no kind");
        validate(s);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace foliation
