#include <doctest.h>

#include <sstream>

#include "foliation/errors.hpp"
#include "foliation/gallery.hpp"
#include "foliation/generators.hpp"
#include "foliation/parser.hpp"
#include "foliation/report.hpp"
#include "foliation/scenario.hpp"

using namespace foliation;

TEST_SUITE_BEGIN("harness");

namespace {

KForm form(const char* text, ParseOptions po = {}) { return parse_form(text, po); }

const CheckResult* find_check(const ScenarioReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> gallery_forms() {
    std::vector<std::string> out;
    for (const auto& s : gallery_list())
        for (const char* key : {"form", "expect_strict"})
            if (s.has(key)) out.push_back(s.get(key));
    return out;
}

}  // namespace

TEST_CASE("parser: the counterexample form") {
    ParseOptions po;
    po.order = 8;
    po.min_nvars = 3;
    auto fe = parse_expression("d(x^4 + y^4) - 2*x^2*y^2 * dy", po);
    CHECK(fe.universe == std::vector<std::string>{"x", "y", "z"});
    KForm w = to_form(fe, 8);
    auto x = TruncatedSeries::variable(3, 8, 0), y = TruncatedSeries::variable(3, 8, 1);
    CHECK(w.component(0) == scale(power(x, 3), GaussianRational(4)));
    CHECK(w.component(1) == scale(power(y, 3), GaussianRational(4)) - scale(x * x * y * y, GaussianRational(2)));
    CHECK(w.component(2).is_zero());
}

TEST_CASE("parser: d(xy) and the dual form of the rotation") {
    KForm a = form("d(x*y)");
    CHECK(a.component(0) == TruncatedSeries::variable(2, a.order(), 1));
    CHECK(a.component(1) == TruncatedSeries::variable(2, a.order(), 0));
    KForm b = form("x1*dx2 - x2*dx1");
    CHECK(b.nvars() == 2);
    CHECK(b.component(0) == -TruncatedSeries::variable(2, b.order(), 1));
    CHECK(b.component(1) == TruncatedSeries::variable(2, b.order(), 0));
    // juxtaposition, rationals, parentheses, precedence
    CHECK(form("2 x dy") == form("2*x*dy"));
    CHECK(form("(x + y)^2 dx") == form("x^2*dx + 2*x*y*dx + y^2*dx"));
    CHECK(form("-x^2 dy") == form("-(x^2)*dy"));
    CHECK(form("1/2*d(x^2)") == form("x*dx"));
}

TEST_CASE("parser: errors carry line and column") {
    auto expect_error = [](const char* text, int col) {
        try {
            parse_expression(text);
            FAIL("no error for " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(e.column() == col);
        }
    };
    expect_error("x + * y", 5);
    expect_error("x + w", 5);
    expect_error("d(x", 4);
    expect_error("1.5*x", 2);
    CHECK_THROWS_AS(parse_expression("x + x1"), ParseError);
    CHECK_THROWS_AS(form("dx*dy"), PreconditionError);
    CHECK_THROWS_AS(form("x + dy"), PreconditionError);
    CHECK_THROWS_AS(form("d(x*dy)"), PreconditionError);
    CHECK_THROWS_AS(parse_function("x*dy"), PreconditionError);
    ParseOptions po;
    po.universe = {"x", "t"};
    CHECK_THROWS_AS(parse_expression("x*dy", po), ParseError);
    try {
        parse_expression("x +\n  ^ y");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("parser: print round-trips the gallery corpus") {
    auto corpus = gallery_forms();
    corpus.insert(corpus.end(), {"x1*dx2 - x2*dx1", "-(x - y)^3*dz + 1/3*d(x*y*z)", "2 x dy - (-x) dx", "d(d(x))"});
    for (const auto& text : corpus) {
        auto fe = parse_expression(text);
        auto again = parse_expression(print(fe.ast));
        CHECK_MESSAGE(again.ast == fe.ast, text << " -> " << print(fe.ast));
        CHECK(print(again.ast) == print(fe.ast));
    }
}

TEST_CASE("parser: fields and variable names") {
    auto X = parse_field("-y + x^2, x");
    REQUIRE(X.size() == 2);
    CHECK(X[1] == TruncatedSeries::variable(2, X[1].order(), 0));
    CHECK(variable_names(3) == std::vector<std::string>{"x", "y", "z"});
    CHECK(variable_names(2, true) == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("report: json round trip and formats") {
    ScenarioReport r;
    r.scenario = {{"name", "demo"}, {"kind", "check"}};
    r.provenance.version = "1.2.3";
    r.checks.push_back({"a", Verdict::pass, "exact", "fine", "", {{"k", 1}}, 0.0});
    r.checks.push_back({"b", Verdict::fail, "1e-8", "too big, \"quoted\"", "", nlohmann::json::object(), 0.0});
    r.checks.push_back({"c", Verdict::inconclusive, "exact", "skipped", "b", nlohmann::json::object(), 0.0});
    auto j = to_json(r);
    CHECK(j["checks"].size() == 3);
    CHECK(report_from_json(j) == r);
    auto text = emit_report(r, ReportFormat::json);
    auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["schema_version"] == kReportSchemaVersion);
    CHECK(report_from_json(parsed["reports"][0]) == r);

    auto csv = emit_report(r, ReportFormat::csv);
    int lines = 0;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 1 + 3);

    auto txt = emit_report(r, ReportFormat::text);
    CHECK(txt.find("fail") != std::string::npos);
    CHECK(txt.find("inconclusive") != std::string::npos);
    CHECK(r.failed());
    CHECK(r.count(Verdict::pass) == 1);
    CHECK_THROWS(parse_format("xml"));
    CHECK(parse_verdict("inconclusive") == Verdict::inconclusive);
}

TEST_CASE("report: inconclusive checks do not fail a report") {
    ScenarioReport r;
    r.checks.push_back({"a", Verdict::pass, "exact", "", "", nlohmann::json::object(), 0.0});
    r.checks.push_back({"b", Verdict::inconclusive, "1e-8", "", "a", nlohmann::json::object(), 0.0});
    CHECK_FALSE(r.failed());
    r.checks[0].verdict = Verdict::fail;
    CHECK(r.failed());
}

TEST_CASE("scenario: dependent checks are blocked, never dropped") {
    ScenarioSpec s;
    s.name = "bad";
    s.kind = "first-integral";
    s.params["form"] = "d(x^2 + y^2 + z^2) + x^2*dy";
    s.order = 6;
    auto r = run_scenario(s);
    const auto* integ = find_check(r, "integrable");
    REQUIRE(integ);
    CHECK(integ->verdict == Verdict::fail);
    const auto* solve = find_check(r, "solve");
    REQUIRE(solve);
    CHECK(solve->verdict == Verdict::inconclusive);
    CHECK(solve->blocked_by == "integrable");
    for (const auto& c : r.checks)
        if (c.verdict == Verdict::inconclusive) CHECK_FALSE(c.blocked_by.empty());
}

TEST_CASE("scenario: parse failures become a failed input check") {
    ScenarioSpec s;
    s.name = "typo";
    s.kind = "check";
    s.params["form"] = "d(x*";
    auto r = run_scenario(s);
    REQUIRE(!r.checks.empty());
    CHECK(r.checks[0].name == "input");
    CHECK(r.checks[0].verdict == Verdict::fail);
    CHECK(r.failed());
}

TEST_CASE("scenario: validation") {
    ScenarioSpec s;
    s.name = "x";
    s.kind = "nope";
    CHECK_THROWS_AS(validate(s), PreconditionError);
    s.kind = "check";
    s.params["colour"] = "red";
    CHECK_THROWS_AS(validate(s), PreconditionError);
    s.params.clear();
    s.params["form"] = "d(x*y)";
    s.checks = {"no-such-check"};
    CHECK_THROWS_AS(validate(s), PreconditionError);
    s.checks = {"leading-jet"};
    validate(s);
    // a subset pulls in its dependencies
    auto r = run_scenario(s);
    CHECK(r.checks.size() == 2);
    CHECK(r.checks[0].name == "input");
    CHECK(r.checks[1].name == "leading-jet");
}

TEST_CASE("scenario: numeric claims name their tolerance") {
    auto s = *gallery_find("holonomy-xy");
    auto r = run_scenario(s);
    for (const auto& c : r.checks) CHECK_FALSE(c.tolerance.empty());
    CHECK(find_check(r, "multiplier")->tolerance == "1e-06");
    CHECK(find_check(r, "blowup")->tolerance == "exact");
}

TEST_CASE("scenario file sections") {
    const char* text = R"(# overrides
[scenario.pham-invariance]
seed = 9
order = 6

[scenario.mine]
kind = check
form = "d(x*y) + x^2*dy"
checks = integrable, leading-jet
)";
    auto secs = parse_scenario_file(text);
    REQUIRE(secs.size() == 2);
    CHECK(secs[1].entries.size() == 3);
    auto specs = specs_from_sections(secs);
    CHECK(specs[0].kind == "pham-invariance");
    CHECK(specs[0].seed == 9);
    CHECK(specs[0].order == 6);
    CHECK(specs[0].get("d") == "3");
    CHECK(specs[1].checks == std::vector<std::string>{"integrable", "leading-jet"});
    CHECK(specs[1].get("form") == "d(x*y) + x^2*dy");
    CHECK_THROWS_AS(parse_scenario_file("form = x"), ParseError);
    CHECK_THROWS_AS(parse_scenario_file("[scenario.a]\nnonsense"), ParseError);
    CHECK_THROWS_AS(specs_from_sections(parse_scenario_file("[scenario.new]\nform = x")), PreconditionError);
}

TEST_CASE("gallery: named scenarios with fixed seeds") {
    const auto& g = gallery_list();
    CHECK(g.size() >= 10);
    for (const char* name : {"holonomy-xy", "counterexample-r2", "pham-invariance", "reeb-full-rank",
                             "restriction-chain", "totally-real-fg", "linear-center", "weak-focus",
                             "parabolic-demo", "exterior-suite"})
        CHECK_MESSAGE(gallery_find(name).has_value(), name);
    CHECK_FALSE(gallery_find("missing").has_value());
    auto pham = *gallery_find("pham-invariance");
    CHECK(pham.seed == 7);
    CHECK(pham.get("r") == "3");
    CHECK(pham.get("n") == "4");
    CHECK(pham.get("d") == "3");
    CHECK(gallery_find("reeb-full-rank")->order == 8);
}

TEST_CASE("determinism: identical specs give byte-identical json") {
    for (const char* name : {"pham-invariance", "weak-focus", "restriction-chain", "holonomy-xy"}) {
        auto s = *gallery_find(name);
        auto a = emit_report(run_scenario(s), ReportFormat::json);
        auto b = emit_report(run_scenario(s), ReportFormat::json);
        CHECK_MESSAGE(a == b, name);
    }
    // different seeds give different examples
    CHECK(pham_example(3, 4, 3, 1, 6).phi != pham_example(3, 4, 3, 2, 6).phi);
    SeededRng a(derive_seed(5, 1)), b(derive_seed(5, 1));
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    CHECK(derive_seed(5, 1) != derive_seed(5, 2));
}

TEST_CASE("generators draw from the documented coefficient set") {
    SeededRng rng(derive_seed(3, 0));
    for (int i = 0; i < 200; ++i) {
        Rational c = rng.small_coefficient();
        Rational a = abs(c);
        CHECK((a == 1 || a == Rational(1, 2) || a == Rational(1, 3)));
    }
    for (int i = 0; i < 100; ++i) {
        int k = rng.below(7);
        CHECK((k >= 0 && k < 7));
    }
}

TEST_SUITE_END();
