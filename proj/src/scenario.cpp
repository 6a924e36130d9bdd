#include "foliation/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "foliation/blowup.hpp"
#include "foliation/dynamics.hpp"
#include "foliation/errors.hpp"
#include "foliation/first_integral.hpp"
#include "foliation/generators.hpp"
#include "foliation/holonomy.hpp"
#include "foliation/parser.hpp"
#include "foliation/totally_real.hpp"

namespace foliation {

using nlohmann::json;

std::string ScenarioSpec::get(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

int ScenarioSpec::get_int(const std::string& key, int fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw PreconditionError("parameter " + key + " must be an integer, got '" + it->second + "'");
    }
}

double ScenarioSpec::get_double(const std::string& key, double fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw PreconditionError("parameter " + key + " must be a number, got '" + it->second + "'");
    }
}

IntegratorConfig ScenarioSpec::integrator() const {
    IntegratorConfig c;
    if (rel_tol) c.rel_tol = *rel_tol;
    if (abs_tol) c.abs_tol = *abs_tol;
    c.validate();
    return c;
}

json ScenarioSpec::to_json() const {
    IntegratorConfig c;
    if (rel_tol) c.rel_tol = *rel_tol;
    if (abs_tol) c.abs_tol = *abs_tol;
    return {{"name", name},       {"kind", kind},          {"params", params},
            {"order", order},     {"seed", seed},          {"checks", checks},
            {"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}};
}

namespace {

struct Outcome {
    Verdict verdict = Verdict::pass;
    std::string detail;
    std::string tolerance = "exact";
    json values = json::object();
};

Outcome verdict_if(bool ok, std::string detail, json values = json::object(), std::string tol = "exact") {
    return {ok ? Verdict::pass : Verdict::fail, std::move(detail), std::move(tol), std::move(values)};
}

std::string tol_str(double t) {
    std::ostringstream o;
    o << t;
    return o.str();
}

struct Step {
    std::string name;
    std::vector<std::string> deps;
    std::function<Outcome()> run;
};

using Plan = std::vector<Step>;

std::string q(const Rational& r) { return to_string(r); }

json rationals(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(q(r));
    return a;
}

json cplx(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

// ---- shared loaders --------------------------------------------------------

struct FormInput {
    KForm omega{1, 1, 0};
    std::vector<std::string> names;
};

FormInput load_form(const ScenarioSpec& s) {
    if (!s.has("form")) throw PreconditionError("parameter form is required");
    ParseOptions po;
    po.order = s.order;
    po.min_nvars = s.get_int("nvars", 0);
    auto fe = parse_expression(s.get("form"), po);
    return {to_form(fe, s.order), fe.universe};
}

struct FieldInput {
    std::vector<TruncatedSeries> X;
    KForm omega{1, 1, 0};
    std::string description;
};

FieldInput load_field(const ScenarioSpec& s) {
    FieldInput in;
    const int N = s.order;
    if (s.has("form")) {
        auto f = load_form(s);
        if (f.omega.nvars() != 2) throw PreconditionError("a planar form is required");
        in.omega = f.omega;
        in.X = field_of_form(in.omega);
        in.description = f.omega.str(f.names);
        return in;
    }
    if (s.has("field")) {
        ParseOptions po;
        po.order = N;
        in.X = parse_field(s.get("field"), po);
    } else {
        const std::string fam = s.get("family", "rotation");
        if (fam == "rotation")
            in.X = rotation_field(N);
        else if (fam == "hamiltonian")
            in.X = hamiltonian_center(s.seed, N);
        else if (fam == "reversible")
            in.X = reversible_center(s.seed, N);
        else if (fam == "weak-focus")
            in.X = weak_focus(s.seed, N).field;
        else
            throw PreconditionError("unknown family '" + fam + "' (rotation, hamiltonian, reversible, weak-focus)");
    }
    if (in.X.size() != 2) throw PreconditionError("a planar field is required");
    in.omega = form_of_field(in.X);
    const std::vector<std::string> names{"x", "y"};
    in.description = "(" + in.X[0].str(names) + ", " + in.X[1].str(names) + ")";
    return in;
}

std::vector<std::string> chart_names(const std::vector<std::string>& names, int chart) {
    std::vector<std::string> out;
    const int n = static_cast<int>(names.size());
    for (int i = 0; i < n; ++i) {
        if (i == chart)
            out.push_back(names[static_cast<std::size_t>(i)]);
        else if (n == 2)
            out.push_back(chart == 0 ? "t" : "u");
        else
            out.push_back("t" + std::to_string(i + 1));
    }
    return out;
}

std::optional<std::pair<int, int>> prime_power(int d) {
    if (d < 2) return std::nullopt;
    int p = 2;
    while (d % p != 0) ++p;
    int s = 0, m = d;
    while (m % p == 0) {
        m /= p;
        ++s;
    }
    if (m != 1) return std::nullopt;
    return std::make_pair(p, s);
}

std::complex<double> complex_param(const ScenarioSpec& s, const std::string& key, std::complex<double> fallback) {
    return {s.get_double(key + "_re", fallback.real()), s.get_double(key + "_im", fallback.imag())};
}

// Q with dQ equal to the leading part, or nullopt when that part is not exact.
std::optional<TruncatedSeries> leading_potential(const KForm& omega) {
    auto dec = homogeneous_parts(omega);
    if (!dec.leading_index) return std::nullopt;
    const int nu = *dec.leading_index;
    const KForm& lead = *dec.part(nu);
    KForm c = euler_contract(lead);
    TruncatedSeries Q = scale(c.component(0), GaussianRational(Rational(1, nu + 1)));
    if (omega.order() + 1 > Q.order()) return std::nullopt;
    KForm dQ = exterior_derivative(KForm::function(Q.truncate(omega.order() + 1)));
    if (dQ.truncate(std::min(dQ.order(), lead.order())) != lead.truncate(std::min(dQ.order(), lead.order())))
        return std::nullopt;
    return Q.truncate(omega.order() + 1);
}

// ---- generic kinds ---------------------------------------------------------

struct FormState {
    FormInput in;
};

Step input_step(const ScenarioSpec& s, std::shared_ptr<FormState> st) {
    return {"input", {}, [s, st] {
                st->in = load_form(s);
                return Outcome{Verdict::pass, st->in.omega.str(st->in.names), "exact",
                               {{"nvars", st->in.omega.nvars()}, {"order", s.order}, {"variables", st->in.names}}};
            }};
}

Step integrable_step(std::shared_ptr<FormState> st) {
    return {"integrable", {"input"}, [st] {
                const KForm& w = st->in.omega;
                if (w.nvars() < 3) return Outcome{Verdict::pass, "automatic in two variables", "exact", {}};
                auto r = integrability_residual(w);
                return verdict_if(r.is_zero(), r.is_zero() ? "omega ^ d omega = 0" : "omega ^ d omega != 0",
                                  {{"residual_terms", r.coefficients().size()}});
            }};
}

Plan plan_check(const ScenarioSpec& s) {
    auto st = std::make_shared<FormState>();
    Plan p{input_step(s, st), integrable_step(st)};
    p.push_back({"leading-jet", {"input"}, [st] {
                     const KForm& w = st->in.omega;
                     auto dec = homogeneous_parts(w);
                     if (!dec.leading_index) return Outcome{Verdict::fail, "zero form has no leading jet", "exact", {}};
                     const int nu = *dec.leading_index;
                     json v = {{"nu", nu}, {"leading_part", dec.part(nu)->str(st->in.names)}};
                     auto Q = leading_potential(w);
                     v["leading_exact"] = Q.has_value();
                     if (Q) v["Q"] = Q->str(st->in.names);
                     if (nu >= 1) {
                         auto tc = tangent_cone(w);
                         v["tangent_cone"] = tc.P.str(st->in.names);
                         v["dicritical"] = tc.dicritical;
                         v["irreducibility"] = irreducibility_name(tc.verdict);
                     }
                     std::string d = "nu = " + std::to_string(nu) + ", leading part " + dec.part(nu)->str(st->in.names);
                     return Outcome{Verdict::pass, d, "exact", v};
                 }});
    return p;
}

struct SolveState {
    FormInput in;
    TruncatedSeries Q{1, 0};
    std::optional<FirstIntegralOutcome> out;
};

Plan plan_first_integral(const ScenarioSpec& s) {
    auto fs = std::make_shared<FormState>();
    auto st = std::make_shared<SolveState>();
    Plan p{input_step(s, fs), integrable_step(fs)};
    p.push_back({"leading-part", {"input"}, [s, fs, st] {
                     st->in = fs->in;
                     const KForm& w = st->in.omega;
                     if (s.has("q")) {
                         ParseOptions po;
                         po.order = s.order + 1;
                         po.universe = st->in.names;
                         st->Q = parse_function(s.get("q"), po);
                     } else {
                         auto Q = leading_potential(w);
                         if (!Q) return Outcome{Verdict::fail, "leading part is not exact; pass q explicitly", "exact", {}};
                         st->Q = *Q;
                     }
                     if (!st->Q.is_homogeneous()) return Outcome{Verdict::fail, "Q is not homogeneous", "exact", {}};
                     auto dec = homogeneous_parts(w);
                     const int nu = *st->Q.valuation() - 1;
                     KForm dQ = exterior_derivative(KForm::function(st->Q)).truncate(w.order());
                     bool ok = dec.leading_index && *dec.leading_index == nu && *dec.part(nu) == dQ.homogeneous_part(nu);
                     return verdict_if(ok, ok ? "leading part equals dQ" : "leading part differs from dQ",
                                       {{"Q", st->Q.str(st->in.names)}, {"nu", nu}});
                 }});
    p.push_back({"solve", {"integrable", "leading-part"}, [s, st] {
                     st->out = solve_gdf(st->in.omega, st->Q, s.order);
                     const auto& o = *st->out;
                     json v = {{"status", status_name(o.status)}};
                     std::string d;
                     if (o.status == SolveStatus::solved) {
                         v["f"] = o.f.str(st->in.names);
                         v["g"] = o.g.str(st->in.names);
                         d = "solved through order " + std::to_string(s.order);
                     } else {
                         v["degree"] = o.obstruction->degree;
                         v["residual"] = o.obstruction->residual.str(st->in.names);
                         json rc = json::array();
                         for (const auto& c : o.obstruction->residual_class) rc.push_back(c.str());
                         v["residual_class"] = rc;
                         d = "obstructed at degree " + std::to_string(o.obstruction->degree);
                     }
                     const std::string expect = s.get("expect", "any");
                     bool ok = expect == "any" || expect == status_name(o.status);
                     if (!ok) d += " (expected " + expect + ")";
                     return verdict_if(ok, d, v);
                 }});
    p.push_back({"residual", {"solve"}, [s, st] {
                     const auto& o = *st->out;
                     if (o.status == SolveStatus::solved) {
                         KForm r = gdf_residual(st->in.omega, o.f, o.g, s.order);
                         return verdict_if(r.is_zero(), r.is_zero() ? "omega - g df = 0 through N" : "nonzero residual",
                                           {{"residual_terms", r.coefficients().size()}});
                     }
                     bool nz = !o.obstruction->residual.is_zero();
                     return verdict_if(nz, nz ? "stage residual is nonzero" : "obstruction with zero residual", {});
                 }});
    if (s.has("expect_degree"))
        p.push_back({"expect-degree", {"solve"}, [s, st] {
                         const int want = s.get_int("expect_degree", 0);
                         const auto& o = *st->out;
                         int got = o.obstruction ? o.obstruction->degree : -1;
                         return verdict_if(got == want,
                                           "obstruction degree " + std::to_string(got) + ", frozen value " +
                                               std::to_string(want),
                                           {{"degree", got}, {"expected", want}});
                     }});
    if (s.get("oracle", "none") == "lie")
        p.push_back({"lie-oracle", {"solve"}, [s, st] {
                         // planar slice x_k = 0 for k >= 3, then the dual field
                         KForm w = st->in.omega;
                         TruncatedSeries Q = st->Q;
                         while (w.nvars() > 2) {
                             std::vector<Rational> zero(static_cast<std::size_t>(w.nvars() - 1), Rational(0));
                             w = restrict_hyperplane(w, zero);
                             std::vector<TruncatedSeries> img;
                             const int m = Q.nvars() - 1;
                             for (int j = 0; j < m; ++j) img.push_back(TruncatedSeries::variable(m, Q.order(), j));
                             img.push_back(TruncatedSeries(m, Q.order()));
                             Q = substitute(Q, img);
                         }
                         auto X = dual_field(w);
                         auto lie = lie_first_integral(X, Q.truncate(s.order), s.order);
                         const auto& o = *st->out;
                         json v = {{"status", status_name(lie.status)}};
                         if (lie.obstruction_degree) v["degree"] = *lie.obstruction_degree;
                         bool same = o.status == lie.status &&
                                     (!o.obstruction || (lie.obstruction_degree && *lie.obstruction_degree == o.obstruction->degree));
                         std::string d = lie.obstruction_degree
                                             ? "Lie recursion obstructed at degree " + std::to_string(*lie.obstruction_degree)
                                             : "Lie recursion solved";
                         return verdict_if(same, d, v);
                     }});
    return p;
}

struct FocalState {
    FieldInput in;
    std::optional<FocalValueSequence> lie, obs;
};

void add_focal_steps(Plan& p, const ScenarioSpec& s, std::shared_ptr<FocalState> st) {
    p.push_back({"input", {}, [s, st] {
                     st->in = load_field(s);
                     return Outcome{Verdict::pass, st->in.description, "exact", {{"order", s.order}}};
                 }});
    const int count = s.get_int("count", 0);
    auto clip = [count](FocalValueSequence seq) {
        if (count > 0 && static_cast<int>(seq.values.size()) > count) {
            seq.values.resize(static_cast<std::size_t>(count));
            seq.indices.resize(static_cast<std::size_t>(count));
        }
        return seq;
    };
    auto describe = [](const FocalValueSequence& seq) {
        json v = {{"method", method_name(seq.method)}, {"indices", seq.indices}, {"values", rationals(seq.values)},
                  {"continued_modulo_earlier", seq.continued_modulo_earlier}};
        auto first = seq.first_nonzero_index();
        v["first_nonzero"] = first ? json(*first) : json(nullptr);
        std::string d = first ? "first nonzero V" + std::to_string(*first) + " = " + q(*seq.value_at(*first))
                              : "all " + std::to_string(seq.values.size()) + " values zero";
        return Outcome{Verdict::pass, d, "exact", v};
    };
    p.push_back({"lie", {"input"}, [s, st, clip, describe] {
                     st->lie = clip(solve_lie(st->in.X, s.order));
                     return describe(*st->lie);
                 }});
    p.push_back({"obstruction", {"input"}, [s, st, clip, describe] {
                     st->obs = clip(focal_values_from_obstructions(st->in.omega, s.order));
                     return describe(*st->obs);
                 }});
    p.push_back({"agreement", {"lie", "obstruction"}, [st] {
                     auto a = st->lie->first_nonzero_index(), b = st->obs->first_nonzero_index();
                     json v = {{"lie_first", a ? json(*a) : json(nullptr)}, {"obstruction_first", b ? json(*b) : json(nullptr)}};
                     if (a && b && *a == *b) {
                         Rational r = *st->obs->value_at(*a) / *st->lie->value_at(*a);
                         v["ratio"] = q(r);
                         return Outcome{Verdict::pass, "same first index " + std::to_string(*a) + ", ratio " + q(r), "exact", v};
                     }
                     bool ok = !a && !b;
                     return verdict_if(ok, ok ? "both sequences vanish" : "first nonzero indices differ", v);
                 }});
    if (s.has("expect_focal"))
        p.push_back({"focal-expectation", {"agreement"}, [s, st] {
                         const std::string e = s.get("expect_focal");
                         if (e != "zero" && e != "nonzero") throw PreconditionError("expect_focal must be zero or nonzero");
                         bool nz = st->lie->first_nonzero_index().has_value();
                         return verdict_if(nz == (e == "nonzero"), std::string("focal values ") + (nz ? "nonzero" : "all zero") +
                                                                      ", expected " + e);
                     }});
}

void add_numeric_center_steps(Plan& p, const ScenarioSpec& s, std::shared_ptr<FocalState> st) {
    const std::string gate = s.has("expect_focal") ? "focal-expectation" : "agreement";
    PoincareConfig pc;
    pc.integrator = s.integrator();
    if (s.has("expect_probe")) {
        const double tol = s.get_double("probe_tol", 1e-8);
        p.push_back({"probe", {gate}, [s, st, pc, tol] {
                         auto pr = leaf_closedness_probe(st->in.X, standard_seed_grid(), tol, pc);
                         json seeds = json::array();
                         for (std::size_t i = 0; i < pr.samples.size(); ++i)
                             seeds.push_back({{"x0", pr.samples[i].x0},
                                              {"displacement", pr.samples[i].displacement},
                                              {"status", status_name(pr.samples[i].status)},
                                              {"verdict", verdict_name(pr.verdicts[i])}});
                         const std::string e = s.get("expect_probe");
                         LeafVerdict want = e == "closed" ? LeafVerdict::closed : LeafVerdict::recurrent_nonclosed;
                         if (e != "closed" && e != "recurrent") throw PreconditionError("expect_probe must be closed or recurrent");
                         bool ok = pr.all(want);
                         std::string d = std::string(ok ? "all seeds " : "not all seeds ") + verdict_name(want);
                         json v = {{"seeds", seeds}, {"sign", pr.sign}};
                         if (ok && want == LeafVerdict::recurrent_nonclosed) {
                             auto first = st->lie->first_nonzero_index();
                             int predicted = first ? sgn(*st->lie->value_at(*first)) : 0;
                             v["predicted_sign"] = predicted;
                             ok = predicted == pr.sign;
                             d += ok ? ", displacement sign matches the focal value" : ", sign differs from the focal value";
                         }
                         return verdict_if(ok, d, v, tol_str(tol));
                     }});
    }
    if (s.has("displacement_tol")) {
        const double tol = s.get_double("displacement_tol", 1e-10);
        const double x0 = s.get_double("x0", 0.2);
        p.push_back({"displacement", {gate}, [st, pc, tol, x0] {
                         auto r = poincare_return(st->in.X, x0, pc);
                         bool ok = r.status == ReturnStatus::returned && std::abs(r.displacement) <= tol;
                         return verdict_if(ok, "d(" + tol_str(x0) + ") = " + tol_str(r.displacement),
                                           {{"x0", x0}, {"displacement", r.displacement}, {"status", status_name(r.status)},
                                            {"transit_time", r.transit_time}},
                                           tol_str(tol));
                     }});
    }
    if (s.get("returnmap", "0") == "1") {
        const double tol = s.get_double("returnmap_tol", 0.02);
        p.push_back({"returnmap-fit", {gate}, [st, pc, tol] {
                         auto first = st->lie->first_nonzero_index();
                         if (!first) return Outcome{Verdict::pass, "no nonzero focal value to fit", tol_str(tol), {}};
                         const std::vector<double> radii{0.02, 0.04};
                         auto fit = returnmap_focal_fit(st->in.X, radii, pc);
                         const double exact = to_double(*st->lie->value_at(*first));
                         const double rel = std::abs(fit.value - exact) / std::abs(exact);
                         bool ok = fit.index == *first && rel <= tol;
                         return verdict_if(ok,
                                           "fitted V" + std::to_string(fit.index) + " = " + tol_str(fit.value) +
                                               ", exact " + tol_str(exact),
                                           {{"index", fit.index}, {"value", fit.value}, {"exact", exact},
                                            {"slope", fit.slope}, {"relative_error", rel}},
                                           tol_str(tol));
                     }});
    }
}

struct HolonomyState {
    std::optional<BlowupChart> chart;
    std::optional<HolonomyGerm> germ;
    std::complex<double> model{1, 0};
};

void add_holonomy_steps(Plan& p, const ScenarioSpec& s, std::function<KForm()> form, std::string gate,
                        std::function<std::vector<std::string>()> names) {
    auto st = std::make_shared<HolonomyState>();
    const int chart = s.get_int("chart", 0);
    HolonomyLoop loop{complex_param(s, "center", {0, 0}), complex_param(s, "anchor", {1, 0})};
    HolonomyConfig hc;
    hc.integrator = s.integrator();
    hc.angle_offset = s.get_double("angle_offset", 0.0);
    if (s.has("seed_radius")) {
        const double r = s.get_double("seed_radius", 0.05);
        hc.radii = {r / 4, r / 2, r};
    }
    std::vector<std::string> deps;
    if (!gate.empty()) deps.push_back(gate);
    p.push_back({"blowup", deps, [st, form, chart, names] {
                     st->chart = blowup(form(), chart);
                     auto cn = chart_names(names(), chart);
                     return Outcome{Verdict::pass, "strict transform " + st->chart->strict_transform.str(cn), "exact",
                                    {{"divisor_multiplicity", st->chart->divisor_multiplicity},
                                     {"dicritical", st->chart->dicritical}}};
                 }});
    p.push_back({"holonomy", {"blowup"}, [st, loop, hc] {
                     st->germ = holonomy_germ(*st->chart, loop, hc);
                     st->model = linear_model_multiplier(*st->chart, loop);
                     const auto& g = *st->germ;
                     json coeffs = json::array();
                     for (auto c : g.coefficients) coeffs.push_back(cplx(c));
                     return Outcome{Verdict::pass,
                                    "a1 = " + tol_str(g.coefficients[0].real()) + " + " +
                                        tol_str(g.coefficients[0].imag()) + "i",
                                    tol_str(hc.integrator.rel_tol),
                                    {{"coefficients", coeffs}, {"abs_a1", g.abs_a1}, {"arg_a1", g.arg_a1},
                                     {"fit_residual", g.fit_residual}, {"period_two_defect", g.period_two_defect},
                                     {"seeds", g.samples.size()}, {"dropped", g.dropped},
                                     {"linear_model", cplx(st->model)}}};
                 }});
    const double mtol = s.get_double("multiplier_tol", 1e-6);
    p.push_back({"multiplier", {"holonomy"}, [st, mtol] {
                     const double err = std::abs(st->germ->coefficients[0] - st->model);
                     return verdict_if(err <= mtol, "|a1 - linear model| = " + tol_str(err), {{"error", err}}, tol_str(mtol));
                 }});
    if (s.has("period_two_tol")) {
        const double tol = s.get_double("period_two_tol", 1e-8);
        p.push_back({"period-two", {"holonomy"}, [st, tol] {
                         const double d = st->germ->period_two_defect;
                         return verdict_if(d <= tol, "sup |h(h(x0)) - x0| = " + tol_str(d), {{"defect", d}}, tol_str(tol));
                     }});
    }
    if (s.has("stability_tol")) {
        const double tol = s.get_double("stability_tol", 1e-7);
        p.push_back({"fan-stability", {"holonomy"}, [st, loop, hc, tol] {
                         HolonomyConfig rotated = hc;
                         rotated.angle_offset += std::numbers::pi / 8;
                         rotated.period_two = false;
                         auto g2 = holonomy_germ(*st->chart, loop, rotated);
                         const double d = std::abs(g2.coefficients[0] - st->germ->coefficients[0]);
                         return verdict_if(d <= tol, "rotated fan changes a1 by " + tol_str(d), {{"change", d}}, tol_str(tol));
                     }});
    }
}

Plan plan_focal(const ScenarioSpec& s) {
    auto st = std::make_shared<FocalState>();
    Plan p;
    add_focal_steps(p, s, st);
    add_numeric_center_steps(p, s, st);
    return p;
}

Plan plan_planar_center(const ScenarioSpec& s) {
    auto st = std::make_shared<FocalState>();
    Plan p;
    add_focal_steps(p, s, st);
    add_numeric_center_steps(p, s, st);
    if (s.get("holonomy", "0") == "1")
        add_holonomy_steps(
            p, s, [st] { return st->in.omega; }, "input", [] { return std::vector<std::string>{"x", "y"}; });
    return p;
}

Plan plan_blowup(const ScenarioSpec& s) {
    auto fs = std::make_shared<FormState>();
    auto ch = std::make_shared<std::optional<BlowupChart>>();
    const int chart = s.get_int("chart", 0);
    Plan p{input_step(s, fs)};
    p.push_back({"blowup", {"input"}, [s, fs, ch, chart] {
                     *ch = blowup(fs->in.omega, chart);
                     const auto& c = **ch;
                     auto cn = chart_names(fs->in.names, chart);
                     json v = {{"pullback", c.pullback.str(cn)},
                               {"strict_transform", c.strict_transform.str(cn)},
                               {"divisor_multiplicity", c.divisor_multiplicity},
                               {"dicritical", c.dicritical},
                               {"variables", cn}};
                     bool ok = true;
                     std::string d = "strict transform " + c.strict_transform.str(cn);
                     if (s.has("expect_strict")) {
                         ParseOptions po;
                         po.order = c.strict_transform.order();
                         po.universe = cn;
                         KForm want = parse_form(s.get("expect_strict"), po);
                         ok = want == c.strict_transform;
                         if (!ok) d += ", expected " + want.str(cn);
                     }
                     if (s.has("expect_multiplicity") && s.get_int("expect_multiplicity", 0) != c.divisor_multiplicity) {
                         ok = false;
                         d += ", multiplicity " + std::to_string(c.divisor_multiplicity);
                     }
                     return verdict_if(ok, d, v);
                 }});
    p.push_back({"tangent-cone", {"input"}, [s, fs] {
                     auto tc = tangent_cone(fs->in.omega);
                     json v = {{"P", tc.P.str(fs->in.names)},     {"nu", tc.nu},
                               {"dicritical", tc.dicritical},     {"irreducibility", irreducibility_name(tc.verdict)},
                               {"reason", tc.reason}};
                     if (tc.witness) v["witness"] = tc.witness->str(fs->in.names);
                     std::string d = tc.dicritical ? "dicritical" : "P = " + tc.P.str(fs->in.names) + ", " +
                                                                         irreducibility_name(tc.verdict);
                     bool ok = true;
                     if (s.has("expect_dicritical")) {
                         bool want = s.get("expect_dicritical") == "1" || s.get("expect_dicritical") == "true";
                         ok = want == tc.dicritical;
                     }
                     if (s.has("expect_irreducibility") && s.get("expect_irreducibility") != irreducibility_name(tc.verdict))
                         ok = false;
                     return verdict_if(ok, d, v);
                 }});
    p.push_back({"divisor", {"blowup"}, [fs, ch, s] {
                     const auto& c = **ch;
                     if (c.strict_transform.nvars() != 2 || c.dicritical)
                         return Outcome{Verdict::pass,
                                        c.dicritical ? "dicritical: divisor not invariant, no singular points"
                                                     : "divisor singularities are computed in two variables only",
                                        "exact", {}};
                     auto sings = divisor_singularities(c);
                     json a = json::array();
                     std::string d;
                     for (const auto& sp : sings) {
                         json e = {{"t", cplx(sp.t)}, {"ratio", cplx(sp.ratio)}, {"siegel", sp.siegel}};
                         if (sp.t_exact) e["t_exact"] = sp.t_exact->str();
                         a.push_back(e);
                         d += (d.empty() ? "" : "; ") + std::string("t = ") +
                              (sp.t_exact ? sp.t_exact->str() : tol_str(sp.t.real()) + "+" + tol_str(sp.t.imag()) + "i") +
                              ", ratio " + tol_str(sp.ratio.real());
                     }
                     bool ok = true;
                     if (s.has("expect_ratio")) {
                         const double want = s.get_double("expect_ratio", 0);
                         for (const auto& sp : sings) ok = ok && std::abs(sp.ratio - want) <= 1e-9;
                     }
                     return verdict_if(ok, d.empty() ? "no singular points on the divisor" : d, {{"points", a}}, "1e-12");
                 }});
    p.push_back({"chart-compatibility", {"blowup"}, [fs, ch] {
                     const KForm& w = fs->in.omega;
                     if (w.nvars() != 2 || (*ch)->dicritical)
                         return Outcome{Verdict::pass, "checked for non-dicritical planar forms only", "1e-9", {}};
                     auto c0 = blowup(w, 0), c1 = blowup(w, 1);
                     const int nu = c0.divisor_multiplicity;
                     double worst = 0;
                     for (int k = 0; k < 10; ++k) {
                         // (u, y) in chart 1 maps to (x, t) = (u y, 1/u) in chart 0
                         const std::complex<double> u = std::polar(0.6 + 0.05 * k, 0.3 + 0.5 * k);
                         const std::complex<double> y = std::polar(0.2 + 0.03 * k, -0.4 + 0.7 * k);
                         const std::complex<double> p1[2] = {u, y};
                         const std::complex<double> p0[2] = {u * y, 1.0 / u};
                         auto s1 = evaluate(c1.strict_transform, p1);
                         auto s0 = evaluate(c0.strict_transform, p0);
                         // psi^*(A dx + B dt) = A (y du + u dy) - B du / u^2
                         const std::complex<double> du = s0[0] * y - s0[1] / (u * u), dy = s0[0] * u;
                         const std::complex<double> f = std::pow(u, nu);
                         const double scale = std::max({1.0, std::abs(s1[0]), std::abs(s1[1])});
                         worst = std::max({worst, std::abs(s1[0] - f * du) / scale, std::abs(s1[1] - f * dy) / scale});
                     }
                     return verdict_if(worst <= 1e-9, "max relative mismatch " + tol_str(worst), {{"mismatch", worst}}, "1e-9");
                 }});
    return p;
}

Plan plan_holonomy(const ScenarioSpec& s) {
    auto fs = std::make_shared<FormState>();
    Plan p{input_step(s, fs)};
    add_holonomy_steps(
        p, s, [fs] { return fs->in.omega; }, "input", [fs] { return fs->in.names; });
    return p;
}

Plan plan_poincare(const ScenarioSpec& s) {
    auto st = std::make_shared<FocalState>();
    Plan p;
    p.push_back({"input", {}, [s, st] {
                     st->in = load_field(s);
                     return Outcome{Verdict::pass, st->in.description, "exact", {}};
                 }});
    PoincareConfig pc;
    pc.integrator = s.integrator();
    const double x0 = s.get_double("x0", 0.2);
    p.push_back({"return", {"input"}, [s, st, pc, x0] {
                     auto r = poincare_return(st->in.X, x0, pc);
                     json v = {{"x0", r.x0},           {"x_return", r.x_return},     {"displacement", r.displacement},
                               {"transit_time", r.transit_time}, {"status", status_name(r.status)}};
                     bool ok = r.status == ReturnStatus::returned;
                     std::string d = std::string(status_name(r.status)) + ", d = " + tol_str(r.displacement);
                     std::string tol = tol_str(pc.integrator.rel_tol);
                     if (ok && s.has("displacement_tol")) {
                         const double t = s.get_double("displacement_tol", 1e-10);
                         ok = std::abs(r.displacement) <= t;
                         tol = tol_str(t);
                     }
                     return verdict_if(ok, d, v, tol);
                 }});
    return p;
}

std::vector<Rational> parse_coeffs(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        out.push_back(parse_rational(item));
    }
    return out;
}

Plan plan_restrict(const ScenarioSpec& s) {
    auto fs = std::make_shared<FormState>();
    auto res = std::make_shared<KForm>(1, 1, 0);
    Plan p{input_step(s, fs)};
    p.push_back({"restrict", {"input"}, [s, fs, res] {
                     auto a = parse_coeffs(s.get("coeffs"));
                     *res = restrict_hyperplane(fs->in.omega, a);
                     std::vector<std::string> names(fs->in.names.begin(), fs->in.names.end() - 1);
                     return Outcome{Verdict::pass, res->str(names), "exact", {{"restricted", res->str(names)}}};
                 }});
    p.push_back({"commutes", {"input"}, [s, fs] {
                     bool ok = complexify_restrict_commutes(fs->in.omega, parse_coeffs(s.get("coeffs")));
                     return verdict_if(ok, ok ? "complexification and restriction commute" : "they differ");
                 }});
    p.push_back({"leading-jet", {"restrict"}, [s, fs, res] {
                     auto dec = homogeneous_parts(fs->in.omega);
                     if (!dec.leading_index) return Outcome{Verdict::fail, "zero form", "exact", {}};
                     KForm lead = restrict_hyperplane(*dec.part(*dec.leading_index), parse_coeffs(s.get("coeffs")));
                     auto rdec = homogeneous_parts(*res);
                     bool ok = lead.is_zero() ? true
                                              : rdec.leading_index && *rdec.leading_index == *dec.leading_index &&
                                                    *rdec.part(*rdec.leading_index) == lead.truncate(rdec.part(*rdec.leading_index)->order());
                     std::string d = lead.is_zero() ? "leading part restricts to zero (degenerate hyperplane)"
                                                    : (ok ? "leading jet of the restriction is the restricted leading jet"
                                                          : "leading jets differ");
                     return verdict_if(ok, d);
                 }});
    return p;
}

// ---- example families ------------------------------------------------------

Plan plan_pham(const ScenarioSpec& s) {
    struct St {
        PhamExample ex;
        std::optional<TangentCone> tc;
        std::optional<FirstIntegralOutcome> out;
    };
    auto st = std::make_shared<St>();
    const int r = s.get_int("r", 3), n = s.get_int("n", 4), d = s.get_int("d", 3);
    Plan p;
    p.push_back({"build", {}, [s, st, r, n, d] {
                     st->ex = pham_example(r, n, d, s.seed, s.order);
                     auto names = variable_names(n, true);
                     return Outcome{Verdict::pass, "omega = dP + P d(phi)", "exact",
                                    {{"P", st->ex.P.str(names)}, {"phi", st->ex.phi.str(names)}}};
                 }});
    p.push_back({"integrable", {"build"}, [st] {
                     bool ok = integrability_residual(st->ex.omega).is_zero();
                     return verdict_if(ok, ok ? "omega ^ d omega = 0" : "omega ^ d omega != 0");
                 }});
    p.push_back({"darboux", {"build"}, [st] {
                     KForm dP = exterior_derivative(KForm::function(st->ex.P));
                     KForm w = wedge(dP.truncate(st->ex.omega.order()), st->ex.omega);
                     KForm rem = divisibility_residual(w, st->ex.P.truncate(w.order()));
                     return verdict_if(rem.is_zero(), rem.is_zero() ? "P divides dP ^ omega" : "nonzero remainder",
                                       {{"remainder_terms", rem.coefficients().size()}});
                 }});
    p.push_back({"tangent-cone", {"build"}, [st, d, n] {
                     st->tc = tangent_cone(st->ex.omega);
                     TruncatedSeries want = scale(st->ex.P, GaussianRational(d)).truncate(st->tc->P.order());
                     bool ok = st->tc->P == want && st->tc->degree == d;
                     return verdict_if(ok, ok ? "tangent cone = " + std::to_string(d) + " P" : "tangent cone differs from d P",
                                       {{"P_cone", st->tc->P.str(variable_names(n, true))}, {"degree", st->tc->degree}});
                 }});
    p.push_back({"non-dicritical", {"tangent-cone"}, [st] {
                     return verdict_if(!st->tc->dicritical, st->tc->dicritical ? "dicritical" : "non-dicritical");
                 }});
    p.push_back({"irreducible", {"tangent-cone"}, [st] {
                     bool ok = st->tc->verdict == Irreducibility::irreducible;
                     return verdict_if(ok, std::string(irreducibility_name(st->tc->verdict)) + ": " + st->tc->reason);
                 }});
    p.push_back({"prime-power", {}, [d] {
                     auto pp = prime_power(d);
                     std::string det = pp ? std::to_string(d) + " = " + std::to_string(pp->first) + "^" + std::to_string(pp->second)
                                          : std::to_string(d) + " is not a prime power";
                     json v = pp ? json{{"prime", pp->first}, {"exponent", pp->second}} : json::object();
                     return verdict_if(pp.has_value(), det, v);
                 }});
    p.push_back({"solve", {"integrable", "tangent-cone"}, [s, st] {
                     st->out = solve_gdf(st->ex.omega, st->ex.P.truncate(s.order), s.order);
                     bool ok = st->out->status == SolveStatus::solved;
                     return verdict_if(ok, ok ? "solved through order " + std::to_string(s.order)
                                              : "obstructed at degree " + std::to_string(st->out->obstruction->degree));
                 }});
    p.push_back({"residual", {"solve"}, [s, st] {
                     KForm r = gdf_residual(st->ex.omega, st->out->f, st->out->g, s.order);
                     return verdict_if(r.is_zero(), r.is_zero() ? "omega - g df = 0 through N" : "nonzero residual");
                 }});
    return p;
}

Plan plan_reeb(const ScenarioSpec& s) {
    struct St {
        ReebExample ex;
        std::optional<FirstIntegralOutcome> out;
        std::optional<CoordinateChange> phi;
    };
    auto st = std::make_shared<St>();
    const int n = s.get_int("n", 3);
    const int N = s.order;
    Plan p;
    p.push_back({"build", {}, [s, st, n, N] {
                     st->ex = reeb_example(n, s.seed, N);
                     auto names = variable_names(n, true);
                     return Outcome{Verdict::pass, "omega = (1 + u) dh", "exact",
                                    {{"h", st->ex.h.str(names)}, {"u", st->ex.u.str(names)}}};
                 }});
    p.push_back({"solve", {"build"}, [st, N] {
                     st->out = solve_gdf(st->ex.omega, st->ex.Q.truncate(N + 1), N);
                     bool ok = st->out->status == SolveStatus::solved && st->out->residual_zero;
                     return verdict_if(ok, ok ? "solved with zero residual through " + std::to_string(N) : "not solved");
                 }});
    p.push_back({"recover", {"solve"}, [st, N] {
                     const auto& o = *st->out;
                     TruncatedSeries one = TruncatedSeries::constant(o.g.nvars(), o.g.order(), GaussianRational(1));
                     bool gok = o.g == (one + st->ex.u).truncate(o.g.order());
                     bool fok = o.f == st->ex.h.truncate(o.f.order());
                     return verdict_if(gok && fok, std::string("g ") + (gok ? "=" : "!=") + " 1 + u, f " + (fok ? "=" : "!=") + " h",
                                       {{"order", N}});
                 }});
    p.push_back({"morse", {"solve"}, [st, N] {
                     st->phi = morse_normalize(st->out->f, N + 1);
                     const auto& c = *st->phi;
                     TruncatedSeries fphi = substitute(st->out->f.truncate(N + 1), c.images);
                     bool ok = fphi == st->ex.Q.truncate(fphi.order());
                     bool inv = true;
                     for (int i = 0; i < static_cast<int>(c.images.size()); ++i) {
                         auto comp = substitute(c.images[static_cast<std::size_t>(i)], c.inverse_images);
                         inv = inv && comp == TruncatedSeries::variable(comp.nvars(), comp.order(), i);
                     }
                     return verdict_if(ok && inv, std::string("f o phi ") + (ok ? "=" : "!=") + " Q, phi o phi^-1 " +
                                                      (inv ? "=" : "!=") + " id through " + std::to_string(N + 1));
                 }});
    p.push_back({"pullback", {"morse"}, [st, N] {
                     const auto& c = *st->phi;
                     KForm pw = pullback(st->ex.omega, c.images);
                     TruncatedSeries gphi = substitute(st->out->g, c.images);
                     KForm dQ = exterior_derivative(KForm::function(st->ex.Q.truncate(N + 1)));
                     KForm rhs(1, pw.nvars(), N, pw.field());
                     for (int i = 0; i < pw.nvars(); ++i) rhs.add({i}, product_through(gphi, dQ.component(i), N));
                     KForm diff = pw.truncate(N) - rhs;
                     return verdict_if(diff.is_zero(), diff.is_zero() ? "phi^* omega = (g o phi) dQ through " + std::to_string(N)
                                                                      : "nonzero residual",
                                       {{"residual_terms", diff.coefficients().size()}});
                 }});
    return p;
}

bool rank_two_positive(const TruncatedSeries& Q2) {
    // quadratic form in two variables: a x^2 + b x y + c y^2
    const Rational a = Q2.coefficient(MultiIndex{}.with(0, 2)).re();
    const Rational b = Q2.coefficient(MultiIndex{}.with(0, 1).with(1, 1)).re();
    const Rational c = Q2.coefficient(MultiIndex{}.with(1, 2)).re();
    return a > 0 && 4 * a * c - b * b > 0;
}

Plan plan_restriction_chain(const ScenarioSpec& s) {
    const int draws = s.get_int("draws", 100);
    const int need = s.get_int("min_preserved", (draws * 95 + 99) / 100);
    auto first = std::make_shared<std::optional<std::pair<KForm, TruncatedSeries>>>();
    Plan p;
    p.push_back({"commutation", {}, [s, draws] {
                     SeededRng rng(derive_seed(s.seed, 101));
                     int ok = 0;
                     for (int k = 0; k < draws; ++k) {
                         int n = 3 + rng.below(3);
                         KForm w = random_sparse_form(rng, n, s.order, 3, 6);
                         ok += complexify_restrict_commutes(w, random_hyperplane(rng, n)) ? 1 : 0;
                     }
                     return verdict_if(ok == draws, std::to_string(ok) + " of " + std::to_string(draws) + " cases equal",
                                       {{"equal", ok}, {"draws", draws}});
                 }});
    p.push_back({"leading-jet", {}, [s, draws, need, first] {
                     auto ex = restriction_example(s.seed, s.order);
                     SeededRng rng(derive_seed(s.seed, 102));
                     int preserved = 0;
                     json degenerate = json::array();
                     for (int k = 0; k < draws; ++k) {
                         auto a = random_hyperplane(rng, 4);
                         auto b = random_hyperplane(rng, 3);
                         KForm w3 = restrict_hyperplane(ex.omega, a);
                         KForm w2 = restrict_hyperplane(w3, b);
                         auto dec = homogeneous_parts(w2);
                         bool ok = false;
                         if (dec.leading_index && *dec.leading_index == 1) {
                             KForm lead = *dec.part(1);
                             TruncatedSeries Q2 = scale(euler_contract(lead).component(0), GaussianRational(Rational(1, 2)));
                             ok = rank_two_positive(Q2);
                             if (ok && !*first) *first = std::make_pair(w2, Q2);
                         }
                         if (ok)
                             ++preserved;
                         else
                             degenerate.push_back(k);
                     }
                     return verdict_if(preserved >= need,
                                       std::to_string(preserved) + " of " + std::to_string(draws) +
                                           " draws keep a nondegenerate d(x1^2 + x2^2) jet",
                                       {{"preserved", preserved}, {"draws", draws}, {"degenerate_draws", degenerate}});
                 }});
    p.push_back({"restricted-solve", {"leading-jet"}, [s, first] {
                     if (!*first) return Outcome{Verdict::fail, "no nondegenerate draw", "exact", {}};
                     const auto& [w2, Q2] = **first;
                     const int N = w2.order();
                     auto out = solve_gdf(w2, Q2.as_polynomial(N + 1), N);
                     bool ok = out.status == SolveStatus::solved && out.residual_zero;
                     return verdict_if(ok, ok ? "restricted planar form solved through " + std::to_string(N)
                                              : "restricted form not solved");
                 }});
    return p;
}

Plan plan_totally_real(const ScenarioSpec& s) {
    const int pairs = s.get_int("pairs", 10);
    const int points = s.get_int("points", 5);
    Plan p;
    p.push_back({"identity", {}, [s, pairs] {
                     int ok = 0;
                     for (int k = 0; k < pairs; ++k) {
                         auto pr = totally_real_pair(derive_seed(s.seed, static_cast<std::uint64_t>(k)), s.order);
                         auto data = totally_real_surface(pr.f, pr.g);
                         TruncatedSeries lhs = pr.f * pr.g;
                         TruncatedSeries rhs = data.X * data.X + data.Y * data.Y;
                         ok += (data.identity_holds && lhs == rhs) ? 1 : 0;
                     }
                     return verdict_if(ok == pairs, "fg = X^2 + Y^2 for " + std::to_string(ok) + " of " + std::to_string(pairs) + " pairs",
                                       {{"pairs", pairs}, {"holding", ok}});
                 }});
    p.push_back({"contact-one", {"identity"}, [s, points] {
                     auto pr = totally_real_pair(derive_seed(s.seed, 0), s.order);
                     auto data = totally_real_surface(pr.f, pr.g);
                     auto surf = RealSurface::from(data);
                     KForm w = exterior_derivative(KForm::function(pr.f * pr.g));
                     json dims = json::array();
                     bool ok = true;
                     for (int k = 0; k < points; ++k) {
                         auto z = surface_point(data, std::polar(0.05 + 0.01 * k, 0.4 + 1.1 * k));
                         auto rep = contact_order(w, surf, z);
                         dims.push_back(rep.dimension);
                         ok = ok && rep.dimension == 1;
                     }
                     return verdict_if(ok, "contact dimension 1 at " + std::to_string(points) + " points of V for d(fg)",
                                       {{"dimensions", dims}}, "1e-10");
                 }});
    p.push_back({"xy-model", {}, [s, points] {
                     auto x = TruncatedSeries::variable(2, s.order + 1, 0, Field::gaussian);
                     auto y = TruncatedSeries::variable(2, s.order + 1, 1, Field::gaussian);
                     KForm w = exterior_derivative(KForm::function(x * y));
                     auto slice = RealSurface::standard_real_slice(s.order);
                     auto curve = RealSurface::complex_curve(y.truncate(s.order));
                     json real_dims = json::array(), sep_dims = json::array();
                     bool ok = true;
                     for (int k = 0; k < points; ++k) {
                         const std::complex<double> pr[2] = {1.0 + 0.3 * k, 1.0 - 0.2 * k};
                         auto a = contact_order(w, slice, pr);
                         real_dims.push_back(a.dimension);
                         const std::complex<double> ps[2] = {std::polar(1.0 + 0.1 * k, 0.7 * k), 0.0};
                         auto b = contact_order(w, curve, ps);
                         sep_dims.push_back(b.dimension);
                         ok = ok && a.dimension == 1 && b.dimension == 2;
                     }
                     return verdict_if(ok, "real slice: contact 1; separatrix y = 0: contact 2",
                                       {{"real_slice", real_dims}, {"separatrix", sep_dims}}, "1e-10");
                 }});
    return p;
}

Plan plan_parabolic(const ScenarioSpec& s) {
    const int its = s.get_int("iterations", 200);
    Plan p;
    p.push_back({"quadratic", {}, [its] {
                     const std::complex<double> c[] = {1.0, 1.0};
                     auto pc = parabolic_orbit_demo(c, -0.1, its);
                     bool ok = pc.tangency_order == 1 && pc.verdict == OrbitVerdict::monotone_converging && !pc.closed &&
                               !pc.left_disc;
                     return verdict_if(ok,
                                       "z + z^2 from -0.1: " + std::string(verdict_name(pc.verdict)) + ", " +
                                           (pc.closed ? "closed" : "not closed") + " after " + std::to_string(its) + " steps",
                                       {{"k", pc.tangency_order}, {"last", pc.orbit.back().real()}});
                 }});
    p.push_back({"identity", {}, [its] {
                     const std::complex<double> c[] = {1.0};
                     auto pc = parabolic_orbit_demo(c, 0.1, its);
                     bool ok = pc.identity && pc.verdict == OrbitVerdict::constant && pc.closed;
                     return verdict_if(ok, "identity germ: orbit constant, closed");
                 }});
    p.push_back({"cubic", {}, [its] {
                     const std::complex<double> c[] = {1.0, 0.0, 1.0};
                     auto pc = parabolic_orbit_demo(c, 0.1, its);
                     bool ok = pc.tangency_order == 2 && pc.left_disc && pc.verdict == OrbitVerdict::monotone_diverging;
                     return verdict_if(ok,
                                       "z + z^3 from 0.1: " + std::string(verdict_name(pc.verdict)) +
                                           (pc.left_disc ? ", left the disc after " + std::to_string(pc.orbit.size() - 1) + " steps"
                                                         : ""),
                                       {{"k", pc.tangency_order}, {"left_disc", pc.left_disc}});
                 }});
    return p;
}

Plan plan_exterior(const ScenarioSpec& s) {
    const int cases = s.get_int("cases", 500);
    const int N = std::min(s.order, 8);
    auto run = [s, cases, N](std::uint64_t stream, auto&& body) {
        SeededRng rng(derive_seed(s.seed, stream));
        int ok = 0;
        for (int k = 0; k < cases; ++k) ok += body(rng, 2 + k % 3, N) ? 1 : 0;
        return verdict_if(ok == cases, std::to_string(ok) + " of " + std::to_string(cases) + " cases",
                          {{"cases", cases}, {"holding", ok}});
    };
    Plan p;
    p.push_back({"d-squared", {}, [run] {
                     return run(201, [](SeededRng& rng, int n, int N) {
                         int k = rng.below(2);
                         KForm a = random_kform(rng, k, n, N, 4, 3);
                         return exterior_derivative(exterior_derivative(a)).is_zero();
                     });
                 }});
    p.push_back({"antisymmetry", {}, [run] {
                     return run(202, [](SeededRng& rng, int n, int N) {
                         int k = rng.below(3), l = rng.below(std::min(3 - k, 2) + 1);
                         KForm a = random_kform(rng, k, n, N, 3, 2), b = random_kform(rng, l, n, N, 3, 2);
                         KForm ab = wedge(a, b), ba = wedge(b, a);
                         return (k * l) % 2 == 0 ? ab == ba : ab == scale(ba, GaussianRational(-1));
                     });
                 }});
    p.push_back({"leibniz", {}, [run] {
                     return run(203, [](SeededRng& rng, int n, int N) {
                         int k = rng.below(2), l = rng.below(2);
                         KForm a = random_kform(rng, k, n, N, 3, 2), b = random_kform(rng, l, n, N, 3, 2);
                         KForm lhs = exterior_derivative(wedge(a, b));
                         KForm rhs = wedge(exterior_derivative(a), b.truncate(N - 1));
                         KForm second = wedge(a.truncate(N - 1), exterior_derivative(b));
                         rhs = k % 2 == 0 ? rhs + second : rhs - second;
                         return lhs == rhs;
                     });
                 }});
    p.push_back({"euler", {}, [run] {
                     return run(204, [](SeededRng& rng, int n, int N) {
                         int k = 1 + rng.below(2), m = rng.below(4);
                         KForm a = random_kform(rng, k, n, N, 4, 3).homogeneous_part(m);
                         // i_R d a + d i_R a = (m + k) a
                         KForm lhs = euler_contract(exterior_derivative(a)) + exterior_derivative(euler_contract(a));
                         return lhs == scale(a, GaussianRational(m + k)).truncate(lhs.order());
                     });
                 }});
    return p;
}

struct KindDef {
    KindInfo info;
    std::function<Plan(const ScenarioSpec&)> build;
};

const std::vector<KindDef>& kind_defs() {
    static const std::vector<KindDef> defs = {
        {{"check", "integrability and leading jet of a form", {"form", "nvars"}}, plan_check},
        {{"first-integral", "solve omega = g df degree by degree",
          {"form", "nvars", "q", "expect", "expect_degree", "oracle"}},
         plan_first_integral},
        {{"focal", "focal values by two symbolic methods",
          {"form", "field", "family", "count", "expect_focal", "expect_probe", "probe_tol", "x0", "displacement_tol",
           "returnmap", "returnmap_tol"}},
         plan_focal},
        {{"planar-center", "focal values, return maps and holonomy of a planar center or focus",
          {"form", "field", "family", "count", "expect_focal", "expect_probe", "probe_tol", "x0", "displacement_tol",
           "returnmap", "returnmap_tol", "holonomy", "chart", "center_re", "center_im", "anchor_re", "anchor_im",
           "multiplier_tol", "period_two_tol", "stability_tol", "angle_offset", "seed_radius"}},
         plan_planar_center},
        {{"blowup", "quadratic blow-up chart, tangent cone, divisor singularities",
          {"form", "nvars", "chart", "expect_strict", "expect_multiplicity", "expect_dicritical",
           "expect_irreducibility", "expect_ratio"}},
         plan_blowup},
        {{"holonomy", "holonomy germ of the exceptional divisor",
          {"form", "nvars", "chart", "center_re", "center_im", "anchor_re", "anchor_im", "multiplier_tol",
           "period_two_tol", "stability_tol", "angle_offset", "seed_radius"}},
         plan_holonomy},
        {{"poincare", "first return map on the positive x-axis",
          {"form", "field", "family", "x0", "displacement_tol"}},
         plan_poincare},
        {{"restrict", "hyperplane restriction x_n = sum a_j x_j", {"form", "nvars", "coeffs"}}, plan_restrict},
        {{"pham-invariance", "Pham family dP + P d(phi)", {"r", "n", "d"}}, plan_pham},
        {{"reeb-full-rank", "Morse normalization of (1 + u) d(Q + ...)", {"n"}}, plan_reeb},
        {{"restriction-chain", "restriction commutes with complexification and keeps the jet",
          {"draws", "min_preserved"}},
         plan_restriction_chain},
        {{"totally-real", "totally real surfaces of f g and their contact order", {"pairs", "points"}},
         plan_totally_real},
        {{"parabolic-demo", "orbits of parabolic germs", {"iterations"}}, plan_parabolic},
        {{"exterior-suite", "exterior calculus identities on random forms", {"cases"}}, plan_exterior},
    };
    return defs;
}

const KindDef& find_kind(const std::string& kind) {
    for (const auto& d : kind_defs())
        if (d.info.name == kind) return d;
    throw PreconditionError("unknown scenario kind '" + kind + "'");
}

Plan build_plan(const ScenarioSpec& spec) {
    validate(spec);
    return find_kind(spec.kind).build(spec);
}

}  // namespace

const std::vector<KindInfo>& scenario_kinds() {
    static const std::vector<KindInfo> infos = [] {
        std::vector<KindInfo> v;
        for (const auto& d : kind_defs()) v.push_back(d.info);
        return v;
    }();
    return infos;
}

void validate(const ScenarioSpec& spec) {
    if (spec.name.empty()) throw PreconditionError("scenario has no name");
    const KindDef& def = find_kind(spec.kind);
    for (const auto& [k, v] : spec.params)
        if (std::find(def.info.params.begin(), def.info.params.end(), k) == def.info.params.end())
            throw PreconditionError("unknown parameter '" + k + "' for kind " + spec.kind);
    check_user_order(spec.order);
    if (spec.rel_tol && !(*spec.rel_tol > 0)) throw PreconditionError("rel_tol must be positive");
    if (spec.abs_tol && !(*spec.abs_tol > 0)) throw PreconditionError("abs_tol must be positive");
    auto plan = def.build(spec);
    for (const auto& c : spec.checks)
        if (std::none_of(plan.begin(), plan.end(), [&](const Step& s) { return s.name == c; }))
            throw PreconditionError("unknown check '" + c + "' for kind " + spec.kind);
}

std::vector<std::string> scenario_checks(const ScenarioSpec& spec) {
    std::vector<std::string> out;
    for (const auto& s : build_plan(spec)) out.push_back(s.name);
    return out;
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    ScenarioReport rep;
    rep.scenario = spec.to_json();
    rep.provenance.version = FOLIATION_VERSION;
    rep.provenance.timings = options.timings;
    IntegratorConfig defaults;
    try {
        defaults = spec.integrator();
    } catch (const std::exception&) {
    }
    rep.provenance.config = {{"integrator",
                              {{"rel_tol", defaults.rel_tol},
                               {"abs_tol", defaults.abs_tol},
                               {"event_tol", defaults.event_tol},
                               {"max_steps", defaults.max_steps}}},
                             {"order", spec.order},
                             {"seed", spec.seed},
                             {"schema_version", kReportSchemaVersion}};

    Plan plan;
    try {
        plan = build_plan(spec);
    } catch (const std::exception& e) {
        CheckResult c;
        c.name = "input";
        c.verdict = Verdict::fail;
        c.detail = std::string("error: ") + e.what();
        rep.checks.push_back(std::move(c));
        return rep;
    }

    std::set<std::string> selected;
    if (spec.checks.empty()) {
        for (const auto& s : plan) selected.insert(s.name);
    } else {
        std::vector<std::string> todo = spec.checks;
        while (!todo.empty()) {
            std::string n = todo.back();
            todo.pop_back();
            if (!selected.insert(n).second) continue;
            for (const auto& s : plan)
                if (s.name == n) todo.insert(todo.end(), s.deps.begin(), s.deps.end());
        }
    }

    std::map<std::string, Verdict> status;
    for (const auto& step : plan) {
        if (!selected.count(step.name)) continue;
        CheckResult c;
        c.name = step.name;
        std::string blocker;
        for (const auto& d : step.deps) {
            auto it = status.find(d);
            if (it == status.end() || it->second != Verdict::pass) {
                blocker = d;
                break;
            }
        }
        const auto s0 = clock::now();
        if (!blocker.empty()) {
            c.verdict = Verdict::inconclusive;
            c.blocked_by = blocker;
            c.detail = "skipped: upstream check " + blocker + " did not pass";
        } else {
            try {
                Outcome o = step.run();
                c.verdict = o.verdict;
                c.detail = std::move(o.detail);
                c.tolerance = std::move(o.tolerance);
                c.values = o.values.is_null() ? json::object() : std::move(o.values);
            } catch (const std::exception& e) {
                c.verdict = Verdict::fail;
                c.detail = std::string("error: ") + e.what();
            }
        }
        c.seconds = std::chrono::duration<double>(clock::now() - s0).count();
        status[step.name] = c.verdict;
        rep.checks.push_back(std::move(c));
    }
    rep.provenance.total_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
}

std::vector<ScenarioSection> parse_scenario_file(std::string_view text) {
    std::vector<ScenarioSection> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            const std::string prefix = "[scenario.";
            if (line.back() != ']' || line.rfind(prefix, 0) != 0 || line.size() <= prefix.size() + 1)
                throw ParseError("expected [scenario.<name>]", lineno, 1);
            out.push_back({trim(line.substr(prefix.size(), line.size() - prefix.size() - 1)), lineno, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", lineno, 1);
        if (out.empty()) throw ParseError("entry outside a [scenario.<name>] section", lineno, 1);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno, 1);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out.back().entries.emplace_back(key, value);
    }
    return out;
}

void apply_entries(ScenarioSpec& spec, const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [k, v] : entries) {
        try {
            if (k == "kind") {
                spec.kind = v;
            } else if (k == "order") {
                spec.order = std::stoi(v);
            } else if (k == "seed") {
                spec.seed = std::stoull(v);
            } else if (k == "rel_tol") {
                spec.rel_tol = std::stod(v);
            } else if (k == "abs_tol") {
                spec.abs_tol = std::stod(v);
            } else if (k == "checks") {
                spec.checks.clear();
                std::stringstream ss(v);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
                    if (!item.empty()) spec.checks.push_back(item);
                }
            } else {
                spec.params[k] = v;
            }
        } catch (const std::invalid_argument&) {
            throw PreconditionError("invalid value '" + v + "' for " + k);
        } catch (const std::out_of_range&) {
            throw PreconditionError("value out of range for " + k);
        }
    }
}

}  // namespace foliation
