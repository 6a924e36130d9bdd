#include <doctest.h>

#include <cmath>

#include "foliation/blowup.hpp"
#include "foliation/errors.hpp"
#include "foliation/generators.hpp"
#include "foliation/parser.hpp"
#include "foliation/roots.hpp"
#include "foliation/totally_real.hpp"

using namespace foliation;

TEST_SUITE_BEGIN("blowup");

namespace {

KForm form(const char* text, int order = 8, std::vector<std::string> universe = {}) {
    ParseOptions po;
    po.order = order;
    po.universe = std::move(universe);
    return parse_form(text, po);
}

GaussianRational q(long a, long b = 1) { return GaussianRational(Rational(a, b)); }

}  // namespace

TEST_CASE("roots of univariate polynomials") {
    // z^2 + 1
    UPoly p{q(1), q(0), q(1)};
    auto r = roots(p);
    REQUIRE(r.size() == 2);
    for (const auto& z : r) {
        REQUIRE(z.exact.has_value());
        CHECK(evaluate(p, *z.exact).is_zero());
        CHECK(std::abs(std::abs(z.value) - 1.0) < 1e-12);
    }
    // (z - 1/3)^2 (z + 2) = z^3 + 4/3 z^2 - 11/9 z + 2/9: the double root is merged
    UPoly s{q(2, 9), q(-11, 9), q(4, 3), q(1)};
    auto rs = roots(s);
    CHECK(rs.size() == 2);
    CHECK(recognize_rational(0.3333333333333) == Rational(1, 3));
}

TEST_CASE("blow-up of d(xy)") {
    KForm w = form("d(x*y)");
    auto c = blowup(w, 0);
    CHECK(c.divisor_multiplicity == 1);
    CHECK_FALSE(c.dicritical);
    CHECK(c.strict_transform == form("2*t*dx + x*dt", c.strict_transform.order(), {"x", "t"}));
    auto sings = divisor_singularities(c);
    REQUIRE(sings.size() == 1);
    CHECK(std::abs(sings[0].t) < 1e-12);
    CHECK(std::abs(sings[0].ratio - std::complex<double>(-2, 0)) < 1e-12);
    CHECK(sings[0].siegel);
}

TEST_CASE("blow-up of d(x^2 + y^2): singular points at t = +-i") {
    auto c = blowup(form("d(x^2 + y^2)"), 0);
    auto sings = divisor_singularities(c);
    REQUIRE(sings.size() == 2);
    for (const auto& s : sings) {
        CHECK(std::abs(std::abs(s.t.imag()) - 1.0) < 1e-12);
        CHECK(std::abs(s.t.real()) < 1e-12);
        REQUIRE(s.t_exact.has_value());
        CHECK(s.t_exact->re() == 0);
        CHECK(std::abs(s.ratio - std::complex<double>(-2, 0)) < 1e-9);
    }
}

TEST_CASE("radial form is dicritical") {
    KForm w = form("x*dy - y*dx");
    auto c = blowup(w, 0);
    CHECK(c.dicritical);
    CHECK(c.divisor_multiplicity == 2);
    auto tc = tangent_cone(w);
    CHECK(tc.dicritical);
    CHECK(tc.P.is_zero());
}

TEST_CASE("blow-up preconditions") {
    CHECK_THROWS_AS(blowup(form("dx + y*dy"), 0), PreconditionError);
    KForm zero(1, 2, 6);
    CHECK_THROWS_AS(blowup(zero, 0), PreconditionError);
}

TEST_CASE("charts agree on the overlap") {
    // t = 1/u, x = u y: strict transforms differ by the factor u^nu
    for (const char* text : {"d(x*y)", "d(x^2 + y^2)", "d(x*y + x^3)", "x*dy - 2*y*dx"}) {
        KForm w = form(text);
        auto c0 = blowup(w, 0), c1 = blowup(w, 1);
        const int nu = c0.divisor_multiplicity;
        const std::complex<double> u(0.7, 0.2), y(0.3, -0.1);
        const std::complex<double> p1[2] = {u, y}, p0[2] = {u * y, 1.0 / u};
        auto s1 = evaluate(c1.strict_transform, p1);
        auto s0 = evaluate(c0.strict_transform, p0);
        const std::complex<double> du = s0[0] * y - s0[1] / (u * u), dy = s0[0] * u;
        const std::complex<double> f = std::pow(u, nu);
        CHECK(std::abs(s1[0] - f * du) < 1e-9);
        CHECK(std::abs(s1[1] - f * dy) < 1e-9);
    }
}

TEST_CASE("tangent cone of Pham forms is d P and irreducible") {
    for (auto [r, n, d] : {std::tuple{3, 3, 2}, std::tuple{3, 4, 3}, std::tuple{3, 4, 4}, std::tuple{4, 5, 2}}) {
        auto ex = pham_example(r, n, d, 7, 8);
        auto tc = tangent_cone(ex.omega);
        CHECK_FALSE(tc.dicritical);
        CHECK(tc.degree == d);
        CHECK(tc.P == scale(pham_polynomial(r, n, d, tc.P.order()), q(d)));
        CHECK(tc.verdict == Irreducibility::irreducible);
        CHECK(pham_support(tc.P) == r);
    }
}

TEST_CASE("factor search") {
    auto xy = form("d(x*y)");
    auto tc = tangent_cone(xy);
    CHECK(tc.verdict == Irreducibility::reducible);
    REQUIRE(tc.witness.has_value());
    CHECK(tc.witness->valuation() == 1);
    CHECK(tc.witness->is_homogeneous());
    // x^2 + y^2 splits over Q(i)
    ParseOptions po;
    po.order = 6;
    auto s = search_factors(parse_function("x^2 + y^2", po));
    CHECK(s.verdict == Irreducibility::reducible);
    // x^3 + y^3 + z^3 is a smooth cubic
    CHECK(search_factors(parse_function("x^3 + y^3 + z^3", po)).verdict == Irreducibility::irreducible);
    // x^3 - y^2 z is irreducible, found by the complete cubic search
    CHECK(search_factors(parse_function("x^3 - y^2*z", po)).verdict == Irreducibility::irreducible);
    CHECK(search_factors(parse_function("x^2*y - y^3", po)).verdict == Irreducibility::reducible);
}

TEST_CASE("totally real surfaces: f g = X^2 + Y^2") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto pr = totally_real_pair(seed, 8);
        auto s = totally_real_surface(pr.f, pr.g);
        CHECK(s.identity_holds);
        CHECK(pr.f * pr.g == s.X * s.X + s.Y * s.Y);
        auto i = GaussianRational(Rational(0), Rational(1));
        CHECK(pr.f == s.X + scale(s.Y, i));
        CHECK(pr.g == s.X - scale(s.Y, i));
    }
    auto x = TruncatedSeries::variable(2, 6, 0, Field::gaussian);
    CHECK_THROWS_AS(totally_real_surface(x, scale(x, q(2))), PreconditionError);
}

TEST_CASE("contact orders of d(xy)") {
    auto x = TruncatedSeries::variable(2, 7, 0, Field::gaussian);
    auto y = TruncatedSeries::variable(2, 7, 1, Field::gaussian);
    KForm w = exterior_derivative(KForm::function(x * y));
    auto slice = RealSurface::standard_real_slice(6);
    auto sep = RealSurface::complex_curve(y.truncate(6));
    const std::complex<double> real_pt[2] = {0.4, -0.7};
    auto a = contact_order(w, slice, real_pt);
    CHECK(a.dimension == 1);
    CHECK(a.classification == ContactClass::totally_real_contact_one);
    const std::complex<double> sep_pt[2] = {std::complex<double>(0.3, 0.5), 0.0};
    auto b = contact_order(w, sep, sep_pt);
    CHECK(b.dimension == 2);
    CHECK(b.classification == ContactClass::invariant);
    const std::complex<double> off[2] = {std::complex<double>(0.3, 0.5), 0.2};
    CHECK_THROWS(contact_order(w, sep, off));
}

TEST_CASE("contact order one on the surface of f g") {
    auto pr = totally_real_pair(5, 8);
    auto s = totally_real_surface(pr.f, pr.g);
    auto surf = RealSurface::from(s);
    KForm w = exterior_derivative(KForm::function(pr.f * pr.g));
    for (int k = 0; k < 5; ++k) {
        auto p = surface_point(s, std::polar(0.04 + 0.01 * k, 1.3 * k));
        auto eq = surf.equations(p);
        CHECK(std::abs(eq[0]) < 1e-10);
        CHECK(std::abs(eq[1]) < 1e-10);
        CHECK(contact_order(w, surf, p).dimension == 1);
    }
}

TEST_SUITE_END();
