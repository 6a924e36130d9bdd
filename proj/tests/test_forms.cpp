#include <doctest.h>

#include <random>

#include "foliation/errors.hpp"
#include "foliation/forms.hpp"
#include "oracle.hpp"

using namespace foliation;

TEST_SUITE_BEGIN("exterior");

namespace {

TruncatedSeries var(int n, int order, int i) { return TruncatedSeries::variable(n, order, i); }
GaussianRational q(long a, long b = 1) { return GaussianRational(Rational(a, b)); }

KForm d(const TruncatedSeries& f) { return exterior_derivative(KForm::function(f)); }

KForm dx(int n, int order, int i) {
    return KForm::basis_form({i}, TruncatedSeries::constant(n, order, GaussianRational(1)));
}

KForm random_form(std::mt19937_64& rng, int k, int n, int order) {
    KForm out(k, n, order);
    std::vector<Basis> bases;
    for (int a = 0; a < n; ++a) {
        if (k == 1) bases.push_back({a});
        for (int b = a + 1; b < n; ++b) {
            if (k == 2) bases.push_back({a, b});
            for (int c = b + 1; c < n; ++c)
                if (k == 3) bases.push_back({a, b, c});
        }
    }
    if (k == 0) bases.push_back({});
    for (const auto& b : bases)
        if (rng() % 3 != 0) out.add(b, oracle::random_series(rng, n, order, 0, 4, 3));
    return out;
}

TruncatedSeries pham(int r, int n, int d, int order) {
    TruncatedSeries p(n, order);
    for (int j = 0; j < r; ++j) p += power(var(n, order, j), d);
    return p;
}

}  // namespace

TEST_CASE("exterior derivative examples") {
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    auto dxy = d(x * y);
    CHECK(dxy.component(0) == var(2, 5, 1));
    CHECK(dxy.component(1) == var(2, 5, 0));
    auto dq = d(x * x + y * y);
    CHECK(dq.component(0) == scale(var(2, 5, 0), q(2)));
    CHECK(dq.component(1) == scale(var(2, 5, 1), q(2)));
    CHECK(exterior_derivative(dxy).is_zero());
    CHECK(exterior_derivative(dxy).degree() == 2);
}

TEST_CASE("d on a 3-form is unsupported") {
    KForm vol = KForm::basis_form({0, 1, 2}, var(3, 4, 0));
    CHECK_THROWS_AS(exterior_derivative(vol), UnsupportedDegreeError);
    CHECK_THROWS_AS(wedge(vol, dx(3, 4, 0)), UnsupportedDegreeError);
    CHECK_THROWS_AS(KForm(4, 5, 3), UnsupportedDegreeError);
}

TEST_CASE("wedge examples") {
    auto a = dx(2, 5, 0);
    CHECK(wedge(a, a).is_zero());
    auto b = dx(2, 5, 1);
    CHECK(wedge(a, b) == -wedge(b, a));
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    KForm lhs = d(x * y);
    KForm rhs = KForm::basis_form({1}, x.truncate(5));
    auto w = wedge(lhs, rhs);
    CHECK(w.coefficient({0, 1}) == (x * y).truncate(5));
    CHECK(w.coefficients().size() == 1);
}

TEST_CASE("basis sorting applies the permutation sign") {
    auto one = TruncatedSeries::constant(3, 3, GaussianRational(1));
    KForm a(2, 3, 3);
    a.add({2, 0}, one);
    CHECK(a.coefficient({0, 2}) == -one);
    KForm b(2, 3, 3);
    b.add({1, 1}, one);
    CHECK(b.is_zero());
}

TEST_CASE("integrability residual examples") {
    // depends on two variables only, in n=3
    auto x = var(3, 8, 0), y = var(3, 8, 1), z = var(3, 8, 2);
    KForm w = d(power(x, 4) + power(y, 4)) - KForm::basis_form({1}, scale(x * x * y * y, q(2))).truncate(7);
    CHECK(integrability_residual(w).is_zero());
    CHECK(integrability_residual(d(pham(3, 3, 2, 8))).is_zero());
    // y dx + x dy + xy dz = exp(-z) d(xy exp(z)) is integrable; z dx + x dy is not
    std::vector<TruncatedSeries> good{y, x, x * y};
    CHECK(integrability_residual(KForm::one_form(good)).is_zero());
    std::vector<TruncatedSeries> comps{z, x, TruncatedSeries(3, 8)};
    KForm bad = KForm::one_form(comps);
    auto res = integrability_residual(bad);
    CHECK_FALSE(res.is_zero());
    CHECK(res.order() == bad.order() - 1);
}

TEST_CASE("euler contraction examples") {
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    auto Q = x * x + y * y;
    auto c = euler_contract(d(Q));
    CHECK(c.component(0) == scale(Q, q(2)).truncate(c.order()));
    auto P = pham(3, 4, 3, 6);
    CHECK(euler_contract(d(P)).component(0) == scale(P, q(3)).truncate(6));
    KForm area = KForm::basis_form({0, 1}, TruncatedSeries::constant(2, 4, GaussianRational(1)));
    auto e = euler_contract(area);
    CHECK(e.component(0) == -var(2, 5, 1));
    CHECK(e.component(1) == var(2, 5, 0));
    CHECK_THROWS_AS(euler_contract(KForm::function(x)), UnsupportedDegreeError);
}

TEST_CASE("homogeneous decomposition examples") {
    auto x = var(2, 8, 0), y = var(2, 8, 1);
    KForm w = d(x * y) + KForm::basis_form({0}, power(x, 2) * power(y, 2)).truncate(7);
    auto dec = homogeneous_parts(w);
    REQUIRE(dec.leading_index);
    CHECK(*dec.leading_index == 1);
    REQUIRE(dec.parts.size() == 2);
    CHECK(dec.parts[0].first == 1);
    CHECK(dec.parts[1].first == 4);

    KForm cex = d(power(x, 4) + power(y, 4)) - KForm::basis_form({1}, scale(x * x * y * y, q(2))).truncate(7);
    auto dc = homogeneous_parts(cex);
    CHECK(*dc.leading_index == 3);
    REQUIRE(dc.parts.size() == 2);
    CHECK(dc.parts[1].first == 4);

    auto one = homogeneous_parts(KForm::function(TruncatedSeries::constant(2, 3, GaussianRational(1))));
    CHECK(*one.leading_index == 0);

    auto zero = homogeneous_parts(KForm(1, 2, 3));
    CHECK_FALSE(zero.leading_index.has_value());
    CHECK(zero.parts.empty());
}

TEST_CASE("divisibility residual examples") {
    int n = 3, N = 8;
    auto P = pham(3, 3, 2, N);
    KForm wt = KForm::basis_form({1}, var(n, N, 0));
    KForm w = d(P) + multiply(P, wt);
    auto r = divisibility_residual(wedge(w, d(P)), P);
    CHECK(r.is_zero());

    auto x = var(2, 4, 0), y = var(2, 4, 1);
    KForm xdx = KForm::basis_form({0}, x);
    CHECK(divisibility_residual(xdx, y) == xdx);
    auto Q = x * x + y * y;
    CHECK(divisibility_residual(KForm::basis_form({0}, Q), Q).is_zero());
}

TEST_CASE("division quotient and remainder reconstruct the dividend") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + trial % 3;
        auto P = oracle::random_series(rng, n, 9, 2, 2, 3);
        if (P.is_zero()) continue;
        auto a = oracle::random_series(rng, n, 9, 0, 7, 6);
        auto div = divide(a, P);
        CHECK(series_add(product_through(div.quotient, P, 9), div.remainder) == a);
        auto b = oracle::random_series(rng, n, 7, 0, 5, 4);
        auto multiple = product_through(b, P.truncate(9), 9);
        CHECK(divide(multiple, P).remainder.is_zero());
    }
}

TEST_CASE("exterior algebra identities on random forms") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 4, N = 6;
        auto f = random_form(rng, 0, n, N);
        auto g = random_form(rng, 0, n, N);
        auto w1 = random_form(rng, 1, n, N);
        auto w2 = random_form(rng, 1, n, N);
        CHECK(exterior_derivative(exterior_derivative(f)).is_zero());
        CHECK(exterior_derivative(exterior_derivative(w1)).is_zero());
        CHECK(wedge(w1, w2) == -wedge(w2, w1));
        auto fg = f.component(0) * g.component(0);
        auto lhs = exterior_derivative(KForm::function(fg));
        auto rhs = multiply(f.component(0), exterior_derivative(g)) + multiply(g.component(0), exterior_derivative(f));
        CHECK(lhs == rhs.truncate(lhs.order()));
        // g df is integrable
        auto gdf = multiply(g.component(0), exterior_derivative(f));
        CHECK(integrability_residual(gdf).is_zero());
    }
}

TEST_CASE("euler identity for homogeneous polynomials") {
    std::mt19937_64 rng(77);
    for (int deg = 2; deg <= 6; ++deg)
        for (int n = 2; n <= 5; ++n) {
            auto P = oracle::random_series(rng, n, 8, deg, deg, 4);
            auto e = euler_contract(exterior_derivative(KForm::function(P)));
            CHECK(e.component(0) == scale(P, q(deg)).truncate(e.order()));
        }
}

TEST_CASE("pullback agrees with substitution of a function") {
    auto x = var(2, 6, 0), t = var(2, 6, 1);
    std::vector<TruncatedSeries> chart{x, t * x};
    auto h = var(2, 6, 0) * var(2, 6, 1);
    auto pulled = pullback(d(h), chart);
    // d(t x^2) = 2 t x dx + x^2 dt
    CHECK(pulled.component(0) == scale(x * t, q(2)).truncate(pulled.order()));
    CHECK(pulled.component(1) == (x * x).truncate(pulled.order()));
}

TEST_SUITE_END();
