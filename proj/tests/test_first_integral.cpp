#include <doctest.h>

#include <random>

#include "foliation/errors.hpp"
#include "foliation/first_integral.hpp"
#include "foliation/generators.hpp"
#include "foliation/parser.hpp"
#include "oracle.hpp"

using namespace foliation;

TEST_SUITE_BEGIN("first-integral");

namespace {

TruncatedSeries var(int n, int order, int i) { return TruncatedSeries::variable(n, order, i); }
GaussianRational q(long a, long b = 1) { return GaussianRational(Rational(a, b)); }
KForm d(const TruncatedSeries& f) { return exterior_derivative(KForm::function(f)); }

// omega - g df through `order`, with the naive map arithmetic.
bool oracle_residual_zero(const KForm& omega, const TruncatedSeries& f, const TruncatedSeries& g, int order) {
    const auto pg = oracle::from_series(g);
    const auto pf = oracle::from_series(f);
    for (int i = 0; i < omega.nvars(); ++i) {
        auto w = oracle::truncate(oracle::from_series(omega.component(i)), order);
        auto gdf = oracle::mul(pg, oracle::diff(pf, i), order);
        for (auto& [e, c] : gdf) w[e] -= c;
        oracle::prune(w);
        if (!w.empty()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("solve_gdf recovers an exact differential") {
    const int N = 8;
    auto x = var(2, N + 1, 0), y = var(2, N + 1, 1);
    auto Q = x * x + y * y;
    auto h = Q + x * x * y + scale(power(y, 4), q(1, 3));
    auto out = solve_gdf(d(h).truncate(N), Q, N);
    REQUIRE(out.status == SolveStatus::solved);
    CHECK(out.residual_zero);
    CHECK(out.f == h.truncate(out.f.order()));
    CHECK(out.g == TruncatedSeries::constant(2, out.g.order(), q(1)));
    CHECK(gdf_residual(d(h).truncate(N), out.f, out.g, N).is_zero());
    CHECK(oracle_residual_zero(d(h).truncate(N), out.f, out.g, N));
}

TEST_CASE("solve_gdf on g df for random f and g matches the oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + trial % 2;
        const int N = 6;
        TruncatedSeries Q(n, N + 1);
        for (int i = 0; i < n; ++i) Q += var(n, N + 1, i) * var(n, N + 1, i);
        auto f = Q + oracle::random_series(rng, n, N + 1, 3, 4, 3);
        auto g = TruncatedSeries::constant(n, N + 1, q(1)) + oracle::random_series(rng, n, N + 1, 1, 2, 2);
        KForm omega = multiply(g, d(f)).truncate(N);
        auto out = solve_gdf(omega, Q, N);
        REQUIRE(out.status == SolveStatus::solved);
        CHECK(out.residual_zero);
        CHECK(oracle_residual_zero(omega, out.f, out.g, N));
    }
}

TEST_CASE("the three-variable counterexample is obstructed at degree 4") {
    ParseOptions po;
    po.order = 12;
    po.min_nvars = 3;
    KForm omega = parse_form("d(x^4 + y^4) - 2*x^2*y^2*dy", po);
    auto x = var(3, 13, 0), y = var(3, 13, 1);
    auto out = solve_gdf(omega, power(x, 4) + power(y, 4), 12);
    REQUIRE(out.status == SolveStatus::obstructed);
    REQUIRE(out.obstruction.has_value());
    CHECK(out.obstruction->degree == 4);
    CHECK_FALSE(out.obstruction->residual.is_zero());

    // planar slice through the Lie recursion
    KForm planar = parse_form("d(x^4 + y^4) - 2*x^2*y^2*dy", ParseOptions{12, 0, {}});
    auto X = dual_field(planar);
    auto x2 = var(2, 12, 0), y2 = var(2, 12, 1);
    auto lie = lie_first_integral(X, power(x2, 4) + power(y2, 4), 12);
    CHECK(lie.status == SolveStatus::obstructed);
    REQUIRE(lie.obstruction_degree.has_value());
    CHECK(*lie.obstruction_degree == 4);
}

TEST_CASE("solve_gdf preconditions") {
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    // leading part is not dQ
    CHECK_THROWS_AS(solve_gdf(d(x * y).truncate(5), x * x + y * y, 5), PreconditionError);
    // non-integrable in three variables
    auto X = var(3, 6, 0), Y = var(3, 6, 1), Z = var(3, 6, 2);
    KForm bad = d(X * X + Y * Y + Z * Z).truncate(5) + multiply(X * X, d(Y).truncate(5)) -
                multiply(Y * Y, d(Z).truncate(5));
    if (!integrability_residual(bad).is_zero()) CHECK_THROWS(solve_gdf(bad, X * X + Y * Y + Z * Z, 5));
}

TEST_CASE("focal values of the rotation vanish") {
    auto X = rotation_field(10);
    auto lie = solve_lie(X, 10);
    CHECK_FALSE(lie.first_nonzero_index().has_value());
    CHECK(lie.indices.front() == 4);
    auto obs = focal_values_from_obstructions(form_of_field(X), 10);
    CHECK_FALSE(obs.first_nonzero_index().has_value());
}

TEST_CASE("focal value of x' = -y + x r^2, y' = x + y r^2") {
    // X(x^2 + y^2) = 2 (x^2 + y^2)^2 exactly
    const int N = 8;
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto r2 = x * x + y * y;
    std::vector<TruncatedSeries> X{-y + x * r2, x + y * r2};
    auto lie = solve_lie(X, N);
    REQUIRE(lie.first_nonzero_index().has_value());
    CHECK(*lie.first_nonzero_index() == 4);
    CHECK(*lie.value_at(4) == Rational(2));
    CHECK(lie.continued_modulo_earlier);
    auto obs = focal_values_from_obstructions(form_of_field(X), N);
    REQUIRE(obs.first_nonzero_index().has_value());
    CHECK(*obs.first_nonzero_index() == 4);
    CHECK(*obs.value_at(4) / *lie.value_at(4) == Rational(1));
}

TEST_CASE("weak foci: first focal value 2s from both methods") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto wf = weak_focus(seed, 10);
        auto lie = solve_lie(wf.field, 10);
        auto obs = focal_values_from_obstructions(form_of_field(wf.field), 10);
        REQUIRE(lie.first_nonzero_index().has_value());
        CHECK(*lie.first_nonzero_index() == 4);
        CHECK(*lie.value_at(4) == 2 * wf.s);
        CHECK(obs.first_nonzero_index() == lie.first_nonzero_index());
        CHECK(*obs.value_at(4) == *lie.value_at(4));
    }
}

TEST_CASE("field_of_form inverts form_of_field") {
    auto X = hamiltonian_center(3, 8);
    auto back = field_of_form(form_of_field(X));
    CHECK(back[0] == X[0]);
    CHECK(back[1] == X[1]);
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    auto rot = field_of_form(d(x * x + y * y));
    CHECK(rot[0] == -y.truncate(5));
    CHECK(rot[1] == x.truncate(5));
}

TEST_CASE("lie_first_integral on the saddle d(xy) + higher terms") {
    const int N = 8;
    auto x = var(2, N + 1, 0), y = var(2, N + 1, 1);
    auto h = x * y + x * x * y * y + power(x, 3) * y;
    auto X = dual_field(d(h).truncate(N));
    auto lie = lie_first_integral(X, (x * y).truncate(N + 1), N);
    REQUIRE(lie.status == SolveStatus::solved);
    // F is a first integral: X(F) = 0 through the computed order
    TruncatedSeries XF(2, N);
    for (int p = 0; p < 2; ++p) XF += X[static_cast<std::size_t>(p)].truncate(N) * partial_derivative(lie.F, p).truncate(N);
    CHECK(XF.truncate(N).is_zero());
}

TEST_CASE("morse normalization") {
    const int N = 7;
    auto x = var(2, N, 0), y = var(2, N, 1);
    auto f = x * x + y * y + power(x, 3) + x * y * y;
    auto c = morse_normalize(f, N);
    auto composed = substitute(f, c.images);
    CHECK(composed == (x * x + y * y).truncate(composed.order()));
    for (int i = 0; i < 2; ++i) {
        auto id = substitute(c.images[static_cast<std::size_t>(i)], c.inverse_images);
        CHECK(id == TruncatedSeries::variable(2, id.order(), i));
    }
    CHECK(hessian_rank(f) == 2);
    CHECK(hessian_rank(x * x + power(y, 3)) == 1);
    CHECK_THROWS_AS(morse_normalize(x * x + power(y, 3), N), RankDeficiencyError);
}

TEST_CASE("reeb examples are recovered literally") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto ex = reeb_example(3, seed, 8);
        auto out = solve_gdf(ex.omega, ex.Q.truncate(9), 8);
        REQUIRE(out.status == SolveStatus::solved);
        CHECK(out.f == ex.h.truncate(out.f.order()));
        CHECK(out.g == (TruncatedSeries::constant(3, ex.u.order(), q(1)) + ex.u).truncate(out.g.order()));
    }
}

TEST_CASE("hyperplane restriction") {
    KForm w = parse_form("x1*dx2 - x2*dx1 + x3*dx3", ParseOptions{6, 0, {}});
    const std::vector<Rational> a{Rational(1, 2), Rational(-1)};
    KForm r = restrict_hyperplane(w, a);
    // x3 = x1/2 - x2, dx3 = dx1/2 - dx2
    KForm want = parse_form("x1*dx2 - x2*dx1 + (1/2*x1 - x2)*(1/2*dx1 - dx2)", ParseOptions{6, 0, {"x1", "x2"}});
    CHECK(r == want);
    CHECK(complexify_restrict_commutes(w, a));
    CHECK_THROWS(restrict_hyperplane(w, std::vector<Rational>{Rational(1)}));
}

TEST_CASE("restriction commutes with complexification on random forms") {
    SeededRng rng(derive_seed(99, 0));
    for (int k = 0; k < 30; ++k) {
        int n = 3 + rng.below(3);
        KForm w = random_sparse_form(rng, n, 6, 3, 5);
        CHECK(complexify_restrict_commutes(w, random_hyperplane(rng, n)));
    }
}

TEST_SUITE_END();
