#include <doctest.h>

#include <random>

#include "foliation/errors.hpp"
#include "foliation/linear_solve.hpp"
#include "foliation/series.hpp"
#include "oracle.hpp"

using namespace foliation;

TEST_SUITE_BEGIN("algebra");

namespace {

TruncatedSeries var(int n, int order, int i) { return TruncatedSeries::variable(n, order, i); }
TruncatedSeries cst(int n, int order, long c) { return TruncatedSeries::constant(n, order, GaussianRational(c)); }

}  // namespace

TEST_CASE("rationals stay canonical") {
    Rational q = parse_rational("6/-4");
    CHECK(q == Rational(-3, 2));
    CHECK(q.get_den() == 2);
    CHECK(to_string(parse_rational("10/5")) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), std::domain_error);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("gaussian rationals form a field") {
    GaussianRational a(Rational(1, 2), Rational(3));
    GaussianRational b(Rational(-2), Rational(1, 3));
    CHECK((a * b) / b == a);
    CHECK(a.conj().conj() == a);
    CHECK((a * a.conj()).is_real());
    CHECK((a * a.conj()).re() == a.norm());
    CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
    CHECK_THROWS(a / GaussianRational(0));
}

TEST_CASE("multi-index packing orders lexicographically") {
    MultiIndex a{2, 0, 1};
    MultiIndex b{1, 5, 0};
    CHECK(a > b);
    CHECK(a.degree() == 3);
    CHECK((a + b) == MultiIndex({3, 5, 1}));
    CHECK((a + b - b) == a);
    CHECK(a.divisible_by(MultiIndex{1, 0, 1}));
    CHECK_FALSE(a.divisible_by(b));
    CHECK(a.str(3) == "x1^2*x3");
    auto mons = monomials_of_degree(3, 4);
    CHECK(mons.size() == count_monomials(3, 4));
    CHECK(mons.size() == 15);
    for (std::size_t i = 1; i < mons.size(); ++i) CHECK(mons[i - 1] > mons[i]);
}

TEST_CASE("series_add examples") {
    auto x = var(2, 5, 0), y = var(2, 5, 1);
    CHECK((x * x + (-(x * x))).is_zero());
    CHECK((x + y) + (x - y) == scale(x, GaussianRational(2)));
    // 2 x1 + x1 x2 in four variables
    auto x1 = var(4, 5, 0), x2 = var(4, 5, 1);
    auto sum = scale(x1, GaussianRational(2)) + x1 * x2;
    CHECK(sum.coefficient(MultiIndex{1, 0, 0, 0}) == GaussianRational(2));
    CHECK(sum.coefficient(MultiIndex{1, 1, 0, 0}) == GaussianRational(1));
    CHECK(sum.term_count() == 2);
}

TEST_CASE("orders combine to the minimum and mismatches are structural errors") {
    auto a = var(2, 3, 0), b = var(2, 7, 1);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);
    CHECK_THROWS_AS(var(2, 3, 0) + var(3, 3, 0), StructuralError);
    CHECK_THROWS_AS(var(2, 3, 0) + var(2, 3, 0).complexify(), StructuralError);
    CHECK_THROWS_AS(check_user_order(25), PreconditionError);
    CHECK_NOTHROW(check_user_order(24));
}

TEST_CASE("series_mul examples") {
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    auto xy = x * y;
    CHECK(xy * (cst(2, 6, 1) + xy) == xy + xy * xy);
    auto p = power(var(2, 3, 0), 4) + power(var(2, 3, 1), 4);
    CHECK((p * cst(2, 3, 1)).is_zero());
}

TEST_CASE("partial derivatives") {
    auto x = var(3, 6, 0), y = var(3, 6, 1), z = var(3, 6, 2);
    CHECK(partial_derivative(x * x + y * y, 0) == scale(var(3, 5, 0), GaussianRational(2)));
    auto p3 = power(x, 3) + power(y, 3) + power(z, 3);
    CHECK(partial_derivative(p3, 0) == scale(power(var(3, 5, 0), 2), GaussianRational(3)));
    auto q = power(x, 4) + power(y, 4);
    CHECK(partial_derivative(q, 1) == scale(power(var(3, 5, 1), 3), GaussianRational(4)));
    CHECK(partial_derivative(q, 1).order() == 5);
    CHECK_THROWS_AS(partial_derivative(q, 3), std::out_of_range);
}

TEST_CASE("substitute examples") {
    // xy with y -> t x, variables (x, t)
    auto xy = var(2, 6, 0) * var(2, 6, 1);
    std::vector<TruncatedSeries> chart{var(2, 6, 0), var(2, 6, 1) * var(2, 6, 0)};
    auto pulled = substitute(xy, chart);
    CHECK(pulled == TruncatedSeries::monomial(2, 6, MultiIndex{2, 1}, GaussianRational(1)));

    auto x = var(3, 6, 0), y = var(3, 6, 1), z = var(3, 6, 2);
    std::vector<TruncatedSeries> kill_z{x, y, TruncatedSeries(3, 6)};
    CHECK(substitute(x * x + y * y + z * z, kill_z) == x * x + y * y);

    auto a = var(2, 6, 0), b = var(2, 6, 1);
    std::vector<TruncatedSeries> shear{a, b + a * a};
    auto got = substitute(a * a + b * b, shear);
    CHECK(got == a * a + b * b + scale(a * a * b, GaussianRational(2)) + power(a, 4));
}

TEST_CASE("substitute rejects constant terms unless allowed") {
    auto x = var(1, 4, 0);
    std::vector<TruncatedSeries> shift{x + cst(1, 4, 1)};
    CHECK_THROWS_AS(substitute(x * x, shift), PreconditionError);
    SubstituteOptions opt;
    opt.allow_constant_terms = true;
    auto r = substitute(x * x, shift, opt);
    CHECK(r == x * x + scale(x, GaussianRational(2)) + cst(1, 4, 1));
}

TEST_CASE("evaluate examples") {
    auto x = var(2, 6, 0), y = var(2, 6, 1);
    std::vector<std::complex<double>> p{3.0, 4.0};
    CHECK(std::abs(evaluate(x * x + y * y, p) - 25.0) < 1e-12);
    std::vector<std::complex<double>> q{1.0, {0.0, 1.0}};
    CHECK(std::abs(evaluate(x * y, q) - std::complex<double>(0, 1)) < 1e-12);
    std::vector<std::complex<double>> r{1.0, 1.0};
    CHECK(std::abs(evaluate(power(x, 4) + power(y, 4), r) - 2.0) < 1e-12);
}

TEST_CASE("ring axioms against the brute-force oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 4;
        int order = 6;
        bool gauss = trial % 3 == 0;
        auto a = oracle::random_series(rng, n, order, 0, 5, 6, gauss);
        auto b = oracle::random_series(rng, n, order, 0, 5, 6, gauss);
        auto c = oracle::random_series(rng, n, order, 0, 5, 6, gauss);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(oracle::from_series(a * b) == oracle::mul(oracle::from_series(a), oracle::from_series(b), order));
        for (int i = 0; i < n; ++i) {
            CHECK(oracle::from_series(partial_derivative(a, i)) == oracle::truncate(oracle::diff(oracle::from_series(a), i), order - 1));
            for (int j = 0; j < n; ++j)
                CHECK(partial_derivative(partial_derivative(a, i), j) == partial_derivative(partial_derivative(a, j), i));
        }
    }
}

TEST_CASE("composition matches the oracle and is associative") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + trial % 2;
        int order = 7;
        auto a = oracle::random_series(rng, n, order, 1, 4, 5);
        std::vector<TruncatedSeries> phi, psi;
        for (int i = 0; i < n; ++i) {
            phi.push_back(var(n, order, i) + oracle::random_series(rng, n, order, 2, 3, 2));
            psi.push_back(var(n, order, (i + 1) % n) + oracle::random_series(rng, n, order, 2, 3, 2));
        }
        std::vector<oracle::Poly> phi_p;
        for (const auto& s : phi) phi_p.push_back(oracle::from_series(s));
        CHECK(oracle::from_series(substitute(a, phi)) ==
              oracle::compose(oracle::from_series(a), phi_p, n, order));
        std::vector<TruncatedSeries> phi_psi;
        for (const auto& s : phi) phi_psi.push_back(substitute(s, psi));
        CHECK(substitute(substitute(a, phi), psi) == substitute(a, phi_psi));
    }
}

TEST_CASE("evaluation is multiplicative without truncation loss") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 3;
        auto a = oracle::random_series(rng, n, 8, 0, 4, 5, trial % 2 == 0);
        auto b = oracle::random_series(rng, n, 8, 0, 4, 5, trial % 2 == 0);
        std::vector<std::complex<double>> p;
        for (int i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
        auto lhs = evaluate(a * b, p);
        auto rhs = evaluate(a, p) * evaluate(b, p);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("product_through extends past the naive order when valuations allow") {
    auto x = var(1, 3, 0);
    auto x2 = x * x;                       // order 3, valuation 2
    auto tail = x + power(x, 3);           // order 3, valuation 1
    auto p = product_through(x2, tail, 4);  // 3 + 1 >= 4 and 3 + 2 >= 4
    CHECK(p.order() == 4);
    CHECK(p.coefficient(MultiIndex{3}) == GaussianRational(1));
    CHECK_THROWS_AS(product_through(x2, tail, 6), PreconditionError);
}

TEST_CASE("sparse solver: lexicographic normal form is pivot independent") {
    // x0 + x1 + x2 = 3, x1 + x2 = 2 ; free column is x2 (dependent on x1)
    SparseSystem sys(3);
    sys.add_row({{0, 1}, {1, 1}, {2, 1}}, GaussianRational(3));
    sys.add_row({{2, 1}, {1, 1}}, GaussianRational(2));
    auto sol = solve_sparse(sys);
    REQUIRE(sol.consistent);
    CHECK(sol.rank == 2);
    CHECK(sol.free_columns == std::vector<int>{2});
    CHECK(sol.x[0] == GaussianRational(1));
    CHECK(sol.x[1] == GaussianRational(2));
    CHECK(sol.x[2] == GaussianRational(0));

    SparseSystem bad(2);
    bad.add_row({{0, 1}, {1, 1}}, GaussianRational(1));
    bad.add_row({{0, 2}, {1, 2}}, GaussianRational(3));
    auto s2 = solve_sparse(bad);
    CHECK_FALSE(s2.consistent);
    REQUIRE(s2.residual_class.size() == 1);
    CHECK_FALSE(s2.residual_class[0].is_zero());
}

TEST_CASE("sparse solver agrees with the dense normal form on random systems") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        int rows = 3 + trial % 4, cols = 5;
        std::vector<std::vector<GaussianRational>> A(static_cast<std::size_t>(rows), std::vector<GaussianRational>(cols));
        std::vector<GaussianRational> x_true(cols);
        for (auto& v : x_true) v = GaussianRational(coef(rng));
        SparseSystem sys(cols);
        for (int r = 0; r < rows; ++r) {
            SparseRow row;
            GaussianRational b;
            for (int c = 0; c < cols; ++c) {
                int v = (coef(rng) % 2 == 0) ? 0 : coef(rng);
                A[r][c] = GaussianRational(v);
                if (v) row.push_back({c, GaussianRational(v)});
                b += A[r][c] * x_true[c];
            }
            sys.add_row(row, b);
        }
        auto sol = solve_sparse(sys, {.lexicographic_normal_form = true, .want_kernel = true});
        REQUIRE(sol.consistent);
        // solves the system
        for (int r = 0; r < rows; ++r) {
            GaussianRational lhs;
            for (int c = 0; c < cols; ++c) lhs += A[r][c] * sol.x[c];
            GaussianRational b;
            for (int c = 0; c < cols; ++c) b += A[r][c] * x_true[c];
            CHECK(lhs == b);
        }
        // dense column-order RREF: a column is free iff rank does not grow
        std::vector<int> free;
        std::vector<std::vector<GaussianRational>> basis;
        for (int c = 0; c < cols; ++c) {
            std::vector<GaussianRational> v(static_cast<std::size_t>(rows));
            for (int r = 0; r < rows; ++r) v[r] = A[r][c];
            for (auto& bvec : basis) {
                int p = 0;
                while (bvec[p].is_zero()) ++p;
                GaussianRational f = v[p] / bvec[p];
                for (int r = 0; r < rows; ++r) v[r] -= f * bvec[r];
            }
            bool zero = true;
            for (auto& e : v) zero = zero && e.is_zero();
            if (zero)
                free.push_back(c);
            else
                basis.push_back(v);
        }
        CHECK(sol.free_columns == free);
        for (int f : free) CHECK(sol.x[f].is_zero());
        CHECK(sol.kernel.size() == free.size());
    }
}

TEST_SUITE_END();
