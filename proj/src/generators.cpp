#include "foliation/generators.hpp"

#include <set>

#include "foliation/blowup.hpp"
#include "foliation/errors.hpp"

namespace foliation {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int SeededRng::below(int k) {
    if (k <= 0) throw PreconditionError("SeededRng::below needs k > 0");
    return static_cast<int>(next() % static_cast<std::uint64_t>(k));
}

Rational SeededRng::small_coefficient() {
    Rational q(1, 1 + below(3));
    return coin() ? Rational(-q) : q;
}

Rational SeededRng::rational(int max_num, int max_den) {
    Rational q(below(2 * max_num + 1) - max_num, 1 + below(max_den));
    q.canonicalize();
    return q;
}

namespace {

MultiIndex random_monomial(SeededRng& rng, int nvars, int degree) {
    MultiIndex m;
    for (int k = 0; k < degree; ++k) m = m + MultiIndex::unit(rng.below(nvars));
    return m;
}

const std::uint64_t kPham = 1, kReeb = 2, kHam = 3, kRev = 4, kFocus = 5, kReal = 6, kRestrict = 7;

}  // namespace

TruncatedSeries random_polynomial(SeededRng& rng, int nvars, int order, int min_degree, int max_degree, int terms,
                                  const Rational& scale) {
    if (min_degree < 0 || max_degree < min_degree) throw PreconditionError("bad degree range");
    std::set<std::uint64_t> seen;
    std::vector<Term> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < terms && attempts++ < 50 * terms) {
        int deg = min_degree + rng.below(max_degree - min_degree + 1);
        MultiIndex m = random_monomial(rng, nvars, deg);
        Rational c = rng.small_coefficient() * scale;
        if (!seen.insert(m.packed()).second) continue;
        if (deg <= order) out.push_back({m, GaussianRational(c)});
    }
    return TruncatedSeries::from_terms(nvars, order, Field::rational, std::move(out));
}

KForm random_sparse_form(SeededRng& rng, int nvars, int order, int max_degree, int terms) {
    KForm w(1, nvars, order, Field::rational);
    for (int k = 0; k < terms; ++k) {
        int i = rng.below(nvars);
        int deg = rng.below(max_degree + 1);
        MultiIndex m = random_monomial(rng, nvars, deg);
        Rational c = rng.small_coefficient();
        if (deg <= order) w.add({i}, TruncatedSeries::monomial(nvars, order, m, GaussianRational(c)));
    }
    return w;
}

KForm random_kform(SeededRng& rng, int k, int nvars, int order, int max_degree, int terms) {
    if (k < 0 || k > 3) throw UnsupportedDegreeError("random_kform supports degrees 0..3");
    std::vector<Basis> bases;
    if (k == 0) bases.push_back({});
    for (int a = 0; a < nvars; ++a) {
        if (k == 1) bases.push_back({a});
        for (int b = a + 1; b < nvars; ++b) {
            if (k == 2) bases.push_back({a, b});
            for (int c = b + 1; c < nvars; ++c)
                if (k == 3) bases.push_back({a, b, c});
        }
    }
    KForm out(k, nvars, order, Field::rational);
    for (const auto& b : bases)
        if (rng.below(3) != 0) out.add(b, random_polynomial(rng, nvars, order, 0, max_degree, terms));
    return out;
}

PhamExample pham_example(int r, int n, int d, std::uint64_t seed, int order) {
    if (!(3 <= r && r <= n)) throw PreconditionError("Pham family needs 3 <= r <= n");
    if (d < 2) throw PreconditionError("Pham family needs d >= 2");
    SeededRng rng(derive_seed(seed, kPham));
    PhamExample ex;
    ex.r = r;
    ex.n = n;
    ex.d = d;
    ex.P = pham_polynomial(r, n, d, order + 1);
    ex.phi = random_polynomial(rng, n, order + 1, 1, 4, 3);
    KForm dP = exterior_derivative(KForm::function(ex.P));
    KForm dphi = exterior_derivative(KForm::function(ex.phi));
    ex.omega = dP + multiply(ex.P.truncate(order), dphi);
    return ex;
}

ReebExample reeb_example(int n, std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kReeb));
    ReebExample ex;
    ex.Q = TruncatedSeries(n, order + 1, Field::rational);
    for (int i = 0; i < n; ++i) {
        auto x = TruncatedSeries::variable(n, order + 1, i);
        ex.Q += x * x;
    }
    ex.h = ex.Q + random_polynomial(rng, n, order + 1, 3, 4, 3);
    TruncatedSeries u = random_polynomial(rng, n, order, 1, 2, 3);
    // drop x_n^2: the solver's gauge fixes that coefficient of g to zero
    const MultiIndex gauge = MultiIndex{}.with(n - 1, 2);
    ex.u = TruncatedSeries(n, order, Field::rational);
    for (const auto& t : u.terms())
        if (t.index != gauge) ex.u += TruncatedSeries::monomial(n, order, t.index, t.coeff);
    KForm dh = exterior_derivative(KForm::function(ex.h));
    ex.omega = dh + multiply(ex.u, dh);
    return ex;
}

std::vector<TruncatedSeries> rotation_field(int order) {
    auto x = TruncatedSeries::variable(2, order, 0);
    auto y = TruncatedSeries::variable(2, order, 1);
    return {-y, x};
}

namespace {

std::vector<TruncatedSeries> hamiltonian_field(const TruncatedSeries& H, int order) {
    return {(-partial_derivative(H, 1)).truncate(order), partial_derivative(H, 0).truncate(order)};
}

TruncatedSeries half_q(int order) {
    auto x = TruncatedSeries::variable(2, order, 0);
    auto y = TruncatedSeries::variable(2, order, 1);
    return scale(x * x + y * y, GaussianRational(Rational(1, 2)));
}

}  // namespace

std::vector<TruncatedSeries> hamiltonian_center(std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kHam));
    TruncatedSeries H = half_q(order + 1) + random_polynomial(rng, 2, order + 1, 3, 4, 3, Rational(1, 2));
    return hamiltonian_field(H, order);
}

std::vector<TruncatedSeries> reversible_center(std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kRev));
    auto field = rotation_field(order);
    for (int comp = 0; comp < 2; ++comp) {
        // component 0 odd in y, component 1 even in y
        for (int k = 0; k < 2; ++k) {
            int deg = 2 + rng.below(2);
            int b = rng.below(deg + 1);
            if ((b % 2 == 1) != (comp == 0)) b = b == deg ? b - 1 : b + 1;
            MultiIndex m = MultiIndex{}.with(0, deg - b).with(1, b);
            Rational c = rng.small_coefficient() * Rational(1, 2);
            field[static_cast<std::size_t>(comp)] += TruncatedSeries::monomial(2, order, m, GaussianRational(c));
        }
    }
    return field;
}

WeakFocus weak_focus(std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kFocus));
    WeakFocus wf;
    TruncatedSeries H = half_q(order + 1) + random_polynomial(rng, 2, order + 1, 3, 4, 2, Rational(1, 4));
    wf.field = hamiltonian_field(H, order);
    wf.s = rng.small_coefficient() * Rational(1, 4);
    auto x = TruncatedSeries::variable(2, order, 0);
    auto y = TruncatedSeries::variable(2, order, 1);
    auto Q = x * x + y * y;
    wf.field[0] += scale(Q * x, GaussianRational(wf.s));
    wf.field[1] += scale(Q * y, GaussianRational(wf.s));
    return wf;
}

TotallyRealPair totally_real_pair(std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kReal));
    auto gauss = [&rng] {
        Rational re = rng.below(3) == 0 ? Rational(0) : rng.small_coefficient();
        Rational im = rng.below(2) == 0 ? Rational(0) : rng.small_coefficient();
        if (re == 0 && im == 0) re = 1;
        return GaussianRational(re, im);
    };
    auto x = TruncatedSeries::variable(2, order, 0, Field::gaussian);
    auto y = TruncatedSeries::variable(2, order, 1, Field::gaussian);
    while (true) {
        GaussianRational a = gauss(), b = gauss(), c = gauss(), d = gauss();
        if ((a * d - b * c).is_zero()) continue;
        TotallyRealPair p;
        p.f = scale(x, a) + scale(y, b);
        p.g = scale(x, c) + scale(y, d);
        for (auto* h : {&p.f, &p.g})
            for (int k = 0; k < 2; ++k) {
                int deg = 2 + rng.below(2);
                *h += TruncatedSeries::monomial(2, order, random_monomial(rng, 2, deg), gauss(), Field::gaussian);
            }
        return p;
    }
}

RestrictionExample restriction_example(std::uint64_t seed, int order) {
    SeededRng rng(derive_seed(seed, kRestrict));
    const int n = 4;
    RestrictionExample ex;
    std::vector<TruncatedSeries> L;
    for (int i = 0; i < 2; ++i) {
        TruncatedSeries l = TruncatedSeries::variable(n, order + 1, i);
        for (int j = 2; j < n; ++j)
            if (rng.coin()) l += scale(TruncatedSeries::variable(n, order + 1, j), GaussianRational(rng.small_coefficient()));
        L.push_back(l);
    }
    ex.Q = L[0] * L[0] + L[1] * L[1];
    ex.h = ex.Q + random_polynomial(rng, n, order + 1, 3, 3, 3);
    ex.u = random_polynomial(rng, n, order, 1, 2, 2);
    KForm dh = exterior_derivative(KForm::function(ex.h));
    ex.omega = dh + multiply(ex.u, dh);
    return ex;
}

std::vector<Rational> random_hyperplane(SeededRng& rng, int nvars) {
    std::vector<Rational> a;
    for (int j = 0; j + 1 < nvars; ++j) a.push_back(rng.rational(5, 5));
    return a;
}

}  // namespace foliation
