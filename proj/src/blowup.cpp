#include "foliation/blowup.hpp"

#include <algorithm>

#include "foliation/errors.hpp"

namespace foliation {

const char* irreducibility_name(Irreducibility v) noexcept {
    switch (v) {
        case Irreducibility::irreducible: return "irreducible";
        case Irreducibility::reducible: return "reducible";
        case Irreducibility::unknown: return "unknown";
    }
    return "?";
}

TruncatedSeries pham_polynomial(int r, int n, int d, int order) {
    if (r < 1 || r > n) throw PreconditionError("Pham polynomial needs 1 <= r <= n");
    TruncatedSeries p(n, order);
    for (int j = 0; j < r; ++j) p += power(TruncatedSeries::variable(n, order, j), d);
    return p;
}

int pham_support(const TruncatedSeries& P) {
    auto v = P.valuation();
    if (!v || !P.is_homogeneous() || *v < 2) return 0;
    const Bucket& b = P.bucket(*v);
    for (const auto& t : b) {
        if (t.coeff != b.front().coeff) return 0;
        int nonzero = 0;
        for (int i = 0; i < P.nvars(); ++i) nonzero += t.index[i] != 0;
        if (nonzero != 1) return 0;
    }
    return static_cast<int>(b.size());
}

namespace {

// Binary restriction P(x_k = u, x_l = 1, others 0) as a polynomial in u.
UPoly binary_restriction(const TruncatedSeries& P, int k, int l, int D) {
    UPoly out(static_cast<std::size_t>(D) + 1);
    for (const auto& t : P.bucket(D)) {
        bool only = true;
        for (int i = 0; i < P.nvars(); ++i)
            if (i != k && i != l && t.index[i] != 0) only = false;
        if (only) out[static_cast<std::size_t>(t.index[k])] += t.coeff;
    }
    return out;
}

bool divides(const TruncatedSeries& factor, const TruncatedSeries& P) {
    TruncatedSeries a = P, f = factor;
    if (a.field() != f.field()) {
        a = a.complexify();
        f = f.complexify();
    }
    return divide(a, f).remainder.is_zero();
}

constexpr std::size_t kMaxCandidates = 20000;

std::optional<TruncatedSeries> linear_factor(const TruncatedSeries& P, int D, bool& complete) {
    const int n = P.nvars();
    const int order = P.order();
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<GaussianRational>> cand;
        std::size_t combos = 1;
        for (int l = k + 1; l < n; ++l) {
            UPoly B = binary_restriction(P, k, l, D);
            std::vector<GaussianRational> cs;
            if (degree(B) < 0) {
                complete = false;
                cs.emplace_back(0);
            } else {
                for (const auto& r : roots(B))
                    if (r.exact) cs.push_back(-*r.exact);
            }
            if (cs.empty()) {
                combos = 0;
                break;
            }
            combos *= cs.size();
            cand.push_back(std::move(cs));
        }
        if (combos == 0) continue;
        if (combos > kMaxCandidates) {
            complete = false;
            continue;
        }
        std::vector<std::size_t> pick(cand.size(), 0);
        while (true) {
            Field field = P.field();
            std::vector<Term> terms{{MultiIndex::unit(k), GaussianRational(1)}};
            for (std::size_t s = 0; s < cand.size(); ++s) {
                const auto& c = cand[s][pick[s]];
                if (!c.is_zero()) terms.push_back({MultiIndex::unit(k + 1 + static_cast<int>(s)), c});
                if (!c.is_real()) field = Field::gaussian;
            }
            auto L = TruncatedSeries::from_terms(n, order, field, terms);
            if (divides(L, P)) return L;
            std::size_t s = 0;
            while (s < pick.size() && ++pick[s] == cand[s].size()) pick[s++] = 0;
            if (s == pick.size()) break;
        }
    }
    return std::nullopt;
}

// Binary forms: factors of degree 2..max_deg from subsets of the roots of P(u, 1).
std::optional<TruncatedSeries> binary_factor(const TruncatedSeries& P, int D, int max_deg) {
    UPoly B = binary_restriction(P, 0, 1, D);
    if (degree(B) != D) return std::nullopt;  // x2 divides; found by the linear search
    auto rs = numeric_roots(B);
    const int order = P.order();
    for (int s = 2; s <= max_deg; ++s) {
        std::vector<int> idx(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            // monic product of (u - r_i), ascending coefficients
            std::vector<std::complex<double>> c{1.0};
            for (int i : idx) {
                std::vector<std::complex<double>> next(c.size() + 1, 0.0);
                for (std::size_t a = 0; a < c.size(); ++a) {
                    next[a + 1] += c[a];
                    next[a] -= c[a] * rs[static_cast<std::size_t>(i)];
                }
                c = std::move(next);
            }
            std::vector<Term> terms;
            bool ok = true;
            Field field = P.field();
            for (int a = 0; a <= s && ok; ++a) {
                auto g = recognize_gaussian(c[static_cast<std::size_t>(a)], 100000, 1e-7);
                if (!g) {
                    ok = false;
                    break;
                }
                if (!g->is_real()) field = Field::gaussian;
                if (!g->is_zero()) terms.push_back({MultiIndex{a, s - a}, *g});
            }
            if (ok) {
                auto F = TruncatedSeries::from_terms(2, order, field, terms);
                if (divides(F, P)) return F;
            }
            int pos = s - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == D - s + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < s; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q) - 1] + 1;
        }
    }
    return std::nullopt;
}

}  // namespace

FactorSearch search_factors(const TruncatedSeries& P) {
    auto v = P.valuation();
    if (!v || !P.is_homogeneous()) throw PreconditionError("factor search needs a nonzero homogeneous polynomial");
    const int D = *v;
    FactorSearch out;
    if (D <= 1) {
        out.verdict = Irreducibility::irreducible;
        out.reason = D == 0 ? "unit" : "degree one";
        return out;
    }
    if (int r = pham_support(P); r >= 3) {
        out.verdict = Irreducibility::irreducible;
        out.reason = "sum of " + std::to_string(r) + " pure powers (classical)";
        return out;
    }
    bool complete = true;
    if (auto L = linear_factor(P, D, complete)) {
        out.verdict = Irreducibility::reducible;
        out.witness = std::move(L);
        out.reason = "linear factor";
        return out;
    }
    if (P.nvars() == 2 && D >= 4) {
        if (auto F = binary_factor(P, D, std::min(3, D / 2))) {
            out.verdict = Irreducibility::reducible;
            out.witness = std::move(F);
            out.reason = "factor of degree " + std::to_string(F->valuation().value_or(0));
            return out;
        }
    }
    if (complete && (D <= 3 || (P.nvars() == 2 && D <= 7))) {
        out.verdict = Irreducibility::irreducible;
        out.reason = "no factor of degree <= " + std::to_string(D / 2) + " over Q(i)";
    } else {
        out.verdict = Irreducibility::unknown;
        out.reason = complete ? "no linear factor; higher-degree factors not searched" : "search incomplete";
    }
    return out;
}

TangentCone tangent_cone(const KForm& omega) {
    if (omega.degree() != 1) throw PreconditionError("tangent cone needs a 1-form");
    auto dec = homogeneous_parts(omega);
    if (!dec.leading_index) throw PreconditionError("tangent cone of the zero form is undefined");
    TangentCone tc;
    tc.nu = *dec.leading_index;
    tc.degree = tc.nu + 1;
    KForm lead = *dec.part(tc.nu);
    TruncatedSeries P = euler_contract(lead).component(0);
    tc.P = P.truncate(std::min(P.order(), tc.degree));
    tc.dicritical = tc.P.is_zero();
    if (tc.dicritical) {
        tc.verdict = Irreducibility::unknown;
        tc.reason = "dicritical (P identically zero)";
        return tc;
    }
    auto fs = search_factors(tc.P);
    tc.verdict = fs.verdict;
    tc.witness = std::move(fs.witness);
    tc.reason = std::move(fs.reason);
    return tc;
}

std::vector<TruncatedSeries> blowup_map(int nvars, int chart, int order) {
    if (chart < 0 || chart >= nvars) throw PreconditionError("chart index out of range");
    std::vector<TruncatedSeries> images;
    auto zj = TruncatedSeries::variable(nvars, order, chart);
    for (int i = 0; i < nvars; ++i)
        images.push_back(i == chart ? zj : zj * TruncatedSeries::variable(nvars, order, i));
    return images;
}

BlowupChart blowup(const KForm& omega, int chart) {
    if (omega.degree() != 1) throw PreconditionError("blow-up needs a 1-form");
    if (omega.is_zero()) throw PreconditionError("blow-up of the zero form");
    const int n = omega.nvars();
    for (const auto& [b, c] : omega.coefficients())
        if (!c.bucket(0).empty()) throw PreconditionError("omega does not vanish at the origin");
    const int N = omega.order();
    const int order = 2 * N + 1;
    if (order + 1 > kMaxInternalOrder) throw PreconditionError("order too large for blow-up");
    auto images = blowup_map(n, chart, order + 1);
    SubstituteOptions opt;
    opt.result_order = order;
    BlowupChart out;
    out.chart = chart;
    out.pullback = pullback(omega, images, opt);

    int k = std::numeric_limits<int>::max();
    for (const auto& [b, c] : out.pullback.coefficients())
        for (const auto& t : c.terms()) k = std::min(k, t.index[chart]);
    out.divisor_multiplicity = k;
    const MultiIndex zk = MultiIndex{}.with(chart, k);
    KForm strict(1, n, order - k, out.pullback.field());
    for (const auto& [b, c] : out.pullback.coefficients()) {
        std::vector<Term> terms;
        for (const auto& t : c.terms()) terms.push_back({t.index - zk, t.coeff});
        strict.add(b, TruncatedSeries::from_terms(n, order - k, c.field(), std::move(terms)));
    }
    out.strict_transform = std::move(strict);
    out.dicritical = tangent_cone(omega).dicritical;
    return out;
}

std::vector<DivisorSingularity> divisor_singularities(const BlowupChart& c) {
    const KForm& w = c.strict_transform;
    if (w.nvars() != 2) throw PreconditionError("divisor singularities are computed for two variables only");
    if (c.dicritical) throw PreconditionError("dicritical chart: the divisor is not invariant");
    const int j = c.chart;
    const int o = 1 - j;
    const TruncatedSeries A = w.component(j);
    const TruncatedSeries B = w.component(o);
    UPoly a0;
    for (const auto& t : A.terms()) {
        if (t.index[j] != 0) continue;
        std::size_t e = static_cast<std::size_t>(t.index[o]);
        if (a0.size() <= e) a0.resize(e + 1);
        a0[e] += t.coeff;
    }
    if (degree(a0) < 0) throw PreconditionError("strict transform vanishes identically on the divisor");
    const auto Az = partial_derivative(A, j), At = partial_derivative(A, o);
    const auto Bz = partial_derivative(B, j), Bt = partial_derivative(B, o);
    std::vector<DivisorSingularity> out;
    for (const auto& r : roots(a0)) {
        DivisorSingularity s;
        s.t = r.value;
        s.t_exact = r.exact;
        std::vector<std::complex<double>> p(2);
        p[static_cast<std::size_t>(j)] = 0.0;
        p[static_cast<std::size_t>(o)] = r.value;
        s.jacobian[0][0] = evaluate(Bz, p);
        s.jacobian[0][1] = evaluate(Bt, p);
        s.jacobian[1][0] = -evaluate(Az, p);
        s.jacobian[1][1] = -evaluate(At, p);
        s.eigen_transverse = s.jacobian[0][0];
        s.eigen_along = s.jacobian[1][1];
        if (std::abs(s.eigen_transverse) > 1e-14) {
            s.ratio = s.eigen_along / s.eigen_transverse;
            s.siegel = std::abs(s.ratio.imag()) <= 1e-9 * std::max(1.0, std::abs(s.ratio)) && s.ratio.real() < 0;
        }
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.t.real() != b.t.real() ? a.t.real() < b.t.real() : a.t.imag() < b.t.imag();
    });
    return out;
}

}  // namespace foliation
