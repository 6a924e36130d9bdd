#pragma once

// Brute-force reference arithmetic for cross-checking the library. Kept
// deliberately naive: dense maps keyed by exponent vectors, no grading.

#include <map>
#include <random>
#include <vector>

#include "foliation/series.hpp"

namespace oracle {

using foliation::GaussianRational;
using foliation::Rational;
using Exps = std::vector<int>;
using Poly = std::map<Exps, GaussianRational>;

inline int total(const Exps& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
}

inline void prune(Poly& p) {
    for (auto it = p.begin(); it != p.end();)
        it = it->second.is_zero() ? p.erase(it) : std::next(it);
}

inline Poly truncate(const Poly& p, int order) {
    Poly out;
    for (const auto& [e, c] : p)
        if (total(e) <= order) out[e] = c;
    return out;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [e, c] : b) out[e] += c;
    prune(out);
    return out;
}

inline Poly mul(const Poly& a, const Poly& b, int order) {
    Poly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (total(e) > order) continue;
            out[e] += ca * cb;
        }
    prune(out);
    return out;
}

inline Poly diff(const Poly& a, int var) {
    Poly out;
    for (const auto& [e, c] : a) {
        if (e[static_cast<std::size_t>(var)] == 0) continue;
        Exps f = e;
        f[static_cast<std::size_t>(var)] -= 1;
        out[f] += c * GaussianRational(e[static_cast<std::size_t>(var)]);
    }
    prune(out);
    return out;
}

// Expands every monomial of a as a product of images, truncating at order.
inline Poly compose(const Poly& a, const std::vector<Poly>& images, int nv_out, int order) {
    Poly out;
    Poly one{{Exps(static_cast<std::size_t>(nv_out), 0), GaussianRational(1)}};
    for (const auto& [e, c] : a) {
        Poly term = one;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) term = mul(term, images[i], order);
        for (const auto& [te, tc] : term) out[te] += c * tc;
    }
    prune(out);
    return out;
}

inline Poly from_series(const foliation::TruncatedSeries& s) {
    Poly p;
    for (const auto& t : s.terms()) p[t.index.exponents(s.nvars())] = t.coeff;
    return p;
}

inline foliation::TruncatedSeries to_series(const Poly& p, int nvars, int order,
                                            foliation::Field field = foliation::Field::rational) {
    std::vector<foliation::Term> terms;
    for (const auto& [e, c] : p) terms.push_back({foliation::MultiIndex(e), c});
    return foliation::TruncatedSeries::from_terms(nvars, order, field, std::move(terms));
}

// Sparse random polynomial with small rational coefficients.
inline Poly random_poly(std::mt19937_64& rng, int nvars, int min_deg, int max_deg, int nterms, bool gaussian = false) {
    Poly p;
    std::uniform_int_distribution<int> deg(min_deg, max_deg);
    std::uniform_int_distribution<int> var(0, nvars - 1);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    for (int k = 0; k < nterms; ++k) {
        Exps e(static_cast<std::size_t>(nvars), 0);
        int d = deg(rng);
        for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(var(rng))] += 1;
        Rational re(num(rng), den(rng));
        re.canonicalize();
        Rational im(0);
        if (gaussian) {
            im = Rational(num(rng), den(rng));
            im.canonicalize();
        }
        p[e] += GaussianRational(re, im);
    }
    prune(p);
    return p;
}

inline foliation::TruncatedSeries random_series(std::mt19937_64& rng, int nvars, int order, int min_deg, int max_deg,
                                                int nterms, bool gaussian = false) {
    return to_series(random_poly(rng, nvars, min_deg, max_deg, nterms, gaussian), nvars, order,
                     gaussian ? foliation::Field::gaussian : foliation::Field::rational);
}

}  // namespace oracle
