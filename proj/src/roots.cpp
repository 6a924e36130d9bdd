#include "foliation/roots.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "foliation/errors.hpp"

namespace foliation {

int degree(const UPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (!p[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
}

GaussianRational evaluate(const UPoly& p, const GaussianRational& z) {
    GaussianRational acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc *= z;
        acc += *it;
    }
    return acc;
}

std::complex<double> evaluate(const UPoly& p, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + it->to_complex();
    return acc;
}

UPoly derivative(const UPoly& p) {
    UPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * GaussianRational(static_cast<long>(i)));
    return d;
}

std::vector<std::complex<double>> numeric_roots(const UPoly& p) {
    const int deg = degree(p);
    if (deg < 0) throw PreconditionError("roots of the zero polynomial");
    std::vector<std::complex<double>> out;
    if (deg == 0) return out;
    int low = 0;
    while (p[static_cast<std::size_t>(low)].is_zero()) ++low;
    for (int k = 0; k < low; ++k) out.emplace_back(0.0);
    const int d = deg - low;
    if (d == 0) return out;
    const std::complex<double> lead = p[static_cast<std::size_t>(deg)].to_complex();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -p[static_cast<std::size_t>(low + i)].to_complex() / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solve failed");
    UPoly dp = derivative(p);
    for (int i = 0; i < d; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            std::complex<double> fp = evaluate(dp, z);
            if (std::abs(fp) == 0.0) break;
            std::complex<double> step = evaluate(p, z) / fp;
            z -= step;
            if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(z))) break;
        }
        out.push_back(z);
    }
    return out;
}

std::optional<Rational> recognize_rational(double x, long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    if (std::abs(x) < tol) return Rational(0);
    // continued-fraction convergents
    long double r = std::abs(static_cast<long double>(x));
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 64; ++it) {
        long double a = std::floor(r);
        mpz_class ai(static_cast<double>(a));
        mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        Rational q(h1, k1);
        q.canonicalize();
        if (std::abs(q.get_d() - std::abs(x)) <= tol * std::max(1.0, std::abs(x))) return x < 0 ? Rational(-q) : q;
        long double frac = r - a;
        if (frac < 1e-18L) break;
        r = 1.0L / frac;
    }
    return std::nullopt;
}

std::optional<GaussianRational> recognize_gaussian(std::complex<double> z, long max_den, double tol) {
    auto re = recognize_rational(z.real(), max_den, tol);
    auto im = recognize_rational(z.imag(), max_den, tol);
    if (!re || !im) return std::nullopt;
    return GaussianRational(*re, *im);
}

std::vector<UnivariateRoot> roots(const UPoly& p) {
    std::vector<UnivariateRoot> out;
    for (auto z : numeric_roots(p)) {
        bool dup = false;
        for (auto& r : out)
            if (std::abs(r.value - z) <= 1e-6 * std::max(1.0, std::abs(z))) dup = true;
        if (dup) continue;
        UnivariateRoot root{z, std::nullopt};
        if (auto g = recognize_gaussian(z, 100000, 1e-7); g && evaluate(p, *g).is_zero()) {
            root.exact = *g;
            root.value = g->to_complex();
        }
        out.push_back(root);
    }
    return out;
}

}  // namespace foliation
